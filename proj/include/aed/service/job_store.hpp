#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace aed::service {

enum class JobStatus { Queued, Running, Done, Failed };

std::string_view to_string(JobStatus s);
JobStatus job_status_from_string(std::string_view s);

struct JobRecord {
    std::string id;
    JobStatus status = JobStatus::Queued;
    nlohmann::json config;  // canonical RunConfig
    double progress = 0.0;
    std::optional<nlohmann::json> result;  // present iff Done
    std::optional<std::string> error;

    nlohmann::json to_json(bool with_result = true) const;
    static JobRecord from_json(const nlohmann::json& j);
};

/// Job records keyed by a content hash of the canonical config, one JSON file
/// per job under `dir`.  Every method is safe to call from any thread.
class JobStore {
public:
    /// Loads the records already in `dir`.  Jobs that were queued or running
    /// when the previous process stopped come back as queued.
    explicit JobStore(std::filesystem::path dir);

    static std::string job_id(const nlohmann::json& canonical_config);

    /// Returns (id, created).  An identical config reuses its job unless that
    /// job failed, in which case it is reset to queued.
    std::pair<std::string, bool> submit(const nlohmann::json& canonical_config);

    std::optional<JobRecord> get(const std::string& id) const;
    std::vector<std::string> queued() const;

    void mark_running(const std::string& id);
    void set_progress(const std::string& id, double fraction);
    void mark_done(const std::string& id, nlohmann::json result);
    void mark_failed(const std::string& id, const std::string& error);

private:
    void persist(const JobRecord& r) const;
    JobRecord& at(const std::string& id);

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, JobRecord> jobs_;
};

}  // namespace aed::service
