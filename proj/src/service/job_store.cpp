#include "aed/service/job_store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace aed::service {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(JobStatus s) {
    switch (s) {
        case JobStatus::Queued: return "queued";
        case JobStatus::Running: return "running";
        case JobStatus::Done: return "done";
        case JobStatus::Failed: return "failed";
    }
    return "?";
}

JobStatus job_status_from_string(std::string_view s) {
    if (s == "queued") return JobStatus::Queued;
    if (s == "running") return JobStatus::Running;
    if (s == "done") return JobStatus::Done;
    if (s == "failed") return JobStatus::Failed;
    throw std::invalid_argument("unknown job status '" + std::string(s) + "'");
}

json JobRecord::to_json(bool with_result) const {
    json j = {{"job_id", id},
              {"status", std::string(service::to_string(status))},
              {"config", config},
              {"progress", progress}};
    if (with_result && result) j["result"] = *result;
    if (error) j["error"] = *error;
    return j;
}

JobRecord JobRecord::from_json(const json& j) {
    JobRecord r;
    r.id = j.at("job_id").get<std::string>();
    r.status = job_status_from_string(j.at("status").get<std::string>());
    r.config = j.at("config");
    r.progress = j.value("progress", 0.0);
    if (j.contains("result")) r.result = j.at("result");
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    return r;
}

JobStore::JobStore(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    for (const auto& entry : fs::directory_iterator(dir_)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        json j;
        try {
            in >> j;
            auto r = JobRecord::from_json(j);
            if (r.status == JobStatus::Running) {
                r.status = JobStatus::Queued;
                r.progress = 0.0;
            }
            jobs_.emplace(r.id, std::move(r));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "skipping unreadable job record %s: %s\n",
                         entry.path().string().c_str(), e.what());
        }
    }
}

std::string JobStore::job_id(const json& canonical_config) {
    // FNV-1a over the canonical dump; the seed is part of the config.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical_config.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::pair<std::string, bool> JobStore::submit(const json& canonical_config) {
    const auto id = job_id(canonical_config);
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it != jobs_.end() && it->second.status != JobStatus::Failed) return {id, false};
    JobRecord r;
    r.id = id;
    r.config = canonical_config;
    persist(r);
    jobs_[id] = std::move(r);
    return {id, true};
}

std::optional<JobRecord> JobStore::get(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> JobStore::queued() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, r] : jobs_) {
        if (r.status == JobStatus::Queued) out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

JobRecord& JobStore::at(const std::string& id) {
    auto it = jobs_.find(id);
    if (it == jobs_.end()) throw std::out_of_range("unknown job " + id);
    return it->second;
}

void JobStore::mark_running(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto& r = at(id);
    if (r.status != JobStatus::Queued) throw std::logic_error("job is not queued");
    r.status = JobStatus::Running;
    persist(r);
}

void JobStore::set_progress(const std::string& id, double fraction) {
    std::lock_guard lock(mutex_);
    auto& r = at(id);
    if (r.status == JobStatus::Running) r.progress = std::max(r.progress, std::min(fraction, 1.0));
}

void JobStore::mark_done(const std::string& id, json result) {
    std::lock_guard lock(mutex_);
    auto& r = at(id);
    if (r.status != JobStatus::Running) throw std::logic_error("job is not running");
    r.status = JobStatus::Done;
    r.progress = 1.0;
    r.result = std::move(result);
    persist(r);
}

void JobStore::mark_failed(const std::string& id, const std::string& error) {
    std::lock_guard lock(mutex_);
    auto& r = at(id);
    if (r.status == JobStatus::Done || r.status == JobStatus::Failed) {
        throw std::logic_error("job already finished");
    }
    r.status = JobStatus::Failed;
    r.error = error;
    persist(r);
}

void JobStore::persist(const JobRecord& r) const {
    const auto final_path = dir_ / (r.id + ".json");
    const auto tmp = dir_ / (r.id + ".json.tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << r.to_json().dump() << '\n';
    }
    fs::rename(tmp, final_path);
}

}  // namespace aed::service
