#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "aed/service/job_store.hpp"

namespace httplib {
class Server;
}

namespace aed::service {

struct ServiceOptions {
    std::filesystem::path data_dir = "aed-data";
    unsigned workers = 1;          // jobs run concurrently
    unsigned jobs_per_worker = 0;  // simulation threads per job; 0 = cores / workers
};

/// HTTP front end over a JobStore and a pool of job workers.
class Service {
public:
    explicit Service(ServiceOptions options);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Blocks serving on host:port until stop().  Returns false if binding fails.
    bool listen(const std::string& host, int port);
    /// Binds an ephemeral port and serves on a background thread; returns the port.
    int start_background(const std::string& host = "127.0.0.1");
    /// Stops serving.  Running jobs are abandoned at their next progress
    /// report and stay "running" on disk, so the next start re-queues them.
    void stop();

    JobStore& store() { return store_; }

private:
    void register_routes();
    void enqueue(const std::string& id);
    void worker_loop(std::stop_token stop);
    void run_job(const std::string& id);

    ServiceOptions options_;
    std::atomic<bool> stopping_{false};
    JobStore store_;
    std::unique_ptr<httplib::Server> http_;
    std::thread http_thread_;

    std::mutex queue_mutex_;
    std::condition_variable_any queue_cv_;
    std::deque<std::string> queue_;
    std::vector<std::jthread> workers_;
};

}  // namespace aed::service
