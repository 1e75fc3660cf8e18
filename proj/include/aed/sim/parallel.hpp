#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace aed::sim {

/// Progress hook: receives completed work units.  Called from worker threads;
/// implementations must be thread-safe.  An exception thrown from the hook
/// stops the loop and propagates to the caller, which is how long runs are
/// cancelled.
using ProgressFn = std::function<void(std::size_t done)>;

/// Worker-pool settings threaded through the Monte-Carlo layers.
struct Execution {
    unsigned jobs = 0;  // 0 = hardware concurrency
    ProgressFn progress;

    unsigned resolved_jobs() const {
        if (jobs > 0) return jobs;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
};

/// Runs body(i) for i in [0, n).  Work is handed out in fixed-size blocks; the
/// caller owns per-index output slots, so the result never depends on `jobs`.
template <class Body>
void parallel_for(std::size_t n, const Execution& exec, Body&& body, std::size_t block = 16) {
    if (n == 0) return;
    const unsigned jobs = std::min<std::size_t>(exec.resolved_jobs(), (n + block - 1) / block);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t start = next.fetch_add(block);
            if (start >= n) return;
            const std::size_t stop = std::min(n, start + block);
            try {
                for (std::size_t i = start; i < stop; ++i) body(i);
                if (exec.progress) exec.progress(stop - start);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace aed::sim
