#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stpp {

/// Upper bound on worker threads used by library loops; 0 means hardware
/// concurrency. Results never depend on this value.
void set_max_threads(unsigned n) noexcept;
unsigned max_threads() noexcept;

/// Runs body(k) for k in [0, n_tasks) on up to max_threads() workers.
/// The first exception thrown by any task is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t n_tasks, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(max_threads(), n_tasks);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n_tasks; ++k) body(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n_tasks || failed.load()) return;
            try {
                body(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace stpp
