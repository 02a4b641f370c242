#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace magnon::experiments {

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks write
/// to their own slot, so output ordering never depends on scheduling. The
/// exception of the lowest failing index is rethrown after all workers join.
template <typename Task>
void parallel_for(std::size_t count, int workers, Task&& task) {
    const std::size_t width =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    if (width <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::size_t first_error_index = count;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < first_error_index) {
                    first_error_index = i;
                    first_error = std::current_exception();
                }
                failed = true;
            }
        }
    };

    std::vector<std::jthread> threads;
    threads.reserve(width);
    for (std::size_t w = 0; w < width; ++w) threads.emplace_back(worker);
    threads.clear();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace magnon::experiments
