#ifndef BBF_PARALLEL_HPP
#define BBF_PARALLEL_HPP

#include "bbf/types.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bbf {

// Worker cap from BBF_THREADS, else hardware concurrency (at least 1).
int worker_count();

// Runs fn(i) for i in [0, count). Tasks must write disjoint outputs; results
// never depend on which worker ran a task.
template <typename F>
void parallel_for(Index count, F&& fn)
{
    const Index workers = std::min<Index>(worker_count(), count);
    if (workers <= 1) {
        for (Index i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (Index i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (Index w = 1; w < workers; ++w)
        pool.emplace_back(body);
    body();
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace bbf

#endif
