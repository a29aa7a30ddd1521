#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rfh
{
//! Resolve a requested worker count (0 = hardware concurrency) against work
inline unsigned worker_count(unsigned requested, std::size_t work_items)
{
    unsigned n = requested ? requested : std::thread::hardware_concurrency();
    n = std::max(1u, n);
    return static_cast<unsigned>(
        std::min<std::size_t>(n, std::max<std::size_t>(1, work_items)));
}

/*!
 * Run fn(i) for i in [0, n) on up to \c threads workers.
 *
 * Items are claimed dynamically; callers write results into slot i so the
 * outcome does not depend on scheduling. The first exception thrown by any
 * item is rethrown after all workers stop.
 */
template<class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn)
{
    unsigned const workers = worker_count(threads, n);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;)
        {
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(n);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace rfh
