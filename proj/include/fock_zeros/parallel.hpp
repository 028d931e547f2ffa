#ifndef FOCK_ZEROS_PARALLEL_HPP
#define FOCK_ZEROS_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fock_zeros
{

/// Worker count: FOCK_ZEROS_THREADS if set to a positive integer, else the hardware default.
inline std::size_t thread_count()
{
    if (const char *env = std::getenv("FOCK_ZEROS_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<std::size_t>(v);
            }
        } catch (const std::exception &) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Run fn(i) for i in [0, count) over contiguous blocks; the first exception is rethrown.
/**
 * Callers write results into per-index slots, so the outcome does not depend on the
 * number of workers.
 */
template <typename Fn>
void parallel_for(std::size_t count, Fn &&fn)
{
    const std::size_t workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::exception_ptr first;
    std::mutex mtx;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = count * w / workers, hi = count * (w + 1) / workers;
            pool.emplace_back([&, lo, hi] {
                try {
                    for (std::size_t i = lo; i < hi; ++i) {
                        fn(i);
                    }
                } catch (...) {
                    std::lock_guard lock(mtx);
                    if (!first) {
                        first = std::current_exception();
                    }
                }
            });
        }
    }
    if (first) {
        std::rethrow_exception(first);
    }
}

}

#endif
