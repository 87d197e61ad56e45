#include "lsde/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lsde {

int thread_cap()
{
#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    if (const char* env = std::getenv("LIE_SDE_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1 && cap < threads) {
                threads = cap;
            }
        } catch (const std::exception&) {
            // ignored: malformed cap leaves the OpenMP default
        }
    }
    return threads;
}

void for_each_index(std::size_t n, Execution execution, const std::function<void(std::size_t)>& body)
{
    if (execution == Execution::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex guard;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(thread_cap())
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace lsde
