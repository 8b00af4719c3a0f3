#pragma once

#include <cstddef>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace apch {

/// Returns the worker count a `jobs` argument resolves to: 0 = all hardware
/// threads, otherwise the value itself.
inline int resolve_jobs(int jobs) {
#ifdef _OPENMP
    return jobs <= 0 ? omp_get_max_threads() : jobs;
#else
    (void)jobs;
    return 1;
#endif
}

/// Index-parallel loop. jobs == 1 runs the plain serial loop (the reference
/// path used by the determinism tests); anything else fans out with OpenMP.
/// fn(i) must write only to slot i of shared output, so results are identical
/// for every jobs value. The first exception (lowest index) is rethrown after
/// the loop completes.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
    if (n == 0) return;
#ifdef _OPENMP
    const int workers = resolve_jobs(jobs);
    if (workers > 1 && n > 1) {
        std::exception_ptr first_error = nullptr;
        std::size_t first_error_index = n;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(apch_parallel_for_error)
                {
                    if (static_cast<std::size_t>(i) < first_error_index) {
                        first_error_index = static_cast<std::size_t>(i);
                        first_error = std::current_exception();
                    }
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#else
    (void)jobs;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

} // namespace apch
