#ifndef CSTOKES_PARALLEL_HPP
#define CSTOKES_PARALLEL_HPP

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

// Thin OpenMP wrapper. Loop bodies write into preallocated per-index slots
// and any reduction happens serially afterwards in index order, so results
// are bitwise identical for every thread count (the serial path with
// threads == 1 is the reference implementation the tests compare against).

namespace cstokes {

inline int& thread_count_setting() {
    static int n = 0; // 0 = library default
    return n;
}

inline void set_threads(int n) { thread_count_setting() = n < 0 ? 0 : n; }

inline int max_threads() {
#if defined(_OPENMP)
    const int req = thread_count_setting();
    return req > 0 ? req : omp_get_max_threads();
#else
    return 1;
#endif
}

template <class Body>
void par_for(std::size_t n, Body&& body) {
#if defined(_OPENMP)
    const int threads = max_threads();
    if (threads > 1 && n > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace cstokes

#endif
