#pragma once

#include <cstdint>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace asl::par {

// serial is the reference path; parallel kernels must produce bitwise
// identical results (each index writes only its own slots, reductions are
// done serially afterwards).
enum class Exec { serial, parallel };

inline int& thread_override() {
    static int n = 0; // 0 = library default
    return n;
}

inline void set_threads(int n) {
    thread_override() = n;
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

inline int threads() {
    if (thread_override() > 0) return thread_override();
    if (const char* env = std::getenv("ASL_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
inline void for_index(std::int64_t n, F&& f, Exec mode = Exec::parallel) {
    if (mode == Exec::serial) {
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
    }
#ifdef _OPENMP
    const int nt = threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t i = 0; i < n; ++i) f(i);
#else
    for (std::int64_t i = 0; i < n; ++i) f(i);
#endif
}

} // namespace asl::par
