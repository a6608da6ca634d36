#pragma once

// Parallel compute kernels with bitwise-deterministic results.
//
// Every reduction uses a fixed pairwise binary tree whose shape depends only
// on the problem size, never on the thread count, so the parallel kernels
// produce bit-identical results to the serial reference implementations in
// hardy::kernels::ref (which the test suite verifies).  The environment
// variable HARDY_THREADS caps the number of worker threads.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hardy::kernels {

// Worker-thread budget: OpenMP's default, optionally capped by HARDY_THREADS.
inline int max_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("HARDY_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n < 1 ? 1 : n;
}

namespace detail {

inline constexpr std::size_t leaf_size = 64;
inline constexpr std::size_t chunk_count = 256;
inline constexpr std::size_t serial_cutoff = 4096;

// Pairwise summation over [lo, hi).  The recursion splits at the midpoint, so
// the addition order is a function of the index range alone.
template <class G>
double tree_sum(std::size_t lo, std::size_t hi, const G& g) {
    if (hi - lo <= leaf_size) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += g(i);
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return tree_sum(lo, mid, g) + tree_sum(mid, hi, g);
}

inline std::size_t chunk_begin(std::size_t n, std::size_t c) {
    return n / chunk_count * c + std::min(c, n % chunk_count);
}

}  // namespace detail

namespace ref {

// Serial reference kernels.  The parallel versions below must match these
// bitwise for any thread count.

template <class G>
double map_sum(std::size_t n, const G& g) {
    if (n == 0) return 0.0;
    if (n <= detail::serial_cutoff) return detail::tree_sum(std::size_t{0}, n, g);
    double partial[detail::chunk_count];
    for (std::size_t c = 0; c < detail::chunk_count; ++c)
        partial[c] = detail::tree_sum(detail::chunk_begin(n, c), detail::chunk_begin(n, c + 1), g);
    return detail::tree_sum(std::size_t{0}, detail::chunk_count,
                            [&](std::size_t c) { return partial[c]; });
}

template <class F>
void for_each_index(std::size_t n, const F& f) {
    for (std::size_t i = 0; i < n; ++i) f(i);
}

template <class G>
double map_max(std::size_t n, const G& g, double init) {
    double m = init;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, g(i));
    return m;
}

inline double sum(const std::vector<double>& v) {
    return map_sum(v.size(), [&](std::size_t i) { return v[i]; });
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return map_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

}  // namespace ref

// Parallel deterministic sum of g(0..n-1).  The work is split into a fixed
// number of chunks (independent of thread count); each chunk is reduced with
// the same pairwise tree the serial reference uses, then the chunk partials
// are combined with that tree as well.
template <class G>
double map_sum(std::size_t n, const G& g) {
    if (n <= detail::serial_cutoff) return ref::map_sum(n, g);
    double partial[detail::chunk_count];
    const long long nchunks = static_cast<long long>(detail::chunk_count);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
    for (long long c = 0; c < nchunks; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        partial[uc] = detail::tree_sum(detail::chunk_begin(n, uc), detail::chunk_begin(n, uc + 1), g);
    }
    return detail::tree_sum(std::size_t{0}, detail::chunk_count,
                            [&](std::size_t c) { return partial[c]; });
}

// Parallel loop over disjoint indices; f(i) must only touch state owned by
// index i.
template <class F>
void for_each_index(std::size_t n, const F& f) {
    const long long nn = static_cast<long long>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
    for (long long i = 0; i < nn; ++i) f(static_cast<std::size_t>(i));
}

// Parallel max; max is exactly associative and commutative, so any reduction
// order gives the identical result.
template <class G>
double map_max(std::size_t n, const G& g, double init) {
    double m = init;
    const long long nn = static_cast<long long>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads()) reduction(max : m)
#endif
    for (long long i = 0; i < nn; ++i) m = std::max(m, g(static_cast<std::size_t>(i)));
    return m;
}

inline double sum(const std::vector<double>& v) {
    return map_sum(v.size(), [&](std::size_t i) { return v[i]; });
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return map_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

}  // namespace hardy::kernels
