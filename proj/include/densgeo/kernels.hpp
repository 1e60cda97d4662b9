#ifndef DENSGEO_KERNELS_HPP
#define DENSGEO_KERNELS_HPP

#include "densgeo/parallel.hpp"

#include <cstddef>

namespace densgeo::kernels {

// Reductions are computed over fixed-size blocks whose partials are combined
// pairwise in index order. The result is therefore bitwise identical between
// the serial reference and the OpenMP path, for any thread count.
inline constexpr std::size_t reduce_block = 4096;

/** Serial reference implementations, kept for testing the parallel path. */
namespace serial {

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double min(const double* x, std::size_t n);
double max(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);

template <class F>
void for_each_index(std::size_t n, F&& f) {
    for (std::size_t i = 0; i < n; ++i) f(i);
}

} // namespace serial

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double min(const double* x, std::size_t n);
double max(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);

/** Data-parallel index loop; f(i) must be independent across i. */
template <class F>
void for_each_index(std::size_t n, F&& f) {
    if (par::use_parallel(n)) {
#pragma omp parallel for num_threads(par::max_threads()) schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            f(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) f(i);
    }
}

} // namespace densgeo::kernels

#endif
