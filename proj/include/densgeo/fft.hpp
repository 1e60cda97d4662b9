#ifndef DENSGEO_FFT_HPP
#define DENSGEO_FFT_HPP

#include "densgeo/grid.hpp"

#include <complex>
#include <cstddef>

namespace densgeo::fft {

/** Number of complex coefficients of the real-to-complex transform:
 * n/2+1 in 1D, n*(n/2+1) in 2D (last axis halved, row-major). */
std::size_t spectral_size(const periodic_grid& g);

/** Unnormalized forward r2c transform of nodal values. */
void forward(const periodic_grid& g, const double* in, std::complex<double>* out);

/** Inverse c2r transform, normalized by 1/n^dim (round trip is identity). */
void inverse(const periodic_grid& g, const std::complex<double>* in, double* out);

/** Full complex-to-complex transforms for complex grid functions. */
void forward_c(const periodic_grid& g, const std::complex<double>* in, std::complex<double>* out);
void inverse_c(const periodic_grid& g, const std::complex<double>* in, std::complex<double>* out);

} // namespace densgeo::fft

#endif
