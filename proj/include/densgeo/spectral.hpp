#ifndef DENSGEO_SPECTRAL_HPP
#define DENSGEO_SPECTRAL_HPP

#include "densgeo/grid.hpp"

#include <array>
#include <complex>
#include <vector>

namespace densgeo {

/** Exact derivative of the trigonometric interpolant along the given axis.
 * Output has zero mean; the Nyquist mode is dropped (odd-order rule). */
scalar_field derivative(const scalar_field& f, int axis = 0);

scalar_field laplacian(const scalar_field& f);

/** Mean-zero g with laplacian(g) = f - mean(f).
 * Requires |mean(f)| < tol_mean when strict (the Poisson equation on the
 * torus is solvable for mean-zero sources only). */
scalar_field inv_laplacian_meanzero(const scalar_field& f, double tol_mean = 1e-10,
                                    bool strict = true);

/** Inverse of A = -d^2/dx^2 on the circle with the basepoint gauge:
 * v(0) = 0, v(1) = 0, computed from composed antiderivatives
 *   v(x) = -int_0^x int_0^y u dz dy + x int_0^1 int_0^y u dz dy.
 * The antiderivatives are evaluated spectrally (exact quadrature for
 * trigonometric polynomials); 1D only. */
scalar_field hs_inverse(const scalar_field& u);

/** spacing^dim * sum of node values (trapezoidal rule; exact for periodic
 * trigonometric polynomials). */
double integrate(const scalar_field& f);

double mean(const scalar_field& f);

/** Spectral antiderivative: periodic F with F' = f - mean(f), mean(F) = 0.
 * 1D only. */
scalar_field antiderivative_meanzero(const scalar_field& f);

/** Cumulative integral int_0^x f: returns mean(f)*x + F(x) - F(0) evaluated
 * at the nodes, with F the spectral antiderivative. 1D only; the result is
 * pseudo-periodic when mean(f) != 0. */
scalar_field cumulative_integral(const scalar_field& f);

/** Periodic cubic (4-point Lagrange) interpolation; exact at grid nodes,
 * O(spacing^4) accurate for smooth data. Positions are wrapped into the
 * period. 1D positions are x values; 2D positions are (x, y) pairs. */
double interpolate(const scalar_field& f, double x);
double interpolate(const scalar_field& f, double x, double y);
std::vector<double> interpolate(const scalar_field& f, const std::vector<double>& xs);
std::vector<double> interpolate(const scalar_field& f,
                                const std::vector<std::array<double, 2>>& pts);

/** Exact evaluation of the 1D trigonometric interpolant at arbitrary
 * points: O(n) per point, no interpolation error beyond roundoff. Used
 * where composed fields are differentiated afterwards and the O(h^4)
 * kinks of cubic interpolation would be amplified. */
class trig_interpolant {
  public:
    explicit trig_interpolant(const scalar_field& f);
    double operator()(double x) const;

  private:
    int n_;
    double length_;
    std::vector<std::complex<double>> spec_;
};

double trig_interpolate(const scalar_field& f, double x);

/** Zeroes every mode with |k| > n/3 along any axis (2/3-rule dealiasing). */
scalar_field dealias(const scalar_field& f);

/** Heat semigroup exp(t*Laplacian) applied spectrally (exact in space). */
scalar_field heat_semigroup(const scalar_field& f, double t);

vector_field gradient(const scalar_field& f);
scalar_field divergence(const vector_field& u);

} // namespace densgeo

#endif
