#ifndef DENSGEO_SPD_HPP
#define DENSGEO_SPD_HPP

#include <Eigen/Dense>

namespace densgeo::spd {

using matrix = Eigen::MatrixXd;

/** Validated SPD wrapper: symmetric to 1e-12, positive eigenvalues. */
matrix require_spd(const matrix& m, const char* what);

/** Affine-invariant metric h_M(U, V) = tr(M^{-1} U M^{-1} V). */
double spd_metric(const matrix& M, const matrix& U, const matrix& V);

/** Strictly-lower-triangular projection; ell(u) = 0 characterizes the
 * upper triangular (horizontal) matrices. */
matrix ell(const matrix& u);

/** Right-invariant metric on GL+(n):
 * g_I(u,v) = tr(ell(u)^T ell(v)) + (1/4) tr((u+u^T)(v+v^T)),
 * g_A(U,V) = g_I(U A^{-1}, V A^{-1}). The 1/4 makes the descent to the
 * affine-invariant SPD metric exact on horizontal vectors. */
double gl_metric(const matrix& A, const matrix& U, const matrix& V);
double gl_metric_identity(const matrix& u, const matrix& v);

/** Symmetric square root / log / exp via eigendecomposition
 * (eigenvalue floor 1e-12). */
matrix spd_sqrt(const matrix& M);
matrix spd_log(const matrix& M);
matrix sym_exp(const matrix& S);

/** Affine-invariant geodesic M(t) = M0^{1/2} exp(t log(M0^{-1/2} M1 M0^{-1/2})) M0^{1/2}. */
matrix spd_geodesic(const matrix& M0, const matrix& M1, double t);

/** Horizontal lift of the SPD geodesic from I to A^T A: RK4 on
 * R' = X R with X upper triangular solving X + X^T = R^{-T} M'(t) R^{-1}.
 * Returns R(1), upper triangular with positive diagonal. */
matrix horizontal_lift_qr(const matrix& A, int n_steps = 200);

enum class qr_route { ode, cholesky };

/** Polar factorization A = Q R with Q in SO(n), R upper triangular with
 * positive diagonal; R from the horizontal lift ODE (default) or from the
 * Cholesky fast path R = chol(A^T A)^T. */
void qr_polar_factorize(const matrix& A, matrix& Q, matrix& R,
                        qr_route route = qr_route::ode, int n_steps = 200);

/** Geodesic distance of the descended metric from the identity:
 * (1/2) ||log(A^T A)||_F (the 1/2 reflects the 1/4 in gl_metric). */
double gl_distance_to_identity(const matrix& A);

/** Length of the straight segment from A to B under gl_metric, composite
 * quadrature with `panels` panels (an upper bound for the distance). */
double segment_length(const matrix& A, const matrix& B, int panels = 256);

/** Scale factor pinning the Gaussian identification: the Fisher-Rao metric
 * of the zero-mean Gaussian family equals this multiple of spd_metric
 * (checked against direct quadrature in the 1x1 case). */
inline constexpr double gaussian_fisher_rao_factor = 0.5;

} // namespace densgeo::spd

#endif
