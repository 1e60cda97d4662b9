#ifndef DENSGEO_DENSITY_HPP
#define DENSGEO_DENSITY_HPP

#include "densgeo/grid.hpp"
#include "densgeo/spectral.hpp"

namespace densgeo {

/** Probability density on the torus: strictly positive Radon-Nikodym
 * derivative rho = d(nu)/d(mu) with unit total mass, integrate(rho) = 1. */
class density {
  public:
    /** Validates positivity and unit mass (tolerance 1e-10). */
    explicit density(scalar_field rho);

    /** Divides by the total mass first, then validates. */
    static density normalized(scalar_field rho);

    const periodic_grid& grid() const { return rho_.grid(); }
    const scalar_field& rho() const { return rho_; }
    double operator[](std::size_t i) const { return rho_[i]; }

  private:
    scalar_field rho_;
};

/** Point on the sphere of radius sqrt(mu(M)) in L^2: f > 0 with
 * integrate(f^2) = mu(M). Image of a density under the square root map. */
class sphere_point {
  public:
    explicit sphere_point(scalar_field f);
    const periodic_grid& grid() const { return f_.grid(); }
    const scalar_field& f() const { return f_; }

  private:
    scalar_field f_;
};

/** Tangent vector to the density manifold: mean-free mass perturbation. */
class tangent_density {
  public:
    explicit tangent_density(scalar_field dot_rho, double tol = 1e-10);
    const periodic_grid& grid() const { return dot_rho_.grid(); }
    const scalar_field& dot_rho() const { return dot_rho_; }

  private:
    scalar_field dot_rho_;
};

density uniform_density(const periodic_grid& g);

/** f = sqrt(rho * mu(M)); the round trip with inv_sqrt_map is the identity. */
sphere_point sqrt_map(const density& nu);
density inv_sqrt_map(const sphere_point& f);

/** FR_nu(a, b) = int (a/rho)(b/rho) rho dmu. */
double fisher_rao_metric(const density& nu, const tangent_density& a, const tangent_density& b);

/** sqrt(mu(M)) * arccos( int sqrt(rho_lam rho_nu) dmu ); values lie in
 * [0, (pi/2) sqrt(mu(M))]. */
double fisher_rao_distance(const density& lam, const density& nu);

/** Bhattacharyya affinity BC = int sqrt(rho_lam rho_nu) dmu, in (0, 1]. */
double bhattacharyya(const density& lam, const density& nu);

/** dist_H^2 = 2 (1 - BC). */
double hellinger_distance(const density& lam, const density& nu);

/** Great-circle geodesic between the square-root images, mapped back.
 * t in [0,1]; the theta -> 0 limit is handled by the sinc limit. */
density fisher_rao_geodesic(const density& lam, const density& nu, double t);

/** S_mu(nu) = -int log(rho) rho dmu. */
double entropy(const density& nu);

/** I(rho) = int |grad rho|^2 / rho dmu. */
double fisher_information(const density& nu);

/** Finite-difference entropy rate under one exact heat step of length dt;
 * approaches fisher_information(nu) as dt -> 0 (first order). */
double entropy_rate_along_heat_flow(const density& nu, double dt);

/** Fisher-Rao gradient flow of the Fisher information functional,
 * rho_t = 2 sqrt(rho) Lap sqrt(rho) - c rho, stepped by RK4 in the
 * square-root variable; mass is renormalized every step. */
density fr_gradient_flow_fisher_info(const density& nu, double dt, int steps);

/** Fisher-Rao gradient flow of the entropy, nu_t = -log(rho) nu + c nu. */
density fr_gradient_flow_entropy(const density& nu, double dt, int steps);

/** 1D periodic quadratic Wasserstein distance via quantile functions,
 * minimized over the n grid cut points (documented approximation). */
double wasserstein2_1d(const density& lam, const density& nu);

} // namespace densgeo

#endif
