#ifndef DENSGEO_OIT_HPP
#define DENSGEO_OIT_HPP

#include "densgeo/density.hpp"
#include "densgeo/diffeo.hpp"

#include <vector>

namespace densgeo {

/** phi = eta o psi with eta volume-preserving and psi in the polar cone. */
struct factorization_result {
    diffeo psi;
    diffeo eta;
    double theta = 0.0;         // great-circle angle to the target density
    double info_distance = 0.0; // sqrt(mu(M)) * theta
    double inverse_check = 0.0; // advected-vs-fixed-point inverse discrepancy

    factorization_result(const periodic_grid& g) : psi(g), eta(g) {}
};

struct lift_result {
    diffeo zeta;            // endpoint zeta(1)
    diffeo zeta_inv;        // advected inverse at t = 1
    double theta = 0.0;
    double inverse_check = 0.0;            // max advected-inverse drift seen
    bool resolution_warning = false;       // displacement exceeded 0.25 * length
    std::vector<diffeo> trajectory;        // recorded zeta(t_k)
    std::vector<double> times;

    lift_result(const periodic_grid& g) : zeta(g), zeta_inv(g) {}
};

/** Poisson source of the initial horizontal velocity, eq. of the polar
 * factor: Delta w0 = (2 theta sqrt(Jac) - 2 theta cos theta)/sin theta with
 * theta the sphere angle between the uniform density and the target.
 * Returns w0 = inv_laplacian_meanzero(source); theta -> 0 by the sinc limit. */
scalar_field w0_source(const density& target, double* theta_out = nullptr);
scalar_field w0_potential(const density& target, double* theta_out = nullptr);

struct lift_options {
    int n_steps = 100;
    int record_every = 1;
    int crossvalidate_every = 10; // full fixed-point inversion cadence
    double displacement_warn_fraction = 0.25;
};

/** Horizontal lift of the Fisher-Rao geodesic from the uniform density to
 * the target: integrates zeta' = grad(w_t) o zeta, Delta w_t =
 * (2 sigma'/sigma) o zeta^{-1}, with the inverse advected alongside. */
lift_result lift_horizontal(const density& target, const lift_options& opt = {});

/** Information factorization phi = eta o psi: psi is the lift endpoint for
 * the target phi*mu, eta = phi o psi^{-1}. */
factorization_result factorize(const diffeo& phi, const lift_options& opt = {});

/** Helmholtz projection residual: L2 norm of the divergence-free part of v
 * (in 1D, the mean component). Horizontal velocities are gradients, so this
 * measures loss of horizontality. */
double divergence_free_norm(const vector_field& v);

} // namespace densgeo

#endif
