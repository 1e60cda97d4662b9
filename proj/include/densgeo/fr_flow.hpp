#ifndef DENSGEO_FR_FLOW_HPP
#define DENSGEO_FR_FLOW_HPP

#include "densgeo/density.hpp"
#include "densgeo/diffeo.hpp"
#include "densgeo/grid.hpp"

#include <vector>

namespace densgeo {

/** Data of the closed-form geodesic: h0 = div u0 (mean-zero) and
 * kappa with kappa^2 = (1/(4 mu(M))) int h0^2 dmu. */
struct explicit_solution_params {
    scalar_field h0;
    double kappa;

    explicit explicit_solution_params(scalar_field h0_field);
};

/** One state of the reconstructed geodesic flow. The Jacobian is carried as
 * a Lagrangian field evolved by its own transport law d(Jac)/dt = theta Jac
 * (theta = h o eta): near breakdown it stays resolvable on the label grid
 * while the Eulerian divergence spike falls below the mesh. */
struct flow_state {
    diffeo eta;
    vector_field u;
    scalar_field h;     // Eulerian divergence field, h = div u
    scalar_field theta; // h o eta at the Lagrangian labels
    scalar_field jac;   // Jac(eta) at the Lagrangian labels
    double t = 0.0;

    explicit flow_state(const periodic_grid& g)
        : eta(g), u(g), h(g), theta(g), jac(g, 1.0) {}
};

struct fr_flow_trajectory {
    std::vector<flow_state> states;
    std::vector<double> conserved; // C(t) = (1/mu(M)) int h^2 dmu per state
    double breakdown_detected_at = -1.0; // set when the min-Jacobian stop fires
};

/** Right-hand side h_t = -<u, grad h> - h^2/2 - (1/(2 mu(M))) int h^2 dmu.
 * The returned field is mean-zero (up to quadrature roundoff). */
scalar_field ea_rhs(const scalar_field& h, const vector_field& u);

/** Lagrangian values h(t, eta(t,x)) = 2k tan(arctan(h0/2k) - k t).
 * kappa = 0 is the stationary solution (returns h0 = 0 for all t).
 * Throws past_breakdown_error for t >= breakdown_time. */
scalar_field explicit_h(const explicit_solution_params& p, double t);

/** Jac(eta(t,x)) = (cos(kt) + h0/(2k) sin(kt))^2; total integral mu(M). */
scalar_field explicit_jacobian(const explicit_solution_params& p, double t);

/** T_max = pi/(2k) + arctan(inf h0 / (2k)) / k.
 * Throws stationary_flow_error when kappa = 0 (infinite lifespan). */
double breakdown_time(const explicit_solution_params& p);

struct ea_integrator_options {
    double blowup_cap = 1e4;        // abort when max|h| exceeds this
    int record_every = 1;           // snapshot stride
    double stop_min_jacobian = 0.0; // > 0: stop when min Jac(eta) drops below
                                    // (breakdown detection; waives the
                                    // t_end < T_max precondition)
};

/** RK4 integration of the Euler-Arnold equation in Eulerian form coupled
 * with the Lagrangian flow eta' = u o eta. The velocity is reconstructed
 * from h as the gradient field u = grad(inv_laplacian(h)). */
fr_flow_trajectory integrate_ea_numeric(const vector_field& u0, double dt, double t_end,
                                        const ea_integrator_options& opt = {});

/** Hamiltonian geodesic step: theta' = -theta^2/2 - C, rho' = theta rho,
 * with C = (1/2) int theta^2 rho dmu / int rho dmu keeping the gauge
 * int theta rho = 0. One RK4 step; gauge re-enforced on output. */
std::pair<density, scalar_field> hamiltonian_step(const density& rho, const scalar_field& theta,
                                                  double dt);

/** H = (1/2) int theta^2 rho dmu. */
double hamiltonian_energy(const density& rho, const scalar_field& theta);

} // namespace densgeo

#endif
