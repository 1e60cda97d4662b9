#ifndef DENSGEO_EULER_ARNOLD_HPP
#define DENSGEO_EULER_ARNOLD_HPP

#include "densgeo/grid.hpp"

namespace densgeo {

/** Inertia operator of the 1D Euler-Arnold family on the circle:
 *   l2         A = Id                  (scaled inviscid Burgers)
 *   h1         A = 1 - d^2             (Camassa-Holm)
 *   h1_ext     A = (1 - d^2, Id)       (general CH, central extension)
 *   hdot_gauge A = -d^2, v(0) = 0      (Hunter-Saxton, basepoint gauge)
 */
struct inertia_tag {
    enum kind_t { l2, h1, h1_ext, hdot_gauge } kind;
    double kappa = 0.0; // extension parameter, h1_ext only

    static inertia_tag L2() { return {l2, 0.0}; }
    static inertia_tag H1() { return {h1, 0.0}; }
    static inertia_tag H1Ext(double kappa) { return {h1_ext, kappa}; }
    static inertia_tag HdotGauge() { return {hdot_gauge, 0.0}; }
};

/** Velocity/momentum pair with m = A(u); kappa_component only for h1_ext. */
struct momentum_state {
    inertia_tag tag;
    scalar_field u;
    scalar_field m;
    double kappa_component = 0.0;
    double t = 0.0;

    momentum_state(inertia_tag tag_, const scalar_field& u0);
};

/** ad*_{(u d/dx, a)}(m, kappa) = (2 u_x m + u m_x + kappa u_x, 0). */
scalar_field coadjoint_1d(const scalar_field& u, const scalar_field& m, double kappa = 0.0);

scalar_field apply_inertia(inertia_tag tag, const scalar_field& u);
/** Spectral inversion; hdot_gauge requires mean(m) = 0 (within 1e-8) and
 * reconstructs u with u(0) = 0 via the composed antiderivative inverse. */
scalar_field invert_inertia(inertia_tag tag, const scalar_field& m);

struct ea_step_options {
    double duxx_cap = 1e4; // abort when ||u_x||_inf exceeds this
    bool dealias_products = true;
};

/** One RK4 step of m_t = -(2 u_x m + u m_x + kappa u_x), then u = A^{-1} m.
 * Quadratic products are 2/3-rule dealiased. */
momentum_state step_ea(const momentum_state& s, double dt, const ea_step_options& opt = {});

/** H = (1/2) int u m dx (+ kappa_component^2 / 2 for the extension). */
double energy(const momentum_state& s);

} // namespace densgeo

#endif
