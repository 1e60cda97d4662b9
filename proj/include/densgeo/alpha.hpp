#ifndef DENSGEO_ALPHA_HPP
#define DENSGEO_ALPHA_HPP

#include "densgeo/density.hpp"
#include "densgeo/grid.hpp"

#include <vector>

namespace densgeo {

/** Monotone circle map fixing the basepoint: xi(0) = 0, xi(x+1) = xi(x)+1,
 * xi_x > 0 at the nodes. Represents a coset in Rot(T) \ D(T), i.e. a point
 * of the density manifold over the unit circle. */
class basepoint_diffeo1d {
  public:
    /** Identity map. */
    explicit basepoint_diffeo1d(const periodic_grid& g);

    /** From nodal values xi(x_i); shifts so xi(0) = 0 exactly and validates
     * strict monotonicity (spectral slope positive at every node). */
    static basepoint_diffeo1d from_values(const scalar_field& xi_values);
    static basepoint_diffeo1d from_displacement(scalar_field disp);

    const periodic_grid& grid() const { return disp_.grid(); }
    const scalar_field& displacement() const { return disp_; }
    /** xi at the nodes. */
    scalar_field values() const;
    /** Spectral slope 1 + disp'. */
    scalar_field slope() const;
    double min_slope() const;

    /** xi(x) for arbitrary x via the periodic extension xi(x+k) = xi(x)+k. */
    double evaluate(double x) const;

    /** Nodal values of the inverse map (also basepoint-fixing); monotone
     * cubic inverse interpolation polished by safeguarded Newton. */
    scalar_field inverse_values() const;

  private:
    scalar_field disp_; // xi(x) - x, periodic, disp(0) = 0
};

/** Mean-zero chart coordinate phi(xi) = log xi_x - int log xi_x. */
struct affine_coordinate {
    scalar_field phi;
    explicit affine_coordinate(scalar_field p);
};

/** Amari-Chentsov alpha-divergence between basepoint-fixing circle maps;
 * the |alpha| = 1 cases use the relative-entropy form. */
double divergence_alpha(double alpha, const basepoint_diffeo1d& xi, const basepoint_diffeo1d& eta);

/** Christoffel map of the alpha-connection,
 * Gamma^a_xi(W, V) = -((1+a)/2) { A^{-1} d_x ((V o xi^{-1})_x (W o xi^{-1})_x) } o xi,
 * exactly zero for alpha = -1. V, W must vanish at the basepoint. */
scalar_field christoffel_alpha(double alpha, const basepoint_diffeo1d& xi, const scalar_field& V,
                               const scalar_field& W);

/** The homogeneous H^1 metric at xi: (1/4) int V_x W_x / xi_x dx. */
double hdot1_metric(const basepoint_diffeo1d& xi, const scalar_field& V, const scalar_field& W);

struct alpha_geodesic_traj {
    std::vector<double> times;
    std::vector<basepoint_diffeo1d> xi;
    std::vector<scalar_field> vel; // label velocity d(xi)/dt at the nodes

    /** Eulerian velocity u = vel o xi^{-1} at snapshot k. */
    scalar_field eulerian_u(std::size_t k) const;
};

/** RK4 integration of xi'' = Gamma^a_xi(xi', xi'). Throws
 * monotonicity_lost_error when min xi_x < 1e-6. */
alpha_geodesic_traj geodesic_alpha(double alpha, const basepoint_diffeo1d& xi0,
                                   const scalar_field& V0, double dt, double t_end,
                                   int record_every = 1);

/** Explicit alpha = 1 geodesic xi(t,x) = int_0^x e^{a t + b} / int_0^1 e^{a t + b}
 * for mean-zero a, b. */
basepoint_diffeo1d explicit_alpha1_geodesic(const scalar_field& a, const scalar_field& b, double t);

/** Eulerian velocity u = xi_t o xi^{-1} of the explicit alpha = 1 geodesic. */
scalar_field explicit_alpha1_velocity(const scalar_field& a, const scalar_field& b, double t);

affine_coordinate affine_chart(const basepoint_diffeo1d& xi);
basepoint_diffeo1d affine_chart_inverse(const affine_coordinate& phi);

/** Geodesic of the alpha-connection between densities via the p-th root map,
 * p = 2/(1-alpha): the chord between rho0^{1/p} and rho1^{1/p} projected
 * radially onto the unit L^p sphere, traversed with the affine (constant
 * Finsler speed) parametrization. Requires |alpha| < 1. */
density pth_root_geodesic(double alpha, const density& nu0, const density& nu1, double t);

/** |V.<W,Z> - <nabla^a_V W, Z> - <W, nabla^{-a}_V Z>| with the derivative of
 * the metric taken by central differences along xi + sV. */
double duality_defect(double alpha, const basepoint_diffeo1d& xi, const scalar_field& V,
                      const scalar_field& W, const scalar_field& Z);

/** Ratio of the alpha-connection holonomy around a small coordinate square
 * spanned by (V, W), applied to Z, against the alpha = 0 holonomy; equals
 * 1 - alpha^2 for the Amari-Chentsov family. Richardson-extrapolated over
 * side lengths eps and eps/2. */
double alpha_curvature_check(double alpha, const basepoint_diffeo1d& xi, const scalar_field& V,
                             const scalar_field& W, const scalar_field& Z, double eps = 1e-3);

/** Max-norm residual of u_txx + (2 - alpha) u_x u_xx + u u_xxx at snapshot k
 * of a uniformly spaced Eulerian velocity sequence (needs k-2 .. k+2);
 * 4th-order centered time differences, spectral space derivatives. */
double pj_residual(const std::vector<scalar_field>& u, double dt, double alpha, std::size_t k);

/** Identification Dens(T) ~ {xi(0) = 0}: xi(x) = int_0^x rho, rho = xi_x. */
basepoint_diffeo1d basepoint_from_density(const density& nu);
density density_from_basepoint(const basepoint_diffeo1d& xi);

} // namespace densgeo

#endif
