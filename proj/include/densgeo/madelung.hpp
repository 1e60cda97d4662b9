#ifndef DENSGEO_MADELUNG_HPP
#define DENSGEO_MADELUNG_HPP

#include "densgeo/density.hpp"
#include "densgeo/grid.hpp"

#include <complex>
#include <vector>

namespace densgeo {

/** Nonvanishing complex grid function, compared modulo global phase when
 * used as a projective representative. */
class wave_function {
  public:
    wave_function(const periodic_grid& g, std::vector<std::complex<double>> values);

    const periodic_grid& grid() const { return grid_; }
    const std::vector<std::complex<double>>& values() const { return vals_; }
    std::vector<std::complex<double>>& values() { return vals_; }
    std::complex<double> operator[](std::size_t i) const { return vals_[i]; }

    double norm_sq() const; // int |psi|^2 dmu
    /** |psi|^2 as a density (normalized). */
    density modulus_squared() const;
    /** Throws zero_node_error if any node vanishes (tolerance `floor`). */
    void require_nonvanishing(double floor = 1e-14) const;

  private:
    periodic_grid grid_;
    std::vector<std::complex<double>> vals_;
};

/** (rho, [theta]) in T*Dens with the gauge int theta rho dmu = 0. */
struct cotangent_density {
    density rho;
    scalar_field theta;
    int winding = 0; // reported by madelung_inv; 0 on the trusted component

    cotangent_density(density r, scalar_field th);
};

/** Madelung transform psi = sqrt(rho) exp(i theta / 2). */
wave_function madelung_fwd(const cotangent_density& state);

/** Inverse transform with cumulative phase unwrapping along grid lines
 * (1D: around the circle; 2D: first row, then down the columns). A nonzero
 * closure winding raises winding_error. */
cotangent_density madelung_inv(const wave_function& psi);

/** Sasaki-Fisher-Rao metric, polarized:
 * (1/4) int ( (drho1 drho2)/rho + dtheta1 dtheta2 rho ) dmu.
 * Tangent constraints int drho = 0, int dtheta rho = 0 within 1e-8. */
double sfr_metric(const cotangent_density& state, const scalar_field& drho1,
                  const scalar_field& dtheta1, const scalar_field& drho2,
                  const scalar_field& dtheta2);

/** Fubini-Study metric, polarized; invariant under dpsi -> dpsi + c psi. */
double fs_metric(const wave_function& psi, const std::vector<std::complex<double>>& dpsi1,
                 const std::vector<std::complex<double>>& dpsi2);

/** Differential of the Madelung transform, dPhi = psi (drho/rho + i dtheta)/2. */
std::vector<std::complex<double>> madelung_differential(const cotangent_density& state,
                                                        const scalar_field& drho,
                                                        const scalar_field& dtheta);

/** Two-component Hunter-Saxton trajectory: u(t), sigma(t) plus the flow
 * (phi, alpha) integrated alongside (phi as a basepoint-fixing map). */
struct two_hs_trajectory {
    std::vector<double> times;
    std::vector<scalar_field> u;
    std::vector<scalar_field> sigma;
    std::vector<scalar_field> phi_disp; // phi(x) - x
    std::vector<scalar_field> alpha;
    double max_rhs_mean = 0.0; // |mean| of the u_xx equation RHS (analytically 0)
};

/** RK4 solve of  u_txx = -2 u_x u_xx - u u_xxx + sigma sigma_x,
 *                sigma_t = -(sigma u)_x,
 * in the momentum variable m = -u_xx with the basepoint gauge u(0) = 0.
 * Requires int sigma0 = 0. */
two_hs_trajectory solve_2hs(const scalar_field& u0, const scalar_field& sigma0, double dt,
                            double t_end, int record_every = 1);

/** Hasimoto map psi(x) = k(x) exp(i int_0^x tau); k > 0, 1D. */
wave_function hasimoto(const scalar_field& k, const scalar_field& tau);

struct nls_nonlinearity {
    enum kind_t { none, cubic, barotropic } kind = none;
    double kappa = 1.0; // cubic strength

    double operator()(double a) const {
        switch (kind) {
        case none: return 0.0;
        case cubic: return kappa * a;
        case barotropic: return 0.5 * (a - 1.0) * (a - 1.0);
        }
        return 0.0;
    }
};

/** One Strang split step of i psi_t = -Lap psi + V psi + f(|psi|^2) psi;
 * norm-conserving (all factors unimodular). */
wave_function nls_split_step(const wave_function& psi, const scalar_field& V,
                             const nls_nonlinearity& f, double dt);

/** Max spectral residual of the Madelung hydrodynamic system
 *   v_t + (v.grad) v + grad(2V + 2 f(rho) - 2 Lap sqrt(rho)/sqrt(rho)) = 0,
 *   rho_t + div(rho v) = 0,
 * the image of i psi_t = -Lap psi + V psi + f(|psi|^2) psi under
 * (rho, v) = (|psi|^2, grad(2 arg psi)); evaluated on stored NLS snapshots
 * at index k (needs k-2 .. k+2). */
double hydrodynamic_residual(const std::vector<wave_function>& traj, const scalar_field& V,
                             const nls_nonlinearity& f, double dt, std::size_t k);

} // namespace densgeo

#endif
