#include "densgeo/madelung.hpp"

#include "densgeo/fft.hpp"
#include "densgeo/kernels.hpp"
#include "densgeo/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace densgeo {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

double wrap_to_pi(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a + std::numbers::pi, two_pi);
    if (a < 0.0) a += two_pi;
    return a - std::numbers::pi;
}

double cell_volume(const periodic_grid& g) {
    double c = 1.0;
    for (int d = 0; d < g.dim(); ++d) c *= g.spacing();
    return c;
}

} // namespace

wave_function::wave_function(const periodic_grid& g, std::vector<cd> values)
    : grid_(g), vals_(std::move(values)) {
    if (vals_.size() != g.size())
        throw error("wave_function: value count does not match grid size");
    for (const cd& v : vals_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw error("wave_function: non-finite node value");
}

double wave_function::norm_sq() const {
    scalar_field mod2(grid_);
    for (std::size_t i = 0; i < vals_.size(); ++i) mod2[i] = std::norm(vals_[i]);
    return integrate(mod2);
}

density wave_function::modulus_squared() const {
    scalar_field mod2(grid_);
    for (std::size_t i = 0; i < vals_.size(); ++i) mod2[i] = std::norm(vals_[i]);
    return density::normalized(std::move(mod2));
}

void wave_function::require_nonvanishing(double floor) const {
    for (std::size_t i = 0; i < vals_.size(); ++i)
        if (std::abs(vals_[i]) <= floor)
            throw zero_node_error("wave_function: node " + std::to_string(i) +
                                  " vanishes (not in the nonvanishing class)");
}

cotangent_density::cotangent_density(density r, scalar_field th)
    : rho(std::move(r)), theta(std::move(th)) {
    require_same_grid(rho.grid(), theta.grid(), "cotangent_density");
    double gauge = integrate(theta * rho.rho());
    if (std::fabs(gauge) > 1e-8)
        throw constraint_violated_error("cotangent_density: gauge int(theta rho) = " +
                                        std::to_string(gauge));
}

wave_function madelung_fwd(const cotangent_density& state) {
    const periodic_grid& g = state.rho.grid();
    std::vector<cd> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = std::sqrt(state.rho[i]) * std::exp(I * (0.5 * state.theta[i]));
    return wave_function(g, std::move(vals));
}

namespace {

// Cumulative unwrap of arg(psi) along the periodic index sequence; returns
// the closure winding (phase turns around the loop).
int unwrap_line(const std::vector<cd>& vals, const std::vector<std::size_t>& idx,
                std::vector<double>& phase, double start) {
    double acc = start;
    phase[idx[0]] = acc;
    for (std::size_t k = 1; k < idx.size(); ++k) {
        double delta = wrap_to_pi(std::arg(vals[idx[k]]) - std::arg(vals[idx[k - 1]]));
        acc += delta;
        phase[idx[k]] = acc;
    }
    double closure = acc + wrap_to_pi(std::arg(vals[idx[0]]) - std::arg(vals[idx.back()])) - start;
    return static_cast<int>(std::llround(closure / (2.0 * std::numbers::pi)));
}

} // namespace

cotangent_density madelung_inv(const wave_function& psi) {
    psi.require_nonvanishing();
    const periodic_grid& g = psi.grid();
    const int n = g.n();
    const auto& vals = psi.values();
    std::vector<double> phase(g.size(), 0.0);

    if (g.dim() == 1) {
        std::vector<std::size_t> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        int w = unwrap_line(vals, idx, phase, std::arg(vals[0]));
        if (w != 0)
            throw winding_error("madelung_inv: nonzero phase winding " + std::to_string(w) +
                                    "; point is outside the zero-winding component",
                                w);
    } else {
        // first row (ix = 0) along y, then down each column
        std::vector<std::size_t> row(n);
        for (int iy = 0; iy < n; ++iy) row[iy] = g.index(0, iy);
        int w = unwrap_line(vals, row, phase, std::arg(vals[g.index(0, 0)]));
        if (w != 0) throw winding_error("madelung_inv: row winding " + std::to_string(w), w);
        for (int iy = 0; iy < n; ++iy) {
            std::vector<std::size_t> col(n);
            for (int ix = 0; ix < n; ++ix) col[ix] = g.index(ix, iy);
            int wc = unwrap_line(vals, col, phase, phase[g.index(0, iy)]);
            if (wc != 0)
                throw winding_error("madelung_inv: column winding " + std::to_string(wc), wc);
        }
        // consistency: every row must close with zero winding as well
        for (int ix = 1; ix < n; ++ix) {
            double acc = 0.0;
            for (int iy = 0; iy < n; ++iy) {
                std::size_t a = g.index(ix, iy);
                std::size_t b = g.index(ix, (iy + 1) % n);
                acc += wrap_to_pi(std::arg(vals[b]) - std::arg(vals[a]));
            }
            int wr = static_cast<int>(std::llround(acc / (2.0 * std::numbers::pi)));
            if (wr != 0)
                throw winding_error("madelung_inv: inconsistent row winding " + std::to_string(wr),
                                    wr);
        }
    }

    scalar_field mod2(g);
    for (std::size_t i = 0; i < vals.size(); ++i) mod2[i] = std::norm(vals[i]);
    density rho = density::normalized(std::move(mod2));
    scalar_field theta(g);
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = 2.0 * phase[i];
    theta += -integrate(theta * rho.rho()); // gauge
    return cotangent_density(std::move(rho), std::move(theta));
}

double sfr_metric(const cotangent_density& state, const scalar_field& drho1,
                  const scalar_field& dtheta1, const scalar_field& drho2,
                  const scalar_field& dtheta2) {
    const scalar_field& rho = state.rho.rho();
    for (const scalar_field* dr : {&drho1, &drho2}) {
        double m = integrate(*dr);
        if (std::fabs(m) > 1e-8)
            throw constraint_violated_error("sfr_metric: int(drho) = " + std::to_string(m));
    }
    for (const scalar_field* dt : {&dtheta1, &dtheta2}) {
        double m = integrate(*dt * rho);
        if (std::fabs(m) > 1e-8)
            throw constraint_violated_error("sfr_metric: int(dtheta rho) = " + std::to_string(m));
    }
    scalar_field integrand(rho.grid());
    kernels::for_each_index(integrand.size(), [&](std::size_t i) {
        integrand[i] = drho1[i] * drho2[i] / rho[i] + dtheta1[i] * dtheta2[i] * rho[i];
    });
    return 0.25 * integrate(integrand);
}

namespace {

cd inner(const periodic_grid& g, const std::vector<cd>& a, const std::vector<cd>& b) {
    cd acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc * cell_volume(g);
}

} // namespace

double fs_metric(const wave_function& psi, const std::vector<cd>& dpsi1,
                 const std::vector<cd>& dpsi2) {
    const periodic_grid& g = psi.grid();
    if (dpsi1.size() != g.size() || dpsi2.size() != g.size())
        throw error("fs_metric: tangent size mismatch");
    cd npsi = inner(g, psi.values(), psi.values());
    double N = npsi.real();
    cd g12 = inner(g, dpsi1, dpsi2);
    cd a1 = inner(g, dpsi1, psi.values());
    cd a2 = inner(g, psi.values(), dpsi2);
    return (g12 / N - a1 * a2 / (N * N)).real();
}

std::vector<cd> madelung_differential(const cotangent_density& state, const scalar_field& drho,
                                      const scalar_field& dtheta) {
    wave_function psi = madelung_fwd(state);
    std::vector<cd> out(psi.values().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * psi[i] * (drho[i] / state.rho[i] + I * dtheta[i]);
    return out;
}

two_hs_trajectory solve_2hs(const scalar_field& u0, const scalar_field& sigma0, double dt,
                            double t_end, int record_every) {
    const periodic_grid& g = u0.grid();
    if (g.dim() != 1) throw wrong_dimension_error("solve_2hs: 1D only");
    require_same_grid(g, sigma0.grid(), "solve_2hs");
    double s0mean = integrate(sigma0);
    if (std::fabs(s0mean) > 1e-10)
        throw mean_not_zero_error("solve_2hs: int(sigma0) = " + std::to_string(s0mean));

    two_hs_trajectory traj;

    // momentum form: m = -u_xx, m_t = -(2 u_x m + u m_x + sigma sigma_x)
    scalar_field m = -1.0 * laplacian(u0);
    m += -mean(m);
    scalar_field sg = sigma0;
    scalar_field phid(g, 0.0);
    scalar_field alp(g, 0.0);

    struct rhs_t {
        scalar_field dm, ds, dphi, dalpha;
    };

    double max_rhs_mean = 0.0;
    auto rhs = [&](const scalar_field& mm, const scalar_field& ss, const scalar_field& pd,
                   const scalar_field&) -> rhs_t {
        scalar_field u = hs_inverse(mm);
        scalar_field ux = derivative(u);
        scalar_field mx = derivative(mm);
        scalar_field sx = derivative(ss);
        scalar_field raw(g);
        kernels::for_each_index(raw.size(), [&](std::size_t i) {
            raw[i] = 2.0 * ux[i] * mm[i] + u[i] * mx[i] + ss[i] * sx[i];
        });
        scalar_field dm = dealias(raw);
        max_rhs_mean = std::max(max_rhs_mean, std::fabs(mean(dm)));
        dm += -mean(dm);
        dm *= -1.0;
        scalar_field ds = -1.0 * dealias(derivative(ss * u));
        scalar_field dphi(g), dalpha(g);
        kernels::for_each_index(g.size(), [&](std::size_t i) {
            double x = g.coord(static_cast<int>(i)) + pd[i];
            dphi[i] = interpolate(u, x);
            dalpha[i] = interpolate(ss, x);
        });
        return {std::move(dm), std::move(ds), std::move(dphi), std::move(dalpha)};
    };

    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.u.push_back(hs_inverse(m));
        traj.sigma.push_back(sg);
        traj.phi_disp.push_back(phid);
        traj.alpha.push_back(alp);
    };
    record(0.0);

    int nsteps = static_cast<int>(std::llround(t_end / dt));
    for (int s = 0; s < nsteps; ++s) {
        rhs_t k1 = rhs(m, sg, phid, alp);
        rhs_t k2 = rhs(m + 0.5 * dt * k1.dm, sg + 0.5 * dt * k1.ds, phid + 0.5 * dt * k1.dphi,
                       alp + 0.5 * dt * k1.dalpha);
        rhs_t k3 = rhs(m + 0.5 * dt * k2.dm, sg + 0.5 * dt * k2.ds, phid + 0.5 * dt * k2.dphi,
                       alp + 0.5 * dt * k2.dalpha);
        rhs_t k4 = rhs(m + dt * k3.dm, sg + dt * k3.ds, phid + dt * k3.dphi,
                       alp + dt * k3.dalpha);
        m += (dt / 6.0) * (k1.dm + 2.0 * k2.dm + 2.0 * k3.dm + k4.dm);
        m += -mean(m);
        sg += (dt / 6.0) * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
        phid += (dt / 6.0) * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
        alp += (dt / 6.0) * (k1.dalpha + 2.0 * k2.dalpha + 2.0 * k3.dalpha + k4.dalpha);

        scalar_field u = hs_inverse(m);
        scalar_field ux = derivative(u);
        if (kernels::max_abs(ux.data(), ux.size()) > 1e4)
            throw blowup_error("solve_2hs: ||u_x||_inf exceeded the cap");
        if ((s + 1) % record_every == 0 || s + 1 == nsteps) record((s + 1) * dt);
    }
    traj.max_rhs_mean = max_rhs_mean;
    return traj;
}

wave_function hasimoto(const scalar_field& k, const scalar_field& tau) {
    const periodic_grid& g = k.grid();
    if (g.dim() != 1) throw wrong_dimension_error("hasimoto: 1D only");
    require_same_grid(g, tau.grid(), "hasimoto");
    double lo = kernels::min(k.data(), k.size());
    if (!(lo > 0.0))
        throw zero_node_error("hasimoto: curvature reaches " + std::to_string(lo) +
                              "; nonvanishing class requires k > 0");
    scalar_field phase = cumulative_integral(tau);
    std::vector<cd> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = k[i] * std::exp(I * phase[i]);
    return wave_function(g, std::move(vals));
}

wave_function nls_split_step(const wave_function& psi, const scalar_field& V,
                             const nls_nonlinearity& f, double dt) {
    const periodic_grid& g = psi.grid();
    require_same_grid(g, V.grid(), "nls_split_step");
    const int n = g.n();
    const double two_pi_over_l = 2.0 * std::numbers::pi / g.length();
    std::vector<cd> v = psi.values();

    auto half_potential = [&](std::vector<cd>& w) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            double a = std::norm(w[i]);
            w[i] *= std::exp(-I * (0.5 * dt * (V[i] + f(a))));
        }
    };

    half_potential(v);
    std::vector<cd> spec(v.size());
    fft::forward_c(g, v.data(), spec.data());
    if (g.dim() == 1) {
        for (int j = 0; j < n; ++j) {
            int kk = j <= n / 2 ? j : j - n;
            double k2 = two_pi_over_l * two_pi_over_l * kk * kk;
            spec[j] *= std::exp(-I * (dt * k2));
        }
    } else {
        for (int j0 = 0; j0 < n; ++j0) {
            int k0 = j0 <= n / 2 ? j0 : j0 - n;
            for (int j1 = 0; j1 < n; ++j1) {
                int k1 = j1 <= n / 2 ? j1 : j1 - n;
                double k2 = two_pi_over_l * two_pi_over_l * (k0 * k0 + k1 * k1);
                spec[static_cast<std::size_t>(j0) * n + j1] *= std::exp(-I * (dt * k2));
            }
        }
    }
    fft::inverse_c(g, spec.data(), v.data());
    half_potential(v);
    return wave_function(g, std::move(v));
}

namespace {

scalar_field phase_field(const wave_function& psi) {
    cotangent_density st = madelung_inv(psi);
    return st.theta;
}

} // namespace

double hydrodynamic_residual(const std::vector<wave_function>& traj, const scalar_field& V,
                             const nls_nonlinearity& f, double dt, std::size_t k) {
    if (k < 2 || k + 2 >= traj.size())
        throw error("hydrodynamic_residual: need snapshots k-2 .. k+2");
    const periodic_grid& g = traj[k].grid();

    auto rho_of = [&](std::size_t j) {
        scalar_field r(g);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::norm(traj[j][i]);
        return r;
    };
    auto v_of = [&](std::size_t j) { return gradient(phase_field(traj[j])); };

    scalar_field rho = rho_of(k);
    vector_field v = v_of(k);

    // 4th-order centered time derivatives
    scalar_field rho_t = (1.0 / (12.0 * dt)) *
                         (rho_of(k - 2) - 8.0 * rho_of(k - 1) + 8.0 * rho_of(k + 1) - 1.0 * rho_of(k + 2));
    std::vector<vector_field> vs = {v_of(k - 2), v_of(k - 1), v_of(k + 1), v_of(k + 2)};

    double worst = 0.0;

    // continuity: rho_t + div(rho v)
    scalar_field cont = rho_t + divergence([&] {
        vector_field rv(g);
        for (int a = 0; a < g.dim(); ++a) rv.comp(a) = rho * v.comp(a);
        return rv;
    }());
    worst = std::max(worst, kernels::max_abs(cont.data(), cont.size()));

    // momentum equation. With psi = sqrt(rho) e^{i theta/2} and v = grad theta,
    // plugging into i psi_t = -Lap psi + V psi + f psi gives (real part,
    // times 2, then gradient):
    //   v_t + (v.grad)v + grad(2V + 2 f(rho) - 2 Lap sqrt(rho)/sqrt(rho)) = 0
    scalar_field sqrho(g);
    for (std::size_t i = 0; i < sqrho.size(); ++i) sqrho[i] = std::sqrt(rho[i]);
    scalar_field lap_sq = laplacian(sqrho);
    scalar_field pressure(g);
    for (std::size_t i = 0; i < pressure.size(); ++i)
        pressure[i] = 2.0 * (V[i] + f(rho[i]) - lap_sq[i] / sqrho[i]);
    vector_field grad_p = gradient(pressure);

    for (int a = 0; a < g.dim(); ++a) {
        scalar_field vt = (1.0 / (12.0 * dt)) *
                          (vs[0].comp(a) - 8.0 * vs[1].comp(a) + 8.0 * vs[2].comp(a) -
                           1.0 * vs[3].comp(a));
        scalar_field advect(g, 0.0);
        for (int b = 0; b < g.dim(); ++b) advect += v.comp(b) * derivative(v.comp(a), b);
        scalar_field res = vt + advect + grad_p.comp(a);
        worst = std::max(worst, kernels::max_abs(res.data(), res.size()));
    }
    return worst;
}

} // namespace densgeo
