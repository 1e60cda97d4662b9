#include "densgeo/criteria.hpp"

#include "densgeo/alpha.hpp"
#include "densgeo/density.hpp"
#include "densgeo/diffeo.hpp"
#include "densgeo/euler_arnold.hpp"
#include "densgeo/fr_flow.hpp"
#include "densgeo/kernels.hpp"
#include "densgeo/madelung.hpp"
#include "densgeo/oit.hpp"
#include "densgeo/spd.hpp"
#include "densgeo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

namespace densgeo::accept {

namespace {

using std::numbers::pi;

scalar_field random_bandlimited(const periodic_grid& g, std::mt19937_64& rng, int kmax,
                                double amp) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    scalar_field out(g, 0.0);
    const double w = 2.0 * pi / g.length();
    if (g.dim() == 1) {
        for (int k = 1; k <= kmax; ++k) {
            double a = amp * unif(rng) / k, b = amp * unif(rng) / k;
            for (int i = 0; i < g.n(); ++i) {
                double x = g.coord(i);
                out[i] += a * std::cos(w * k * x) + b * std::sin(w * k * x);
            }
        }
    } else {
        for (int kx = 0; kx <= kmax; ++kx)
            for (int ky = 0; ky <= kmax; ++ky) {
                if (kx == 0 && ky == 0) continue;
                double norm = std::hypot(kx, ky);
                double a = amp * unif(rng) / norm, b = amp * unif(rng) / norm;
                for (int ix = 0; ix < g.n(); ++ix)
                    for (int iy = 0; iy < g.n(); ++iy) {
                        double ph = w * (kx * g.coord(ix) + ky * g.coord(iy));
                        out.at(ix, iy) += a * std::cos(ph) + b * std::sin(ph);
                    }
            }
    }
    return out;
}

density random_density(const periodic_grid& g, std::mt19937_64& rng, double amp, int kmax = 4) {
    scalar_field f = random_bandlimited(g, rng, kmax, amp);
    f += 1.0;
    return density::normalized(std::move(f));
}

scalar_field meanfree(scalar_field f) {
    f += -mean(f);
    return f;
}

// band-limited displacement rescaled to a safe maximum slope
scalar_field random_displacement(const periodic_grid& g, std::mt19937_64& rng, int kmax,
                                 double max_slope) {
    scalar_field f = random_bandlimited(g, rng, kmax, 1.0);
    double worst = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        scalar_field d = derivative(f, a);
        worst = std::max(worst, kernels::max_abs(d.data(), d.size()));
    }
    f *= max_slope / worst;
    return f;
}

double rel_l2(const scalar_field& a, const scalar_field& b) {
    scalar_field d = a - b;
    return std::sqrt(integrate(d * d) / integrate(b * b));
}

double max_diff(const scalar_field& a, const scalar_field& b) {
    scalar_field d = a - b;
    return kernels::max_abs(d.data(), d.size());
}

// ---------------------------------------------------------------- 1
criterion_result run_isometry() {
    criterion_result res;
    periodic_grid g(1, 256);
    std::mt19937_64 rng(101);
    scalar_field a = random_bandlimited(g, rng, 4, 0.4);
    scalar_field b = random_bandlimited(g, rng, 4, 0.3);

    auto rho_at = [&](double t) {
        scalar_field e(g);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(a[i] * std::sin(t) + b[i]);
        return density::normalized(std::move(e));
    };
    auto sqrt_at = [&](double t) { return sqrt_map(rho_at(t)).f(); };

    const double t0 = 0.4, h = 1e-3;
    // 4th-order centered differences of the sphere image and of rho
    scalar_field dpsi = (1.0 / (12.0 * h)) * (sqrt_at(t0 - 2 * h) - 8.0 * sqrt_at(t0 - h) +
                                              8.0 * sqrt_at(t0 + h) - 1.0 * sqrt_at(t0 + 2 * h));
    scalar_field drho =
        (1.0 / (12.0 * h)) * (rho_at(t0 - 2 * h).rho() - 8.0 * rho_at(t0 - h).rho() +
                              8.0 * rho_at(t0 + h).rho() - 1.0 * rho_at(t0 + 2 * h).rho());
    density nu = rho_at(t0);
    double lhs = integrate(dpsi * dpsi);
    tangent_density dot(meanfree(drho), 1e-8);
    double fr = fisher_rao_metric(nu, dot, dot);
    res.record("isometry_residual", std::fabs(lhs - 0.25 * fr), 1e-8);
    return res;
}

// ---------------------------------------------------------------- 2
criterion_result run_distance_formula() {
    criterion_result res;
    periodic_grid g(1, 256);
    std::mt19937_64 rng(202);
    density lam = random_density(g, rng, 0.35);
    density nu = random_density(g, rng, 0.35);

    double dist = fisher_rao_distance(lam, nu);

    // path-length quadrature of the great-circle geodesic (Simpson in t,
    // centered differences for the sphere-image velocity)
    const int panels = 128;
    const double eps = 1e-6;
    auto speed_at = [&](double t) {
        scalar_field fp = sqrt_map(fisher_rao_geodesic(lam, nu, t + eps)).f();
        scalar_field fm = sqrt_map(fisher_rao_geodesic(lam, nu, t - eps)).f();
        scalar_field v = (1.0 / (2.0 * eps)) * (fp - fm);
        return std::sqrt(integrate(v * v));
    };
    double length = 0.0;
    for (int k = 0; k < panels; ++k) {
        double t0 = (k + 0.0) / panels, t1 = (k + 1.0) / panels;
        length += (t1 - t0) / 6.0 *
                  (speed_at(t0) + 4.0 * speed_at(0.5 * (t0 + t1)) + speed_at(t1));
    }
    res.record("distance_vs_pathlength", std::fabs(dist - length), 1e-8);

    // diameter bound on random pairs
    double bound = 0.5 * pi * std::sqrt(g.volume());
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        density x = random_density(g, rng, 0.45);
        density y = random_density(g, rng, 0.45);
        worst = std::max(worst, fisher_rao_distance(x, y) - bound);
    }
    res.record("diameter_bound_excess", worst, 1e-12);

    // eps-floored disjoint bumps approach the quarter circumference
    auto bump = [&](double center) {
        scalar_field f(g);
        for (int i = 0; i < g.n(); ++i) {
            double d = std::fabs(g.coord(i) - center);
            d = std::min(d, g.length() - d);
            f[i] = std::exp(-d * d / (2.0 * 0.02 * 0.02)) + 1e-12;
        }
        return density::normalized(std::move(f));
    };
    double d_bumps = fisher_rao_distance(bump(0.25), bump(0.75));
    res.record_flag("bumps_reach_1.57", d_bumps >= 1.57, d_bumps);
    return res;
}

// ---------------------------------------------------------------- 3
criterion_result run_explicit_ea() {
    criterion_result res;
    periodic_grid g(1, 128);
    scalar_field h0 = scalar_field::sample(g, [](double x) { return std::cos(2.0 * pi * x); });
    explicit_solution_params params(h0);
    double tmax = breakdown_time(params);
    double t_end = 0.5 * tmax;

    vector_field u0 = gradient(inv_laplacian_meanzero(h0));
    fr_flow_trajectory traj = integrate_ea_numeric(u0, 1e-3, t_end);
    const flow_state& fin = traj.states.back();

    // transport the explicit Lagrangian values with the reconstructed flow;
    // the Eulerian field is evaluated spectrally (cubic kinks would dominate)
    scalar_field lagr = explicit_h(params, fin.t);
    trig_interpolant eh(fin.h);
    double worst = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        double pos = fin.eta.map1(i);
        worst = std::max(worst, std::fabs(eh(pos) - lagr[i]));
    }
    res.record("explicit_vs_numeric_linf", worst, 1e-6);

    double drift = 0.0;
    for (double c : traj.conserved) drift = std::max(drift, std::fabs(c - traj.conserved[0]));
    res.record("conserved_C_drift", drift, 1e-8);
    return res;
}

// ---------------------------------------------------------------- 4
criterion_result run_breakdown() {
    criterion_result res;
    periodic_grid g(1, 256);
    scalar_field h0 = scalar_field::sample(g, [](double x) { return std::cos(2.0 * pi * x); });
    explicit_solution_params params(h0);
    double t_formula = breakdown_time(params);

    // bisection oracle on the signed square root of the minimum Jacobian,
    // with h0 evaluated on a refined grid
    const double k = params.kappa;
    auto min_root = [&](double t) {
        double m = std::numeric_limits<double>::infinity();
        const int refine = 16 * g.n();
        for (int i = 0; i < refine; ++i) {
            double x = static_cast<double>(i) / refine;
            double r = std::cos(k * t) + std::cos(2.0 * pi * x) / (2.0 * k) * std::sin(k * t);
            m = std::min(m, r);
        }
        return m;
    };
    double lo = 0.0, hi = pi / k;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (min_root(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13) break;
    }
    double t_bisect = 0.5 * (lo + hi);
    res.record("formula_vs_bisection", std::fabs(t_formula - t_bisect), 1e-8);

    // the integrator loses Jacobian positivity inside the window
    vector_field u0 = gradient(inv_laplacian_meanzero(h0));
    ea_integrator_options opt;
    opt.stop_min_jacobian = 1e-6;
    opt.record_every = 50;
    fr_flow_trajectory traj = integrate_ea_numeric(u0, 2e-4, t_formula + 0.02, opt);
    double t_star = traj.breakdown_detected_at;
    bool in_window = t_star >= t_formula - 0.02 && t_star <= t_formula + 0.02;
    res.record_flag("breakdown_in_window", in_window, t_star);
    return res;
}

// ---------------------------------------------------------------- 5
criterion_result run_ea_family() {
    criterion_result res;

    { // Burgers vs characteristics
        periodic_grid g(1, 512);
        scalar_field u0 = scalar_field::sample(g, [](double x) {
            return 0.1 * std::sin(2.0 * pi * x) + 0.05 * std::cos(4.0 * pi * x);
        });
        scalar_field u0x = derivative(u0);
        double t_end = 0.2 / kernels::max_abs(u0x.data(), u0x.size());
        const double dt = 5e-4;
        int steps = static_cast<int>(std::ceil(t_end / dt));
        momentum_state s(inertia_tag::L2(), u0);
        for (int i = 0; i < steps; ++i) s = step_ea(s, t_end / steps);
        double worst = 0.0;
        for (int i = 0; i < g.n(); ++i) {
            double pos = g.coord(i) + 3.0 * u0[i] * t_end;
            worst = std::max(worst, std::fabs(interpolate(s.u, pos) - u0[i]));
        }
        res.record("burgers_characteristics_linf", worst, 1e-5);
    }

    { // Camassa-Holm energy conservation
        periodic_grid g(1, 256);
        scalar_field u0 = scalar_field::sample(g, [](double x) {
            return 0.3 + 0.1 * std::sin(2.0 * pi * x) + 0.05 * std::cos(4.0 * pi * x);
        });
        momentum_state s(inertia_tag::H1(), u0);
        double e0 = energy(s);
        double drift = 0.0;
        for (int i = 0; i < 1000; ++i) {
            s = step_ea(s, 1e-3);
            drift = std::max(drift, std::fabs(energy(s) - e0) / std::fabs(e0));
        }
        res.record("ch_energy_rel_drift", drift, 1e-7);
    }

    { // general CH with kappa = 0 reduces to plain H1; kappa stays constant
        periodic_grid g(1, 256);
        scalar_field u0 = scalar_field::sample(g, [](double x) {
            return 0.2 * std::sin(2.0 * pi * x) + 0.1 * std::cos(4.0 * pi * x);
        });
        momentum_state plain(inertia_tag::H1(), u0);
        momentum_state ext(inertia_tag::H1Ext(0.0), u0);
        momentum_state ext_k(inertia_tag::H1Ext(0.7), u0);
        for (int i = 0; i < 200; ++i) {
            plain = step_ea(plain, 1e-3);
            ext = step_ea(ext, 1e-3);
            ext_k = step_ea(ext_k, 1e-3);
        }
        res.record("gench_kappa0_reduction", max_diff(plain.u, ext.u), 1e-12);
        res.record_flag("kappa_component_constant", ext_k.kappa_component == 0.7,
                        ext_k.kappa_component);
    }
    return res;
}

// ---------------------------------------------------------------- 6
criterion_result run_alpha() {
    criterion_result res;
    periodic_grid g(1, 256);
    std::mt19937_64 rng(606);

    auto pinned = [&](double amp, int kmax) {
        scalar_field f = random_bandlimited(g, rng, kmax, amp);
        f += -f[0];
        return f;
    };

    { // Gamma^{(-1)} vanishes identically
        basepoint_diffeo1d xi = basepoint_diffeo1d::from_displacement(pinned(0.05, 3));
        scalar_field V = pinned(0.5, 3), W = pinned(0.5, 3);
        scalar_field gm = christoffel_alpha(-1.0, xi, V, W);
        res.record("gamma_minus1_maxabs", kernels::max_abs(gm.data(), gm.size()), 0.0);
    }

    scalar_field u0 = scalar_field::sample(
        g, [](double x) { return 0.1 * (std::sin(2.0 * pi * x)); }); // u0(0) = 0

    { // alpha = 0 geodesic matches the Hunter-Saxton momentum solve
        const double dt = 1e-3, t_end = 0.3;
        alpha_geodesic_traj traj =
            geodesic_alpha(0.0, basepoint_diffeo1d(g), u0, dt, t_end,
                           static_cast<int>(t_end / dt));
        scalar_field u_geo = traj.eulerian_u(traj.xi.size() - 1);
        momentum_state s(inertia_tag::HdotGauge(), u0);
        int steps = static_cast<int>(std::llround(t_end / dt));
        for (int i = 0; i < steps; ++i) s = step_ea(s, dt);
        res.record("alpha0_vs_hs_linf", max_diff(u_geo, s.u), 1e-7);
    }

    { // explicit alpha = 1 solution: PDE residual
        scalar_field a = scalar_field::sample(g, [](double x) { return std::sin(2.0 * pi * x); });
        scalar_field b(g, 0.0);
        const double t0 = 0.5, del = 2e-3;
        std::vector<scalar_field> snaps;
        for (int j = -2; j <= 2; ++j)
            snaps.push_back(explicit_alpha1_velocity(a, b, t0 + j * del));
        res.record("alpha1_explicit_pj_residual", pj_residual(snaps, del, 1.0, 2), 1e-5);
    }

    { // duality defect
        basepoint_diffeo1d xi = basepoint_diffeo1d::from_displacement(pinned(0.04, 3));
        scalar_field V = pinned(0.3, 3), W = pinned(0.3, 3), Z = pinned(0.3, 3);
        double worst = 0.0;
        for (double alpha : {0.0, 0.4, -0.7})
            worst = std::max(worst, duality_defect(alpha, xi, V, W, Z));
        res.record("duality_defect", worst, 1e-5);
    }

    { // holonomy curvature ratio 1 - alpha^2
        basepoint_diffeo1d xi = basepoint_diffeo1d::from_displacement(pinned(0.03, 2));
        scalar_field V = pinned(0.4, 2), W = pinned(0.35, 3), Z = pinned(0.3, 2);
        double worst = 0.0;
        for (double alpha : {0.5, 1.0, -1.0, 0.0}) {
            double ratio = alpha_curvature_check(alpha, xi, V, W, Z);
            worst = std::max(worst, std::fabs(ratio - (1.0 - alpha * alpha)));
        }
        res.record("curvature_ratio_error", worst, 1e-3);
    }

    { // L^p-projection geodesic vs the Christoffel ODE, alpha = 1/2
        const double alpha = 0.5, dt = 1e-3, t_half = 0.5;
        density nu0 = uniform_density(g);
        density nu1 = density::normalized(scalar_field::sample(g, [](double x) {
            return 1.0 + 0.2 * std::sin(2.0 * pi * x) + 0.1 * std::cos(4.0 * pi * x);
        }));
        auto xi_at = [&](double t) {
            return basepoint_from_density(pth_root_geodesic(alpha, nu0, nu1, t)).values();
        };
        // one-sided fourth-order initial velocity of the projected path
        const double tau = 1e-3;
        scalar_field v0 = (1.0 / (12.0 * tau)) *
                          (-25.0 * xi_at(0.0) + 48.0 * xi_at(tau) - 36.0 * xi_at(2 * tau) +
                           16.0 * xi_at(3 * tau) - 3.0 * xi_at(4 * tau));
        alpha_geodesic_traj traj = geodesic_alpha(alpha, basepoint_diffeo1d(g), v0, dt, t_half,
                                                  static_cast<int>(t_half / dt));
        scalar_field xi_ode = traj.xi.back().values();
        res.record("pth_root_vs_ode", max_diff(xi_at(t_half), xi_ode), 1e-4);
    }
    return res;
}

// ---------------------------------------------------------------- 7
criterion_result run_oit() {
    criterion_result res;
    periodic_grid g(2, 64);

    density target = density::normalized(scalar_field::sample(g, [](double x, double y) {
        return 1.0 + 0.3 * std::sin(2.0 * pi * x) * std::sin(2.0 * pi * y) +
               0.15 * std::cos(2.0 * pi * y);
    }));

    lift_options opt;
    opt.n_steps = 100;
    lift_result lift = lift_horizontal(target, opt);

    density pulled = pullback_density(lift.zeta, uniform_density(g));
    res.record("lift_target_rel_l2", rel_l2(pulled.rho(), target.rho()), 1e-3);

    { // horizontality: 4th-order velocity from the trajectory, Helmholtz norm
        const double dt = 1.0 / opt.n_steps;
        double worst = 0.0;
        for (std::size_t k : {std::size_t(25), std::size_t(50), std::size_t(75)}) {
            vector_field vel(g);
            for (int c = 0; c < 2; ++c)
                vel.comp(c) =
                    (1.0 / (12.0 * dt)) *
                    (lift.trajectory[k - 2].displacement().comp(c) -
                     8.0 * lift.trajectory[k - 1].displacement().comp(c) +
                     8.0 * lift.trajectory[k + 1].displacement().comp(c) -
                     1.0 * lift.trajectory[k + 2].displacement().comp(c));
            diffeo zinv = inverse(lift.trajectory[k]);
            vector_field eulerian(g);
            for (int c = 0; c < 2; ++c) eulerian.comp(c) = compose_scalar(vel.comp(c), zinv);
            worst = std::max(worst, divergence_free_norm(eulerian));
        }
        res.record("horizontality_norm", worst, 1e-6);
    }

    { // factorization of a generic map, and coset invariance of psi
        std::mt19937_64 rng(707);
        vector_field disp(g);
        disp.comp(0) = random_displacement(g, rng, 2, 0.2);
        disp.comp(1) = random_displacement(g, rng, 2, 0.2);
        diffeo phi(disp);
        factorization_result fac = factorize(phi, opt);

        scalar_field jac_eta = jacobian(fac.eta);
        jac_eta += -1.0;
        res.record("jac_eta_error", kernels::max_abs(jac_eta.data(), jac_eta.size()), 5e-3);
        res.record("composition_error",
                   max_displacement_error(compose(fac.eta, fac.psi), phi), 1e-3);

        // volume-preserving pre-factor leaves psi unchanged
        vector_field sd(g);
        sd.comp(0) = scalar_field::sample(
            g, [](double, double y) { return 0.06 * std::sin(2.0 * pi * y); });
        diffeo eta0(sd); // unit Jacobian shear
        factorization_result fac2 = factorize(compose(eta0, phi), opt);
        res.record("coset_invariance_psi",
                   max_displacement_error(fac2.psi, fac.psi), 1e-3);

        density phimu = pullback_density(phi, uniform_density(g));
        res.record("info_distance_identity",
                   std::fabs(fac.info_distance - fisher_rao_distance(uniform_density(g), phimu)),
                   1e-10);
    }
    return res;
}

// ---------------------------------------------------------------- 8
criterion_result run_spd() {
    criterion_result res;
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto random_glplus = [&](int n) {
        spd::matrix A(n, n);
        do {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) A(i, j) = (i == j ? 1.0 : 0.0) + 0.5 * unif(rng);
        } while (A.determinant() <= 0.1);
        return A;
    };

    { // ODE lift vs transpose of Cholesky
        spd::matrix A = random_glplus(6);
        spd::matrix R_ode = spd::horizontal_lift_qr(A, 200);
        spd::matrix Q, R_chol;
        spd::qr_polar_factorize(A, Q, R_chol, spd::qr_route::cholesky);
        res.record("ode_vs_cholesky", (R_ode - R_chol).cwiseAbs().maxCoeff(), 1e-6);
    }

    { // Householder oracle on an 8x8 factorization
        spd::matrix A = random_glplus(8);
        spd::matrix Q, R;
        spd::qr_polar_factorize(A, Q, R, spd::qr_route::cholesky);
        Eigen::HouseholderQR<spd::matrix> hqr(A);
        spd::matrix Qh = hqr.householderQ();
        spd::matrix Rh = hqr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < 8; ++i)
            if (Rh(i, i) < 0.0) { // sign-normalize to a positive diagonal
                Rh.row(i) *= -1.0;
                Qh.col(i) *= -1.0;
            }
        double err = std::max((R - Rh).cwiseAbs().maxCoeff(), (Q - Qh).cwiseAbs().maxCoeff());
        res.record("householder_agreement", err, 1e-10);
    }

    { // descending identity of the GL+ metric, n = 5
        const int n = 5;
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            spd::matrix u = spd::matrix::Zero(n, n), v = spd::matrix::Zero(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    u(i, j) = unif(rng);
                    v(i, j) = unif(rng);
                }
            spd::matrix xi = spd::matrix::Zero(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    double s = unif(rng);
                    xi(i, j) = s;
                    xi(j, i) = -s;
                }
            spd::matrix ad_u = xi * u - u * xi;
            spd::matrix ad_v = xi * v - v * xi;
            worst = std::max(worst, std::fabs(spd::gl_metric_identity(ad_u, v) +
                                              spd::gl_metric_identity(u, ad_v)));
        }
        res.record("descending_identity", worst, 1e-12);
    }
    return res;
}

// ---------------------------------------------------------------- 9
criterion_result run_madelung() {
    criterion_result res;
    periodic_grid g(1, 128);
    std::mt19937_64 rng(909);

    density rho = random_density(g, rng, 0.3);
    scalar_field theta = random_bandlimited(g, rng, 3, 0.5);
    theta += -integrate(theta * rho.rho());
    cotangent_density state(rho, theta);

    auto tangent_pair = [&]() {
        scalar_field drho = meanfree(random_bandlimited(g, rng, 3, 0.4));
        scalar_field dtheta = random_bandlimited(g, rng, 3, 0.4);
        dtheta += -integrate(dtheta * rho.rho()); // int(dtheta rho) = 0
        return std::make_pair(drho, dtheta);
    };

    auto [dr1, dt1] = tangent_pair();
    auto [dr2, dt2] = tangent_pair();

    { // SFR <-> Fubini-Study isometry
        wave_function psi = madelung_fwd(state);
        auto d1 = madelung_differential(state, dr1, dt1);
        double fs = fs_metric(psi, d1, d1);
        double sfr = sfr_metric(state, dr1, dt1, dr1, dt1);
        res.record("sfr_fs_isometry", std::fabs(fs - sfr), 1e-8);
    }

    { // symplectic pairing vs projectivized imaginary part
        auto d1 = madelung_differential(state, dr1, dt1);
        auto d2 = madelung_differential(state, dr2, dt2);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < d1.size(); ++i) acc += std::conj(d1[i]) * d2[i];
        acc *= g.spacing();
        scalar_field pairing_field = dt1 * dr2 - dt2 * dr1;
        double pairing = integrate(pairing_field);
        res.record("symplectic_pairing", std::fabs(pairing + 4.0 * acc.imag()), 1e-8);
    }

    { // 2HS with sigma = 0 reduces to Hunter-Saxton
        periodic_grid gh(1, 256);
        scalar_field u0 = scalar_field::sample(
            gh, [](double x) { return 0.1 * std::sin(2.0 * pi * x); });
        two_hs_trajectory traj = solve_2hs(u0, scalar_field(gh, 0.0), 1e-3, 0.3, 300);
        momentum_state s(inertia_tag::HdotGauge(), u0);
        for (int i = 0; i < 300; ++i) s = step_ea(s, 1e-3);
        res.record("twohs_sigma0_vs_hs", max_diff(traj.u.back(), s.u), 1e-8);
    }

    { // NLS -> hydrodynamic residual
        periodic_grid gn(1, 256);
        density rho0 = density::normalized(scalar_field::sample(
            gn, [](double x) { return 1.0 + 0.05 * std::cos(2.0 * pi * x); }));
        scalar_field th0 = scalar_field::sample(
            gn, [](double x) { return 0.1 * std::sin(2.0 * pi * x); });
        th0 += -integrate(th0 * rho0.rho());
        wave_function psi = madelung_fwd(cotangent_density(rho0, th0));
        scalar_field V(gn, 0.0);
        nls_nonlinearity f{nls_nonlinearity::cubic, 1.0};
        const double dt = 1e-4;
        const int steps = 500;
        std::vector<wave_function> traj;
        traj.push_back(psi);
        double norm_drift = 0.0;
        double n0 = psi.norm_sq();
        for (int i = 0; i < steps; ++i) {
            psi = nls_split_step(psi, V, f, dt);
            norm_drift = std::max(norm_drift, std::fabs(psi.norm_sq() - n0));
            traj.push_back(psi);
        }
        res.record("nls_norm_drift", norm_drift, 1e-10);
        res.record("hydrodynamic_residual",
                   hydrodynamic_residual(traj, V, f, dt, steps / 2), 1e-3);
    }
    return res;
}

// ---------------------------------------------------------------- 10
criterion_result run_entropy_fisher() {
    criterion_result res;
    periodic_grid g(1, 64);

    density rho = density::normalized(scalar_field::sample(
        g, [](double x) { return 1.0 + 0.3 * std::cos(2.0 * pi * x); }));

    { // heat-flow entropy rate converges to the Fisher information, order 1
        double info = fisher_information(rho);
        double e1 = std::fabs(entropy_rate_along_heat_flow(rho, 4e-4) - info);
        double e2 = std::fabs(entropy_rate_along_heat_flow(rho, 2e-4) - info);
        double order = std::log2(e1 / e2);
        res.record_flag("entropy_rate_first_order", order > 0.8 && order < 1.2, order);
        res.record("entropy_rate_err_small_dt",
                   std::fabs(entropy_rate_along_heat_flow(rho, 1e-4) - info) / info, 1e-2);
    }

    { // FR gradient flow of the Fisher information equals the heat flow
        const double t_end = 0.1, dt = 2e-5;
        density flowed = fr_gradient_flow_fisher_info(rho, dt, static_cast<int>(t_end / dt));
        scalar_field r0(g);
        for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = std::sqrt(rho[i]);
        scalar_field rt = heat_semigroup(r0, t_end);
        density heat_density = density::normalized(rt * rt);
        res.record("fisher_flow_vs_heat", max_diff(flowed.rho(), heat_density.rho()), 1e-6);
    }

    { // Hessian of the entropy along affine density lines recovers FR
        std::mt19937_64 rng(1010);
        scalar_field beta = meanfree(random_bandlimited(g, rng, 3, 0.2));
        auto entropy_at = [&](double t) {
            return entropy(density(rho.rho() + t * beta));
        };
        const double h = 1e-3;
        double second = (-entropy_at(2 * h) + 16.0 * entropy_at(h) - 30.0 * entropy_at(0.0) +
                         16.0 * entropy_at(-h) - entropy_at(-2 * h)) /
                        (12.0 * h * h);
        tangent_density tb(beta, 1e-8);
        double fr = fisher_rao_metric(rho, tb, tb);
        res.record("entropy_hessian_vs_fr", std::fabs(-second - fr), 1e-6);
    }
    return res;
}

// ---------------------------------------------------------------- 11
criterion_result run_invariance() {
    criterion_result res;
    periodic_grid g(1, 256);
    std::mt19937_64 rng(1111);

    density nu = random_density(g, rng, 0.3);
    scalar_field a = meanfree(random_bandlimited(g, rng, 3, 0.3));
    scalar_field b = meanfree(random_bandlimited(g, rng, 3, 0.3));

    vector_field disp(g);
    disp.comp(0) = scalar_field::sample(g, [](double x) { return 0.1 * std::sin(2.0 * pi * x); });
    diffeo phi(disp);

    density nu_p = pullback_density(phi, nu);
    scalar_field a_p = meanfree(pullback_tangent(phi, a));
    scalar_field b_p = meanfree(pullback_tangent(phi, b));

    double fr = fisher_rao_metric(nu, tangent_density(a, 1e-8), tangent_density(b, 1e-8));
    double fr_p = fisher_rao_metric(nu_p, tangent_density(a_p, 1e-8), tangent_density(b_p, 1e-8));
    res.record("fr_pullback_invariance", std::fabs(fr - fr_p), 1e-6);
    return res;
}

} // namespace

const std::vector<criterion>& all_criteria() {
    static const std::vector<criterion> list = {
        {1, "square-root map isometry", run_isometry},
        {2, "Fisher-Rao distance formula and diameter", run_distance_formula},
        {3, "explicit Euler-Arnold solution", run_explicit_ea},
        {4, "breakdown time", run_breakdown},
        {5, "Euler-Arnold family oracles", run_ea_family},
        {6, "alpha-connection geometry", run_alpha},
        {7, "optimal information transport factorization", run_oit},
        {8, "SPD transport and QR", run_spd},
        {9, "Madelung correspondences", run_madelung},
        {10, "entropy and Fisher information flows", run_entropy_fisher},
        {11, "diffeomorphism invariance of Fisher-Rao", run_invariance},
    };
    return list;
}

} // namespace densgeo::accept
