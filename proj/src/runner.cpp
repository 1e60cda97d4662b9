#include "densgeo/runner.hpp"

#include "densgeo/alpha.hpp"
#include "densgeo/criteria.hpp"
#include "densgeo/density.hpp"
#include "densgeo/diffeo.hpp"
#include "densgeo/euler_arnold.hpp"
#include "densgeo/field_io.hpp"
#include "densgeo/fr_flow.hpp"
#include "densgeo/kernels.hpp"
#include "densgeo/madelung.hpp"
#include "densgeo/oit.hpp"
#include "densgeo/spd.hpp"
#include "densgeo/spectral.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>

namespace densgeo::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using std::numbers::pi;

std::string joined(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_json(const json& j, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open for writing: " + path);
    os << j.dump(2) << '\n';
}

// Field either from a CSV file or from a named preset.
scalar_field field_from_params(const experiment_config& cfg, const json& spec,
                               const char* field_name) {
    periodic_grid g(cfg.dim, cfg.n, cfg.length);
    if (spec.is_string()) return read_field_csv(spec.get<std::string>());
    if (!spec.is_object())
        throw config_error(field_name, std::string("params.") + field_name +
                                           ": expected a file path or a preset object");
    std::string preset = spec.value("preset", "");
    double amp = spec.value("amplitude", 0.1);
    int k = spec.value("harmonic", 1);
    const double w = 2.0 * pi * k / cfg.length;
    if (preset == "cos") {
        if (g.dim() == 1)
            return scalar_field::sample(g, [&](double x) { return amp * std::cos(w * x); });
        return scalar_field::sample(
            g, [&](double x, double y) { return amp * std::cos(w * x) * std::cos(w * y); });
    }
    if (preset == "sin") {
        if (g.dim() == 1)
            return scalar_field::sample(g, [&](double x) { return amp * std::sin(w * x); });
        return scalar_field::sample(
            g, [&](double x, double y) { return amp * std::sin(w * x) * std::sin(w * y); });
    }
    if (preset == "bump") {
        double center = spec.value("center", 0.5), width = spec.value("width", 0.05);
        auto radial = [&](double x) {
            double d = std::fabs(x - center);
            d = std::min(d, cfg.length - d);
            return d;
        };
        if (g.dim() == 1)
            return scalar_field::sample(g, [&](double x) {
                double d = radial(x);
                return amp * std::exp(-d * d / (2.0 * width * width));
            });
        return scalar_field::sample(g, [&](double x, double y) {
            double d2 = radial(x) * radial(x) + radial(y) * radial(y);
            return amp * std::exp(-d2 / (2.0 * width * width));
        });
    }
    if (preset == "zero") return scalar_field(g, 0.0);
    throw config_error(field_name, std::string("params.") + field_name + ": unknown preset '" +
                                       preset + "'");
}

density density_from_params(const experiment_config& cfg, const json& spec,
                            const char* field_name) {
    if (spec.is_string()) return density::normalized(read_field_csv(spec.get<std::string>()));
    scalar_field f = field_from_params(cfg, spec, field_name);
    f += 1.0 / periodic_grid(cfg.dim, cfg.n, cfg.length).volume();
    return density::normalized(std::move(f));
}

const json& require_param(const experiment_config& cfg, const char* name) {
    if (!cfg.params.contains(name))
        throw config_error(name, std::string("missing required params.") + name);
    return cfg.params.at(name);
}

using handler_fn = std::function<void(const experiment_config&, json& results, json& residuals,
                                      std::vector<std::string>& artifacts)>;

// ----------------------------------------------------------------- handlers

void run_distance(const experiment_config& cfg, json& results, json& residuals,
                  std::vector<std::string>& artifacts) {
    std::string kind = cfg.params.value("kind", "fisher_rao");
    density a = density_from_params(cfg, require_param(cfg, "a"), "a");
    density b = density_from_params(cfg, require_param(cfg, "b"), "b");
    double d = 0.0;
    if (kind == "fisher_rao")
        d = fisher_rao_distance(a, b);
    else if (kind == "hellinger")
        d = hellinger_distance(a, b);
    else if (kind == "wasserstein2")
        d = wasserstein2_1d(a, b);
    else
        throw config_error("kind", "params.kind must be fisher_rao|hellinger|wasserstein2");
    results["distance"] = d;
    results["kind"] = kind;
    json summary = {{"distance", d}, {"kind", kind}};
    std::string path = joined(cfg.output_dir, "distance.json");
    write_json(summary, path);
    artifacts.push_back(path);
    (void)residuals;
}

void run_geodesic(const experiment_config& cfg, json& results, json& residuals,
                  std::vector<std::string>& artifacts) {
    density a = density_from_params(cfg, require_param(cfg, "a"), "a");
    density b = density_from_params(cfg, require_param(cfg, "b"), "b");
    double t = cfg.params.value("t", 0.5);
    density mid = fisher_rao_geodesic(a, b, t);
    std::string path = joined(cfg.output_dir, "geodesic.csv");
    write_field_csv(mid.rho(), path);
    artifacts.push_back(path);
    results["t"] = t;
    double dab = fisher_rao_distance(a, b);
    residuals["midpoint_defect"] =
        std::fabs(fisher_rao_distance(a, mid) + fisher_rao_distance(mid, b) - dab);
    results["distance_ab"] = dab;
}

void run_flow_fr(const experiment_config& cfg, json& results, json& residuals,
                 std::vector<std::string>& artifacts) {
    periodic_grid g(cfg.dim, cfg.n, cfg.length);
    json h0spec = cfg.params.value("h0", json{{"preset", "cos"}, {"amplitude", 1.0}});
    scalar_field h0 = field_from_params(cfg, h0spec, "h0");
    h0 += -mean(h0);
    explicit_solution_params params(h0);
    results["kappa"] = params.kappa;
    double tmax = 0.0;
    try {
        tmax = breakdown_time(params);
        results["breakdown_time"] = tmax;
    } catch (const stationary_flow_error&) {
        results["breakdown_time"] = nullptr;
    }
    double t_end = cfg.params.value("t_end", 0.0);
    if (t_end <= 0.0) t_end = 0.5 * tmax;
    double dt = cfg.params.value("dt", 1e-3);

    vector_field u0 = gradient(inv_laplacian_meanzero(h0, 1e-8, false));
    fr_flow_trajectory traj = integrate_ea_numeric(u0, dt, t_end);

    std::string series = joined(cfg.output_dir, "flow_fr.csv");
    {
        std::ofstream os(series);
        os << "t,min_jac,C,H\n";
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            const flow_state& s = traj.states[i];
            double h_energy = 0.25 * integrate(s.h * s.h);
            os << format_float(s.t) << ','
               << format_float(kernels::min(s.jac.data(), s.jac.size())) << ','
               << format_float(traj.conserved[i]) << ',' << format_float(h_energy) << '\n';
        }
    }
    artifacts.push_back(series);

    // field snapshots at the requested times (closest recorded state)
    std::vector<double> snap_times = {traj.states.back().t};
    if (cfg.params.contains("snapshot_times"))
        snap_times = cfg.params.at("snapshot_times").get<std::vector<double>>();
    for (double ts : snap_times) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < traj.states.size(); ++i)
            if (std::fabs(traj.states[i].t - ts) < std::fabs(traj.states[best].t - ts)) best = i;
        char name[64];
        std::snprintf(name, sizeof(name), "flow_fr_h_t%.6f.csv", traj.states[best].t);
        std::string snap = joined(cfg.output_dir, name);
        write_field_csv(traj.states[best].h, snap);
        artifacts.push_back(snap);
    }

    double drift = 0.0;
    for (double c : traj.conserved) drift = std::max(drift, std::fabs(c - traj.conserved[0]));
    residuals["conserved_C_drift"] = drift;
    results["t_end"] = traj.states.back().t;
}

inertia_tag parse_inertia(const std::string& s) {
    if (s == "l2") return inertia_tag::L2();
    if (s == "h1") return inertia_tag::H1();
    if (s == "hdot") return inertia_tag::HdotGauge();
    if (s.rfind("h1ext:", 0) == 0) return inertia_tag::H1Ext(std::stod(s.substr(6)));
    throw config_error("inertia", "params.inertia must be l2|h1|h1ext:KAPPA|hdot");
}

void run_flow_ea(const experiment_config& cfg, json& results, json& residuals,
                 std::vector<std::string>& artifacts) {
    inertia_tag tag = parse_inertia(cfg.params.value("inertia", "h1"));
    json u0spec = cfg.params.value("u0", json{{"preset", "sin"}, {"amplitude", 0.2}});
    scalar_field u0 = field_from_params(cfg, u0spec, "u0");
    if (tag.kind == inertia_tag::hdot_gauge) u0 += -u0[0];
    double dt = cfg.params.value("dt", 1e-3);
    double t_end = cfg.params.value("t_end", 1.0);
    int steps = static_cast<int>(std::llround(t_end / dt));

    momentum_state s(tag, u0);
    double e0 = energy(s), m0 = integrate(s.m);
    double e_drift = 0.0, m_drift = 0.0;
    std::string series = joined(cfg.output_dir, "flow_ea.csv");
    std::ofstream os(series);
    os << "t,energy,momentum_integral,duxx_max\n";
    auto emit = [&](const momentum_state& st) {
        scalar_field ux = derivative(st.u);
        os << format_float(st.t) << ',' << format_float(energy(st)) << ','
           << format_float(integrate(st.m)) << ','
           << format_float(kernels::max_abs(ux.data(), ux.size())) << '\n';
    };
    emit(s);
    for (int i = 0; i < steps; ++i) {
        s = step_ea(s, dt);
        e_drift = std::max(e_drift, std::fabs(energy(s) - e0));
        m_drift = std::max(m_drift, std::fabs(integrate(s.m) - m0));
        emit(s);
    }
    artifacts.push_back(series);
    std::string snap = joined(cfg.output_dir, "flow_ea_final_u.csv");
    write_field_csv(s.u, snap);
    artifacts.push_back(snap);
    residuals["energy_drift"] = e_drift;
    residuals["momentum_drift"] = m_drift;
    results["steps"] = steps;
}

void run_alpha_geodesic(const experiment_config& cfg, json& results, json& residuals,
                        std::vector<std::string>& artifacts) {
    double alpha = require_param(cfg, "alpha").get<double>();
    json v0spec = cfg.params.value("v0", json{{"preset", "sin"}, {"amplitude", 0.1}});
    scalar_field v0 = field_from_params(cfg, v0spec, "v0");
    v0 += -v0[0];
    double dt = cfg.params.value("dt", 1e-3);
    double t_end = cfg.params.value("t_end", 0.3);
    int every = cfg.params.value("record_every", 50);
    periodic_grid g(1, cfg.n, 1.0);

    alpha_geodesic_traj traj = geodesic_alpha(alpha, basepoint_diffeo1d(g), v0, dt, t_end, every);

    std::string path = joined(cfg.output_dir, "alpha_trajectory.csv");
    {
        std::ofstream os(path);
        os << "t,x,xi,u\n";
        for (std::size_t k = 0; k < traj.xi.size(); ++k) {
            scalar_field vals = traj.xi[k].values();
            scalar_field u = traj.eulerian_u(k);
            for (int i = 0; i < g.n(); ++i)
                os << format_float(traj.times[k]) << ',' << format_float(g.coord(i)) << ','
                   << format_float(vals[i]) << ',' << format_float(u[i]) << '\n';
        }
    }
    artifacts.push_back(path);
    results["snapshots"] = traj.xi.size();
    // Hunter-Saxton energy along the trajectory (conserved for alpha = 0)
    double e0 = 0.0, drift = 0.0;
    for (std::size_t k = 0; k < traj.xi.size(); ++k) {
        scalar_field u = traj.eulerian_u(k);
        scalar_field ux = derivative(u);
        double e = 0.25 * integrate(ux * ux);
        if (k == 0)
            e0 = e;
        else
            drift = std::max(drift, std::fabs(e - e0));
    }
    residuals["hdot_energy_drift"] = drift;
}

void run_alpha_divergence(const experiment_config& cfg, json& results, json& residuals,
                          std::vector<std::string>& artifacts) {
    double alpha = require_param(cfg, "alpha").get<double>();
    periodic_grid g(1, cfg.n, 1.0);
    auto diffeo_of = [&](const char* name) {
        json spec = cfg.params.value(name, json{{"preset", "zero"}});
        scalar_field d = field_from_params(cfg, spec, name);
        return basepoint_diffeo1d::from_displacement(std::move(d));
    };
    basepoint_diffeo1d xi = diffeo_of("xi");
    basepoint_diffeo1d eta = diffeo_of("eta");
    double d_fwd = divergence_alpha(alpha, xi, eta);
    double d_dual = divergence_alpha(-alpha, eta, xi);
    results["divergence"] = d_fwd;
    results["dual_divergence"] = d_dual;
    residuals["duality_gap"] = std::fabs(d_fwd - d_dual);
    std::string path = joined(cfg.output_dir, "alpha_divergence.json");
    write_json(json{{"alpha", alpha}, {"divergence", d_fwd}}, path);
    artifacts.push_back(path);
}

void run_oit(const experiment_config& cfg, json& results, json& residuals,
             std::vector<std::string>& artifacts) {
    lift_options opt;
    opt.n_steps = cfg.params.value("n_steps", 100);
    opt.record_every = opt.n_steps; // endpoints only, keep artifacts small

    bool have_phi = cfg.params.contains("phi");
    if (have_phi) {
        vector_field disp = read_displacement_csv(cfg.params.at("phi").get<std::string>());
        diffeo phi(disp);
        factorization_result fac = factorize(phi, opt);
        scalar_field jac_eta = jacobian(fac.eta);
        jac_eta += -1.0;
        double jac_err = kernels::max_abs(jac_eta.data(), jac_eta.size());
        density target = pullback_density(phi, uniform_density(phi.grid()));
        density pulled = pullback_density(fac.psi, uniform_density(phi.grid()));
        scalar_field diff = pulled.rho() - target.rho();
        double target_err = std::sqrt(integrate(diff * diff) / integrate(target.rho() * target.rho()));

        std::string psi_path = joined(cfg.output_dir, "psi.csv");
        std::string eta_path = joined(cfg.output_dir, "eta.csv");
        write_displacement_csv(fac.psi.displacement(), psi_path);
        write_displacement_csv(fac.eta.displacement(), eta_path);
        artifacts.push_back(psi_path);
        artifacts.push_back(eta_path);

        json summary = {{"theta", fac.theta},
                        {"info_distance", fac.info_distance},
                        {"jac_eta_error", jac_err},
                        {"target_error", target_err}};
        std::string jpath = joined(cfg.output_dir, "oit.json");
        write_json(summary, jpath);
        artifacts.push_back(jpath);
        results = summary;
        residuals["jac_eta_error"] = jac_err;
        residuals["target_error"] = target_err;
        return;
    }

    density target = density_from_params(cfg, require_param(cfg, "target"), "target");
    lift_result lift = lift_horizontal(target, opt);
    density pulled = pullback_density(lift.zeta, uniform_density(target.grid()));
    scalar_field diff = pulled.rho() - target.rho();
    double target_err =
        std::sqrt(integrate(diff * diff) / integrate(target.rho() * target.rho()));
    std::string psi_path = joined(cfg.output_dir, "psi.csv");
    write_displacement_csv(lift.zeta.displacement(), psi_path);
    artifacts.push_back(psi_path);
    json summary = {{"theta", lift.theta},
                    {"info_distance", std::sqrt(target.grid().volume()) * lift.theta},
                    {"jac_eta_error", nullptr},
                    {"target_error", target_err}};
    std::string jpath = joined(cfg.output_dir, "oit.json");
    write_json(summary, jpath);
    artifacts.push_back(jpath);
    results = summary;
    residuals["target_error"] = target_err;
}

void run_spd_qr(const experiment_config& cfg, json& results, json& residuals,
                std::vector<std::string>& artifacts) {
    int n = cfg.params.value("n", 6);
    std::uint64_t seed = cfg.seed;
    std::string route = cfg.params.value("route", "ode");
    int n_steps = cfg.params.value("n_steps", 200);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    spd::matrix A(n, n);
    do {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = (i == j ? 1.0 : 0.0) + 0.5 * unif(rng);
    } while (A.determinant() <= 0.1);

    spd::matrix Q, R;
    spd::qr_polar_factorize(A, Q, R,
                            route == "cholesky" ? spd::qr_route::cholesky : spd::qr_route::ode,
                            n_steps);
    double recon = (Q * R - A).cwiseAbs().maxCoeff();
    double ortho = (Q.transpose() * Q - spd::matrix::Identity(n, n)).cwiseAbs().maxCoeff();

    spd::matrix Qc, Rc;
    spd::qr_polar_factorize(A, Qc, Rc, spd::qr_route::cholesky);
    double route_gap = (R - Rc).cwiseAbs().maxCoeff();

    residuals["qr_reconstruction"] = recon;
    residuals["orthogonality"] = ortho;
    residuals["ode_vs_cholesky"] = route_gap;
    results["det_q"] = Q.determinant();
    results["n"] = n;
    results["route"] = route;
    json summary = {{"n", n},
                    {"route", route},
                    {"qr_reconstruction", recon},
                    {"orthogonality", ortho},
                    {"ode_vs_cholesky", route_gap}};
    std::string path = joined(cfg.output_dir, "spd_qr.json");
    write_json(summary, path);
    artifacts.push_back(path);
}

void run_madelung_fwd(const experiment_config& cfg, json& results, json& residuals,
                      std::vector<std::string>& artifacts) {
    density rho = density_from_params(cfg, require_param(cfg, "rho"), "rho");
    scalar_field theta = field_from_params(cfg, require_param(cfg, "theta"), "theta");
    theta += -integrate(theta * rho.rho());
    wave_function psi = madelung_fwd(cotangent_density(rho, theta));
    std::string path = joined(cfg.output_dir, "psi.csv");
    write_complex_field_csv(psi.grid(), psi.values(), path);
    artifacts.push_back(path);
    results["norm"] = psi.norm_sq();
    (void)residuals;
}

void run_madelung_inv(const experiment_config& cfg, json& results, json& residuals,
                      std::vector<std::string>& artifacts) {
    auto [g, vals] = read_complex_field_csv(require_param(cfg, "psi").get<std::string>());
    wave_function psi(g, std::move(vals));
    cotangent_density st = madelung_inv(psi);
    std::string rpath = joined(cfg.output_dir, "rho.csv");
    std::string tpath = joined(cfg.output_dir, "theta.csv");
    write_field_csv(st.rho.rho(), rpath);
    write_field_csv(st.theta, tpath);
    artifacts.push_back(rpath);
    artifacts.push_back(tpath);
    results["winding"] = st.winding;
    // round-trip defect modulo global phase
    wave_function back = madelung_fwd(st);
    double worst = 0.0;
    std::complex<double> phase = 0.0;
    for (std::size_t i = 0; i < psi.values().size(); ++i)
        phase += std::conj(back[i]) * psi[i];
    phase /= std::abs(phase);
    for (std::size_t i = 0; i < psi.values().size(); ++i)
        worst = std::max(worst, std::abs(back[i] * phase - psi[i]));
    residuals["roundtrip_mod_phase"] = worst;
}

void run_madelung_2hs(const experiment_config& cfg, json& results, json& residuals,
                      std::vector<std::string>& artifacts) {
    periodic_grid g(1, cfg.n, 1.0);
    json u0spec = cfg.params.value("u0", json{{"preset", "sin"}, {"amplitude", 0.1}});
    json s0spec = cfg.params.value("sigma0", json{{"preset", "sin"}, {"amplitude", 0.05}});
    scalar_field u0 = field_from_params(cfg, u0spec, "u0");
    u0 += -u0[0];
    scalar_field s0 = field_from_params(cfg, s0spec, "sigma0");
    s0 += -mean(s0);
    double dt = cfg.params.value("dt", 1e-3);
    double t_end = cfg.params.value("t_end", 0.3);
    two_hs_trajectory traj = solve_2hs(u0, s0, dt, t_end,
                                       cfg.params.value("record_every", 10));

    std::string series = joined(cfg.output_dir, "two_hs.csv");
    {
        std::ofstream os(series);
        os << "t,sfr_energy,sigma_integral\n";
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            scalar_field ux = derivative(traj.u[k]);
            double e = 0.25 * integrate(ux * ux + traj.sigma[k] * traj.sigma[k]);
            os << format_float(traj.times[k]) << ',' << format_float(e) << ','
               << format_float(integrate(traj.sigma[k])) << '\n';
        }
    }
    artifacts.push_back(series);
    scalar_field ux0 = derivative(traj.u.front());
    double e0 = 0.25 * integrate(ux0 * ux0 + traj.sigma.front() * traj.sigma.front());
    scalar_field ux1 = derivative(traj.u.back());
    double e1 = 0.25 * integrate(ux1 * ux1 + traj.sigma.back() * traj.sigma.back());
    residuals["sfr_energy_drift"] = std::fabs(e1 - e0);
    residuals["rhs_mean_max"] = traj.max_rhs_mean;
    results["t_end"] = traj.times.back();
}

void run_madelung_nls(const experiment_config& cfg, json& results, json& residuals,
                      std::vector<std::string>& artifacts) {
    periodic_grid g(1, cfg.n, cfg.length);
    double amp = cfg.params.value("amplitude", 0.05);
    density rho0 = density::normalized(scalar_field::sample(
        g, [&](double x) { return 1.0 + amp * std::cos(2.0 * pi * x / cfg.length); }));
    scalar_field th0 = scalar_field::sample(
        g, [&](double x) { return 0.1 * std::sin(2.0 * pi * x / cfg.length); });
    th0 += -integrate(th0 * rho0.rho());
    wave_function psi = madelung_fwd(cotangent_density(rho0, th0));

    scalar_field V = cfg.params.contains("V")
                         ? field_from_params(cfg, cfg.params.at("V"), "V")
                         : scalar_field(g, 0.0);
    std::string ftag = cfg.params.value("nonlinearity", "cubic");
    nls_nonlinearity f;
    if (ftag == "none")
        f.kind = nls_nonlinearity::none;
    else if (ftag == "cubic")
        f = {nls_nonlinearity::cubic, cfg.params.value("kappa", 1.0)};
    else if (ftag == "barotropic")
        f.kind = nls_nonlinearity::barotropic;
    else
        throw config_error("nonlinearity", "params.nonlinearity must be none|cubic|barotropic");

    double dt = cfg.params.value("dt", 1e-4);
    int steps = cfg.params.value("steps", 500);
    std::vector<wave_function> traj;
    traj.push_back(psi);
    double n0 = psi.norm_sq(), drift = 0.0;
    for (int i = 0; i < steps; ++i) {
        psi = nls_split_step(psi, V, f, dt);
        drift = std::max(drift, std::fabs(psi.norm_sq() - n0));
        traj.push_back(psi);
    }
    residuals["norm_drift"] = drift;
    residuals["hydrodynamic_residual"] =
        hydrodynamic_residual(traj, V, f, dt, static_cast<std::size_t>(steps / 2));
    std::string path = joined(cfg.output_dir, "nls_final.csv");
    write_complex_field_csv(g, traj.back().values(), path);
    artifacts.push_back(path);
    results["steps"] = steps;
}

const std::map<std::pair<std::string, std::string>, handler_fn>& registry() {
    static const std::map<std::pair<std::string, std::string>, handler_fn> reg = {
        {{"density_geometry", "distance"}, run_distance},
        {{"density_geometry", "geodesic"}, run_geodesic},
        {{"fisher_rao_flow", "flow_fr"}, run_flow_fr},
        {{"euler_arnold_1d", "flow_ea"}, run_flow_ea},
        {{"alpha_connections", "geodesic"}, run_alpha_geodesic},
        {{"alpha_connections", "divergence"}, run_alpha_divergence},
        {{"oit", "factorize"}, run_oit},
        {{"spd_transport", "qr"}, run_spd_qr},
        {{"madelung", "fwd"}, run_madelung_fwd},
        {{"madelung", "inv"}, run_madelung_inv},
        {{"madelung", "2hs"}, run_madelung_2hs},
        {{"madelung", "nls_check"}, run_madelung_nls},
    };
    return reg;
}

} // namespace

experiment_config experiment_config::from_json(const json& j) {
    experiment_config cfg;
    if (!j.contains("operation") || !j.at("operation").is_string())
        throw config_error("operation", "config requires a string field 'operation'");
    cfg.operation = j.at("operation").get<std::string>();
    cfg.module = j.value("module", "");
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        cfg.dim = g.value("dim", 1);
        cfg.n = g.value("n", 128);
        cfg.length = g.value("length", 1.0);
    }
    cfg.params = j.value("params", json::object());
    cfg.output_dir = j.value("output_dir", ".");
    cfg.seed = j.value("seed", 0);
    if (cfg.module.empty()) {
        // resolve the module from the operation name when unambiguous
        for (const auto& [key, fn] : registry())
            if (key.second == cfg.operation) {
                if (!cfg.module.empty())
                    throw config_error("module", "operation '" + cfg.operation +
                                                     "' is ambiguous; specify 'module'");
                cfg.module = key.first;
            }
    }
    if (registry().find({cfg.module, cfg.operation}) == registry().end())
        throw config_error("operation", "unknown module/operation '" + cfg.module + "/" +
                                            cfg.operation + "'");
    return cfg;
}

json experiment_config::to_json() const {
    return json{{"module", module},
                {"operation", operation},
                {"grid", {{"dim", dim}, {"n", n}, {"length", length}}},
                {"params", params},
                {"output_dir", output_dir},
                {"seed", seed}};
}

json run_report::to_json() const {
    return json{{"payload", payload}, {"wall_time_ms", wall_time_ms}};
}

std::string run_report::payload_dump() const { return payload.dump(2); }

run_report run(const experiment_config& cfg) {
    auto it = registry().find({cfg.module, cfg.operation});
    if (it == registry().end())
        throw config_error("operation", "unknown module/operation '" + cfg.module + "/" +
                                            cfg.operation + "'");
    fs::create_directories(cfg.output_dir);
    auto t0 = std::chrono::steady_clock::now();
    json results = json::object(), residuals = json::object();
    std::vector<std::string> artifacts;
    it->second(cfg, results, residuals, artifacts);
    auto t1 = std::chrono::steady_clock::now();

    run_report rep;
    rep.payload = json{{"config", cfg.to_json()},
                       {"results", results},
                       {"residuals", residuals},
                       {"artifacts", artifacts}};
    rep.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::string path = joined(cfg.output_dir, "report.json");
    write_json(rep.to_json(), path);
    return rep;
}

run_report reproduce_all(const std::string& output_dir, int only, bool* all_passed) {
    fs::create_directories(output_dir);
    auto t0 = std::chrono::steady_clock::now();
    json criteria_json = json::array();
    bool ok = true;
    for (const auto& crit : accept::all_criteria()) {
        if (only > 0 && crit.id != only) continue;
        accept::criterion_result r = crit.run();
        json checks = json::array();
        for (const auto& c : r.checks)
            checks.push_back(
                json{{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
        criteria_json.push_back(json{
            {"id", crit.id}, {"name", crit.name}, {"pass", r.pass}, {"checks", checks}});
        ok = ok && r.pass;
    }
    auto t1 = std::chrono::steady_clock::now();

    run_report rep;
    rep.payload = json{{"criteria", criteria_json}, {"all_passed", ok}};
    rep.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    write_json(rep.to_json(), joined(output_dir, "reproduce.json"));
    if (all_passed) *all_passed = ok;
    return rep;
}

} // namespace densgeo::cli
