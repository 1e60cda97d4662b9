#include "densgeo/criteria.hpp"
#include "densgeo/errors.hpp"
#include "densgeo/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using densgeo::cli::experiment_config;
using nlohmann::json;

int execute(const experiment_config& cfg) {
    densgeo::cli::run_report rep = densgeo::cli::run(cfg);
    std::cout << rep.payload.dump(2) << std::endl;
    return 0;
}

json grid_json(int dim, int n, double length) {
    return json{{"dim", dim}, {"n", n}, {"length", length}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"densgeo: Fisher-Rao geometry of densities and diffeomorphisms at desk scale"};
    app.require_subcommand(1);

    // shared grid options
    int dim = 1, n = 128;
    double length = 1.0;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    app.add_option("--dim", dim, "grid dimension (1 or 2)")->capture_default_str();
    app.add_option("-n,--nodes", n, "nodes per axis (power of two >= 8)")->capture_default_str();
    app.add_option("--length", length, "period per axis")->capture_default_str();
    app.add_option("-o,--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "random seed")->capture_default_str();

    auto make_cfg = [&](const std::string& module, const std::string& op) {
        json j = {{"module", module},   {"operation", op},        {"grid", grid_json(dim, n, length)},
                  {"params", json::object()}, {"output_dir", out_dir}, {"seed", seed}};
        return j;
    };

    // ---- run <config.json>
    std::string config_path;
    CLI::App* cmd_run = app.add_subcommand("run", "run an experiment described by a JSON config");
    cmd_run->add_option("config", config_path, "path to the config JSON")->required();

    // ---- distance
    std::string dist_kind = "fisher_rao", file_a, file_b;
    CLI::App* cmd_dist = app.add_subcommand("distance", "distance between two density CSV files");
    cmd_dist->add_option("--kind", dist_kind, "fisher_rao|hellinger|wasserstein2")
        ->capture_default_str();
    cmd_dist->add_option("--a", file_a, "first density CSV")->required();
    cmd_dist->add_option("--b", file_b, "second density CSV")->required();

    // ---- geodesic
    double geo_t = 0.5;
    CLI::App* cmd_geo = app.add_subcommand("geodesic", "Fisher-Rao geodesic point between densities");
    cmd_geo->add_option("--a", file_a, "first density CSV")->required();
    cmd_geo->add_option("--b", file_b, "second density CSV")->required();
    cmd_geo->add_option("--t", geo_t, "curve parameter in [0,1]")->capture_default_str();

    // ---- flow fr / flow ea
    CLI::App* cmd_flow = app.add_subcommand("flow", "geodesic flows");
    cmd_flow->require_subcommand(1);
    double fr_amp = 1.0, fr_dt = 1e-3, fr_tend = 0.0;
    CLI::App* cmd_fr = cmd_flow->add_subcommand("fr", "Fisher-Rao Euler-Arnold flow");
    cmd_fr->add_option("--amplitude", fr_amp, "h0 = amplitude * cos(2 pi x / L)")
        ->capture_default_str();
    cmd_fr->add_option("--dt", fr_dt, "RK4 step")->capture_default_str();
    cmd_fr->add_option("--t-end", fr_tend, "end time (default 0.5 * T_max)")->capture_default_str();

    std::string ea_inertia = "h1", ea_u0;
    double ea_dt = 1e-3, ea_tend = 1.0, ea_amp = 0.2;
    CLI::App* cmd_ea = cmd_flow->add_subcommand("ea", "1D Euler-Arnold momentum solver");
    cmd_ea->add_option("--inertia", ea_inertia, "l2|h1|h1ext:KAPPA|hdot")->capture_default_str();
    cmd_ea->add_option("--u0", ea_u0, "initial velocity CSV (default sin preset)");
    cmd_ea->add_option("--amplitude", ea_amp, "preset amplitude")->capture_default_str();
    cmd_ea->add_option("--dt", ea_dt, "RK4 step")->capture_default_str();
    cmd_ea->add_option("--t-end", ea_tend, "end time")->capture_default_str();

    // ---- alpha
    CLI::App* cmd_alpha = app.add_subcommand("alpha", "Amari-Chentsov alpha-geometry");
    cmd_alpha->require_subcommand(1);
    double alpha_val = 0.0, ag_dt = 1e-3, ag_tend = 0.3, ag_amp = 0.1;
    std::string ag_v0;
    CLI::App* cmd_ag = cmd_alpha->add_subcommand("geodesic", "alpha-connection geodesic");
    cmd_ag->add_option("--alpha", alpha_val, "alpha in [-1, 1]")->required();
    cmd_ag->add_option("--v0", ag_v0, "initial velocity CSV (default sin preset)");
    cmd_ag->add_option("--amplitude", ag_amp, "preset amplitude")->capture_default_str();
    cmd_ag->add_option("--dt", ag_dt, "RK4 step")->capture_default_str();
    cmd_ag->add_option("--t-end", ag_tend, "end time")->capture_default_str();

    std::string adiv_xi, adiv_eta;
    double adiv_amp = 0.05;
    CLI::App* cmd_ad = cmd_alpha->add_subcommand("divergence", "alpha-divergence of two maps");
    cmd_ad->add_option("--alpha", alpha_val, "alpha in [-1, 1]")->required();
    cmd_ad->add_option("--xi", adiv_xi, "displacement CSV for xi (default sin preset)");
    cmd_ad->add_option("--eta", adiv_eta, "displacement CSV for eta (default identity)");
    cmd_ad->add_option("--amplitude", adiv_amp, "preset amplitude")->capture_default_str();

    // ---- oit
    std::string oit_target, oit_phi;
    int oit_steps = 100;
    CLI::App* cmd_oit = app.add_subcommand("oit", "optimal information transport");
    cmd_oit->add_option("--target", oit_target, "target density CSV");
    cmd_oit->add_option("--phi", oit_phi, "diffeomorphism displacement CSV to factorize");
    cmd_oit->add_option("--steps", oit_steps, "lift steps")->capture_default_str();

    // ---- spd
    CLI::App* cmd_spd = app.add_subcommand("spd", "SPD transport");
    cmd_spd->require_subcommand(1);
    int spd_n = 6, spd_steps = 200;
    std::string spd_route = "ode";
    CLI::App* cmd_qr = cmd_spd->add_subcommand("qr", "polar/QR factorization of a random matrix");
    cmd_qr->add_option("--n", spd_n, "matrix dimension")->capture_default_str();
    cmd_qr->add_option("--route", spd_route, "ode|cholesky")->capture_default_str();
    cmd_qr->add_option("--steps", spd_steps, "lift steps (ode route)")->capture_default_str();

    // ---- madelung
    CLI::App* cmd_mad = app.add_subcommand("madelung", "Madelung transform tools");
    cmd_mad->require_subcommand(1);
    std::string mad_rho, mad_theta, mad_psi;
    CLI::App* cmd_fwd = cmd_mad->add_subcommand("fwd", "(rho, theta) -> psi");
    cmd_fwd->add_option("--rho", mad_rho, "density CSV")->required();
    cmd_fwd->add_option("--theta", mad_theta, "theta CSV")->required();
    CLI::App* cmd_inv = cmd_mad->add_subcommand("inv", "psi -> (rho, theta)");
    cmd_inv->add_option("--psi", mad_psi, "complex field CSV")->required();
    double hs2_dt = 1e-3, hs2_tend = 0.3;
    CLI::App* cmd_2hs = cmd_mad->add_subcommand("2hs", "two-component Hunter-Saxton solve");
    cmd_2hs->add_option("--dt", hs2_dt, "RK4 step")->capture_default_str();
    cmd_2hs->add_option("--t-end", hs2_tend, "end time")->capture_default_str();
    double nls_dt = 1e-4;
    int nls_steps = 500;
    std::string nls_f = "cubic";
    CLI::App* cmd_nls = cmd_mad->add_subcommand("nls-check",
                                                "Schroedinger evolution + hydrodynamic residual");
    cmd_nls->add_option("--dt", nls_dt, "split step")->capture_default_str();
    cmd_nls->add_option("--steps", nls_steps, "step count")->capture_default_str();
    cmd_nls->add_option("--nonlinearity", nls_f, "none|cubic|barotropic")->capture_default_str();

    // ---- reproduce
    int repro_only = 0;
    CLI::App* cmd_repro =
        app.add_subcommand("reproduce", "run the acceptance criteria and report pass/fail");
    cmd_repro->add_option("--criterion", repro_only, "run a single criterion id (1..11)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*cmd_run) {
            std::ifstream is(config_path);
            if (!is) {
                std::cerr << "cannot open config: " << config_path << "\n";
                return 1;
            }
            json j;
            try {
                is >> j;
            } catch (const json::exception& e) {
                std::cerr << "config parse error: " << e.what() << "\n";
                return 1;
            }
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_dist) {
            json j = make_cfg("density_geometry", "distance");
            j["params"] = {{"kind", dist_kind}, {"a", file_a}, {"b", file_b}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_geo) {
            json j = make_cfg("density_geometry", "geodesic");
            j["params"] = {{"a", file_a}, {"b", file_b}, {"t", geo_t}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_fr) {
            json j = make_cfg("fisher_rao_flow", "flow_fr");
            j["params"] = {{"h0", {{"preset", "cos"}, {"amplitude", fr_amp}}},
                           {"dt", fr_dt},
                           {"t_end", fr_tend}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_ea) {
            json j = make_cfg("euler_arnold_1d", "flow_ea");
            json u0 = ea_u0.empty() ? json{{"preset", "sin"}, {"amplitude", ea_amp}} : json(ea_u0);
            j["params"] = {{"inertia", ea_inertia}, {"u0", u0}, {"dt", ea_dt}, {"t_end", ea_tend}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_ag) {
            json j = make_cfg("alpha_connections", "geodesic");
            json v0 = ag_v0.empty() ? json{{"preset", "sin"}, {"amplitude", ag_amp}} : json(ag_v0);
            j["params"] = {{"alpha", alpha_val}, {"v0", v0}, {"dt", ag_dt}, {"t_end", ag_tend}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_ad) {
            json j = make_cfg("alpha_connections", "divergence");
            json xi = adiv_xi.empty() ? json{{"preset", "sin"}, {"amplitude", adiv_amp}}
                                      : json(adiv_xi);
            json eta = adiv_eta.empty() ? json{{"preset", "zero"}} : json(adiv_eta);
            j["params"] = {{"alpha", alpha_val}, {"xi", xi}, {"eta", eta}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_oit) {
            json j = make_cfg("oit", "factorize");
            j["params"]["n_steps"] = oit_steps;
            if (!oit_phi.empty()) j["params"]["phi"] = oit_phi;
            if (!oit_target.empty()) j["params"]["target"] = oit_target;
            if (oit_phi.empty() && oit_target.empty()) {
                std::cerr << "oit: provide --target and/or --phi\n";
                return 1;
            }
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_qr) {
            json j = make_cfg("spd_transport", "qr");
            j["params"] = {{"n", spd_n}, {"route", spd_route}, {"n_steps", spd_steps}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_fwd) {
            json j = make_cfg("madelung", "fwd");
            j["params"] = {{"rho", mad_rho}, {"theta", mad_theta}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_inv) {
            json j = make_cfg("madelung", "inv");
            j["params"] = {{"psi", mad_psi}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_2hs) {
            json j = make_cfg("madelung", "2hs");
            j["params"] = {{"dt", hs2_dt}, {"t_end", hs2_tend}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_nls) {
            json j = make_cfg("madelung", "nls_check");
            j["params"] = {{"dt", nls_dt}, {"steps", nls_steps}, {"nonlinearity", nls_f}};
            return execute(experiment_config::from_json(j));
        }
        if (*cmd_repro) {
            bool ok = false;
            densgeo::cli::run_report rep = densgeo::cli::reproduce_all(out_dir, repro_only, &ok);
            for (const auto& crit : rep.payload.at("criteria")) {
                std::printf("%s criterion %2d: %s\n",
                            crit.at("pass").get<bool>() ? "PASS" : "FAIL",
                            crit.at("id").get<int>(),
                            crit.at("name").get<std::string>().c_str());
                for (const auto& c : crit.at("checks"))
                    std::printf("       %-32s value=%.3e bound=%.3e %s\n",
                                c.at("name").get<std::string>().c_str(),
                                c.at("value").get<double>(), c.at("bound").get<double>(),
                                c.at("pass").get<bool>() ? "ok" : "FAIL");
            }
            std::printf("%s\n", ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
            return ok ? 0 : 2;
        }
    } catch (const densgeo::cli::config_error& e) {
        std::cerr << "config error in field '" << e.field << "': " << e.what() << "\n";
        return 1;
    } catch (const densgeo::error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
