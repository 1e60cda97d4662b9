#include "densgeo/fr_flow.hpp"

#include "densgeo/kernels.hpp"
#include "densgeo/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace densgeo {

namespace {

constexpr double kappa_floor = 1e-14;

// u = grad(Delta^{-1} h): the horizontal (gradient) velocity with div u = h.
vector_field velocity_from_h(const scalar_field& h) {
    scalar_field w = inv_laplacian_meanzero(h, 1e-8, false);
    return gradient(w);
}

scalar_field advect(const vector_field& u, const scalar_field& h) {
    scalar_field out(h.grid());
    for (int a = 0; a < h.grid().dim(); ++a) out += u.comp(a) * derivative(h, a);
    return out;
}

} // namespace

explicit_solution_params::explicit_solution_params(scalar_field h0_field)
    : h0(std::move(h0_field)), kappa(0.0) {
    double m = mean(h0);
    if (std::fabs(m) > 1e-10)
        throw mean_not_zero_error("explicit_solution_params: h0 has mean " + std::to_string(m));
    double c = integrate(h0 * h0) / (4.0 * h0.grid().volume());
    kappa = std::sqrt(std::max(0.0, c));
}

scalar_field ea_rhs(const scalar_field& h, const vector_field& u) {
    require_same_grid(h.grid(), u.grid(), "ea_rhs");
    const double vol = h.grid().volume();
    double c = integrate(h * h) / (2.0 * vol);
    scalar_field transport = advect(u, h);
    scalar_field out(h.grid());
    kernels::for_each_index(out.size(), [&, c](std::size_t i) {
        out[i] = -transport[i] - 0.5 * h[i] * h[i] - c;
    });
    return out;
}

scalar_field explicit_h(const explicit_solution_params& p, double t) {
    if (p.kappa < kappa_floor) return scalar_field(p.h0.grid(), 0.0);
    double tmax = breakdown_time(p);
    if (t >= tmax)
        throw past_breakdown_error("explicit_h: t = " + std::to_string(t) +
                                   " is past the breakdown time " + std::to_string(tmax));
    const double k = p.kappa;
    scalar_field out(p.h0.grid());
    kernels::for_each_index(out.size(), [&](std::size_t i) {
        out[i] = 2.0 * k * std::tan(std::atan(p.h0[i] / (2.0 * k)) - k * t);
    });
    return out;
}

scalar_field explicit_jacobian(const explicit_solution_params& p, double t) {
    if (p.kappa < kappa_floor) return scalar_field(p.h0.grid(), 1.0);
    const double k = p.kappa;
    const double c = std::cos(k * t), s = std::sin(k * t);
    scalar_field out(p.h0.grid());
    kernels::for_each_index(out.size(), [&](std::size_t i) {
        double r = c + p.h0[i] / (2.0 * k) * s;
        out[i] = r * r;
    });
    return out;
}

double breakdown_time(const explicit_solution_params& p) {
    if (p.kappa < kappa_floor)
        throw stationary_flow_error("breakdown_time: kappa = 0, stationary solution");
    double inf_h0 = kernels::min(p.h0.data(), p.h0.size());
    return std::numbers::pi / (2.0 * p.kappa) +
           std::atan(inf_h0 / (2.0 * p.kappa)) / p.kappa;
}

namespace {

struct ea_state {
    scalar_field h;
    vector_field eta_disp;
    scalar_field theta; // Lagrangian h o eta
    scalar_field jac;   // Lagrangian Jacobian

    ea_state(scalar_field h_, vector_field d_)
        : h(std::move(h_)), eta_disp(std::move(d_)), theta(h), jac(h.grid(), 1.0) {}

    ea_state& axpy(double a, const ea_state& o) {
        h += a * o.h;
        for (int c = 0; c < eta_disp.dim(); ++c) eta_disp.comp(c) += a * o.eta_disp.comp(c);
        theta += a * o.theta;
        jac += a * o.jac;
        return *this;
    }
};

// d/dt of (h, eta, theta, jac): Eulerian PDE for h, Lagrangian flow for eta,
// pointwise geodesic ODEs for (theta, jac) with the multiplier computed from
// the Lagrangian data (int h^2 dmu = int theta^2 jac dx).
ea_state ea_state_rhs(const ea_state& s) {
    const periodic_grid& g = s.h.grid();
    vector_field u = velocity_from_h(s.h);
    scalar_field hdot = ea_rhs(s.h, u);
    diffeo eta(s.eta_disp);
    ea_state out(std::move(hdot), vector_field(g));
    for (int c = 0; c < g.dim(); ++c) out.eta_disp.comp(c) = compose_scalar(u.comp(c), eta);
    double c_lagr = integrate(s.theta * s.theta * s.jac) / (2.0 * g.volume());
    kernels::for_each_index(g.size(), [&](std::size_t i) {
        out.theta[i] = -0.5 * s.theta[i] * s.theta[i] - c_lagr;
        out.jac[i] = s.theta[i] * s.jac[i];
    });
    return out;
}

} // namespace

fr_flow_trajectory integrate_ea_numeric(const vector_field& u0, double dt, double t_end,
                                        const ea_integrator_options& opt) {
    const periodic_grid& g = u0.grid();
    scalar_field h0 = divergence(u0);
    explicit_solution_params params(h0);
    if (params.kappa >= kappa_floor && opt.stop_min_jacobian <= 0.0) {
        double tmax = breakdown_time(params);
        if (t_end >= tmax)
            throw past_breakdown_error("integrate_ea_numeric: t_end >= breakdown time " +
                                       std::to_string(tmax));
    }

    ea_state s(h0, vector_field(g));
    fr_flow_trajectory traj;
    const double vol = g.volume();
    int nsteps = static_cast<int>(std::ceil(t_end / dt - 1e-12));

    auto record = [&](double t) {
        flow_state fs(g);
        fs.h = s.h;
        fs.u = velocity_from_h(s.h);
        fs.eta = diffeo(s.eta_disp);
        fs.theta = s.theta;
        fs.jac = s.jac;
        fs.t = t;
        traj.states.push_back(std::move(fs));
        traj.conserved.push_back(integrate(s.h * s.h) / vol);
    };
    record(0.0);

    double t = 0.0;
    for (int step = 0; step < nsteps; ++step) {
        double step_dt = std::min(dt, t_end - t);
        ea_state k1 = ea_state_rhs(s);
        ea_state s2 = s;
        s2.axpy(0.5 * step_dt, k1);
        ea_state k2 = ea_state_rhs(s2);
        ea_state s3 = s;
        s3.axpy(0.5 * step_dt, k2);
        ea_state k3 = ea_state_rhs(s3);
        ea_state s4 = s;
        s4.axpy(step_dt, k3);
        ea_state k4 = ea_state_rhs(s4);
        s.axpy(step_dt / 6.0, k1);
        s.axpy(step_dt / 3.0, k2);
        s.axpy(step_dt / 3.0, k3);
        s.axpy(step_dt / 6.0, k4);
        t += step_dt;
        if (opt.stop_min_jacobian > 0.0 &&
            kernels::min(s.jac.data(), s.jac.size()) < opt.stop_min_jacobian) {
            traj.breakdown_detected_at = t;
            record(t);
            return traj;
        }
        double hmax = kernels::max_abs(s.h.data(), s.h.size());
        if (hmax > opt.blowup_cap) {
            if (opt.stop_min_jacobian > 0.0) {
                // The C^1 norm diverges at breakdown and the Eulerian spike
                // falls below the mesh. The pointwise geodesic ODEs for
                // (theta, jac) stay valid on the label grid; carry them
                // alone until the Jacobian crosses the threshold.
                while (t < t_end) {
                    auto ode = [&](const scalar_field& th, const scalar_field& jc)
                        -> std::pair<scalar_field, scalar_field> {
                        double cl = integrate(th * th * jc) / (2.0 * vol);
                        scalar_field td(g), jd(g);
                        kernels::for_each_index(g.size(), [&](std::size_t i) {
                            td[i] = -0.5 * th[i] * th[i] - cl;
                            jd[i] = th[i] * jc[i];
                        });
                        return {std::move(td), std::move(jd)};
                    };
                    auto [k1t, k1j] = ode(s.theta, s.jac);
                    auto [k2t, k2j] = ode(s.theta + 0.5 * dt * k1t, s.jac + 0.5 * dt * k1j);
                    auto [k3t, k3j] = ode(s.theta + 0.5 * dt * k2t, s.jac + 0.5 * dt * k2j);
                    auto [k4t, k4j] = ode(s.theta + dt * k3t, s.jac + dt * k3j);
                    s.theta += (dt / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
                    s.jac += (dt / 6.0) * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
                    t += dt;
                    if (kernels::min(s.jac.data(), s.jac.size()) < opt.stop_min_jacobian) {
                        traj.breakdown_detected_at = t;
                        return traj;
                    }
                }
                return traj;
            }
            throw blowup_error("integrate_ea_numeric: max|h| = " + std::to_string(hmax) +
                               " exceeded the cap at t = " + std::to_string(t));
        }
        if ((step + 1) % opt.record_every == 0 || step + 1 == nsteps) record(t);
    }
    return traj;
}

double hamiltonian_energy(const density& rho, const scalar_field& theta) {
    return 0.5 * integrate(theta * theta * rho.rho());
}

std::pair<density, scalar_field> hamiltonian_step(const density& rho0, const scalar_field& theta0,
                                                  double dt) {
    require_same_grid(rho0.grid(), theta0.grid(), "hamiltonian_step");
    double gauge = integrate(theta0 * rho0.rho());
    if (std::fabs(gauge) > 1e-8)
        throw constraint_violated_error("hamiltonian_step: gauge int(theta rho) = " +
                                        std::to_string(gauge));
    scalar_field r = rho0.rho();
    scalar_field th = theta0;

    auto rhs = [](const scalar_field& rr, const scalar_field& tt)
        -> std::pair<scalar_field, scalar_field> {
        double mass = integrate(rr);
        double c = 0.5 * integrate(tt * tt * rr) / mass;
        scalar_field rdot = tt * rr;
        scalar_field tdot(tt.grid());
        kernels::for_each_index(tdot.size(),
                                [&, c](std::size_t i) { tdot[i] = -0.5 * tt[i] * tt[i] - c; });
        return {std::move(rdot), std::move(tdot)};
    };

    auto [k1r, k1t] = rhs(r, th);
    auto [k2r, k2t] = rhs(r + 0.5 * dt * k1r, th + 0.5 * dt * k1t);
    auto [k3r, k3t] = rhs(r + 0.5 * dt * k2r, th + 0.5 * dt * k2t);
    auto [k4r, k4t] = rhs(r + dt * k3r, th + dt * k3t);
    r += (dt / 6.0) * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    th += (dt / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);

    double lo = kernels::min(r.data(), r.size());
    if (!(lo > 0.0))
        throw positivity_lost_error("hamiltonian_step: density reached " + std::to_string(lo));
    density rho1 = density::normalized(std::move(r));
    // re-enforce the gauge
    th += -integrate(th * rho1.rho());
    return {std::move(rho1), std::move(th)};
}

} // namespace densgeo
