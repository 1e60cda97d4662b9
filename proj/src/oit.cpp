#include "densgeo/oit.hpp"

#include "densgeo/kernels.hpp"
#include "densgeo/spectral.hpp"

#include <cmath>
#include <string>

namespace densgeo {

namespace {

constexpr double theta_floor = 1e-8;

// Sphere representative of a unit-mass density: g = sqrt(rho mu(M)),
// so that int g^2 dmu = mu(M) and the uniform density maps to 1.
scalar_field sphere_rep(const density& target) {
    const double vol = target.grid().volume();
    scalar_field g(target.grid());
    kernels::for_each_index(g.size(),
                            [&, vol](std::size_t i) { g[i] = std::sqrt(target[i] * vol); });
    return g;
}

double sphere_angle(const scalar_field& g) {
    double vol = g.grid().volume();
    double c = integrate(g) / vol;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

struct lift_state {
    vector_field disp;     // zeta - id
    vector_field inv_disp; // zeta^{-1} - id

    explicit lift_state(const periodic_grid& g) : disp(g), inv_disp(g) {}

    lift_state& axpy(double a, const lift_state& o) {
        for (int c = 0; c < disp.dim(); ++c) {
            disp.comp(c) += a * o.disp.comp(c);
            inv_disp.comp(c) += a * o.inv_disp.comp(c);
        }
        return *this;
    }
};

} // namespace

scalar_field w0_source(const density& target, double* theta_out) {
    scalar_field g = sphere_rep(target);
    double theta = sphere_angle(g);
    if (theta_out) *theta_out = theta;
    scalar_field src(g.grid());
    if (theta < theta_floor) {
        // sinc limit: source -> 2 (g - 1) as theta -> 0
        kernels::for_each_index(src.size(), [&](std::size_t i) { src[i] = 2.0 * (g[i] - 1.0); });
        return src;
    }
    const double c = std::cos(theta), s = std::sin(theta);
    kernels::for_each_index(src.size(), [&](std::size_t i) {
        src[i] = (2.0 * theta * g[i] - 2.0 * theta * c) / s;
    });
    return src;
}

scalar_field w0_potential(const density& target, double* theta_out) {
    scalar_field src = w0_source(target, theta_out);
    src += -mean(src); // analytically mean-zero; strip quadrature noise
    return inv_laplacian_meanzero(src, 1e-9, false);
}

namespace {

// sigma(t) and sigma'(t) as fields over the Lagrangian labels.
struct great_circle {
    const scalar_field& g;
    double theta;

    scalar_field sigma(double t) const {
        scalar_field out(g.grid());
        if (theta < theta_floor) {
            kernels::for_each_index(out.size(), [&, t](std::size_t i) {
                out[i] = (1.0 - t) + t * g[i];
            });
            return out;
        }
        const double s = std::sin(theta);
        const double a = std::sin((1.0 - t) * theta) / s;
        const double b = std::sin(t * theta) / s;
        kernels::for_each_index(out.size(),
                                [&, a, b](std::size_t i) { out[i] = a + b * g[i]; });
        return out;
    }

    scalar_field sigma_dot(double t) const {
        scalar_field out(g.grid());
        if (theta < theta_floor) {
            kernels::for_each_index(out.size(), [&](std::size_t i) { out[i] = g[i] - 1.0; });
            return out;
        }
        const double s = std::sin(theta);
        const double a = -theta * std::cos((1.0 - t) * theta) / s;
        const double b = theta * std::cos(t * theta) / s;
        kernels::for_each_index(out.size(),
                                [&, a, b](std::size_t i) { out[i] = a + b * g[i]; });
        return out;
    }
};

// d/dt of (zeta, zeta^{-1}) at stage time t.
lift_state lift_rhs(const great_circle& gc, const lift_state& s, double t) {
    const periodic_grid& grid = gc.g.grid();
    diffeo zeta(s.disp);
    diffeo zinv(s.inv_disp);

    scalar_field sig = gc.sigma(t);
    double lo = kernels::min(sig.data(), sig.size());
    if (!(lo > 0.0))
        throw positivity_lost_error("lift_horizontal: sigma reached " + std::to_string(lo));
    scalar_field sdot = gc.sigma_dot(t);
    scalar_field ratio(grid);
    kernels::for_each_index(ratio.size(),
                            [&](std::size_t i) { ratio[i] = 2.0 * sdot[i] / sig[i]; });

    // Delta w_t = (2 sigma'/sigma) o zeta^{-1}
    scalar_field src = compose_scalar(ratio, zinv);
    src += -mean(src);
    scalar_field w = inv_laplacian_meanzero(src, 1e-9, false);
    vector_field u = gradient(w);

    lift_state out(grid);
    for (int c = 0; c < grid.dim(); ++c)
        out.disp.comp(c) = compose_scalar(u.comp(c), zeta);

    // back-advection of the inverse labels: d/dt dinv_a = -u_a - (u . grad) dinv_a
    for (int a = 0; a < grid.dim(); ++a) {
        scalar_field adv(grid);
        for (int b = 0; b < grid.dim(); ++b)
            adv += u.comp(b) * derivative(s.inv_disp.comp(a), b);
        out.inv_disp.comp(a) = -1.0 * (u.comp(a) + adv);
    }
    return out;
}

} // namespace

lift_result lift_horizontal(const density& target, const lift_options& opt) {
    const periodic_grid& grid = target.grid();
    scalar_field g = sphere_rep(target);
    great_circle gc{g, sphere_angle(g)};

    lift_result res(grid);
    res.theta = gc.theta;
    res.times.push_back(0.0);
    res.trajectory.push_back(diffeo::identity(grid));
    if (gc.theta < theta_floor) {
        // target is the reference density; the lift stays at the identity
        res.times.push_back(1.0);
        res.trajectory.push_back(diffeo::identity(grid));
        return res;
    }

    const double dt = 1.0 / opt.n_steps;
    lift_state s(grid);
    for (int step = 0; step < opt.n_steps; ++step) {
        double t = step * dt;
        lift_state k1 = lift_rhs(gc, s, t);
        lift_state s2 = s;
        s2.axpy(0.5 * dt, k1);
        lift_state k2 = lift_rhs(gc, s2, t + 0.5 * dt);
        lift_state s3 = s;
        s3.axpy(0.5 * dt, k2);
        lift_state k3 = lift_rhs(gc, s3, t + 0.5 * dt);
        lift_state s4 = s;
        s4.axpy(dt, k3);
        lift_state k4 = lift_rhs(gc, s4, t + dt);
        s.axpy(dt / 6.0, k1);
        s.axpy(dt / 3.0, k2);
        s.axpy(dt / 3.0, k3);
        s.axpy(dt / 6.0, k4);

        double dmax = 0.0;
        for (int c = 0; c < grid.dim(); ++c)
            dmax = std::max(dmax, kernels::max_abs(s.disp.comp(c).data(), s.disp.comp(c).size()));
        if (dmax > opt.displacement_warn_fraction * grid.length())
            res.resolution_warning = true; // interpolation accuracy degrades

        if ((step + 1) % opt.crossvalidate_every == 0 || step + 1 == opt.n_steps) {
            diffeo zeta(s.disp);
            diffeo fixed_inv = inverse(zeta);
            diffeo advected(s.inv_disp);
            res.inverse_check =
                std::max(res.inverse_check, max_displacement_error(fixed_inv, advected));
        }
        if ((step + 1) % opt.record_every == 0 || step + 1 == opt.n_steps) {
            res.times.push_back((step + 1) * dt);
            res.trajectory.push_back(diffeo(s.disp));
        }
    }
    res.zeta = diffeo(s.disp);
    res.zeta_inv = diffeo(s.inv_disp);
    return res;
}

factorization_result factorize(const diffeo& phi, const lift_options& opt) {
    const periodic_grid& g = phi.grid();
    density target = pullback_density(phi, uniform_density(g));
    lift_result lift = lift_horizontal(target, opt);

    factorization_result out(g);
    out.psi = lift.zeta;
    out.theta = lift.theta;
    out.info_distance = std::sqrt(g.volume()) * lift.theta;
    out.inverse_check = lift.inverse_check;
    out.eta = compose(phi, inverse(lift.zeta));
    return out;
}

double divergence_free_norm(const vector_field& v) {
    const periodic_grid& g = v.grid();
    scalar_field div(g);
    for (int a = 0; a < g.dim(); ++a) div += derivative(v.comp(a), a);
    scalar_field w = inv_laplacian_meanzero(div, 1e-6, false);
    vector_field grad_part = gradient(w);
    double acc = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        scalar_field residual = v.comp(a) - grad_part.comp(a);
        acc += integrate(residual * residual);
    }
    return std::sqrt(acc);
}

} // namespace densgeo
