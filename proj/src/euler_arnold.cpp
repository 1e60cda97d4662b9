#include "densgeo/euler_arnold.hpp"

#include "densgeo/fft.hpp"
#include "densgeo/kernels.hpp"
#include "densgeo/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace densgeo {

namespace {

void require_circle(const periodic_grid& g, const char* what) {
    if (g.dim() != 1)
        throw wrong_dimension_error(std::string(what) + ": 1D circle only");
}

// (1 - d^2)^{-1} via the symbol 1/(1 + xi^2).
scalar_field invert_one_minus_dxx(const scalar_field& m) {
    const periodic_grid& g = m.grid();
    const int n = g.n();
    const double two_pi_over_l = 2.0 * std::numbers::pi / g.length();
    std::vector<std::complex<double>> spec(fft::spectral_size(g));
    fft::forward(g, m.data(), spec.data());
    for (int j = 0; j <= n / 2; ++j) {
        double xi = two_pi_over_l * j;
        spec[j] /= (1.0 + xi * xi);
    }
    scalar_field out(g);
    fft::inverse(g, spec.data(), out.data());
    return out;
}

} // namespace

scalar_field coadjoint_1d(const scalar_field& u, const scalar_field& m, double kappa) {
    require_circle(u.grid(), "coadjoint_1d");
    require_same_grid(u.grid(), m.grid(), "coadjoint_1d");
    scalar_field ux = derivative(u);
    scalar_field mx = derivative(m);
    scalar_field out(u.grid());
    kernels::for_each_index(out.size(), [&, kappa](std::size_t i) {
        out[i] = 2.0 * ux[i] * m[i] + u[i] * mx[i] + kappa * ux[i];
    });
    return out;
}

scalar_field apply_inertia(inertia_tag tag, const scalar_field& u) {
    require_circle(u.grid(), "apply_inertia");
    switch (tag.kind) {
    case inertia_tag::l2:
        return u;
    case inertia_tag::h1:
    case inertia_tag::h1_ext:
        return u - laplacian(u);
    case inertia_tag::hdot_gauge:
        return -1.0 * laplacian(u);
    }
    throw error("apply_inertia: bad tag");
}

scalar_field invert_inertia(inertia_tag tag, const scalar_field& m) {
    require_circle(m.grid(), "invert_inertia");
    switch (tag.kind) {
    case inertia_tag::l2:
        return m;
    case inertia_tag::h1:
    case inertia_tag::h1_ext:
        return invert_one_minus_dxx(m);
    case inertia_tag::hdot_gauge: {
        double mn = mean(m);
        if (std::fabs(mn) > 1e-8)
            throw mean_not_zero_error("invert_inertia(hdot): mean(m) = " + std::to_string(mn));
        return hs_inverse(m);
    }
    }
    throw error("invert_inertia: bad tag");
}

momentum_state::momentum_state(inertia_tag tag_, const scalar_field& u0)
    : tag(tag_), u(u0), m(apply_inertia(tag_, u0)), kappa_component(tag_.kappa) {}

momentum_state step_ea(const momentum_state& s, double dt, const ea_step_options& opt) {
    const bool gauge = s.tag.kind == inertia_tag::hdot_gauge;
    const double kappa = s.tag.kind == inertia_tag::h1_ext ? s.kappa_component : 0.0;

    auto rhs = [&](const scalar_field& m) {
        scalar_field u = invert_inertia(s.tag, m);
        scalar_field out = -1.0 * coadjoint_1d(u, m, kappa);
        if (opt.dealias_products) out = dealias(out);
        if (gauge) out += -mean(out); // keep the momentum mean-zero
        return out;
    };

    auto project = [&](scalar_field m) {
        if (gauge) m += -mean(m);
        return m;
    };

    scalar_field m = s.m;
    scalar_field k1 = rhs(m);
    scalar_field k2 = rhs(project(m + 0.5 * dt * k1));
    scalar_field k3 = rhs(project(m + 0.5 * dt * k2));
    scalar_field k4 = rhs(project(m + dt * k3));
    m += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    m = project(std::move(m));

    momentum_state next = s;
    next.m = std::move(m);
    next.u = invert_inertia(s.tag, next.m);
    next.t = s.t + dt;

    scalar_field ux = derivative(next.u);
    double cap = kernels::max_abs(ux.data(), ux.size());
    if (cap > opt.duxx_cap)
        throw blowup_error("step_ea: ||u_x||_inf = " + std::to_string(cap) +
                           " exceeded the cap at t = " + std::to_string(next.t));
    return next;
}

double energy(const momentum_state& s) {
    double e = 0.5 * integrate(s.u * s.m);
    if (s.tag.kind == inertia_tag::h1_ext) e += 0.5 * s.kappa_component * s.kappa_component;
    return e;
}

} // namespace densgeo
