#include "densgeo/density.hpp"

#include "densgeo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace densgeo {

namespace {

constexpr double mass_tol = 1e-10;

void require_positive(const scalar_field& rho, const char* what) {
    double lo = kernels::min(rho.data(), rho.size());
    if (!(lo > 0.0))
        throw positivity_lost_error(std::string(what) + ": node value " + std::to_string(lo) +
                                    " is not strictly positive");
}

} // namespace

density::density(scalar_field rho) : rho_(std::move(rho)) {
    rho_.check_finite("density");
    require_positive(rho_, "density");
    double m = integrate(rho_);
    if (std::fabs(m - 1.0) > mass_tol)
        throw error("density: total mass " + std::to_string(m) + " is not 1 within 1e-10");
}

density density::normalized(scalar_field rho) {
    rho.check_finite("density::normalized");
    require_positive(rho, "density::normalized");
    double m = integrate(rho);
    rho *= 1.0 / m;
    return density(std::move(rho));
}

sphere_point::sphere_point(scalar_field f) : f_(std::move(f)) {
    f_.check_finite("sphere_point");
    require_positive(f_, "sphere_point");
    double norm2 = integrate(f_ * f_);
    if (std::fabs(norm2 - f_.grid().volume()) > mass_tol * std::max(1.0, f_.grid().volume()))
        throw error("sphere_point: integrate(f^2) = " + std::to_string(norm2) +
                    " differs from mu(M)");
}

tangent_density::tangent_density(scalar_field dot_rho, double tol) : dot_rho_(std::move(dot_rho)) {
    dot_rho_.check_finite("tangent_density");
    double m = integrate(dot_rho_);
    if (std::fabs(m) > tol)
        throw error("tangent_density: integral " + std::to_string(m) + " is not 0");
}

density uniform_density(const periodic_grid& g) {
    return density(scalar_field(g, 1.0 / g.volume()));
}

sphere_point sqrt_map(const density& nu) {
    const double vol = nu.grid().volume();
    scalar_field f(nu.grid());
    const scalar_field& rho = nu.rho();
    kernels::for_each_index(f.size(),
                            [&, vol](std::size_t i) { f[i] = std::sqrt(rho[i] * vol); });
    return sphere_point(std::move(f));
}

density inv_sqrt_map(const sphere_point& p) {
    const double vol = p.grid().volume();
    scalar_field rho(p.grid());
    const scalar_field& f = p.f();
    kernels::for_each_index(rho.size(), [&, vol](std::size_t i) { rho[i] = f[i] * f[i] / vol; });
    return density(std::move(rho));
}

double fisher_rao_metric(const density& nu, const tangent_density& a, const tangent_density& b) {
    require_same_grid(nu.grid(), a.grid(), "fisher_rao_metric");
    require_same_grid(nu.grid(), b.grid(), "fisher_rao_metric");
    scalar_field integrand(nu.grid());
    const scalar_field& rho = nu.rho();
    const scalar_field& da = a.dot_rho();
    const scalar_field& db = b.dot_rho();
    kernels::for_each_index(integrand.size(),
                            [&](std::size_t i) { integrand[i] = da[i] * db[i] / rho[i]; });
    return integrate(integrand);
}

double bhattacharyya(const density& lam, const density& nu) {
    require_same_grid(lam.grid(), nu.grid(), "bhattacharyya");
    scalar_field integrand(lam.grid());
    kernels::for_each_index(integrand.size(),
                            [&](std::size_t i) { integrand[i] = std::sqrt(lam[i] * nu[i]); });
    return integrate(integrand);
}

double fisher_rao_distance(const density& lam, const density& nu) {
    double bc = std::clamp(bhattacharyya(lam, nu), -1.0, 1.0);
    return std::sqrt(lam.grid().volume()) * std::acos(bc);
}

double hellinger_distance(const density& lam, const density& nu) {
    double bc = std::min(bhattacharyya(lam, nu), 1.0);
    return std::sqrt(2.0 * (1.0 - bc));
}

density fisher_rao_geodesic(const density& lam, const density& nu, double t) {
    require_same_grid(lam.grid(), nu.grid(), "fisher_rao_geodesic");
    sphere_point pf = sqrt_map(lam);
    sphere_point pg = sqrt_map(nu);
    const scalar_field& f = pf.f();
    const scalar_field& g = pg.f();
    const double vol = lam.grid().volume();
    double cosang = std::clamp(integrate(f * g) / vol, -1.0, 1.0);
    double theta = std::acos(cosang);
    double wf, wg;
    if (theta < 1e-6) {
        // sinc limit of sin((1-t)theta)/sin(theta) and sin(t theta)/sin(theta)
        wf = 1.0 - t;
        wg = t;
    } else {
        wf = std::sin((1.0 - t) * theta) / std::sin(theta);
        wg = std::sin(t * theta) / std::sin(theta);
    }
    scalar_field sigma = wf * f + wg * g;
    scalar_field rho(sigma.grid());
    kernels::for_each_index(rho.size(),
                            [&, vol](std::size_t i) { rho[i] = sigma[i] * sigma[i] / vol; });
    return density::normalized(std::move(rho));
}

double entropy(const density& nu) {
    scalar_field integrand(nu.grid());
    kernels::for_each_index(integrand.size(),
                            [&](std::size_t i) { integrand[i] = -std::log(nu[i]) * nu[i]; });
    return integrate(integrand);
}

double fisher_information(const density& nu) {
    const periodic_grid& g = nu.grid();
    scalar_field integrand(g, 0.0);
    for (int a = 0; a < g.dim(); ++a) {
        scalar_field da = derivative(nu.rho(), a);
        kernels::for_each_index(integrand.size(),
                                [&](std::size_t i) { integrand[i] += da[i] * da[i] / nu[i]; });
    }
    return integrate(integrand);
}

double entropy_rate_along_heat_flow(const density& nu, double dt) {
    density next = density::normalized(heat_semigroup(nu.rho(), dt));
    return (entropy(next) - entropy(nu)) / dt;
}

density fr_gradient_flow_fisher_info(const density& nu, double dt, int steps) {
    // rho_t = 2 sqrt(rho) Lap sqrt(rho) - c rho becomes, with r = sqrt(rho),
    // r_t = Lap r - (c/2) r;  c = 2 int r Lap r dmu keeps the mass fixed.
    scalar_field r(nu.grid());
    kernels::for_each_index(r.size(), [&](std::size_t i) { r[i] = std::sqrt(nu[i]); });
    auto rhs = [](const scalar_field& rr) {
        scalar_field lap = laplacian(rr);
        double c = 2.0 * integrate(rr * lap);
        scalar_field out(rr.grid());
        kernels::for_each_index(out.size(),
                                [&](std::size_t i) { out[i] = lap[i] - 0.5 * c * rr[i]; });
        return out;
    };
    for (int s = 0; s < steps; ++s) {
        scalar_field k1 = rhs(r);
        scalar_field k2 = rhs(r + 0.5 * dt * k1);
        scalar_field k3 = rhs(r + 0.5 * dt * k2);
        scalar_field k4 = rhs(r + dt * k3);
        r += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        double lo = kernels::min(r.data(), r.size());
        if (!(lo > 0.0))
            throw positivity_lost_error("fr_gradient_flow_fisher_info: sqrt(rho) hit " +
                                        std::to_string(lo));
        // renormalize mass against integration drift
        double m = integrate(r * r);
        r *= 1.0 / std::sqrt(m);
    }
    return density::normalized(r * r);
}

density fr_gradient_flow_entropy(const density& nu, double dt, int steps) {
    // In f = log rho coordinates the flow is f_t = -f + c with the
    // multiplier c pinned by mass conservation: c = int rho log rho dmu.
    scalar_field f(nu.grid());
    kernels::for_each_index(f.size(), [&](std::size_t i) { f[i] = std::log(nu[i]); });
    auto rhs = [](const scalar_field& ff) {
        scalar_field expf(ff.grid());
        kernels::for_each_index(expf.size(),
                                [&](std::size_t i) { expf[i] = std::exp(ff[i]); });
        double mass = integrate(expf);
        double c = integrate(expf * ff) / mass;
        scalar_field out(ff.grid());
        kernels::for_each_index(out.size(), [&](std::size_t i) { out[i] = -ff[i] + c; });
        return out;
    };
    for (int s = 0; s < steps; ++s) {
        scalar_field k1 = rhs(f);
        scalar_field k2 = rhs(f + 0.5 * dt * k1);
        scalar_field k3 = rhs(f + 0.5 * dt * k2);
        scalar_field k4 = rhs(f + dt * k3);
        f += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // renormalize mass each step (a constant shift in log coordinates)
        scalar_field expf(f.grid());
        kernels::for_each_index(expf.size(), [&](std::size_t i) { expf[i] = std::exp(f[i]); });
        f += -std::log(integrate(expf));
    }
    scalar_field rho(f.grid());
    kernels::for_each_index(rho.size(), [&](std::size_t i) { rho[i] = std::exp(f[i]); });
    return density::normalized(std::move(rho));
}

namespace {

// Piecewise-linear CDF of a 1D density cut at node `cut`; breakpoints at the
// n+1 cell boundaries of the unrolled interval [x_cut, x_cut + L].
struct quantile_fn {
    std::vector<double> cdf; // size n+1, cdf[0] = 0, cdf[n] = 1
    std::vector<double> pos; // node positions on the unrolled axis

    quantile_fn(const density& d, int cut) {
        const periodic_grid& g = d.grid();
        const int n = g.n();
        const double h = g.spacing();
        cdf.assign(n + 1, 0.0);
        pos.assign(n + 1, 0.0);
        for (int i = 0; i <= n; ++i) pos[i] = g.coord(cut) + i * h;
        for (int i = 0; i < n; ++i) {
            double a = d[(cut + i) % n];
            double b = d[(cut + i + 1) % n];
            cdf[i + 1] = cdf[i] + 0.5 * h * (a + b);
        }
        double total = cdf[n];
        for (double& v : cdf) v /= total;
    }

    double operator()(double s) const {
        auto it = std::upper_bound(cdf.begin(), cdf.end(), s);
        std::size_t j = std::min<std::size_t>(
            cdf.size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                                0, (it - cdf.begin()) - 1)));
        double w = cdf[j + 1] - cdf[j];
        double frac = w > 0.0 ? (s - cdf[j]) / w : 0.0;
        return pos[j] + frac * (pos[j + 1] - pos[j]);
    }
};

// Exact integral of |Qa - Qb|^2 over [0,1]: both quantiles are piecewise
// linear, so the difference is piecewise linear on the merged breakpoints
// and Simpson is exact on each piece.
double quantile_l2_sq(const quantile_fn& qa, const quantile_fn& qb) {
    std::vector<double> brk;
    brk.reserve(qa.cdf.size() + qb.cdf.size());
    brk.insert(brk.end(), qa.cdf.begin(), qa.cdf.end());
    brk.insert(brk.end(), qb.cdf.begin(), qb.cdf.end());
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        double s0 = brk[i], s1 = brk[i + 1];
        if (s1 <= s0) continue;
        double sm = 0.5 * (s0 + s1);
        double d0 = qa(s0) - qb(s0);
        double dm = qa(sm) - qb(sm);
        double d1 = qa(s1) - qb(s1);
        acc += (s1 - s0) / 6.0 * (d0 * d0 + 4.0 * dm * dm + d1 * d1);
    }
    return acc;
}

} // namespace

double wasserstein2_1d(const density& lam, const density& nu) {
    require_same_grid(lam.grid(), nu.grid(), "wasserstein2_1d");
    if (lam.grid().dim() != 1)
        throw wrong_dimension_error("wasserstein2_1d: 1D only");
    const int n = lam.grid().n();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> costs(n);
    kernels::for_each_index(static_cast<std::size_t>(n), [&](std::size_t cut) {
        quantile_fn qa(lam, static_cast<int>(cut));
        quantile_fn qb(nu, static_cast<int>(cut));
        costs[cut] = quantile_l2_sq(qa, qb);
    });
    for (double c : costs) best = std::min(best, c);
    return std::sqrt(best);
}

} // namespace densgeo
