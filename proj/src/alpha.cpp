#include "densgeo/alpha.hpp"

#include "densgeo/kernels.hpp"
#include "densgeo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace densgeo {

namespace {

void require_unit_circle(const periodic_grid& g, const char* what) {
    if (g.dim() != 1)
        throw wrong_dimension_error(std::string(what) + ": 1D only");
    if (std::fabs(g.length() - 1.0) > 1e-14)
        throw error(std::string(what) + ": basepoint maps live on the unit circle");
}

constexpr double slope_floor = 1e-6;

} // namespace

basepoint_diffeo1d::basepoint_diffeo1d(const periodic_grid& g) : disp_(g, 0.0) {
    require_unit_circle(g, "basepoint_diffeo1d");
}

basepoint_diffeo1d basepoint_diffeo1d::from_displacement(scalar_field disp) {
    require_unit_circle(disp.grid(), "basepoint_diffeo1d");
    disp.check_finite("basepoint_diffeo1d");
    disp += -disp[0]; // pin xi(0) = 0 exactly
    basepoint_diffeo1d out(disp.grid());
    out.disp_ = std::move(disp);
    if (out.min_slope() <= 0.0)
        throw monotonicity_lost_error("basepoint_diffeo1d: slope not strictly positive");
    return out;
}

basepoint_diffeo1d basepoint_diffeo1d::from_values(const scalar_field& xi_values) {
    scalar_field disp(xi_values.grid());
    const periodic_grid& g = xi_values.grid();
    for (int i = 0; i < g.n(); ++i) disp[i] = xi_values[i] - g.coord(i);
    return from_displacement(std::move(disp));
}

scalar_field basepoint_diffeo1d::values() const {
    scalar_field out(grid());
    for (int i = 0; i < grid().n(); ++i) out[i] = grid().coord(i) + disp_[i];
    return out;
}

scalar_field basepoint_diffeo1d::slope() const {
    scalar_field out = derivative(disp_);
    out += 1.0;
    return out;
}

double basepoint_diffeo1d::min_slope() const {
    scalar_field s = slope();
    return kernels::min(s.data(), s.size());
}

double basepoint_diffeo1d::evaluate(double x) const {
    // exact trigonometric evaluation: compositions in this module feed
    // spectral derivatives, which would amplify cubic interpolation kinks
    double k = std::floor(x);
    double xr = x - k;
    return xr + trig_interpolate(disp_, xr) + k;
}

scalar_field basepoint_diffeo1d::inverse_values() const {
    const periodic_grid& g = grid();
    const int n = g.n();
    scalar_field vals = values();
    trig_interpolant disp_eval(disp_);
    trig_interpolant slope_eval(derivative(disp_));
    scalar_field out(g);
    out[0] = 0.0;
    kernels::for_each_index(static_cast<std::size_t>(n), [&](std::size_t jj) {
        int j = static_cast<int>(jj);
        if (j == 0) return;
        double y = g.coord(j);
        // bracket by the ascending node values
        int lo = 0, hi = n; // xi(x_n) = 1
        while (hi - lo > 1) {
            int mid = (lo + hi) / 2;
            if (vals[mid] <= y)
                lo = mid;
            else
                hi = mid;
        }
        double zlo = g.coord(lo);
        double zhi = hi == n ? 1.0 : g.coord(hi);
        double vlo = vals[lo];
        double vhi = hi == n ? 1.0 : vals[hi];
        double z = zlo + (y - vlo) / (vhi - vlo) * (zhi - zlo);
        double best = std::numeric_limits<double>::infinity();
        int stagnant = 0;
        for (int it = 0; it < 80; ++it) {
            double f = z + disp_eval(z) - y;
            // iterate to machine stagnation: downstream third derivatives
            // amplify any leftover position noise by k^3
            if (std::fabs(f) < 1e-16) break;
            if (std::fabs(f) >= best) {
                if (++stagnant >= 2) break;
            } else {
                best = std::fabs(f);
                stagnant = 0;
            }
            double d = 1.0 + slope_eval(z);
            double znew = d > slope_floor ? z - f / d : z;
            if (znew <= zlo || znew >= zhi || !(std::isfinite(znew))) {
                // bisection fallback keeps the bracket
                if (f > 0.0)
                    zhi = z;
                else
                    zlo = z;
                znew = 0.5 * (zlo + zhi);
            } else if (f > 0.0) {
                zhi = z;
            } else {
                zlo = z;
            }
            z = znew;
        }
        out[jj] = z;
    });
    return out;
}

affine_coordinate::affine_coordinate(scalar_field p) : phi(std::move(p)) {
    double m = integrate(phi);
    if (std::fabs(m) > 1e-10)
        throw error("affine_coordinate: integral " + std::to_string(m) + " is not 0");
}

double divergence_alpha(double alpha, const basepoint_diffeo1d& xi, const basepoint_diffeo1d& eta) {
    if (std::fabs(alpha) > 1.0) throw error("divergence_alpha: |alpha| <= 1 required");
    scalar_field jx = xi.slope();
    scalar_field je = eta.slope();
    if (std::fabs(alpha) == 1.0) {
        // D^{(-1)}(xi, eta) = (1/4) int (log Jac xi - log Jac eta) Jac xi
        const scalar_field& a = alpha < 0.0 ? jx : je;
        const scalar_field& b = alpha < 0.0 ? je : jx;
        scalar_field integrand(jx.grid());
        kernels::for_each_index(integrand.size(), [&](std::size_t i) {
            integrand[i] = 0.25 * (std::log(a[i]) - std::log(b[i])) * a[i];
        });
        return integrate(integrand);
    }
    const double ea = 0.5 * (1.0 - alpha), eb = 0.5 * (1.0 + alpha);
    scalar_field integrand(jx.grid());
    kernels::for_each_index(integrand.size(), [&](std::size_t i) {
        integrand[i] = std::pow(jx[i], ea) * std::pow(je[i], eb);
    });
    return (1.0 - integrate(integrand)) / (1.0 - alpha * alpha);
}

namespace {

// { A^{-1} d_x ((V o xi^{-1})_x (W o xi^{-1})_x) } o xi  -- the alpha-free core.
scalar_field christoffel_core(const basepoint_diffeo1d& xi, const scalar_field& V,
                              const scalar_field& W) {
    scalar_field inv = xi.inverse_values();
    const periodic_grid& g = xi.grid();
    trig_interpolant ev(V), ew(W);
    scalar_field v(g), w(g);
    kernels::for_each_index(g.size(), [&](std::size_t i) {
        v[i] = ev(inv[i]);
        w[i] = ew(inv[i]);
    });
    scalar_field p = derivative(v) * derivative(w);
    scalar_field q = hs_inverse(derivative(p));
    scalar_field vals = xi.values();
    trig_interpolant eq(q);
    scalar_field out(g);
    kernels::for_each_index(g.size(), [&](std::size_t i) { out[i] = eq(vals[i]); });
    out[0] = 0.0; // q(0) = 0 by the basepoint gauge; keep the node exact
    return out;
}

} // namespace

scalar_field christoffel_alpha(double alpha, const basepoint_diffeo1d& xi, const scalar_field& V,
                               const scalar_field& W) {
    require_same_grid(xi.grid(), V.grid(), "christoffel_alpha");
    require_same_grid(xi.grid(), W.grid(), "christoffel_alpha");
    if (alpha == -1.0) return scalar_field(xi.grid(), 0.0);
    return (-0.5 * (1.0 + alpha)) * christoffel_core(xi, V, W);
}

double hdot1_metric(const basepoint_diffeo1d& xi, const scalar_field& V, const scalar_field& W) {
    scalar_field slp = xi.slope();
    scalar_field vx = derivative(V);
    scalar_field wx = derivative(W);
    scalar_field integrand(xi.grid());
    kernels::for_each_index(integrand.size(),
                            [&](std::size_t i) { integrand[i] = 0.25 * vx[i] * wx[i] / slp[i]; });
    return integrate(integrand);
}

scalar_field alpha_geodesic_traj::eulerian_u(std::size_t k) const {
    const basepoint_diffeo1d& x = xi.at(k);
    scalar_field inv = x.inverse_values();
    scalar_field out(x.grid());
    trig_interpolant ev(vel.at(k));
    kernels::for_each_index(out.size(), [&](std::size_t i) { out[i] = ev(inv[i]); });
    return out;
}

alpha_geodesic_traj geodesic_alpha(double alpha, const basepoint_diffeo1d& xi0,
                                   const scalar_field& V0, double dt, double t_end,
                                   int record_every) {
    require_same_grid(xi0.grid(), V0.grid(), "geodesic_alpha");
    alpha_geodesic_traj traj;

    scalar_field disp = xi0.displacement();
    scalar_field V = V0;
    V += -V0[0]; // tangent to the basepoint-fixing coset

    auto check_and_wrap = [&](const scalar_field& d) {
        basepoint_diffeo1d x = basepoint_diffeo1d::from_displacement(d);
        if (x.min_slope() < slope_floor)
            throw monotonicity_lost_error("geodesic_alpha: min slope " +
                                          std::to_string(x.min_slope()));
        return x;
    };

    auto accel = [&](const scalar_field& d, const scalar_field& vv) {
        return christoffel_alpha(alpha, check_and_wrap(d), vv, vv);
    };

    int nsteps = static_cast<int>(std::llround(t_end / dt));
    traj.times.push_back(0.0);
    traj.xi.push_back(check_and_wrap(disp));
    traj.vel.push_back(V);

    for (int s = 0; s < nsteps; ++s) {
        scalar_field a1 = accel(disp, V);
        scalar_field d2 = disp + 0.5 * dt * V;
        scalar_field v2 = V + 0.5 * dt * a1;
        scalar_field a2 = accel(d2, v2);
        scalar_field d3 = disp + 0.5 * dt * v2;
        scalar_field v3 = V + 0.5 * dt * a2;
        scalar_field a3 = accel(d3, v3);
        scalar_field d4 = disp + dt * v3;
        scalar_field v4 = V + dt * a3;
        scalar_field a4 = accel(d4, v4);
        disp += (dt / 6.0) * (V + 2.0 * v2 + 2.0 * v3 + v4);
        V += (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        if ((s + 1) % record_every == 0 || s + 1 == nsteps) {
            traj.times.push_back((s + 1) * dt);
            traj.xi.push_back(check_and_wrap(disp));
            traj.vel.push_back(V);
        }
    }
    return traj;
}

basepoint_diffeo1d explicit_alpha1_geodesic(const scalar_field& a, const scalar_field& b,
                                            double t) {
    require_unit_circle(a.grid(), "explicit_alpha1_geodesic");
    scalar_field f(a.grid());
    kernels::for_each_index(f.size(),
                            [&](std::size_t i) { f[i] = std::exp(a[i] * t + b[i]); });
    double total = integrate(f);
    scalar_field cum = cumulative_integral(f);
    cum *= 1.0 / total;
    return basepoint_diffeo1d::from_values(cum);
}

scalar_field explicit_alpha1_velocity(const scalar_field& a, const scalar_field& b, double t) {
    scalar_field f(a.grid());
    kernels::for_each_index(f.size(),
                            [&](std::size_t i) { f[i] = std::exp(a[i] * t + b[i]); });
    scalar_field af = a * f;
    double D = integrate(f);
    double Ddot = integrate(af);
    scalar_field C = cumulative_integral(f);
    scalar_field Cdot = cumulative_integral(af);
    // xi = C/D; label velocity xi_t = (Cdot D - C Ddot)/D^2
    scalar_field xidot(a.grid());
    kernels::for_each_index(xidot.size(), [&](std::size_t i) {
        xidot[i] = (Cdot[i] * D - C[i] * Ddot) / (D * D);
    });
    basepoint_diffeo1d xi = explicit_alpha1_geodesic(a, b, t);
    scalar_field inv = xi.inverse_values();
    scalar_field u(a.grid());
    trig_interpolant ev(xidot);
    kernels::for_each_index(u.size(), [&](std::size_t i) { u[i] = ev(inv[i]); });
    return u;
}

affine_coordinate affine_chart(const basepoint_diffeo1d& xi) {
    scalar_field slp = xi.slope();
    scalar_field lg(slp.grid());
    kernels::for_each_index(lg.size(), [&](std::size_t i) { lg[i] = std::log(slp[i]); });
    lg += -integrate(lg) / lg.grid().volume();
    return affine_coordinate(std::move(lg));
}

basepoint_diffeo1d affine_chart_inverse(const affine_coordinate& phi) {
    scalar_field e(phi.phi.grid());
    kernels::for_each_index(e.size(), [&](std::size_t i) { e[i] = std::exp(phi.phi[i]); });
    double total = integrate(e);
    scalar_field cum = cumulative_integral(e);
    cum *= 1.0 / total;
    return basepoint_diffeo1d::from_values(cum);
}

namespace {

// || (1-s) w0 + s w1 ||_p on [0, 1+slack]; the segment of positive functions.
struct lp_chord {
    const scalar_field& w0;
    const scalar_field& w1;
    double p;

    double norm(double s) const {
        scalar_field seg(w0.grid());
        kernels::for_each_index(seg.size(), [&](std::size_t i) {
            seg[i] = std::pow((1.0 - s) * w0[i] + s * w1[i], p);
        });
        return std::pow(integrate(seg), 1.0 / p);
    }

    // ds weight of the affine parameter: dt/ds  is proportional to 1/N(s)^2.
    double weight(double s) const {
        double N = norm(s);
        return 1.0 / (N * N);
    }
};

// 16-point Gauss-Legendre rule on [0,1]; nodes by Newton on P_16.
constexpr int gauss_n = 16;

struct gauss_rule {
    double x[gauss_n];
    double w[gauss_n];

    gauss_rule() {
        const double pi = std::numbers::pi;
        for (int i = 0; i < gauss_n; ++i) {
            double z = std::cos(pi * (i + 0.75) / (gauss_n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (int k = 2; k <= gauss_n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = gauss_n * (z * p1 - p0) / (z * z - 1.0);
                double dz = p1 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-16) break;
            }
            x[i] = 0.5 * (1.0 + z);
            w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const gauss_rule& gauss16() {
    static const gauss_rule r;
    return r;
}

double gauss_integral(const lp_chord& c, double lo, double hi) {
    const gauss_rule& r = gauss16();
    double acc = 0.0;
    for (int i = 0; i < gauss_n; ++i)
        acc += r.w[i] * c.weight(lo + (hi - lo) * r.x[i]);
    return acc * (hi - lo);
}

} // namespace

density pth_root_geodesic(double alpha, const density& nu0, const density& nu1, double t) {
    if (std::fabs(alpha) >= 1.0)
        throw error("pth_root_geodesic: |alpha| < 1 required (finite p)");
    require_same_grid(nu0.grid(), nu1.grid(), "pth_root_geodesic");
    const double p = 2.0 / (1.0 - alpha);
    const periodic_grid& g = nu0.grid();

    scalar_field w0(g), w1(g);
    kernels::for_each_index(g.size(), [&](std::size_t i) {
        w0[i] = std::pow(nu0[i], 1.0 / p);
        w1[i] = std::pow(nu1[i], 1.0 / p);
    });
    lp_chord chord{w0, w1, p};

    // Affine parameter t(s) = c * int_0^s N(sigma)^{-2} dsigma: the segment
    // parametrization that makes the second derivative of the projected
    // curve purely radial (slerp for p = 2).
    constexpr int panels = 64;
    double cum[panels + 1];
    cum[0] = 0.0;
    for (int k = 0; k < panels; ++k) {
        double lo = static_cast<double>(k) / panels;
        double hi = static_cast<double>(k + 1) / panels;
        cum[k + 1] = cum[k] + gauss_integral(chord, lo, hi);
    }
    const double total = cum[panels];
    const double target = std::clamp(t, 0.0, 1.0) * total;

    double s;
    if (t <= 0.0) {
        s = 0.0;
    } else if (t >= 1.0) {
        s = 1.0;
    } else {
        int k = 0;
        while (k + 1 < panels && cum[k + 1] < target) ++k;
        double lo = static_cast<double>(k) / panels, hi = static_cast<double>(k + 1) / panels;
        double base = cum[k];
        s = 0.5 * (lo + hi);
        double blo = lo, bhi = hi;
        for (int it = 0; it < 80; ++it) {
            double F = base + gauss_integral(chord, lo, s) - target;
            if (std::fabs(F) < 1e-15 * total) break;
            if (F > 0.0)
                bhi = s;
            else
                blo = s;
            double step = F / chord.weight(s);
            double snew = s - step;
            s = (snew > blo && snew < bhi) ? snew : 0.5 * (blo + bhi);
        }
    }

    double N = chord.norm(s);
    scalar_field rho(g);
    kernels::for_each_index(g.size(), [&](std::size_t i) {
        rho[i] = std::pow(((1.0 - s) * w0[i] + s * w1[i]) / N, p);
    });
    return density::normalized(std::move(rho));
}

double duality_defect(double alpha, const basepoint_diffeo1d& xi, const scalar_field& V,
                      const scalar_field& W, const scalar_field& Z) {
    const double h = 1e-4;
    auto metric_at = [&](double s) {
        scalar_field d = xi.displacement() + s * V;
        return hdot1_metric(basepoint_diffeo1d::from_displacement(std::move(d)), W, Z);
    };
    double lhs = (metric_at(h) - metric_at(-h)) / (2.0 * h);
    // nabla_V W = -Gamma(W, V) for constantly-extended fields
    scalar_field gw = christoffel_alpha(alpha, xi, W, V);
    scalar_field gz = christoffel_alpha(-alpha, xi, Z, V);
    double rhs = -hdot1_metric(xi, gw, Z) - hdot1_metric(xi, W, gz);
    return std::fabs(lhs - rhs);
}

namespace {

// Parallel transport of Z along the straight segment xi + s*dir, s in [0,eps]:
// dZ/ds = Gamma_{xi + s dir}(Z, dir); one RK4 step of size eps.
scalar_field transport_segment(double alpha, const scalar_field& base_disp,
                               const scalar_field& dir, const scalar_field& Z, double eps) {
    auto gamma = [&](double s, const scalar_field& zz) {
        basepoint_diffeo1d x = basepoint_diffeo1d::from_displacement(base_disp + s * dir);
        return christoffel_alpha(alpha, x, zz, dir);
    };
    scalar_field k1 = gamma(0.0, Z);
    scalar_field k2 = gamma(0.5 * eps, Z + 0.5 * eps * k1);
    scalar_field k3 = gamma(0.5 * eps, Z + 0.5 * eps * k2);
    scalar_field k4 = gamma(eps, Z + eps * k3);
    return Z + (eps / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Holonomy defect of the square loop spanned by (eps V, eps W) applied to Z.
scalar_field holonomy_defect(double alpha, const basepoint_diffeo1d& xi, const scalar_field& V,
                             const scalar_field& W, const scalar_field& Z, double eps) {
    const scalar_field& d0 = xi.displacement();
    scalar_field z = Z;
    z = transport_segment(alpha, d0, V, z, eps);
    scalar_field d1 = d0 + eps * V;
    z = transport_segment(alpha, d1, W, z, eps);
    scalar_field d2 = d1 + eps * W;
    z = transport_segment(alpha, d2, -1.0 * V, z, eps);
    scalar_field d3 = d2 - eps * V;
    z = transport_segment(alpha, d3, -1.0 * W, z, eps);
    return z - Z;
}

} // namespace

double alpha_curvature_check(double alpha, const basepoint_diffeo1d& xi, const scalar_field& V,
                             const scalar_field& W, const scalar_field& Z, double eps) {
    // Richardson over eps and eps/2 removes the O(eps) bias of the
    // eps^2-scaled holonomy.
    auto scaled = [&](double a, double e) {
        scalar_field h = holonomy_defect(a, xi, V, W, Z, e);
        return (1.0 / (e * e)) * h;
    };
    auto richardson = [&](double a) {
        scalar_field g1 = scaled(a, eps);
        scalar_field g2 = scaled(a, 0.5 * eps);
        return 2.0 * g2 - g1;
    };
    scalar_field ra = richardson(alpha);
    scalar_field r0 = richardson(0.0);
    double denom = integrate(r0 * r0);
    if (denom < 1e-10)
        throw degenerate_triple_error("alpha_curvature_check: base holonomy below 1e-10");
    return integrate(ra * r0) / denom;
}

double pj_residual(const std::vector<scalar_field>& u, double dt, double alpha, std::size_t k) {
    if (k < 2 || k + 2 >= u.size())
        throw error("pj_residual: need snapshots k-2 .. k+2");
    // 4th-order centered difference of u_t, then two spectral x-derivatives
    scalar_field ut = (1.0 / (12.0 * dt)) *
                      (u[k - 2] - 8.0 * u[k - 1] + 8.0 * u[k + 1] - 1.0 * u[k + 2]);
    scalar_field utxx = laplacian(ut);
    scalar_field ux = derivative(u[k]);
    scalar_field uxx = laplacian(u[k]);
    scalar_field uxxx = derivative(uxx);
    scalar_field res(u[k].grid());
    kernels::for_each_index(res.size(), [&](std::size_t i) {
        res[i] = utxx[i] + (2.0 - alpha) * ux[i] * uxx[i] + u[k][i] * uxxx[i];
    });
    return kernels::max_abs(res.data(), res.size());
}

basepoint_diffeo1d basepoint_from_density(const density& nu) {
    require_unit_circle(nu.grid(), "basepoint_from_density");
    scalar_field cum = cumulative_integral(nu.rho());
    return basepoint_diffeo1d::from_values(cum);
}

density density_from_basepoint(const basepoint_diffeo1d& xi) {
    return density::normalized(xi.slope());
}

} // namespace densgeo
