#include "densgeo/diffeo.hpp"

#include "densgeo/kernels.hpp"
#include "densgeo/spectral.hpp"

#include <cmath>
#include <string>

namespace densgeo {

diffeo::diffeo(vector_field displacement) : disp_(std::move(displacement)) {
    for (int a = 0; a < disp_.dim(); ++a) disp_.comp(a).check_finite("diffeo displacement");
}

scalar_field jacobian(const diffeo& phi) {
    const periodic_grid& g = phi.grid();
    scalar_field jac(g);
    if (g.dim() == 1) {
        scalar_field dx = derivative(phi.displacement().comp(0), 0);
        kernels::for_each_index(jac.size(), [&](std::size_t i) { jac[i] = 1.0 + dx[i]; });
    } else {
        scalar_field d00 = derivative(phi.displacement().comp(0), 0);
        scalar_field d01 = derivative(phi.displacement().comp(0), 1);
        scalar_field d10 = derivative(phi.displacement().comp(1), 0);
        scalar_field d11 = derivative(phi.displacement().comp(1), 1);
        kernels::for_each_index(jac.size(), [&](std::size_t i) {
            jac[i] = (1.0 + d00[i]) * (1.0 + d11[i]) - d01[i] * d10[i];
        });
    }
    double lo = kernels::min(jac.data(), jac.size());
    if (!(lo > 0.0))
        throw non_diffeomorphic_error("jacobian: determinant reaches " + std::to_string(lo));
    return jac;
}

scalar_field compose_scalar(const scalar_field& f, const diffeo& phi) {
    require_same_grid(f.grid(), phi.grid(), "compose_scalar");
    const periodic_grid& g = f.grid();
    scalar_field out(g);
    if (g.dim() == 1) {
        // exact trigonometric evaluation: the 1D contracts (inverse round
        // trips at 1e-8 with displacements up to 0.2) sit below the cubic
        // O(h^4) floor
        trig_interpolant ef(f);
        kernels::for_each_index(out.size(), [&](std::size_t i) {
            out[i] = ef(phi.map1(static_cast<int>(i)));
        });
    } else {
        const int n = g.n();
        kernels::for_each_index(out.size(), [&](std::size_t i) {
            int ix = static_cast<int>(i) / n, iy = static_cast<int>(i) % n;
            auto p = phi.map2(ix, iy);
            out[i] = interpolate(f, p[0], p[1]);
        });
    }
    return out;
}

diffeo compose(const diffeo& phi, const diffeo& psi) {
    require_same_grid(phi.grid(), psi.grid(), "compose");
    const periodic_grid& g = phi.grid();
    vector_field disp(g);
    for (int a = 0; a < g.dim(); ++a) {
        scalar_field moved = compose_scalar(phi.displacement().comp(a), psi);
        disp.comp(a) = psi.displacement().comp(a) + moved;
    }
    return diffeo(std::move(disp));
}

diffeo inverse(const diffeo& phi, int max_iter, double tol) {
    const periodic_grid& g = phi.grid();
    const int n = g.n();
    vector_field inv_disp(g); // displacement of phi^{-1}, starting from -disp
    for (int a = 0; a < g.dim(); ++a)
        inv_disp.comp(a) = -1.0 * phi.displacement().comp(a);

    // Newton sweeps on z + d(z) = x per node, with a fixed-point fallback
    // when the local linearization is unusable.
    for (int it = 0; it < max_iter; ++it) {
        double worst = 0.0;
        std::vector<double> deltas(g.size());
        if (g.dim() == 1) {
            const scalar_field& d = phi.displacement().comp(0);
            scalar_field dx = derivative(d, 0);
            scalar_field& w = inv_disp.comp(0);
            kernels::for_each_index(g.size(), [&](std::size_t i) {
                double x = g.coord(static_cast<int>(i));
                double z = x + w[i];
                double f = z + interpolate(d, z) - x;
                double slope = 1.0 + interpolate(dx, z);
                double znew = slope > 0.1 ? z - f / slope : x - interpolate(d, z);
                deltas[i] = std::fabs(znew - z);
                w[i] = znew - x;
            });
        } else {
            const scalar_field& d0 = phi.displacement().comp(0);
            const scalar_field& d1 = phi.displacement().comp(1);
            scalar_field d00 = derivative(d0, 0), d01 = derivative(d0, 1);
            scalar_field d10 = derivative(d1, 0), d11 = derivative(d1, 1);
            scalar_field& w0 = inv_disp.comp(0);
            scalar_field& w1 = inv_disp.comp(1);
            kernels::for_each_index(g.size(), [&](std::size_t i) {
                int ix = static_cast<int>(i) / n, iy = static_cast<int>(i) % n;
                double x = g.coord(ix), y = g.coord(iy);
                double zx = x + w0[i], zy = y + w1[i];
                double fx = zx + interpolate(d0, zx, zy) - x;
                double fy = zy + interpolate(d1, zx, zy) - y;
                double a00 = 1.0 + interpolate(d00, zx, zy);
                double a01 = interpolate(d01, zx, zy);
                double a10 = interpolate(d10, zx, zy);
                double a11 = 1.0 + interpolate(d11, zx, zy);
                double det = a00 * a11 - a01 * a10;
                double nx, ny;
                if (det > 0.1) {
                    nx = zx - (a11 * fx - a01 * fy) / det;
                    ny = zy - (-a10 * fx + a00 * fy) / det;
                } else {
                    nx = x - interpolate(d0, zx, zy);
                    ny = y - interpolate(d1, zx, zy);
                }
                deltas[i] = std::max(std::fabs(nx - zx), std::fabs(ny - zy));
                w0[i] = nx - x;
                w1[i] = ny - y;
            });
        }
        worst = kernels::max(deltas.data(), deltas.size());
        if (worst < tol) {
            if (g.dim() == 1) {
                // polish against the exact trigonometric interpolant: the
                // cubic root is O(h^4) away from the true one
                trig_interpolant ed(phi.displacement().comp(0));
                trig_interpolant edx(derivative(phi.displacement().comp(0), 0));
                scalar_field& w = inv_disp.comp(0);
                for (int sweep = 0; sweep < 3; ++sweep) {
                    kernels::for_each_index(g.size(), [&](std::size_t i) {
                        double x = g.coord(static_cast<int>(i));
                        double z = x + w[i];
                        double slope = 1.0 + edx(z);
                        if (slope > 0.1) w[i] = z - (z + ed(z) - x) / slope - x;
                    });
                }
            }
            return diffeo(std::move(inv_disp));
        }
    }
    throw inverse_diverged_error("inverse: Newton iteration did not converge in " +
                                 std::to_string(max_iter) + " sweeps");
}

double max_displacement_error(const diffeo& a, const diffeo& b) {
    require_same_grid(a.grid(), b.grid(), "max_displacement_error");
    const double L = a.grid().length();
    double worst = 0.0;
    for (int c = 0; c < a.grid().dim(); ++c) {
        const scalar_field& da = a.displacement().comp(c);
        const scalar_field& db = b.displacement().comp(c);
        for (std::size_t i = 0; i < da.size(); ++i) {
            double d = std::fabs(da[i] - db[i]);
            d = std::fmin(d, std::fabs(d - L)); // displacements equal mod period
            worst = std::max(worst, d);
        }
    }
    return worst;
}

density pullback_density(const diffeo& phi, const density& nu) {
    scalar_field jac = jacobian(phi);
    scalar_field moved = compose_scalar(nu.rho(), phi);
    return density::normalized(moved * jac);
}

density pushforward_density(const diffeo& phi, const density& nu) {
    return pullback_density(inverse(phi), nu);
}

scalar_field pullback_tangent(const diffeo& phi, const scalar_field& a) {
    scalar_field jac = jacobian(phi);
    scalar_field moved = compose_scalar(a, phi);
    return moved * jac;
}

} // namespace densgeo
