#include "densgeo/spectral.hpp"

#include "densgeo/fft.hpp"
#include "densgeo/kernels.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace densgeo {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

// Signed wavenumber index of mode j on an n-point axis.
int signed_mode(int j, int n) { return j <= n / 2 ? j : j - n; }

// Applies a spectral multiplier m(kx, ky) where k are angular wavenumbers
// 2*pi*mode/length. In 1D ky stays 0.
template <class M>
scalar_field apply_multiplier(const scalar_field& f, M m) {
    const periodic_grid& g = f.grid();
    const int n = g.n();
    const double two_pi_over_l = 2.0 * std::numbers::pi / g.length();
    std::vector<cd> spec(fft::spectral_size(g));
    fft::forward(g, f.data(), spec.data());
    if (g.dim() == 1) {
        const int nk = n / 2 + 1;
        for (int j = 0; j < nk; ++j)
            spec[j] *= m(two_pi_over_l * j, 0.0, j == n / 2, false);
    } else {
        const int nk = n / 2 + 1;
        for (int j0 = 0; j0 < n; ++j0) {
            const int k0 = signed_mode(j0, n);
            for (int j1 = 0; j1 < nk; ++j1) {
                spec[static_cast<std::size_t>(j0) * nk + j1] *=
                    m(two_pi_over_l * k0, two_pi_over_l * j1, j0 == n / 2, j1 == n / 2);
            }
        }
    }
    scalar_field out(g);
    fft::inverse(g, spec.data(), out.data());
    return out;
}

// Cubic Lagrange weights on the 4-node stencil {-1, 0, 1, 2} around the cell,
// s in [0,1) the fractional offset within the cell.
inline void cubic_weights(double s, double w[4]) {
    w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
    w[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    w[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
    w[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
}

inline int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

} // namespace

scalar_field derivative(const scalar_field& f, int axis) {
    const periodic_grid& g = f.grid();
    if (axis < 0 || axis >= g.dim())
        throw wrong_dimension_error("derivative: axis out of range");
    if (g.dim() == 1)
        return apply_multiplier(f, [](double kx, double, bool nyq_x, bool) {
            return nyq_x ? cd{0.0, 0.0} : I * kx;
        });
    if (axis == 0)
        return apply_multiplier(f, [](double kx, double, bool nyq_x, bool) {
            return nyq_x ? cd{0.0, 0.0} : I * kx;
        });
    return apply_multiplier(f, [](double, double ky, bool, bool nyq_y) {
        return nyq_y ? cd{0.0, 0.0} : I * ky;
    });
}

scalar_field laplacian(const scalar_field& f) {
    return apply_multiplier(f, [](double kx, double ky, bool, bool) {
        return cd{-(kx * kx + ky * ky), 0.0};
    });
}

scalar_field inv_laplacian_meanzero(const scalar_field& f, double tol_mean, bool strict) {
    if (strict) {
        double m = mean(f);
        if (std::fabs(m) >= tol_mean)
            throw mean_not_zero_error("inv_laplacian_meanzero: |mean| = " + std::to_string(std::fabs(m)) +
                                      " exceeds tolerance");
    }
    return apply_multiplier(f, [](double kx, double ky, bool, bool) {
        double k2 = kx * kx + ky * ky;
        return k2 == 0.0 ? cd{0.0, 0.0} : cd{-1.0 / k2, 0.0};
    });
}

double integrate(const scalar_field& f) {
    const periodic_grid& g = f.grid();
    double cell = 1.0;
    for (int d = 0; d < g.dim(); ++d) cell *= g.spacing();
    return cell * kernels::sum(f.data(), f.size());
}

double mean(const scalar_field& f) {
    return kernels::sum(f.data(), f.size()) / static_cast<double>(f.size());
}

scalar_field antiderivative_meanzero(const scalar_field& f) {
    if (f.grid().dim() != 1)
        throw wrong_dimension_error("antiderivative_meanzero: 1D only");
    return apply_multiplier(f, [](double kx, double, bool nyq_x, bool) {
        return (kx == 0.0 || nyq_x) ? cd{0.0, 0.0} : 1.0 / (I * kx);
    });
}

scalar_field cumulative_integral(const scalar_field& f) {
    if (f.grid().dim() != 1)
        throw wrong_dimension_error("cumulative_integral: 1D only");
    const periodic_grid& g = f.grid();
    double m = mean(f);
    scalar_field F = antiderivative_meanzero(f);
    double f0 = F[0];
    scalar_field out(g);
    for (int i = 0; i < g.n(); ++i) out[i] = m * g.coord(i) + F[i] - f0;
    return out;
}

scalar_field hs_inverse(const scalar_field& u) {
    const periodic_grid& g = u.grid();
    if (g.dim() != 1)
        throw wrong_dimension_error("hs_inverse: 1D only");
    // Split u = ubar + m. For the mean-zero part, composing the two
    // antiderivatives and the linear correction collapses to
    //   v(x) = Vtilde(0) - Vtilde(x),  Vtilde the second antiderivative.
    // The mean contributes m*x*(L - x)/2 (pseudo-periodic part).
    const double m = mean(u);
    const double L = g.length();
    scalar_field first = antiderivative_meanzero(u);
    scalar_field second = antiderivative_meanzero(first);
    scalar_field v(g);
    double s0 = second[0];
    for (int i = 0; i < g.n(); ++i) {
        double x = g.coord(i);
        v[i] = s0 - second[i] + 0.5 * m * x * (L - x);
    }
    return v;
}

double interpolate(const scalar_field& f, double x) {
    const periodic_grid& g = f.grid();
    if (g.dim() != 1)
        throw wrong_dimension_error("interpolate(x): field is not 1D");
    const int n = g.n();
    const double h = g.spacing();
    double t = x / h;
    double base = std::floor(t);
    double s = t - base;
    int j = wrap(static_cast<int>(base), n);
    double w[4];
    cubic_weights(s, w);
    double out = 0.0;
    for (int a = 0; a < 4; ++a) out += w[a] * f[wrap(j + a - 1, n)];
    return out;
}

double interpolate(const scalar_field& f, double x, double y) {
    const periodic_grid& g = f.grid();
    if (g.dim() != 2)
        throw wrong_dimension_error("interpolate(x,y): field is not 2D");
    const int n = g.n();
    const double h = g.spacing();
    double tx = x / h, ty = y / h;
    double bx = std::floor(tx), by = std::floor(ty);
    int jx = wrap(static_cast<int>(bx), n);
    int jy = wrap(static_cast<int>(by), n);
    double wx[4], wy[4];
    cubic_weights(tx - bx, wx);
    cubic_weights(ty - by, wy);
    double out = 0.0;
    for (int a = 0; a < 4; ++a) {
        int ix = wrap(jx + a - 1, n);
        double row = 0.0;
        for (int b = 0; b < 4; ++b) row += wy[b] * f.at(ix, wrap(jy + b - 1, n));
        out += wx[a] * row;
    }
    return out;
}

std::vector<double> interpolate(const scalar_field& f, const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    const double* px = xs.data();
    double* po = out.data();
    kernels::for_each_index(xs.size(), [&, px, po](std::size_t i) { po[i] = interpolate(f, px[i]); });
    return out;
}

std::vector<double> interpolate(const scalar_field& f,
                                const std::vector<std::array<double, 2>>& pts) {
    std::vector<double> out(pts.size());
    const auto* pp = pts.data();
    double* po = out.data();
    kernels::for_each_index(pts.size(),
                            [&, pp, po](std::size_t i) { po[i] = interpolate(f, pp[i][0], pp[i][1]); });
    return out;
}

trig_interpolant::trig_interpolant(const scalar_field& f)
    : n_(f.grid().n()), length_(f.grid().length()), spec_(fft::spectral_size(f.grid())) {
    if (f.grid().dim() != 1)
        throw wrong_dimension_error("trig_interpolant: 1D only");
    fft::forward(f.grid(), f.data(), spec_.data());
}

double trig_interpolant::operator()(double x) const {
    const double w = 2.0 * std::numbers::pi * x / length_;
    double acc = spec_[0].real();
    for (int k = 1; k < n_ / 2; ++k)
        acc += 2.0 * (spec_[k].real() * std::cos(w * k) - spec_[k].imag() * std::sin(w * k));
    acc += spec_[n_ / 2].real() * std::cos(w * (n_ / 2));
    return acc / n_;
}

double trig_interpolate(const scalar_field& f, double x) { return trig_interpolant(f)(x); }

scalar_field dealias(const scalar_field& f) {
    const int n = f.grid().n();
    const int kmax = n / 3;
    const double two_pi_over_l = 2.0 * std::numbers::pi / f.grid().length();
    const double cutoff = two_pi_over_l * kmax + 1e-12;
    return apply_multiplier(f, [=](double kx, double ky, bool, bool) {
        return (std::fabs(kx) > cutoff || std::fabs(ky) > cutoff) ? cd{0.0, 0.0} : cd{1.0, 0.0};
    });
}

scalar_field heat_semigroup(const scalar_field& f, double t) {
    return apply_multiplier(f, [=](double kx, double ky, bool, bool) {
        return cd{std::exp(-t * (kx * kx + ky * ky)), 0.0};
    });
}

vector_field gradient(const scalar_field& f) {
    vector_field out(f.grid());
    for (int a = 0; a < f.grid().dim(); ++a) out.comp(a) = derivative(f, a);
    return out;
}

scalar_field divergence(const vector_field& u) {
    scalar_field out(u.grid());
    for (int a = 0; a < u.grid().dim(); ++a) out += derivative(u.comp(a), a);
    return out;
}

} // namespace densgeo
