#include "densgeo/alpha.hpp"

#include "densgeo/euler_arnold.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace densgeo;
using testutil::pi;

namespace {

basepoint_diffeo1d warp(const periodic_grid& g, std::mt19937_64& rng, double amp, int kmax = 3) {
    scalar_field d = testutil::random_bandlimited(g, rng, kmax, amp);
    return basepoint_diffeo1d::from_displacement(std::move(d));
}

scalar_field pinned_field(const periodic_grid& g, std::mt19937_64& rng, double amp, int kmax = 3) {
    scalar_field f = testutil::random_bandlimited(g, rng, kmax, amp);
    f += -f[0];
    return f;
}

} // namespace

TEST_CASE("basepoint_diffeo1d basics") {
    periodic_grid g(1, 128);
    std::mt19937_64 rng(81);

    SUBCASE("identity and pinning") {
        basepoint_diffeo1d id(g);
        CHECK(id.values()[0] == 0.0);
        CHECK(id.min_slope() == doctest::Approx(1.0));
        basepoint_diffeo1d w = warp(g, rng, 0.04);
        CHECK(w.values()[0] == 0.0);
        CHECK(w.min_slope() > 0.0);
    }
    SUBCASE("monotonicity is enforced") {
        scalar_field d = scalar_field::sample(
            g, [](double x) { return 0.3 * std::sin(2.0 * pi * x); });
        CHECK_THROWS_AS(basepoint_diffeo1d::from_displacement(std::move(d)),
                        monotonicity_lost_error);
    }
    SUBCASE("inverse values invert the map") {
        basepoint_diffeo1d w = warp(g, rng, 0.05);
        scalar_field inv = w.inverse_values();
        CHECK(inv[0] == 0.0);
        double worst = 0.0;
        for (int i = 0; i < g.n(); ++i)
            worst = std::max(worst, std::fabs(w.evaluate(inv[i]) - g.coord(i)));
        CHECK(worst < 1e-11);
    }
}

TEST_CASE("alpha divergences") {
    periodic_grid g(1, 128);
    std::mt19937_64 rng(82);
    basepoint_diffeo1d xi = warp(g, rng, 0.05);
    basepoint_diffeo1d eta = warp(g, rng, 0.05);

    SUBCASE("vanishes on the diagonal for every alpha") {
        for (double a : {-1.0, -0.5, 0.0, 0.4, 1.0})
            CHECK(std::fabs(divergence_alpha(a, xi, xi)) < 1e-14);
    }
    SUBCASE("nonnegative and detects distinct cosets") {
        for (double a : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
            double d = divergence_alpha(a, xi, eta);
            CHECK(d >= 0.0);
            CHECK(d > 1e-8);
        }
    }
    SUBCASE("dual symmetry D^{-1}(xi,eta) = D^{1}(eta,xi)") {
        CHECK(divergence_alpha(-1.0, xi, eta) ==
              doctest::Approx(divergence_alpha(1.0, eta, xi)).epsilon(1e-14));
    }
    SUBCASE("the |alpha| -> 1 limit is continuous") {
        CHECK(std::fabs(divergence_alpha(0.999, xi, eta) - divergence_alpha(1.0, xi, eta)) < 1e-3);
        CHECK(std::fabs(divergence_alpha(-0.999, xi, eta) - divergence_alpha(-1.0, xi, eta)) <
              1e-3);
    }
    SUBCASE("second mixed derivative recovers the Hdot1 metric") {
        // -d^2/ds dt D(xi + s V, xi + t W) at 0 equals <V, W>_{Hdot1, xi}
        scalar_field V = pinned_field(g, rng, 0.3);
        scalar_field W = pinned_field(g, rng, 0.3);
        const double h = 1e-4;
        for (double a : {-0.6, 0.0, 0.5}) {
            auto D = [&](double s, double t) {
                basepoint_diffeo1d xs =
                    basepoint_diffeo1d::from_displacement(xi.displacement() + s * V);
                basepoint_diffeo1d xt =
                    basepoint_diffeo1d::from_displacement(xi.displacement() + t * W);
                return divergence_alpha(a, xs, xt);
            };
            double mixed = -(D(h, h) - D(h, -h) - D(-h, h) + D(-h, -h)) / (4.0 * h * h);
            CHECK(std::fabs(mixed - hdot1_metric(xi, V, W)) < 1e-5);
        }
    }
}

TEST_CASE("christoffel maps") {
    periodic_grid g(1, 128);
    std::mt19937_64 rng(83);
    basepoint_diffeo1d xi = warp(g, rng, 0.04);
    scalar_field V = pinned_field(g, rng, 0.4);
    scalar_field W = pinned_field(g, rng, 0.4);

    SUBCASE("alpha = -1 is flat: Gamma vanishes exactly") {
        scalar_field gm = christoffel_alpha(-1.0, xi, V, W);
        CHECK(kernels::max_abs(gm.data(), gm.size()) == 0.0);
    }
    SUBCASE("symmetry in the two slots") {
        scalar_field a = christoffel_alpha(0.3, xi, V, W);
        scalar_field b = christoffel_alpha(0.3, xi, W, V);
        CHECK(testutil::max_diff(a, b) < 1e-12);
    }
    SUBCASE("identity base point against direct quadrature") {
        basepoint_diffeo1d id(g);
        // V with V_x = sin(2 pi x)
        scalar_field V1 = scalar_field::sample(
            g, [](double x) { return (1.0 - std::cos(2.0 * pi * x)) / (2.0 * pi); });
        scalar_field gm = christoffel_alpha(0.0, id, V1, V1);
        // closed form: A^{-1} d_x sin^2(2 pi x) = sin(4 pi x)/(8 pi), so
        // Gamma^0 = -sin(4 pi x)/(16 pi)
        double worst = 0.0;
        for (int i = 0; i < g.n(); ++i)
            worst = std::max(worst, std::fabs(gm[i] + std::sin(4.0 * pi * g.coord(i)) /
                                                          (16.0 * pi)));
        CHECK(worst < 1e-8);

        // independent composed-trapezoid quadrature of the defining formula
        const int n = g.n();
        const double h = g.spacing();
        scalar_field rhs = derivative(scalar_field::sample(g, [](double x) {
            double s = std::sin(2.0 * pi * x);
            return s * s;
        }));
        std::vector<double> first(n + 1, 0.0), second(n + 1, 0.0);
        for (int i = 0; i < n; ++i)
            first[i + 1] = first[i] + 0.5 * h * (rhs[i] + rhs[(i + 1) % n]);
        for (int i = 0; i < n; ++i)
            second[i + 1] = second[i] + 0.5 * h * (first[i] + first[i + 1]);
        double worst_quad = 0.0;
        for (int i = 0; i < n; ++i) {
            double ainv = -second[i] + g.coord(i) * second[n];
            worst_quad = std::max(worst_quad, std::fabs(gm[i] - (-0.5) * ainv));
        }
        CHECK(worst_quad < 2e-4); // trapezoid oracle carries its own O(h^2)
    }
}

TEST_CASE("alpha geodesics") {
    periodic_grid g(1, 256);

    SUBCASE("zero velocity stays put") {
        basepoint_diffeo1d id(g);
        alpha_geodesic_traj traj = geodesic_alpha(0.4, id, scalar_field(g, 0.0), 1e-2, 0.1);
        CHECK(testutil::max_diff(traj.xi.back().values(), id.values()) < 1e-14);
    }
    SUBCASE("alpha = -1 geodesics are straight lines in xi") {
        std::mt19937_64 rng(84);
        scalar_field V0 = pinned_field(g, rng, 0.15);
        alpha_geodesic_traj traj = geodesic_alpha(-1.0, basepoint_diffeo1d(g), V0, 1e-2, 0.4);
        scalar_field expect = basepoint_diffeo1d(g).values() + 0.4 * V0;
        CHECK(testutil::max_diff(traj.xi.back().values(), expect) < 1e-12);
        // mu-Burgers residual of the Eulerian velocity
        const double del = 1e-3;
        alpha_geodesic_traj fine = geodesic_alpha(-1.0, basepoint_diffeo1d(g), V0, del, 0.2);
        std::vector<scalar_field> u;
        for (std::size_t k = fine.xi.size() - 5; k < fine.xi.size(); ++k)
            u.push_back(fine.eulerian_u(k));
        CHECK(pj_residual(u, del, -1.0, 2) < 1e-6);
    }
    SUBCASE("alpha = 0 conserves the Hdot1 energy") {
        scalar_field u0 = scalar_field::sample(
            g, [](double x) { return 0.1 * std::sin(2.0 * pi * x); });
        alpha_geodesic_traj traj = geodesic_alpha(0.0, basepoint_diffeo1d(g), u0, 1e-3, 0.3, 50);
        double e0 = -1.0;
        for (std::size_t k = 0; k < traj.xi.size(); ++k) {
            scalar_field u = traj.eulerian_u(k);
            scalar_field ux = derivative(u);
            double e = 0.25 * integrate(ux * ux);
            if (e0 < 0.0)
                e0 = e;
            else
                CHECK(std::fabs(e - e0) < 1e-7);
        }
    }
    SUBCASE("generalized PJ residual on a mid-family geodesic") {
        std::mt19937_64 rng(85);
        scalar_field V0 = pinned_field(g, rng, 0.1);
        const double dt = 1e-3;
        alpha_geodesic_traj traj = geodesic_alpha(0.3, basepoint_diffeo1d(g), V0, dt, 0.2);
        std::vector<scalar_field> u;
        for (std::size_t k = traj.xi.size() - 5; k < traj.xi.size(); ++k)
            u.push_back(traj.eulerian_u(k));
        CHECK(pj_residual(u, dt, 0.3, 2) < 1e-5);
    }
}

TEST_CASE("explicit alpha = 1 geodesics") {
    periodic_grid g(1, 256);
    scalar_field a = scalar_field::sample(g, [](double x) { return std::sin(2.0 * pi * x); });
    scalar_field b(g, 0.0);

    SUBCASE("a = 0 freezes the curve; b = 0, t = 0 is the identity") {
        basepoint_diffeo1d x0 = explicit_alpha1_geodesic(scalar_field(g, 0.0), b, 0.0);
        basepoint_diffeo1d x1 = explicit_alpha1_geodesic(scalar_field(g, 0.0), b, 2.0);
        CHECK(testutil::max_diff(x0.values(), x1.values()) < 1e-14);
        basepoint_diffeo1d id = explicit_alpha1_geodesic(a, b, 0.0);
        CHECK(testutil::max_diff(id.values(), basepoint_diffeo1d(g).values()) < 1e-12);
    }
    SUBCASE("endpoint pinning and positivity for all t") {
        for (double t : {0.3, 0.9, 1.7}) {
            basepoint_diffeo1d xi = explicit_alpha1_geodesic(a, b, t);
            CHECK(xi.values()[0] == 0.0);
            CHECK(xi.min_slope() > 0.0);
        }
    }
    SUBCASE("PDE residual of eq. u_txx + u_x u_xx + u u_xxx = 0") {
        const double t0 = 0.5, del = 2e-3;
        std::vector<scalar_field> u;
        for (int j = -2; j <= 2; ++j) u.push_back(explicit_alpha1_velocity(a, b, t0 + j * del));
        CHECK(pj_residual(u, del, 1.0, 2) < 1e-5);
    }
}

TEST_CASE("affine chart") {
    periodic_grid g(1, 128);
    std::mt19937_64 rng(86);
    basepoint_diffeo1d xi = warp(g, rng, 0.05);

    SUBCASE("identity maps to zero") {
        affine_coordinate phi = affine_chart(basepoint_diffeo1d(g));
        CHECK(kernels::max_abs(phi.phi.data(), phi.phi.size()) < 1e-13);
    }
    SUBCASE("round trip") {
        basepoint_diffeo1d back = affine_chart_inverse(affine_chart(xi));
        CHECK(testutil::max_diff(back.values(), xi.values()) < 1e-9);
    }
    SUBCASE("chart straightens the explicit alpha = 1 geodesics") {
        scalar_field a = testutil::meanfree(testutil::random_bandlimited(g, rng, 3, 0.5));
        scalar_field b = testutil::meanfree(testutil::random_bandlimited(g, rng, 3, 0.3));
        for (double t : {0.25, 0.8}) {
            affine_coordinate phi = affine_chart(explicit_alpha1_geodesic(a, b, t));
            scalar_field expect = testutil::meanfree(t * a + b);
            CHECK(testutil::max_diff(phi.phi, expect) < 1e-8);
        }
    }
}

TEST_CASE("pth root geodesics") {
    periodic_grid g(1, 128);
    std::mt19937_64 rng(87);
    density nu0 = testutil::random_density(g, rng, 0.25);
    density nu1 = testutil::random_density(g, rng, 0.25);

    SUBCASE("coincident endpoints give a constant curve") {
        density mid = pth_root_geodesic(0.5, nu0, nu0, 0.6);
        CHECK(testutil::max_diff(mid.rho(), nu0.rho()) < 1e-12);
    }
    SUBCASE("endpoints are exact and the path stays positive with unit mass") {
        for (double alpha : {-0.5, 0.0, 0.5}) {
            CHECK(testutil::max_diff(pth_root_geodesic(alpha, nu0, nu1, 0.0).rho(), nu0.rho()) <
                  1e-10);
            CHECK(testutil::max_diff(pth_root_geodesic(alpha, nu0, nu1, 1.0).rho(), nu1.rho()) <
                  1e-10);
            for (double t : {0.25, 0.5, 0.75}) {
                density mid = pth_root_geodesic(alpha, nu0, nu1, t);
                CHECK(kernels::min(mid.rho().data(), mid.rho().size()) > 0.0);
                CHECK(std::fabs(integrate(mid.rho()) - 1.0) < 1e-10);
            }
        }
    }
    SUBCASE("alpha = 0 reduces to the Fisher-Rao great circle") {
        for (double t : {0.2, 0.5, 0.8}) {
            density a = pth_root_geodesic(0.0, nu0, nu1, t);
            density b = fisher_rao_geodesic(nu0, nu1, t);
            CHECK(testutil::max_diff(a.rho(), b.rho()) < 1e-10);
        }
    }
    SUBCASE("|alpha| = 1 is rejected (p infinite)") {
        CHECK_THROWS_AS(pth_root_geodesic(1.0, nu0, nu1, 0.5), error);
    }
}

TEST_CASE("duality and curvature") {
    periodic_grid g(1, 128);
    std::mt19937_64 rng(88);
    basepoint_diffeo1d xi = warp(g, rng, 0.04);
    scalar_field V = pinned_field(g, rng, 0.3);
    scalar_field W = pinned_field(g, rng, 0.3);
    scalar_field Z = pinned_field(g, rng, 0.3);

    SUBCASE("V = 0 has zero defect") {
        CHECK(duality_defect(0.5, xi, scalar_field(g, 0.0), W, Z) < 1e-15);
    }
    SUBCASE("defect below tolerance for random alpha") {
        for (double a : {0.0, 0.6, -0.8}) CHECK(duality_defect(a, xi, V, W, Z) < 1e-5);
    }
    SUBCASE("holonomy ratio equals 1 - alpha^2") {
        CHECK(std::fabs(alpha_curvature_check(0.0, xi, V, W, Z) - 1.0) < 1e-3);
        CHECK(std::fabs(alpha_curvature_check(0.5, xi, V, W, Z) - 0.75) < 1e-3);
        CHECK(std::fabs(alpha_curvature_check(1.0, xi, V, W, Z)) < 1e-3);
        CHECK(std::fabs(alpha_curvature_check(-1.0, xi, V, W, Z)) < 1e-3);
    }
    SUBCASE("flat directions raise the degenerate-triple diagnostic") {
        CHECK_THROWS_AS(
            alpha_curvature_check(0.5, xi, scalar_field(g, 0.0), W, Z),
            degenerate_triple_error);
    }
}

TEST_CASE("cross-module: alpha = 0 geodesic vs Hunter-Saxton momentum solve") {
    periodic_grid g(1, 256);
    scalar_field u0 =
        scalar_field::sample(g, [](double x) { return 0.1 * std::sin(2.0 * pi * x); });
    const double dt = 1e-3, t_end = 0.3;
    alpha_geodesic_traj traj =
        geodesic_alpha(0.0, basepoint_diffeo1d(g), u0, dt, t_end, int(t_end / dt));
    momentum_state s(inertia_tag::HdotGauge(), u0);
    for (int i = 0; i < int(t_end / dt); ++i) s = step_ea(s, dt);
    CHECK(testutil::max_diff(traj.eulerian_u(traj.xi.size() - 1), s.u) < 1e-7);
}
