#include "densgeo/diffeo.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace densgeo;
using testutil::pi;

namespace {

diffeo warp1d(const periodic_grid& g, double amp) {
    vector_field d(g);
    d.comp(0) = scalar_field::sample(
        g, [&](double x) { return amp * std::sin(2.0 * pi * x); });
    return diffeo(d);
}

} // namespace

TEST_CASE("jacobian") {
    periodic_grid g(1, 128);
    SUBCASE("identity") {
        scalar_field j = jacobian(diffeo::identity(g));
        for (std::size_t i = 0; i < j.size(); ++i) CHECK(j[i] == doctest::Approx(1.0));
    }
    SUBCASE("symbolic derivative of a sine warp") {
        diffeo phi = warp1d(g, 0.1);
        scalar_field j = jacobian(phi);
        double worst = 0.0;
        for (int i = 0; i < g.n(); ++i)
            worst = std::max(worst,
                             std::fabs(j[i] - (1.0 + 0.2 * pi * std::cos(2.0 * pi * g.coord(i)))));
        CHECK(worst < 1e-10);
    }
    SUBCASE("unit total integral for random small warps") {
        std::mt19937_64 rng(51);
        for (int dim : {1, 2}) {
            periodic_grid gg(dim, dim == 1 ? 128 : 32);
            vector_field d(gg);
            for (int c = 0; c < dim; ++c)
                d.comp(c) = testutil::random_displacement(gg, rng, 3, 0.2);
            scalar_field j = jacobian(diffeo(d));
            CHECK(std::fabs(integrate(j) - gg.volume()) < 1e-8);
        }
    }
    SUBCASE("non-diffeomorphic map is rejected") {
        CHECK_THROWS_AS(jacobian(warp1d(g, 0.2)), non_diffeomorphic_error); // slope 1 - 0.4 pi < 0
    }
}

TEST_CASE("compose and inverse") {
    periodic_grid g(1, 128);
    diffeo phi = warp1d(g, 0.1);

    SUBCASE("identity laws") {
        diffeo id = diffeo::identity(g);
        CHECK(max_displacement_error(compose(id, phi), phi) < 1e-12);
        CHECK(max_displacement_error(compose(phi, id), phi) < 1e-12);
        CHECK(max_displacement_error(inverse(id), id) < 1e-14);
    }
    SUBCASE("inverse round trip") {
        diffeo inv = inverse(phi);
        diffeo round = compose(phi, inv);
        CHECK(max_displacement_error(round, diffeo::identity(g)) < 1e-8);
    }
    SUBCASE("inverse against per-node bisection") {
        diffeo inv = inverse(phi);
        for (int i = 0; i < g.n(); i += 7) {
            double y = g.coord(i);
            // solve phi(z) = y by bisection on z + 0.1 sin(2 pi z) - y
            double lo = y - 0.2, hi = y + 0.2;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                double val = mid + 0.1 * std::sin(2.0 * pi * mid) - y;
                if (val > 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            double z = 0.5 * (lo + hi);
            double got = y + inv.displacement().comp(0)[i];
            CHECK(std::fabs(got - z) < 1e-10);
        }
    }
    SUBCASE("2D inverse round trip") {
        periodic_grid g2(2, 32);
        std::mt19937_64 rng(52);
        vector_field d(g2);
        d.comp(0) = testutil::random_displacement(g2, rng, 2, 0.15);
        d.comp(1) = testutil::random_displacement(g2, rng, 2, 0.15);
        diffeo psi(d);
        CHECK(max_displacement_error(compose(psi, inverse(psi)), diffeo::identity(g2)) < 1e-8);
    }
}

TEST_CASE("density transport") {
    periodic_grid g(1, 128);
    diffeo phi = warp1d(g, 0.08);
    std::mt19937_64 rng(53);
    density nu = testutil::random_density(g, rng, 0.3);

    SUBCASE("identity transport") {
        density same = pullback_density(diffeo::identity(g), nu);
        CHECK(testutil::max_diff(same.rho(), nu.rho()) < 1e-12);
    }
    SUBCASE("pushforward inverts pullback") {
        // cubic composition error is O(h^4 rho''''): smooth data + n = 512
        // put the floor below the tolerance
        periodic_grid gf(1, 512);
        std::mt19937_64 rng2(54);
        density smooth = testutil::random_density(gf, rng2, 0.25, 2);
        diffeo warp = warp1d(gf, 0.05);
        density round = pushforward_density(warp, pullback_density(warp, smooth));
        CHECK(testutil::max_diff(round.rho(), smooth.rho()) < 1e-8);
    }
    SUBCASE("pullback of the uniform density is the Jacobian") {
        density pulled = pullback_density(phi, uniform_density(g));
        scalar_field j = jacobian(phi);
        CHECK(testutil::max_diff(pulled.rho(), j) < 1e-10);
    }
    SUBCASE("tangent pullback preserves the Fisher-Rao pairing") {
        scalar_field a = testutil::meanfree(testutil::random_bandlimited(g, rng, 3, 0.3));
        scalar_field b = testutil::meanfree(testutil::random_bandlimited(g, rng, 3, 0.3));
        density nu_p = pullback_density(phi, nu);
        scalar_field a_p = testutil::meanfree(pullback_tangent(phi, a));
        scalar_field b_p = testutil::meanfree(pullback_tangent(phi, b));
        double fr = fisher_rao_metric(nu, tangent_density(a), tangent_density(b));
        double fr_p =
            fisher_rao_metric(nu_p, tangent_density(a_p), tangent_density(b_p));
        CHECK(std::fabs(fr - fr_p) < 1e-6);
    }
}
