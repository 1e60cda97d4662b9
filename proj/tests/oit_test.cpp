#include "densgeo/oit.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace densgeo;
using testutil::pi;

TEST_CASE("w0 source and potential") {
    periodic_grid g(1, 64);

    SUBCASE("uniform target gives zero potential (theta -> 0 limit)") {
        double theta = -1.0;
        scalar_field w = w0_potential(uniform_density(g), &theta);
        CHECK(theta < 1e-7);
        CHECK(kernels::max_abs(w.data(), w.size()) < 1e-12);
    }
    SUBCASE("source is analytically mean-zero") {
        std::mt19937_64 rng(91);
        for (int trial = 0; trial < 5; ++trial) {
            density target = testutil::random_density(g, rng, 0.3);
            scalar_field src = w0_source(target);
            CHECK(std::fabs(mean(src)) < 1e-9);
        }
    }
    SUBCASE("grad w0 matches the initial lift velocity (t -> 0 difference)") {
        density target = density::normalized(scalar_field::sample(
            g, [](double x) { return 1.0 + 0.3 * std::sin(2.0 * pi * x); }));
        scalar_field w0 = w0_potential(target);
        vector_field grad_w0 = gradient(w0);
        lift_options opt;
        opt.n_steps = 400;
        lift_result lift = lift_horizontal(target, opt);
        const double dt = 1.0 / opt.n_steps;
        // one-sided fourth-order velocity of zeta at t = 0 (zeta(0) = id)
        scalar_field v0 = (1.0 / (12.0 * dt)) *
                          (-25.0 * lift.trajectory[0].displacement().comp(0) +
                           48.0 * lift.trajectory[1].displacement().comp(0) -
                           36.0 * lift.trajectory[2].displacement().comp(0) +
                           16.0 * lift.trajectory[3].displacement().comp(0) -
                           3.0 * lift.trajectory[4].displacement().comp(0));
        CHECK(testutil::max_diff(v0, grad_w0.comp(0)) < 1e-4);
    }
}

TEST_CASE("horizontal lift, 1D") {
    periodic_grid g(1, 64);
    density target = density::normalized(scalar_field::sample(
        g, [](double x) { return 1.0 + 0.3 * std::sin(2.0 * pi * x); }));

    SUBCASE("uniform target keeps the identity") {
        lift_result lift = lift_horizontal(uniform_density(g));
        CHECK(kernels::max_abs(lift.zeta.displacement().comp(0).data(), g.size()) == 0.0);
    }
    SUBCASE("endpoint pullback matches the target") {
        lift_options opt;
        opt.n_steps = 100;
        lift_result lift = lift_horizontal(target, opt);
        density pulled = pullback_density(lift.zeta, uniform_density(g));
        scalar_field d = pulled.rho() - target.rho();
        CHECK(std::sqrt(integrate(d * d) / integrate(target.rho() * target.rho())) < 1e-3);
    }
    SUBCASE("endpoint self-convergence under dt refinement") {
        auto endpoint = [&](int steps) {
            lift_options opt;
            opt.n_steps = steps;
            return lift_horizontal(target, opt).zeta;
        };
        diffeo fine = endpoint(160);
        double e5 = max_displacement_error(endpoint(5), fine);
        double e10 = max_displacement_error(endpoint(10), fine);
        CHECK(e10 < 0.3 * e5); // RK4: halving dt should gain far more than 2x
    }
    SUBCASE("descended curve has constant Fisher-Rao speed sqrt(mu) theta") {
        // speed measured on the sphere (the normalization in which the
        // geodesic distance is sqrt(mu) arccos BC): || d/dt sqrt(rho_t) ||_L2
        lift_options opt;
        opt.n_steps = 100;
        lift_result lift = lift_horizontal(target, opt);
        const double dt = 1.0 / opt.n_steps;
        double expect = std::sqrt(g.volume()) * lift.theta;
        for (std::size_t k : {std::size_t(20), std::size_t(50), std::size_t(80)}) {
            density am = pullback_density(lift.trajectory[k - 1], uniform_density(g));
            density ap = pullback_density(lift.trajectory[k + 1], uniform_density(g));
            scalar_field dd =
                (1.0 / (2.0 * dt)) * (sqrt_map(ap).f() - sqrt_map(am).f());
            double speed = std::sqrt(integrate(dd * dd));
            CHECK(std::fabs(speed - expect) < 1e-4);
        }
    }
    SUBCASE("positivity guard on sigma holds along the arc") {
        lift_result lift = lift_horizontal(target);
        CHECK(lift.theta > 0.0);
        CHECK(lift.theta < 0.5 * pi);
    }
}

TEST_CASE("factorization, 1D") {
    periodic_grid g(1, 128);

    SUBCASE("volume-preserving maps are their own eta factor") {
        // 1D volume preserving periodic maps are rotations x + c
        vector_field d(g);
        d.comp(0) += 0.2;
        diffeo rot(d);
        factorization_result fac = factorize(rot);
        CHECK(kernels::max_abs(fac.psi.displacement().comp(0).data(), g.size()) < 1e-10);
        CHECK(max_displacement_error(fac.eta, rot) < 1e-8);
        CHECK(fac.info_distance < 1e-7);
    }
    SUBCASE("generic map: definition checks") {
        vector_field d(g);
        d.comp(0) = scalar_field::sample(
            g, [](double x) { return 0.08 * std::sin(2.0 * pi * x); });
        diffeo phi(d);
        factorization_result fac = factorize(phi);

        density target = pullback_density(phi, uniform_density(g));
        density pulled = pullback_density(fac.psi, uniform_density(g));
        scalar_field diff = pulled.rho() - target.rho();
        CHECK(std::sqrt(integrate(diff * diff)) < 1e-3);

        scalar_field jac_eta = jacobian(fac.eta);
        jac_eta += -1.0;
        CHECK(kernels::max_abs(jac_eta.data(), jac_eta.size()) < 5e-3);
        CHECK(max_displacement_error(compose(fac.eta, fac.psi), phi) < 1e-3);
        CHECK(std::fabs(fac.info_distance -
                        fisher_rao_distance(uniform_density(g), target)) < 1e-10);
    }
    SUBCASE("psi depends only on the coset") {
        vector_field d(g);
        d.comp(0) = scalar_field::sample(
            g, [](double x) { return 0.06 * std::sin(2.0 * pi * x); });
        diffeo phi(d);
        vector_field rot(g);
        rot.comp(0) += 0.15;
        diffeo eta0(rot);
        factorization_result f1 = factorize(phi);
        factorization_result f2 = factorize(compose(eta0, phi));
        CHECK(max_displacement_error(f1.psi, f2.psi) < 1e-3);
    }
}

TEST_CASE("divergence_free_norm") {
    periodic_grid g(2, 32);
    std::mt19937_64 rng(92);
    scalar_field w = testutil::random_bandlimited(g, rng, 3, 0.5);
    vector_field grad_w = gradient(w);
    CHECK(divergence_free_norm(grad_w) < 1e-10);

    // perpendicular gradient (stream function) is purely divergence free
    vector_field perp(g);
    perp.comp(0) = -1.0 * derivative(w, 1);
    perp.comp(1) = derivative(w, 0);
    double rot_norm = divergence_free_norm(perp);
    scalar_field e0 = perp.comp(0) * perp.comp(0) + perp.comp(1) * perp.comp(1);
    CHECK(rot_norm == doctest::Approx(std::sqrt(integrate(e0))).epsilon(1e-10));
}
