#include <doctest.h>

#include "core/hydraulics.hpp"
#include "helpers.hpp"

using namespace pipeleak;
using testutil::rel_err;

TEST_CASE("reynolds number matches direct evaluation") {
    const auto fluid = testutil::water();
    const auto geom = testutil::reference_pipe();

    const double re_a = reynolds_number(0.15, fluid, geom);
    const double direct = 1000.0 * 0.15 * 0.5 / (geom.area * 1.0016e-3);
    CHECK(re_a == doctest::Approx(direct).epsilon(1e-15));
    CHECK(rel_err(re_a, 381361.684725) < 1e-9);

    CHECK(reynolds_number(0.0, fluid, geom) == 0.0);
    CHECK(rel_err(reynolds_number(0.35, fluid, geom), 889843.931025) < 1e-9);
    // Sign follows the flow direction.
    CHECK(reynolds_number(-0.15, fluid, geom) == doctest::Approx(-re_a));
}

TEST_CASE("friction factor evaluates the turbulent correlation") {
    // Oracle: direct evaluation of 1/sqrt(f) = -1.8 log10((E/3.7D)^1.11 + 6.9/Re).
    const auto oracle = [](double re, double rough, double d) {
        const double rhs = -1.8 * std::log10(std::pow(rough / (3.7 * d), 1.11) + 6.9 / re);
        return 1.0 / (rhs * rhs);
    };

    CHECK(rel_err(friction_factor(3.814e5, 0.0, 0.5), 0.0137225405731) < 1e-9);
    CHECK(rel_err(friction_factor(8.899e5, 0.0, 0.5), 0.0118176070354) < 1e-9);
    CHECK(friction_factor(3.814e5, 0.0, 0.5) ==
          doctest::Approx(oracle(3.814e5, 0.0, 0.5)).epsilon(1e-14));
    CHECK(friction_factor(5e5, 1e-4, 0.5) ==
          doctest::Approx(oracle(5e5, 1e-4, 0.5)).epsilon(1e-14));

    CHECK_THROWS_AS(friction_factor(0.0, 0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(friction_factor(-100.0, 0.0, 0.5), std::domain_error);
    // At Re = 6.9 with a smooth pipe the correlation degenerates to 1/sqrt(f) = 0.
    CHECK_THROWS_AS(friction_factor(6.9, 0.0, 0.5), std::domain_error);
}

TEST_CASE("friction factor decreases with Reynolds number for smooth pipes") {
    double prev = friction_factor(1e3, 0.0, 0.5);
    for (int i = 1; i <= 50; ++i) {
        const double re = 1e3 * std::pow(1e5, i / 50.0);
        const double f = friction_factor(re, 0.0, 0.5);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("derived coefficients at the reference operating points") {
    const auto c = testutil::coeffs_at(0.15);
    CHECK(rel_err(c.epsilon, 1.46628782986) < 1e-10);
    CHECK(rel_err(c.big_f, 20.9668833625) < 1e-9);
    CHECK(rel_err(c.sigma, -0.0104834416812) < 1e-9);
    CHECK(c.eta == doctest::Approx(0.12).epsilon(1e-15));
    CHECK(c.elevation_h == -10.0);

    // Exact construction identities.
    CHECK(std::abs(c.sigma * (-2.0 * c.fluid.density) - c.big_f) <= 1e-15 * c.big_f);
    CHECK(std::abs(c.epsilon * c.geom.length - std::sqrt(c.fluid.bulk_modulus / c.fluid.density)) <=
          1e-15 * c.epsilon * c.geom.length);

    const auto cb = testutil::coeffs_at(0.35);
    CHECK(rel_err(cb.big_f, 42.1310560623) < 1e-9);
    CHECK(cb.epsilon == c.epsilon);

    CHECK_THROWS_AS(derive_coefficients(testutil::water(), testutil::reference_pipe(),
                                        {0.0, 1e5}, testutil::reference_leak()),
                    std::invalid_argument);
}

TEST_CASE("leak potential and its derivative") {
    const auto geom = testutil::reference_pipe();
    const LeakSpec leak = testutil::reference_leak();

    CHECK(leak_delta(0.0, leak, geom) == 700.0);
    CHECK(leak_delta(700.0, leak, geom) == 0.0);
    CHECK(leak_delta(300.0, leak, geom) == 400.0);
    CHECK(leak_delta(geom.length, leak, geom) == 0.0);
    CHECK_THROWS_AS(leak_delta(-1.0, leak, geom), std::out_of_range);
    CHECK_THROWS_AS(leak_delta(1000.5, leak, geom), std::out_of_range);

    CHECK(leak_delta_prime(100.0, 700.0) == -1.0);
    CHECK(leak_delta_prime(900.0, 700.0) == 0.0);
    CHECK(leak_delta_prime(700.0, 700.0) == 0.0);  // right-continuous convention

    SUBCASE("piecewise-linear shape for random leak positions") {
        testutil::Rng rng(77);
        for (int trial = 0; trial < 20; ++trial) {
            LeakSpec lk = leak;
            lk.position = rng.uniform(1.0, 999.0);
            CHECK(leak_delta(0.0, lk, geom) == lk.position);
            CHECK(leak_delta(geom.length, lk, geom) == 0.0);
            double prev = lk.position;
            for (int i = 1; i <= 100; ++i) {
                const double z = geom.length * i / 100.0;
                const double d = leak_delta(z, lk, geom);
                CHECK(d >= 0.0);
                CHECK(d <= prev + 1e-12);  // non-increasing
                prev = d;
            }
        }
    }

    SUBCASE("derivative matches a finite difference away from the kink") {
        const double h = 1e-6 * geom.length;
        testutil::Rng rng(78);
        for (int trial = 0; trial < 50; ++trial) {
            const double z = rng.uniform(2.0 * h, geom.length - 2.0 * h);
            if (std::abs(z - leak.position) < 2.0 * h) continue;
            const double fd = (leak_delta(z + h, leak, geom) - leak_delta(z - h, leak, geom)) /
                              (2.0 * h);
            CHECK(std::abs(fd - leak_delta_prime(z, leak.position)) < 1e-6);
        }
    }
}

TEST_CASE("no-leak steady state") {
    const auto fluid = testutil::water();

    SUBCASE("no flow, flat pipe: uniform pressure") {
        const auto prof = steady_state(fluid, testutil::flat_pipe(), {0.0, 1e5}, 11);
        for (double p : prof.p) CHECK(p == doctest::Approx(1e5).epsilon(1e-15));
        for (double q : prof.q) CHECK(q == 0.0);
    }

    SUBCASE("flat pipe friction drop") {
        const auto prof = steady_state(fluid, testutil::flat_pipe(), {0.15, 1e5}, 11);
        CHECK(rel_err(prof.p.front() - prof.p.back(), 8008.75950809) < 1e-9);
        CHECK(prof.p.back() == 1e5);
    }

    SUBCASE("no flow, sloped pipe: hydrostatic head only") {
        const auto prof = steady_state(fluid, testutil::reference_pipe(), {0.0, 1e5}, 11);
        CHECK(prof.p.front() - prof.p.back() == doctest::Approx(-9.8e4).epsilon(1e-12));
    }

    SUBCASE("discrete momentum balance holds at interior nodes") {
        const auto geom = testutil::reference_pipe();
        const int n = 101;
        const auto prof = steady_state(fluid, geom, {0.15, 1e5}, n);
        const double f = friction_factor(reynolds_number(0.15, fluid, geom),
                                         geom.surface_roughness, geom.diameter);
        const double fric = f * fluid.density * 0.15 * 0.15 /
                            (2.0 * geom.diameter * geom.area * geom.area);
        const double dz = geom.length / (n - 1);
        for (int i = 1; i + 1 < n; ++i) {
            const double p_z = (prof.p[i + 1] - prof.p[i - 1]) / (2.0 * dz);
            const double residual = p_z + fluid.density * fluid.gravity * geom.sin_phi() + fric;
            CHECK(std::abs(residual) < 1e-8 * (fluid.density * fluid.gravity + 1.0));
        }
    }
}

TEST_CASE("leaky steady state carries the flow deficit") {
    const auto fluid = testutil::water();
    const auto geom = testutil::reference_pipe();
    const LeakSpec leak = testutil::reference_leak();
    const int n = 101;
    const auto prof = steady_state_with_leak(fluid, geom, {0.15, 1e5}, leak, n);

    CHECK(prof.q.front() == 0.15);
    CHECK(prof.q.back() == doctest::Approx(0.13).epsilon(1e-15));
    CHECK(prof.p.back() == 1e5);
    // Pressure is continuous across the leak position.
    const double dz = geom.length / (n - 1);
    for (int i = 1; i < n; ++i)
        CHECK(std::abs(prof.p[i] - prof.p[i - 1]) < 2.0 * dz *
                  (fluid.density * fluid.gravity + 100.0));
}

TEST_CASE("type invariants are enforced") {
    FluidProperties bad_fluid = testutil::water();
    bad_fluid.density = -1.0;
    CHECK_THROWS_AS(bad_fluid.validate(), std::invalid_argument);

    PipeGeometry bad_geom = testutil::reference_pipe();
    bad_geom.elevation_drop = -2000.0;  // |sin phi| > 1
    CHECK_THROWS_AS(bad_geom.validate(), std::invalid_argument);

    LeakSpec bad_leak = testutil::reference_leak();
    bad_leak.gamma_d = 0.0;
    CHECK_THROWS_AS(bad_leak.validate(testutil::reference_pipe()), std::invalid_argument);
    bad_leak = testutil::reference_leak();
    bad_leak.position = 1000.0;
    CHECK_THROWS_AS(bad_leak.validate(testutil::reference_pipe()), std::invalid_argument);
}
