#include <doctest.h>

#include "core/riemann.hpp"
#include "helpers.hpp"

using namespace pipeleak;
using testutil::rel_err;

namespace {

PhysicalProfile random_profile(testutil::Rng& rng, int n) {
    PhysicalProfile phys;
    phys.p.resize(n);
    phys.q.resize(n);
    for (int i = 0; i < n; ++i) {
        phys.p[i] = rng.uniform(-2e5, 6e5);
        phys.q[i] = rng.uniform(-0.5, 0.5);
    }
    return phys;
}

}  // namespace

TEST_CASE("symmetric split for a flat unpressurized pipe") {
    const auto coeffs = derive_coefficients(testutil::water(), testutil::flat_pipe(),
                                            {0.15, 1e5}, testutil::reference_leak());
    PhysicalProfile phys;
    phys.p.assign(9, 0.0);
    phys.q.assign(9, 0.15);
    const RiemannField f = to_riemann(phys, coeffs, LeakState{0.0, 700.0});
    for (int i = 0; i < 9; ++i) {
        CHECK(f.u[i] == doctest::Approx(0.075).epsilon(1e-15));
        CHECK(f.v[i] == doctest::Approx(0.075).epsilon(1e-15));
    }
}

TEST_CASE("coordinate change round trip is the identity") {
    const auto coeffs = testutil::coeffs_at(0.15);
    testutil::Rng rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 17 + trial % 3;
        const PhysicalProfile phys = random_profile(rng, n);
        const LeakState leak{rng.uniform(0.0, 0.05), rng.uniform(1.0, 999.0)};

        const PhysicalProfile back = from_riemann(to_riemann(phys, coeffs, leak), coeffs, leak);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(back.p[i] - phys.p[i]) <= 1e-12 * 6e5);
            CHECK(std::abs(back.q[i] - phys.q[i]) <= 1e-12);
        }

        RiemannField field;
        field.u.resize(n);
        field.v.resize(n);
        for (int i = 0; i < n; ++i) {
            field.u[i] = rng.uniform(-0.3, 0.3);
            field.v[i] = rng.uniform(-0.3, 0.3);
        }
        const RiemannField rt = to_riemann(from_riemann(field, coeffs, leak), coeffs, leak);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(rt.u[i] - field.u[i]) <= 1e-12);
            CHECK(std::abs(rt.v[i] - field.v[i]) <= 1e-12);
        }
    }
}

TEST_CASE("inverse transform closed-form sample") {
    const auto coeffs = derive_coefficients(testutil::water(), testutil::flat_pipe(),
                                            {0.15, 1e5}, testutil::reference_leak());
    RiemannField field;
    field.u.assign(5, 0.1);
    field.v.assign(5, 0.05);
    const PhysicalProfile phys = from_riemann(field, coeffs, LeakState{0.0, 700.0});
    for (int i = 0; i < 5; ++i) {
        CHECK(phys.q[i] == doctest::Approx(0.15).epsilon(1e-15));
        CHECK(rel_err(phys.p[i], 373387.129789) < 1e-9);
        CHECK(phys.p[i] == doctest::Approx(coeffs.sqrt_beta_rho() / coeffs.geom.area * 0.05)
                               .epsilon(1e-14));
    }

    SUBCASE("equal families leave only the gauge part") {
        RiemannField sym;
        sym.u.assign(5, 0.2);
        sym.v.assign(5, 0.2);
        const PhysicalProfile p2 = from_riemann(sym, coeffs, LeakState{0.0, 700.0});
        for (double p : p2.p) CHECK(p == doctest::Approx(0.0));
    }
}

TEST_CASE("outlet measurement reconstructs u(1)") {
    const auto coeffs = testutil::coeffs_at(0.15);

    CHECK(measurement_y(-coeffs.rho_g_h(), 0.0, coeffs) == doctest::Approx(0.0));
    CHECK(rel_err(measurement_y(1e5, 0.15, coeffs), 0.0751339092754) < 1e-9);

    SUBCASE("consistent with the transform at x = 1, leak active or not") {
        testutil::Rng rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            const PhysicalProfile phys = random_profile(rng, 21);
            const LeakState leak{trial % 2 ? 0.02 : 0.0, 700.0};
            const RiemannField f = to_riemann(phys, coeffs, leak);
            const double y = measurement_y(phys.p.back(), phys.q.back(), coeffs);
            CHECK(std::abs(y - f.u.back()) <= 1e-12);
            const double v1 = boundary_v1(phys.p.back(), phys.q.back(), coeffs);
            CHECK(std::abs(v1 - f.v.back()) <= 1e-12);
        }
    }
}

TEST_CASE("linear boundary input") {
    const auto coeffs = testutil::coeffs_at(0.15);

    SUBCASE("value at the steady operating point") {
        // q_l = q_in and p_l = p_out leave U = -exp(-a) A/(2 sqrt(beta rho))
        // (rho g h + F l q_in / A), which is nonzero on a sloped pipe.
        const double expected = -std::exp(-coeffs.alpha()) * coeffs.geom.area /
                                (2.0 * coeffs.sqrt_beta_rho()) *
                                (coeffs.rho_g_h() +
                                 coeffs.big_f * coeffs.geom.length * coeffs.op.q_in /
                                     coeffs.geom.area);
        const double u_ss = boundary_input_U(1e5, 0.15, coeffs);
        CHECK(u_ss == doctest::Approx(expected).epsilon(1e-13));
        CHECK(rel_err(u_ss, 0.00545000208909) < 1e-9);
    }

    SUBCASE("consistent with the scaled mean-removed incoming characteristic") {
        testutil::Rng rng(6);
        for (int trial = 0; trial < 20; ++trial) {
            const double p_l = rng.uniform(5e4, 2e5);
            const double q_l = rng.uniform(-0.3, 0.5);
            const double direct = boundary_input_U(p_l, q_l, coeffs);
            const double via_v1 =
                std::exp(-coeffs.alpha()) *
                (boundary_v1(p_l, q_l, coeffs) - mean_v(coeffs) +
                 delta_offset(1.0, coeffs, LeakState{0.0, 700.0}));
            CHECK(std::abs(direct - via_v1) <= 1e-12);
        }
    }
}

TEST_CASE("mean split sums to the operating flow") {
    for (double q : {0.15, 0.35, -0.2}) {
        const auto coeffs = testutil::coeffs_at(q);
        CHECK(mean_u(coeffs) + mean_v(coeffs) == doctest::Approx(q).epsilon(1e-15));
    }
}

TEST_CASE("scale-offset transform pair is the identity") {
    const auto coeffs = testutil::coeffs_at(0.15);
    testutil::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 21;
        RiemannField field;
        field.u.resize(n);
        field.v.resize(n);
        for (int i = 0; i < n; ++i) {
            field.u[i] = rng.uniform(-0.3, 0.3);
            field.v[i] = rng.uniform(-0.3, 0.3);
        }
        const LeakState leak{rng.uniform(0.0, 0.05), rng.uniform(0.0, 1000.0)};
        const RiemannField rt =
            delta_to_riemann(riemann_to_delta(field, coeffs, leak), coeffs, leak);
        const RiemannField rt2 =
            riemann_to_delta(delta_to_riemann(field, coeffs, leak), coeffs, leak);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(rt.u[i] - field.u[i]) <= 1e-12);
            CHECK(std::abs(rt.v[i] - field.v[i]) <= 1e-12);
            CHECK(std::abs(rt2.u[i] - field.u[i]) <= 1e-12);
            CHECK(std::abs(rt2.v[i] - field.v[i]) <= 1e-12);
        }
    }
}

TEST_CASE("linear coupling coefficients") {
    SUBCASE("frictionless pipe has no coupling") {
        const auto coeffs = derive_coefficients_with_friction(
            testutil::water(), testutil::reference_pipe(), {0.15, 1e5},
            testutil::reference_leak(), 0.0);
        const LinearPlantCoeffs lc = linear_coeffs(coeffs, 11);
        for (int i = 0; i < 11; ++i) {
            CHECK(lc.c1[i] == 0.0);
            CHECK(lc.c2[i] == 0.0);
        }
    }

    const auto coeffs = testutil::coeffs_at(0.15);
    const LinearPlantCoeffs lc = linear_coeffs(coeffs, 101);

    SUBCASE("endpoint values and product identity") {
        CHECK(lc.c1[0] == doctest::Approx(coeffs.sigma).epsilon(1e-15));
        CHECK(lc.c2[0] == doctest::Approx(coeffs.sigma).epsilon(1e-15));
        for (int i = 0; i < 101; ++i)
            CHECK(rel_err(lc.c1[i] * lc.c2[i], coeffs.sigma * coeffs.sigma) < 1e-13);
        CHECK(rel_err(lc.c1[100] / lc.c1[0], 1.01440201974) < 1e-9);
    }
}

TEST_CASE("boundary signal reconstruction from fields") {
    const auto coeffs = testutil::coeffs_at(0.15);
    testutil::Rng rng(9);
    const PhysicalProfile phys = random_profile(rng, 21);
    const LeakState leak{0.02, 700.0};
    const RiemannField f = to_riemann(phys, coeffs, leak);

    CHECK(std::abs(inlet_pressure_from_field(f, coeffs, leak) - phys.p.front()) <
          1e-9 * 6e5);
    const OutletSignals out = outlet_from_field(f, coeffs);
    CHECK(std::abs(out.p_l - phys.p.back()) < 1e-9 * 6e5);
    CHECK(std::abs(out.q_l - phys.q.back()) < 1e-12);
}
