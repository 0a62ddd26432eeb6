#include <cmath>
#include <random>

#include <doctest.h>

#include "dcmg/errors.hpp"
#include "dcmg/transform.hpp"

using namespace dcmg;

TEST_CASE("to_canonical evaluates the stored energy and its rate") {
    PlantParams p;
    auto canon = to_canonical(PlantState{56.0, 100.0}, p, 50.0, 0.0);
    CHECK(canon.zeta1 == doctest::Approx(19.2337).epsilon(1e-5));
    CHECK(canon.zeta2 == doctest::Approx(0.0).epsilon(1e-12));  // 50*56 - 2800

    auto zero = to_canonical(PlantState{0.0, 0.0}, p, 50.0, 0.0);
    CHECK(zero.zeta1 == 0.0);
    CHECK(zero.zeta2 == doctest::Approx(-p.p_cpl));
}

TEST_CASE("to_canonical includes CVL power and virtual power") {
    PlantParams p;
    p.r_load = 50.0;
    auto canon = to_canonical(PlantState{56.0, 100.0}, p, 50.0, 120.0);
    // 2800 - 100^2/50 + 120 - 2800
    CHECK(canon.zeta2 == doctest::Approx(-80.0));
}

TEST_CASE("linearization coefficients at the nominal operating point") {
    PlantParams p;
    auto coeffs = linearization_coeffs(PlantState{56.0, 100.0}, p, 50.0, 0.0);
    CHECK(coeffs.a_x == doctest::Approx(-238095.24).epsilon(1e-6));
    CHECK(coeffs.b_x == doctest::Approx(476190.48).epsilon(1e-6));
    // equilibrium duty 1 - v_in/v_dc cancels the drift
    CHECK(coeffs.a_x + coeffs.b_x * 0.5 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("linearization coefficients stay positive over the operating envelope") {
    PlantParams p;
    for (double v_in = 40.0; v_in <= 50.0; v_in += 2.5) {
        for (double v_dc = 50.0; v_dc <= 160.0; v_dc += 5.0) {
            for (double i_l = 0.0; i_l <= 120.0; i_l += 20.0) {
                auto c = linearization_coeffs(PlantState{i_l, v_dc}, p, v_in, 0.0);
                CHECK(c.b_x > 0.0);
            }
        }
    }
    PlantParams with_cvl = p;
    with_cvl.r_load = 57.1;
    auto c = linearization_coeffs(PlantState{56.0, 100.0}, with_cvl, 50.0, 0.0);
    CHECK(c.b_x > 0.0);
}

TEST_CASE("a singular input gain raises an error") {
    PlantParams p;
    CHECK_THROWS_AS(linearization_coeffs(PlantState{10.0, 100.0}, p, 0.0, 0.0),
                    SingularLinearization);
}

TEST_CASE("reference_frame pins the current and energy references") {
    PlantParams p;
    auto refs = reference_frame(100.0, p);
    CHECK(refs.i_l_ref == doctest::Approx(56.0));
    CHECK(refs.zeta1_ref == doctest::Approx(19.2337).epsilon(1e-5));
    CHECK(refs.zeta1_ref_dot == 0.0);
    CHECK(refs.zeta1_ref_ddot == 0.0);

    auto high = reference_frame(150.0, p);
    CHECK(high.zeta1_ref == doctest::Approx(22.6958).epsilon(1e-5));

    // scheduled supply sag raises the current reference
    auto sagged = reference_frame(100.0, p, 40.0);
    CHECK(sagged.i_l_ref == doctest::Approx(70.0));
}

TEST_CASE("reference energy grows with the voltage reference") {
    PlantParams p;
    double prev = 0.0;
    for (double v = 40.0; v <= 200.0; v += 2.0) {
        const double z = reference_frame(v, p).zeta1_ref;
        CHECK(z > prev);
        prev = z;
    }
}

TEST_CASE("canonical energy never goes negative") {
    PlantParams p;
    p.c_vir = 2e-4;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> amps(-50.0, 150.0);
    std::uniform_real_distribution<double> volts(0.0, 200.0);
    for (int i = 0; i < 200; ++i) {
        auto canon = to_canonical(PlantState{amps(rng), volts(rng)}, p, 50.0, 0.0);
        CHECK(canon.zeta1 >= 0.0);
    }
}
