#include "oracles.hpp"

#include "betaimex/stability.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace betaimex;

TEST_SUITE("stability") {

TEST_CASE("characteristic polynomial coefficients") {
    // k = 2, beta = 1: b = {0, 1}, so only the leading coefficient carries z
    const ComplexValue z(-1.0, 0.5);
    const auto c = characteristic_coeffs(SchemeOrder(2), ShiftParameter(1.0), z);
    REQUIRE(c.size() == 3);
    CHECK(std::abs(c[0] - ComplexValue(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(c[1] - ComplexValue(-2.0, 0.0)) < 1e-14);
    CHECK(std::abs(c[2] - (ComplexValue(1.5, 0.0) - z)) < 1e-14);

    // beta = 3: b = {-2, 3} enters shifted by one power
    const auto s = scheme_coefficients(SchemeOrder(2), ShiftParameter(3.0));
    const auto c3 = characteristic_coeffs(s, z);
    CHECK(std::abs(c3[0] - s.a[0]) < 1e-14);
    CHECK(std::abs(c3[1] - (s.a[1] + 2.0 * z)) < 1e-14);
    CHECK(std::abs(c3[2] - (s.a[2] - 3.0 * z)) < 1e-14);
}

TEST_CASE("point classification") {
    for (int k = 2; k <= 5; ++k) {
        const double b = k == 5 ? 7.0 : 2.0;
        CHECK(is_stable(SchemeOrder(k), ShiftParameter(b), {-1.0, 0.0}));
        CHECK(is_stable(SchemeOrder(k), ShiftParameter(b), {-100.0, 0.0}));
        CHECK_FALSE(is_stable(SchemeOrder(k), ShiftParameter(b), {0.5, 0.0}));
    }
    // z = 0: w = 1 is a simple root on the boundary, the rest are strictly inside
    CHECK(is_stable(SchemeOrder(3), ShiftParameter(1.0), {0.0, 0.0}));
    // double root on the unit circle violates the root condition
    const std::vector<ComplexValue> dbl{{1.0, 0.0}, {-2.0, 0.0}, {1.0, 0.0}};
    CHECK_FALSE(satisfies_root_condition(dbl));
    const std::vector<ComplexValue> inside{{0.25, 0.0}, {-1.0, 0.0}, {1.0, 0.0}};
    CHECK(satisfies_root_condition(inside));
}

TEST_CASE("k = 2 is A-stable at sampled resolution") {
    for (double b : {1.0, 3.0, 5.0}) {
        const auto g = scan_region(SchemeOrder(2), ShiftParameter(b), Window{}, 200, 200);
        int unstable_left = 0;
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                if (g.re(ix) <= 0.0 && !g.stable(ix, iy)) ++unstable_left;
        CHECK(unstable_left == 0);
    }
}

TEST_CASE("region is symmetric about the real axis and the area grows with beta") {
    for (int k = 3; k <= 4; ++k) {
        double prev = 0.0;
        for (double b : {1.0, 3.0, 5.0}) {
            const auto g = scan_region(SchemeOrder(k), ShiftParameter(b), Window{}, 160, 160);
            int asym = 0;
            for (int iy = 0; iy < g.ny; ++iy)
                for (int ix = 0; ix < g.nx; ++ix)
                    if (g.stable(ix, iy) != g.stable(ix, g.ny - 1 - iy)) ++asym;
            CHECK(asym == 0);
            CHECK(g.area > prev);
            prev = g.area;
        }
    }
}

TEST_CASE("area equals stable cell count times cell area") {
    const Window w{-4.0, 2.0, -3.0, 3.0};
    const auto g = scan_region(SchemeOrder(3), ShiftParameter(2.0), w, 60, 50);
    std::size_t count = 0;
    for (auto m : g.mask) count += m;
    CHECK(g.area == doctest::Approx(count * (6.0 / 60) * (6.0 / 50)));
    CHECK(g.re(0) == doctest::Approx(-4.0 + 0.05));
    CHECK(g.im(g.ny - 1) == doctest::Approx(3.0 - 0.06));
}

TEST_CASE("root-condition verdict agrees with power iteration of the recurrence") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> re(-12.0, 4.0), im(-8.0, 8.0);
    int compared = 0;
    for (int k = 2; k <= 4; ++k) {
        const auto s = scheme_coefficients(SchemeOrder(k), ShiftParameter(k == 4 ? 2.0 : 1.5));
        for (int t = 0; t < 100; ++t) {
            const ComplexValue z(re(gen), im(gen));
            const auto c = characteristic_coeffs(s, z);
            const double growth = oracle::recurrence_growth(c, 4000, 17 + t);
            if (growth > 0.999 && growth < 1.001) continue;  // too close to call numerically
            CHECK(is_stable(s, z) == (growth < 1.0));
            ++compared;
        }
    }
    CHECK(compared > 250);
}

TEST_CASE("invalid scan parameters") {
    CHECK_THROWS(scan_region(SchemeOrder(2), ShiftParameter(1.0), Window{}, 0, 10));
    CHECK_THROWS(scan_region(SchemeOrder(2), ShiftParameter(1.0), Window{1.0, -1.0, -1.0, 1.0}, 10, 10));
}

}
