#include "oracles.hpp"

#include "betaimex/multiplier.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace betaimex;

namespace {

std::complex<double> eval_at(const std::vector<double>& c, std::complex<double> z) {
    std::complex<double> s = 0, p = 1;
    for (double v : c) {
        s += v * p;
        p *= z;
    }
    return s;
}

}  // namespace

TEST_SUITE("multiplier") {

TEST_CASE("reference certificate values") {
    CHECK(certificate_polynomials_exact(SchemeOrder(4), Rational(1)).f(Rational(1)) == Rational(18));
    CHECK(certificate_polynomials_exact(SchemeOrder(3), Rational(1)).f(Rational(1)) == Rational(6));
    CHECK(certificate_polynomials_exact(SchemeOrder(4), Rational(1)).h(Rational(1, 5)) == Rational(-39, 125));
    CHECK(g4_polynomial_exact(Rational(1))(Rational(1)) == Rational(51));
    CHECK(g4_polynomial(1.0)(1.0) == doctest::Approx(51.0));
    CHECK(certificate_f_scale(SchemeOrder(2)) == 1);
    CHECK(certificate_f_scale(SchemeOrder(5)) == 180);
}

TEST_CASE("certificate polynomials match the trigonometric pairing") {
    for (int k = 2; k <= 5; ++k)
        for (double b : {1.0, 2.0, 3.5, 7.0, 40.0}) {
            const auto s = scheme_coefficients(SchemeOrder(k), ShiftParameter(b));
            const auto cp = certificate_polynomials(SchemeOrder(k), b);
            const double sk = certificate_f_scale(SchemeOrder(k));
            for (int i = 0; i <= 40; ++i) {
                const double th = std::numbers::pi * i / 40.0;
                const std::complex<double> e(std::cos(th), std::sin(th));
                const double y = std::cos(th);
                const double lhsA = (eval_at(s.a, e) * std::conj(e) * eval_at(s.c, std::conj(e))).real();
                const double lhsD = (eval_at(s.d, e) * eval_at(s.c, std::conj(e))).real();
                // rounding in both sides scales with the products of coefficient magnitudes
                double na = 0, nc = 0, nd = 0;
                for (double v : s.a) na += std::abs(v);
                for (double v : s.c) nc += std::abs(v);
                for (double v : s.d) nd += std::abs(v);
                CHECK(std::abs(lhsA - (1.0 - y) * cp.f(y) / sk) < 1e-12 * na * nc);
                CHECK(std::abs(lhsD - cp.h(y)) < 1e-12 * nd * nc);
            }
        }
}

TEST_CASE("g4 agrees with 3 f4 at critical points of f4") {
    for (double b : {1.0, 2.0, 4.0, 9.0}) {
        const auto f = certificate_polynomials(SchemeOrder(4), b).f;
        const auto g = g4_polynomial(b);
        for (double y0 : real_roots_in(f.derivative(), -1.0, 1.0))
            CHECK(std::abs(3.0 * f(y0) - g(y0)) < 1e-8 * (1.0 + std::abs(g(y0))));
    }
}

TEST_CASE("certificate verdicts") {
    const auto bad = verify_certificate(SchemeOrder(4), ShiftParameter(1.0));
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.failure_witness.has_value());
    CHECK(bad.failure_witness->polynomial == 'h');
    CHECK(bad.min_h < 0.0);
    const auto h = certificate_polynomials(SchemeOrder(4), 1.0).h;
    CHECK(h(0.2) == doctest::Approx(-0.312).epsilon(1e-12));

    for (double b : {2.0, 3.0, 10.0, 100.0}) CHECK(verify_certificate(SchemeOrder(4), ShiftParameter(b)).pass);
    for (double b : {1.0, 1.5, 7.0, 100.0}) {
        CHECK(verify_certificate(SchemeOrder(2), ShiftParameter(b)).pass);
        CHECK(verify_certificate(SchemeOrder(3), ShiftParameter(b)).pass);
    }
    const auto r = verify_certificate(SchemeOrder(3), ShiftParameter(2.0));
    CHECK(r.resultant_AC == doctest::Approx(r.closed_form_resultant_AC).epsilon(1e-10));
    CHECK(r.resultant_DC == doctest::Approx(r.closed_form_resultant_DC).epsilon(1e-10));
    CHECK(r.max_root_modulus_C < 1.0);
}

TEST_CASE("resultant closed forms agree exactly") {
    const Rational betas[] = {Rational(1), Rational(3, 2), Rational(2), Rational(5), Rational(37, 4)};
    for (int k = 2; k <= 4; ++k)
        for (const auto& b : betas) {
            const auto e = exact::coefficients(SchemeOrder(k), b);
            const RationalPolynomial A(e.a), C(e.c), D(e.d);
            CHECK(sylvester_resultant(A, C) == closed_form_resultant_AC(SchemeOrder(k), b));
            CHECK(sylvester_resultant(D, C) == closed_form_resultant_DC(SchemeOrder(k), b));
        }
}

TEST_CASE("k = 5 sweep samples") {
    const std::vector<double> betas{0.0, 3.0, 6.5, 20.0, 100.0};
    const auto reps = verify_k5_range(betas);
    REQUIRE(reps.size() == betas.size());
    for (const auto& r : reps) CHECK(r.max_root_modulus_C < 1.0);
    CHECK(reps[1].min_h < 0.0);
    CHECK_FALSE(reps[1].pass);
    CHECK(reps[2].pass);
    CHECK(reps[4].pass);
    CHECK(reps[3].min_f > 0.0);
    CHECK_THROWS(verify_k5_range(std::vector<double>{-0.5}));
    CHECK_THROWS(verify_k5_range(std::vector<double>{101.0}));
}

TEST_CASE("beta grid") {
    const auto g = beta_grid(1.0, 2.0, 0.25);
    REQUIRE(g.size() == 5);
    CHECK(g.back() == doctest::Approx(2.0));
    CHECK(beta_grid(1.0, 100.0, 0.1).size() == 991);
}

TEST_CASE("telescoping coefficients") {
    const auto t2 = std::get<Telescoping2>(telescoping_coefficients(2, 1.0));
    CHECK(t2.a == doctest::Approx(0.0669873).epsilon(1e-6));
    for (double b : beta_grid(1.0, 100.0, 0.5)) {
        CHECK(std::get<Telescoping2>(telescoping_coefficients(2, b)).a > 0.0);
        const auto t3 = std::get<Telescoping3>(telescoping_coefficients(3, b));
        CHECK(t3.a > 0.0);
        CHECK(t3.a_hat > 0.0);
    }
}

TEST_CASE("telescoping identities hold on random sequences") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    for (int k = 2; k <= 3; ++k)
        for (double b : {1.0, 2.0, 5.0, 10.0}) {
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<double> seq(12);
                double m = 0.0;
                for (auto& v : seq) {
                    v = nd(gen) * 10.0;
                    m = std::max(m, std::abs(v));
                }
                const auto s = scheme_coefficients(SchemeOrder(k), ShiftParameter(b));
                double cs = 0.0;
                for (double v : s.a) cs = std::max(cs, std::abs(v));
                CHECK(telescoping_identity_check(k, b, seq) < 1e-10 * m * m * cs * cs);
            }
            const std::vector<double> zero(8, 0.0);
            CHECK(telescoping_identity_check(k, b, zero) == 0.0);
        }
    CHECK_THROWS(telescoping_identity_check(3, 2.0, std::vector<double>{1.0, 2.0}));
}

TEST_CASE("linear stability conditions") {
    const auto c = stability_condition(SchemeOrder(2), 2.0, 0.16);
    CHECK(c.margin == doctest::Approx(0.1));
    CHECK(c.satisfied);
    CHECK_FALSE(stability_condition(SchemeOrder(2), 1.0, 0.01).satisfied);
    CHECK_THROWS(stability_condition(SchemeOrder(2), 2.0, -1.0));

    CHECK(classical_c_tilde(SchemeOrder(2)) == doctest::Approx(3.0));
    CHECK(classical_c_tilde(SchemeOrder(3)) == doctest::Approx(7.0));
    CHECK(classical_c_tilde(SchemeOrder(4)) == doctest::Approx(15.0));
    const auto cc = classical_condition(SchemeOrder(2), 0.25);
    CHECK(cc.lhs == doctest::Approx(1.0));
    CHECK(cc.rhs == doctest::Approx(std::sqrt(0.75)));
    CHECK(cc.satisfied);
    CHECK_THROWS(classical_c_tilde(SchemeOrder(5)));
}

}
