#include "oracles.hpp"

#include "betaimex/integrator.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace betaimex;

namespace {

ProblemSpec<double> decay(double lambda = 1.0) {
    ProblemSpec<double> p;
    p.linear_symbol = {lambda};
    p.initial = {1.0};
    p.exact = [lambda](double t, std::span<double> out) { out[0] = std::exp(-lambda * t); };
    return p;
}

double final_error(const ProblemSpec<double>& p, const SchemeCoefficients& s, double dt, double T) {
    const auto r = run(p, s, dt, T, Starter{StarterKind::exact, 0});
    REQUIRE(r.completed);
    std::vector<double> ex(1);
    p.exact(r.final_time, ex);
    return std::abs(r.last_finite[0] - ex[0]);
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("rk4 starter reproduces the first levels") {
    const auto p = decay();
    const auto s = scheme_coefficients(SchemeOrder(4), ShiftParameter(2.0));
    const auto st = initialize(p, s, 0.1, Starter{StarterKind::rk4_substep, 0});
    CHECK(st.step_index() == 3);
    CHECK(std::abs(st.current()[0] - std::exp(-0.3)) < 1e-9);
    CHECK(std::abs(st.history(0)[0] - 1.0) == 0.0);
    CHECK_FALSE(st.warnings().empty());
    CHECK(rk4_substeps(0.1, std::vector<double>{1000.0}) == 40);
    CHECK(rk4_substeps(0.1, std::vector<double>{1.0}) == 10);
    CHECK(rk4_substeps(0.1, std::vector<double>{1.0}, 3) == 3);
}

TEST_CASE("polynomial solutions of degree below k are reproduced to round-off") {
    for (int k = 2; k <= 5; ++k)
        for (double b : {1.0, 2.5, 7.0}) {
            const auto s = scheme_coefficients(SchemeOrder(k), ShiftParameter(b));
            const int m = k - 1;
            auto u = [m](double t) { return 1.0 + std::pow(t, m) + 0.5 * t; };
            auto du = [m](double t) { return m * std::pow(t, m - 1) + 0.5; };
            ProblemSpec<double> p;
            p.linear_symbol = {2.0};
            p.initial = {u(0.0)};
            // the nonlinear term is evaluated on an extrapolant, so keep it affine in u for exactness
            p.nonlinear = [](std::span<const double> x, std::span<double> out) { out[0] = 0.3 * x[0]; };
            p.source = [&](double t, std::span<double> out) { out[0] = du(t) + 2.0 * u(t) + 0.3 * u(t); };
            p.exact = [&](double t, std::span<double> out) { out[0] = u(t); };
            const auto r = run(p, s, 0.05, 1.0, Starter{StarterKind::exact, 0});
            REQUIRE(r.completed);
            CHECK(std::abs(r.last_finite[0] - u(r.final_time)) < 1e-9);
        }
}

TEST_CASE("linear decay converges at the scheme order") {
    const auto p = decay();
    const auto s = scheme_coefficients(SchemeOrder(2), ShiftParameter(3.0));
    const double e1 = final_error(p, s, 0.1, 1.0);
    const double e2 = final_error(p, s, 0.05, 1.0);
    CHECK(e1 < 5e-3);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
    for (int k = 3; k <= 4; ++k) {
        const auto sk = scheme_coefficients(SchemeOrder(k), ShiftParameter(2.0));
        const double a = final_error(p, sk, 0.02, 1.0), b = final_error(p, sk, 0.01, 1.0);
        CHECK(std::log2(a / b) == doctest::Approx(k).epsilon(0.1));
    }
}

TEST_CASE("beta = 1 coincides with classical extrapolated IMEX BDF") {
    oracle::DiagonalProblem dp;
    dp.lambda = {0.5, 3.0, 20.0};
    dp.G = [](const std::vector<double>& u) {
        std::vector<double> g(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) g[i] = std::sin(u[i]) - 0.2 * u[i] * u[i];
        return g;
    };
    dp.f = [](double t) { return std::vector<double>{std::cos(t), 1.0, t}; };

    ProblemSpec<double> p;
    p.linear_symbol = dp.lambda;
    p.initial = {0.3, -0.2, 1.0};
    p.nonlinear = [&](std::span<const double> u, std::span<double> out) {
        const auto g = dp.G(std::vector<double>(u.begin(), u.end()));
        std::copy(g.begin(), g.end(), out.begin());
    };
    p.source = [&](double t, std::span<double> out) {
        const auto f = dp.f(t);
        std::copy(f.begin(), f.end(), out.begin());
    };
    for (int k = 2; k <= 3; ++k) {
        const double dt = 0.01;
        auto st = initialize(p, scheme_coefficients(SchemeOrder(k), ShiftParameter(1.0)), dt);
        std::vector<std::vector<double>> h;
        for (int i = 0; i < k; ++i) h.push_back(st.history(i));
        for (int n = 0; n < 50; ++n) {
            const double t_next = (st.step_index() + 1) * dt;
            const auto ref = oracle::classical_imex_step(k, dp, h, t_next, dt);
            advance(st, p);
            for (std::size_t i = 0; i < ref.size(); ++i)
                CHECK(std::abs(st.current()[i] - ref[i]) < 1e-13 * (1.0 + std::abs(ref[i])));
            h.erase(h.begin());
            h.push_back(st.current());
        }
    }
}

TEST_CASE("zero problem stays zero") {
    ProblemSpec<double> p;
    p.linear_symbol = {0.0, 1.0, 100.0};
    p.initial = {0.0, 0.0, 0.0};
    const auto r = run(p, scheme_coefficients(SchemeOrder(3), ShiftParameter(2.0)), 0.1, 2.0);
    REQUIRE(r.completed);
    for (double v : r.last_finite) CHECK(v == 0.0);
}

TEST_CASE("blow-up is detected and reported") {
    ProblemSpec<double> p;
    p.linear_symbol = {0.0};
    p.initial = {1.0};
    p.nonlinear = [](std::span<const double> u, std::span<double> out) { out[0] = -30.0 * u[0]; };
    const auto r = run(p, scheme_coefficients(SchemeOrder(2), ShiftParameter(1.0)), 0.5, 100.0);
    CHECK_FALSE(r.completed);
    REQUIRE(r.blow_up_step.has_value());
    CHECK(*r.blow_up_step > 1);
    CHECK(std::isfinite(r.last_finite[0]));
    CHECK(r.blow_up_reason.find("exceeds") != std::string::npos);
}

TEST_CASE("invalid inputs") {
    auto p = decay();
    const auto s = scheme_coefficients(SchemeOrder(2), ShiftParameter(1.0));
    p.initial = {std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(initialize(p, s, 0.1), std::invalid_argument);
    p = decay();
    CHECK_THROWS_AS(initialize(p, s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(run(p, s, 0.1, 0.1), std::invalid_argument);
    p.linear_symbol = {-1.0};
    CHECK_THROWS_AS(initialize(p, s, 0.1), std::invalid_argument);
    p = decay();
    p.exact = nullptr;
    CHECK_THROWS_AS(initialize(p, s, 0.1, Starter{StarterKind::exact, 0}), std::invalid_argument);
}

TEST_CASE("observer cadence") {
    const auto p = decay();
    const auto s = scheme_coefficients(SchemeOrder(3), ShiftParameter(2.0));
    std::vector<long> seen;
    std::vector<Observer<double>> obs{[&](const IntegratorState<double>& st) { seen.push_back(st.step_index()); }};
    const auto r = run(p, s, 0.1, 1.05, Starter{}, obs, 4);
    REQUIRE(r.completed);
    CHECK(seen == std::vector<long>{2, 6, 10, 11});
    CHECK(r.steps == 11);
}

TEST_CASE("truncation errors decay at orders k + 1, k, k") {
    for (int k = 2; k <= 5; ++k)
        for (double b : {1.0, 3.0, 8.0}) {
            const auto s = scheme_coefficients(SchemeOrder(k), ShiftParameter(b));
            const double dt1 = 0.02, dt2 = 0.01;
            const auto t1 = oracle::sine_truncation(s.a, s.b, s.c, b, 0.3, dt1);
            const auto t2 = oracle::sine_truncation(s.a, s.b, s.c, b, 0.3, dt2);
            CHECK(std::log2(std::abs(t1.E / t2.E)) == doctest::Approx(k + 1).epsilon(0.15 / (k + 1)));
            // at beta = 1 the B formula interpolates at a node and is exact
            if (b == 1.0) CHECK(t1.R == 0.0);
            else CHECK(std::log2(std::abs(t1.R / t2.R)) == doctest::Approx(k).epsilon(0.15 / k));
            CHECK(std::log2(std::abs(t1.P / t2.P)) == doctest::Approx(k).epsilon(0.15 / k));
        }
}

TEST_CASE("stiff heat modes stay bounded") {
    ProblemSpec<double> p;
    for (int m = 0; m < 64; ++m) p.linear_symbol.push_back(m * m * 10.0);
    p.initial.assign(64, 1.0);
    for (int k = 2; k <= 4; ++k) {
        const auto r = run(p, scheme_coefficients(SchemeOrder(k), ShiftParameter(k == 4 ? 2.0 : 3.0)), 0.05, 5.0);
        REQUIRE(r.completed);
        CHECK(r.last_finite[0] == doctest::Approx(1.0));
        for (std::size_t i = 1; i < r.last_finite.size(); ++i) CHECK(std::abs(r.last_finite[i]) < 1.0);
    }
}

}
