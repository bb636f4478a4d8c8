#include "betaimex/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace betaimex;
namespace fs = std::filesystem;

TEST_SUITE("experiments") {

TEST_CASE("slope fitting") {
    const std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> e;
    for (double dt : dts) e.push_back(3.0 * std::pow(dt, 2.5));
    CHECK(fitted_slope(dts, e) == doctest::Approx(2.5));
    CHECK(std::isnan(fitted_slope(std::vector<double>{0.1, 0.05, 0.025}, std::vector<double>{1.0, 0.5, 0.25})));
}

TEST_CASE("baseline selection") {
    CHECK(coefficients_for(1, 1.0).k == 1);
    CHECK_THROWS(coefficients_for(1, 2.0));
    CHECK(coefficients_for(3, 2.0).k == 3);
}

TEST_CASE("small convergence study") {
    ConvergenceConfig c;
    c.k = 3;
    c.beta = 2.0;
    c.n = 24;
    c.T = 0.25;
    c.dts = {0.0125, 0.00625, 0.003125, 0.0015625};
    const auto r = run_convergence(c);
    REQUIRE(r.entries.size() == 4);
    for (const auto& e : r.entries) CHECK(e.completed);
    CHECK(r.slope == doctest::Approx(3.0).epsilon(0.1));

    c.dts = {0.05, 0.025, 0.0125};
    CHECK_THROWS(run_convergence(c));
    c.dts = {0.05, 0.025, 0.03, 0.01};
    CHECK_THROWS(run_convergence(c));
}

TEST_CASE("shrinking circle on a coarse grid") {
    auto c = AllenCahnConfig::small();
    c.n = 64;
    c.T = 30.0;
    c.k = 2;
    c.profile = InitialProfile::tanh;
    const auto r = run_allen_cahn_radius(c);
    CHECK(r.completed);
    REQUIRE(!r.times.empty());
    CHECK(r.radius.size() == r.times.size());
    CHECK(r.radius.front() == doctest::Approx(100.0).epsilon(0.05));
    CHECK(theoretical_radius(100.0, 50.0) == doctest::Approx(std::sqrt(9900.0)));
    CHECK(std::isfinite(r.max_relative_deviation));
}

TEST_CASE("spinodal decomposition setup") {
    auto c = CahnHilliardConfig::small();
    c.n = 16;
    c.T = 2e-4;
    c.observe_stride = 10;
    const auto u0 = cahn_hilliard_initial(c);
    const auto u1 = cahn_hilliard_initial(c);
    CHECK(u0.values == u1.values);
    double mean = 0.0;
    for (double v : u0.values) mean += v;
    mean /= static_cast<double>(u0.values.size());
    CHECK(std::abs(mean - 0.2) < 0.02);

    const auto ref = cahn_hilliard_reference(c);
    CHECK(ref.completed);
    const auto r = run_cahn_hilliard(c, &ref);
    CHECK(r.completed);
    CHECK(r.stable);
    REQUIRE(r.times.size() == ref.times.size());
    for (std::size_t i = 0; i < r.times.size(); ++i) CHECK(r.times[i] == doctest::Approx(ref.times[i]).epsilon(1e-12));
    CHECK(r.distance.size() == r.times.size());

    c.dt = 3e-6;  // not a multiple of the reference step
    CHECK_THROWS(validate(c));
}

TEST_CASE("report files") {
    const auto d = fs::temp_directory_path() / "betaimex_experiments_out";
    fs::remove_all(d);
    ConvergenceReport r;
    r.k = 2;
    r.beta = 1.0;
    r.entries = {{0.1, 1e-3, true, ""}, {0.05, 2.5e-4, true, ""}};
    r.slope = std::nan("");
    const auto files = emit_outputs(r, d);
    for (const auto& f : files) CHECK(fs::exists(d / f));
    CHECK(to_json(r).at("k") == 2);
    fs::remove_all(d);
}

}
