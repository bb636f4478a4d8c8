#include "betaimex/experiments.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace betaimex {

namespace fs = std::filesystem;

SchemeCoefficients coefficients_for(int k, double beta) {
    if (k == 1) {
        if (beta != 1.0) throw std::invalid_argument("the first-order baseline has beta = 1 only");
        return first_order_baseline();
    }
    return scheme_coefficients(SchemeOrder(k), ShiftParameter(beta));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double l2_distance(const SpectralField2D& a, const SpectralField2D& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        s += d * d;
    }
    return std::sqrt(s * a.grid.cell_area());
}

long steps_for(double span, double dt) {
    const double r = span / dt;
    const long n = std::lround(r);
    if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-6 * std::max(1.0, r))
        throw std::invalid_argument("time span is not an integer number of steps");
    return n;
}

}  // namespace

double fitted_slope(std::span<const double> dts, std::span<const double> errors) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < dts.size() && i < errors.size(); ++i) {
        if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) continue;
        const double x = std::log(dts[i]), y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 4) return kNaN;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void validate(const ConvergenceConfig& c) {
    if (c.dts.size() < 4) throw std::invalid_argument("converge: need at least 4 time steps");
    for (std::size_t i = 0; i < c.dts.size(); ++i) {
        if (!(c.dts[i] > 0.0)) throw std::invalid_argument("converge: time steps must be positive");
        if (i > 0 && !(c.dts[i] < c.dts[i - 1])) throw std::invalid_argument("converge: time steps must decrease");
    }
    if (!(c.T > 0.0)) throw std::invalid_argument("converge: T must be positive");
    validate(c.params);
}

ConvergenceReport run_convergence(const ConvergenceConfig& c) {
    validate(c);
    const SchemeCoefficients coeffs = coefficients_for(c.k, c.beta);
    const Grid2D grid(c.n, c.n, c.length, c.length);
    PhaseFieldModel model(grid, c.params);
    ConvergenceReport rep;
    rep.k = c.k;
    rep.beta = c.beta;

    ProblemSpec<Complex> spec = model.problem(manufactured_solution(grid, 0.0));
    FourierTransform2D& fft = model.transform();
    const PhaseFieldParams params = c.params;
    spec.source = [&fft, grid, params](double t, std::span<Complex> out) {
        fft.forward(manufactured_source(grid, params, t).values, out);
    };
    spec.exact = [&fft, grid](double t, std::span<Complex> out) { fft.forward(manufactured_solution(grid, t).values, out); };

    std::vector<double> dts, errs;
    for (double dt : c.dts) {
        ConvergenceEntry e;
        e.dt = dt;
        try {
            const auto sum = run<Complex>(spec, coeffs, dt, c.T, Starter{StarterKind::exact, 0});
            if (sum.completed) {
                const SpectralField2D u = fft.inverse(sum.last_finite);
                e.error = l2_distance(u, manufactured_solution(grid, sum.final_time));
                e.completed = true;
            } else {
                e.error = kNaN;
                e.failure = "blow-up at step " + std::to_string(*sum.blow_up_step) + ": " + sum.blow_up_reason;
            }
        } catch (const std::exception& ex) {
            e.error = kNaN;
            e.failure = ex.what();
        }
        dts.push_back(dt);
        errs.push_back(e.error);
        rep.entries.push_back(std::move(e));
    }
    rep.slope = fitted_slope(dts, errs);
    return rep;
}

double theoretical_radius(double R0, double t) {
    const double r2 = R0 * R0 - 2.0 * t;
    return r2 > 0.0 ? std::sqrt(r2) : 0.0;
}

void validate(const AllenCahnConfig& c) {
    if (!(c.dt > 0.0) || !(c.T > 0.0)) throw std::invalid_argument("allen-cahn: dt and T must be positive");
    if (!(c.observe_every >= c.dt)) throw std::invalid_argument("allen-cahn: observation interval below dt");
    if (!(c.R0 > 0.0 && c.R0 < c.half_width)) throw std::invalid_argument("allen-cahn: R0 must fit in the domain");
    if (c.params.alpha != 0) throw std::invalid_argument("allen-cahn: alpha must be 0");
    validate(c.params);
}

SpectralField2D allen_cahn_initial(const AllenCahnConfig& c) {
    const Grid2D grid(c.n, c.n, 2.0, 2.0, -1.0, -1.0);
    SpectralField2D u(grid);
    const double r = c.R0 / c.half_width;
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x(ix), y = grid.y(iy);
            if (c.profile == InitialProfile::indicator) u.at(ix, iy) = x * x + y * y < r * r ? 1.0 : -1.0;
            else u.at(ix, iy) = std::tanh((r - std::hypot(x, y)) / (std::sqrt(2.0) * c.params.eps));
        }
    return u;
}

AllenCahnReport run_allen_cahn_radius(const AllenCahnConfig& c) {
    validate(c);
    const SchemeCoefficients coeffs = coefficients_for(c.k, c.beta);
    const SpectralField2D u0 = allen_cahn_initial(c);
    PhaseFieldModel model(u0.grid, c.params);
    const ProblemSpec<Complex> spec = model.problem(u0);
    FourierTransform2D& fft = model.transform();
    const long stride = std::max(1L, std::lround(c.observe_every / c.dt));

    AllenCahnReport rep;
    rep.k = c.k;
    rep.beta = c.beta;
    auto record = [&](double t, const SpectralField2D& u) {
        double r = kNaN;
        try {
            r = c.half_width * radius_of_circle(u);
        } catch (const std::domain_error&) {
        }
        const double th = theoretical_radius(c.R0, t);
        rep.times.push_back(t);
        rep.radius.push_back(r);
        rep.radius_theory.push_back(th);
        const double dev = th > 0.0 ? std::abs(r - th) / th : kNaN;
        if (std::isnan(dev) || std::isnan(rep.max_relative_deviation)) rep.max_relative_deviation = kNaN;
        else rep.max_relative_deviation = std::max(rep.max_relative_deviation, dev);
    };
    record(0.0, u0);
    Observer<Complex> ob = [&](const IntegratorState<Complex>& st) {
        if (st.step_index() == 0 || st.step_index() % stride != 0) return;
        record(st.time(), fft.inverse(st.current()));
    };
    const auto sum = run<Complex>(spec, coeffs, c.dt, c.T, c.starter, {ob}, 1);
    rep.completed = sum.completed;
    rep.blow_up_step = sum.blow_up_step;
    rep.blow_up_reason = sum.blow_up_reason;
    rep.warnings = sum.warnings;
    if (!rep.completed) rep.max_relative_deviation = kNaN;
    return rep;
}

CahnHilliardConfig CahnHilliardConfig::small() {
    CahnHilliardConfig c;
    c.n = 64;
    c.eps = 0.04;
    c.dt = 2e-6;
    c.reference_dt = 8e-8;
    c.T = 6e-3;
    c.observe_stride = 50;
    return c;
}

void validate(const CahnHilliardConfig& c) {
    if (!(c.dt > 0.0) || !(c.T > 0.0) || !(c.reference_dt > 0.0))
        throw std::invalid_argument("cahn-hilliard: dt, reference dt and T must be positive");
    if (c.observe_stride < 1) throw std::invalid_argument("cahn-hilliard: observation stride must be >= 1");
    steps_for(c.dt, c.reference_dt);
    steps_for(c.T, c.dt * static_cast<double>(c.observe_stride));
    validate(c.params());
}

SpectralField2D cahn_hilliard_initial(const CahnHilliardConfig& c) {
    const Grid2D grid(c.n, c.n, 1.0, 1.0);
    SpectralField2D u(grid);
    std::mt19937_64 gen(c.seed);
    // explicit 53-bit mapping: std::uniform_real_distribution is not reproducible across standard libraries
    for (double& v : u.values) {
        const double r = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        v = c.mean + c.amplitude * (2.0 * r - 1.0);
    }
    return u;
}

namespace {

struct ChObservation {
    std::vector<double> times, energy;
    std::vector<SpectralField2D> fields;
};

RunSummary<Complex> ch_trajectory(const CahnHilliardConfig& c, const SchemeCoefficients& coeffs, double dt,
                                  long stride, bool keep_fields, ChObservation& obs, double& e0) {
    const SpectralField2D u0 = cahn_hilliard_initial(c);
    PhaseFieldModel model(u0.grid, c.params());
    const ProblemSpec<Complex> spec = model.problem(u0);
    FourierTransform2D& fft = model.transform();
    e0 = model.free_energy(u0);
    obs.times.push_back(0.0);
    obs.energy.push_back(e0);
    if (keep_fields) obs.fields.push_back(u0);
    Observer<Complex> ob = [&](const IntegratorState<Complex>& st) {
        if (st.step_index() == 0 || st.step_index() % stride != 0) return;
        SpectralField2D u = fft.inverse(st.current());
        obs.times.push_back(st.time());
        obs.energy.push_back(model.free_energy(u));
        if (keep_fields) obs.fields.push_back(std::move(u));
    };
    auto sum = run<Complex>(spec, coeffs, dt, c.T, c.starter, {ob}, 1);
    if (!sum.last_finite.empty()) obs.fields.push_back(fft.inverse(sum.last_finite));
    return sum;
}

}  // namespace

ReferenceTrajectory cahn_hilliard_reference(const CahnHilliardConfig& c) {
    validate(c);
    const long ratio = steps_for(c.dt, c.reference_dt);
    ChObservation obs;
    double e0 = 0.0;
    const auto sum =
        ch_trajectory(c, coefficients_for(4, 1.0), c.reference_dt, c.observe_stride * ratio, true, obs, e0);
    ReferenceTrajectory ref;
    ref.completed = sum.completed;
    ref.times = std::move(obs.times);
    obs.fields.pop_back();  // final snapshot duplicate
    ref.fields = std::move(obs.fields);
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& f : ref.fields) h ^= fnv1a64(f.values) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    ref.checksum = h;
    return ref;
}

CahnHilliardReport run_cahn_hilliard(const CahnHilliardConfig& c, const ReferenceTrajectory* reference) {
    validate(c);
    const SchemeCoefficients coeffs = coefficients_for(c.k, c.beta);
    ChObservation obs;
    double e0 = 0.0;
    const bool keep = reference != nullptr;
    const auto sum = ch_trajectory(c, coeffs, c.dt, c.observe_stride, keep, obs, e0);

    CahnHilliardReport rep;
    rep.k = c.k;
    rep.beta = c.beta;
    rep.dt = c.dt;
    rep.initial_energy = e0;
    rep.times = obs.times;
    rep.energy = obs.energy;
    rep.completed = sum.completed;
    rep.blow_up_step = sum.blow_up_step;
    rep.blow_up_reason = sum.blow_up_reason;
    rep.warnings = sum.warnings;
    rep.final_field = obs.fields.back();
    if (reference) {
        for (std::size_t i = 0; i < rep.times.size() && i < reference->times.size(); ++i) {
            if (std::abs(rep.times[i] - reference->times[i]) > 1e-9 * std::max(1.0, std::abs(rep.times[i])))
                throw std::logic_error("cahn-hilliard: reference times do not line up");
            rep.distance.push_back(l2_distance(obs.fields[i], reference->fields[i]));
        }
    }
    rep.energy_bounded = true;
    for (double e : rep.energy)
        if (!std::isfinite(e) || e > e0) rep.energy_bounded = false;
    rep.stable = rep.completed && rep.energy_bounded;
    return rep;
}

Json to_json(const ConvergenceReport& r) {
    Json j;
    j["k"] = r.k;
    j["beta"] = r.beta;
    j["slope"] = std::isfinite(r.slope) ? Json(r.slope) : Json(nullptr);
    Json arr = Json::array();
    for (const auto& e : r.entries) {
        Json x;
        x["dt"] = e.dt;
        x["error"] = std::isfinite(e.error) ? Json(e.error) : Json(nullptr);
        x["completed"] = e.completed;
        if (!e.failure.empty()) x["failure"] = e.failure;
        arr.push_back(x);
    }
    j["entries"] = arr;
    return j;
}

Json to_json(const AllenCahnReport& r) {
    Json j;
    j["k"] = r.k;
    j["beta"] = r.beta;
    j["completed"] = r.completed;
    j["max_relative_deviation"] =
        std::isfinite(r.max_relative_deviation) ? Json(r.max_relative_deviation) : Json(nullptr);
    if (r.blow_up_step) {
        j["blow_up_step"] = *r.blow_up_step;
        j["blow_up_reason"] = r.blow_up_reason;
    }
    j["warnings"] = r.warnings;
    return j;
}

Json to_json(const CahnHilliardReport& r) {
    Json j;
    j["k"] = r.k;
    j["beta"] = r.beta;
    j["dt"] = r.dt;
    j["completed"] = r.completed;
    j["energy_bounded"] = r.energy_bounded;
    j["verdict"] = r.stable ? "stable" : "unstable";
    j["initial_energy"] = r.initial_energy;
    if (!r.energy.empty()) j["final_energy"] = r.energy.back();
    if (!r.distance.empty()) j["final_distance"] = r.distance.back();
    if (r.blow_up_step) {
        j["blow_up_step"] = *r.blow_up_step;
        j["blow_up_reason"] = r.blow_up_reason;
    }
    j["warnings"] = r.warnings;
    return j;
}

std::vector<std::string> emit_outputs(const ConvergenceReport& r, const fs::path& dir) {
    ensure_directory(dir);
    std::vector<std::vector<double>> rows;
    for (const auto& e : r.entries) rows.push_back({e.dt, e.error});
    write_csv(dir / "convergence.csv", {"dt", "l2_error"}, rows);
    write_json(dir / "convergence.json", to_json(r));
    return {"convergence.csv", "convergence.json"};
}

std::vector<std::string> emit_outputs(const AllenCahnReport& r, const fs::path& dir) {
    ensure_directory(dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < r.times.size(); ++i) rows.push_back({r.times[i], r.radius[i], r.radius_theory[i]});
    write_csv(dir / "radius.csv", {"t", "R", "R_theory"}, rows);
    write_json(dir / "summary.json", to_json(r));
    return {"radius.csv", "summary.json"};
}

std::vector<std::string> emit_outputs(const CahnHilliardReport& r, const fs::path& dir) {
    ensure_directory(dir);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        std::vector<double> row{r.times[i], r.energy[i]};
        if (!r.distance.empty()) row.push_back(i < r.distance.size() ? r.distance[i] : kNaN);
        rows.push_back(std::move(row));
    }
    std::vector<std::string> header{"t", "energy"};
    if (!r.distance.empty()) header.push_back("l2_distance");
    write_csv(dir / "energy.csv", header, rows);
    write_json(dir / "summary.json", to_json(r));
    write_field(dir / "final_field", r.final_field, r.times.empty() ? 0.0 : r.times.back());
    return {"energy.csv", "summary.json", "final_field.bin", "final_field.json"};
}

std::vector<std::string> emit_outputs(const ReferenceTrajectory& r, const fs::path& dir) {
    ensure_directory(dir);
    Json j;
    j["scheme"] = {{"k", 4}, {"beta", 1.0}};
    j["completed"] = r.completed;
    j["times"] = r.times;
    j["checksum_fnv1a64"] = hex64(r.checksum);
    write_json(dir / "reference.json", j);
    if (!r.fields.empty()) write_field(dir / "reference_final", r.fields.back(), r.times.back());
    return {"reference.json", "reference_final.bin", "reference_final.json"};
}

}  // namespace betaimex
