#pragma once

#include "betaimex/integrator.hpp"
#include "betaimex/output.hpp"
#include "betaimex/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace betaimex {

// k = 1 selects the first-order IMEX baseline (beta must be 1); k = 2..5 the shifted family.
SchemeCoefficients coefficients_for(int k, double beta);

// Smooth manufactured solution on (0,2)^2 with alpha = 0, m = eps = 0.2.
struct ConvergenceConfig {
    int k = 2;
    double beta = 1.0;
    std::vector<double> dts{0.0125, 0.00625, 0.003125, 0.0015625, 0.00078125};  // strictly decreasing
    int n = 40;
    double T = 1.0;
    PhaseFieldParams params{0.2, 0.2, 0, false};
    double length = 2.0;
};

struct ConvergenceEntry {
    double dt = 0.0;
    double error = 0.0;  // discrete L2 error at the final level; NaN after blow-up
    bool completed = false;
    std::string failure;
};

struct ConvergenceReport {
    int k = 0;
    double beta = 0.0;
    std::vector<ConvergenceEntry> entries;
    double slope = 0.0;  // least-squares slope of log error against log dt; NaN with fewer than 4 usable points
};

void validate(const ConvergenceConfig& c);
ConvergenceReport run_convergence(const ConvergenceConfig& c);
double fitted_slope(std::span<const double> dts, std::span<const double> errors);

// indicator is the sharp +-1 disk; tanh is the relaxed equilibrium profile across the same circle
enum class InitialProfile { indicator, tanh };

// Shrinking circle on (-1,1)^2 standing in for (-128,128)^2; radii are reported in the original units.
struct AllenCahnConfig {
    int k = 2;
    double beta = 1.0;
    int n = 512;
    double dt = 0.75;
    double T = 1000.0;
    double observe_every = 7.5;  // time between radius samples
    double R0 = 100.0;
    double half_width = 128.0;
    PhaseFieldParams params{6.10351e-5, 0.0078, 0, false};
    Starter starter{StarterKind::rk4_substep, 0};
    InitialProfile profile = InitialProfile::indicator;

    static AllenCahnConfig full_scale() { return {}; }
    static AllenCahnConfig small() {
        AllenCahnConfig c;
        c.n = 256;
        c.T = 500.0;
        return c;
    }
};

struct AllenCahnReport {
    int k = 0;
    double beta = 0.0;
    std::vector<double> times, radius, radius_theory;
    double max_relative_deviation = 0.0;
    bool completed = false;
    std::optional<long> blow_up_step;
    std::string blow_up_reason;
    std::vector<std::string> warnings;
};

void validate(const AllenCahnConfig& c);
SpectralField2D allen_cahn_initial(const AllenCahnConfig& c);
AllenCahnReport run_allen_cahn_radius(const AllenCahnConfig& c);
double theoretical_radius(double R0, double t);

// Spinodal decomposition on (0,1)^2 with alpha = 1, m = 1 from a seeded uniform perturbation of 0.2.
struct CahnHilliardConfig {
    int k = 2;
    double beta = 1.0;
    int n = 128;
    double eps = 0.02;
    double dt = 7.5e-8;
    double T = 4.5e-4;
    double reference_dt = 5e-9;  // must divide dt
    long observe_stride = 100;   // steps of dt between observations
    std::uint64_t seed = 20240601;
    double mean = 0.2;
    double amplitude = 0.02;
    Starter starter{StarterKind::rk4_substep, 0};

    static CahnHilliardConfig full_scale() { return {}; }
    static CahnHilliardConfig small();
    PhaseFieldParams params() const { return {1.0, eps, 1, false}; }
};

// Fields at the shared observation times, generated by (k = 4, beta = 1) at reference_dt.
struct ReferenceTrajectory {
    std::vector<double> times;
    std::vector<SpectralField2D> fields;
    std::uint64_t checksum = 0;
    bool completed = false;
};

struct CahnHilliardReport {
    int k = 0;
    double beta = 0.0;
    double dt = 0.0;
    std::vector<double> times, energy, distance;  // distance is empty without a reference
    double initial_energy = 0.0;
    bool completed = false;
    bool energy_bounded = false;  // every observed energy is finite and at most the initial energy
    bool stable = false;          // completed and energy_bounded
    std::optional<long> blow_up_step;
    std::string blow_up_reason;
    std::vector<std::string> warnings;
    SpectralField2D final_field;
};

void validate(const CahnHilliardConfig& c);
SpectralField2D cahn_hilliard_initial(const CahnHilliardConfig& c);
ReferenceTrajectory cahn_hilliard_reference(const CahnHilliardConfig& c);
CahnHilliardReport run_cahn_hilliard(const CahnHilliardConfig& c, const ReferenceTrajectory* reference = nullptr);

// Writers used by the command line; each returns the file names it produced inside dir.
std::vector<std::string> emit_outputs(const ConvergenceReport& r, const std::filesystem::path& dir);
std::vector<std::string> emit_outputs(const AllenCahnReport& r, const std::filesystem::path& dir);
std::vector<std::string> emit_outputs(const CahnHilliardReport& r, const std::filesystem::path& dir);
std::vector<std::string> emit_outputs(const ReferenceTrajectory& r, const std::filesystem::path& dir);

Json to_json(const ConvergenceReport& r);
Json to_json(const AllenCahnReport& r);
Json to_json(const CahnHilliardReport& r);

}  // namespace betaimex
