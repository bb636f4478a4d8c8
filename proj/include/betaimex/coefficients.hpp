#pragma once

#include "betaimex/rational.hpp"

#include <span>
#include <string>
#include <vector>

namespace betaimex {

// Scheme order k of the beta-shifted family. Only 2..5 carry multiplier theory.
class SchemeOrder {
public:
    explicit SchemeOrder(int k);
    int value() const noexcept { return k_; }
    friend bool operator==(SchemeOrder, SchemeOrder) = default;

private:
    int k_;
};

// Expansion point shift; beta = 1 recovers the classical schemes.
class ShiftParameter {
public:
    explicit ShiftParameter(double beta);
    double value() const noexcept { return beta_; }

private:
    double beta_;
};

// a has k+1 entries, b/c/d have k. Index q follows the scheme's level ordering:
// a_q multiplies u^{n+1-k+q}, b_q multiplies u^{n+2-k+q}, c_q multiplies u^{n+1-k+q}.
template <class T>
struct BasicCoefficients {
    int k = 0;
    T beta{};
    std::vector<T> a, b, c, d;
    T eta{};
};

using SchemeCoefficients = BasicCoefficients<double>;
using ExactCoefficients = BasicCoefficients<Rational>;

// Solves sum_j nodes[j]^m z_j = rhs[m], m = 0..n, by the Bjorck-Pereyra recurrence.
template <class T>
std::vector<T> solve_vandermonde(std::span<const T> nodes, std::vector<T> rhs);

// The raw solvers accept any finite beta; ShiftParameter enforces beta >= 1.
std::vector<double> solve_a(SchemeOrder k, double beta);
std::vector<double> solve_b(SchemeOrder k, double beta);
std::vector<double> solve_c(SchemeOrder k, double beta);
double eta(SchemeOrder k, double beta);
std::vector<double> split_d(SchemeOrder k, double beta);

SchemeCoefficients scheme_coefficients(SchemeOrder k, ShiftParameter beta);
// Same as scheme_coefficients without the beta >= 1 check; used by parameter sweeps.
SchemeCoefficients scheme_coefficients_unchecked(SchemeOrder k, double beta);

// Printed rational formulas, k = 2, 3, 4 only.
template <class T>
BasicCoefficients<T> closed_form(SchemeOrder k, const T& beta);
SchemeCoefficients closed_form(SchemeOrder k, ShiftParameter beta);

// IMEX Euler: the k = 1 member used as a baseline in the experiments.
SchemeCoefficients first_order_baseline();

namespace exact {
Rational eta(SchemeOrder k, const Rational& beta);
ExactCoefficients coefficients(SchemeOrder k, const Rational& beta);
}  // namespace exact

// Known restrictions on beta for the multiplier theory at this order; empty if none apply.
std::vector<std::string> admissibility_notes(SchemeOrder k, double beta);

// max_q |x_q - y_q| / max_q |y_q|
double normwise_relative_error(std::span<const double> x, std::span<const double> y);

}  // namespace betaimex
