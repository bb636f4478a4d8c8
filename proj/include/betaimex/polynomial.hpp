#pragma once

#include "betaimex/rational.hpp"

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace betaimex {

using ComplexValue = std::complex<double>;

// Dense polynomial, coefficients in ascending degree.
class RealPolynomial {
public:
    RealPolynomial() = default;
    explicit RealPolynomial(std::vector<double> coeffs);
    RealPolynomial(std::initializer_list<double> coeffs) : RealPolynomial(std::vector<double>(coeffs)) {}

    static RealPolynomial from_roots(std::span<const double> roots, double leading = 1.0);

    // -1 for the zero polynomial
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<double>& coeffs() const noexcept { return c_; }
    double operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }

    double operator()(double x) const;
    ComplexValue operator()(ComplexValue z) const;
    RealPolynomial derivative() const;
    double max_abs_coeff() const;

private:
    std::vector<double> c_;
};

class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<Rational> coeffs);

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<Rational>& coeffs() const noexcept { return c_; }

    Rational operator()(const Rational& x) const;
    RationalPolynomial derivative() const;
    RealPolynomial to_real() const;

private:
    std::vector<Rational> c_;
};

// Roots of a polynomial with real or complex coefficients (ascending order) from the
// eigenvalues of the balanced companion matrix, followed by a Newton polish.
std::vector<ComplexValue> roots(const RealPolynomial& p);
std::vector<ComplexValue> roots(std::span<const ComplexValue> coeffs);

double max_root_modulus(const RealPolynomial& p);

double sylvester_resultant(const RealPolynomial& p, const RealPolynomial& q);
Rational sylvester_resultant(const RationalPolynomial& p, const RationalPolynomial& q);

struct IntervalMinimum {
    double argmin;
    double value;
};

// Global minimum over [lo, hi] from the endpoints and the real critical points.
// A uniform 10^4-point sample is also scanned as a guard against missed critical points.
IntervalMinimum min_on_interval(const RealPolynomial& p, double lo, double hi);
// Same, but every candidate is evaluated exactly and the critical points are refined by
// bisection on the exact sign of p'.
IntervalMinimum min_on_interval(const RationalPolynomial& p, double lo, double hi);

// Real roots of p inside [lo, hi] (closed-form for degree <= 3).
std::vector<double> real_roots_in(const RealPolynomial& p, double lo, double hi);

}  // namespace betaimex
