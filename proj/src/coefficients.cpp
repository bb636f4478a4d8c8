#include "betaimex/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace betaimex {

SchemeOrder::SchemeOrder(int k) : k_(k) {
    if (k < 2 || k > 5) {
        throw std::invalid_argument("scheme order must be in 2..5, got " + std::to_string(k));
    }
}

ShiftParameter::ShiftParameter(double beta) : beta_(beta) {
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    if (beta < 1.0) {
        std::ostringstream os;
        os << "beta must be >= 1, got " << beta;
        throw std::invalid_argument(os.str());
    }
}

template <class T>
std::vector<T> solve_vandermonde(std::span<const T> x, std::vector<T> b) {
    if (x.size() != b.size() || x.empty()) throw std::invalid_argument("solve_vandermonde: size mismatch");
    const std::size_t n = x.size() - 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = n; i > k; --i) b[i] -= x[k] * b[i - 1];
    for (std::size_t kk = n; kk-- > 0;) {
        for (std::size_t i = kk + 1; i <= n; ++i) {
            const T den = x[i] - x[i - kk - 1];
            if (den == T(0)) throw std::invalid_argument("solve_vandermonde: repeated node");
            b[i] /= den;
        }
        for (std::size_t i = kk; i < n; ++i) b[i] -= b[i + 1];
    }
    return b;
}

template std::vector<double> solve_vandermonde(std::span<const double>, std::vector<double>);
template std::vector<Rational> solve_vandermonde(std::span<const Rational>, std::vector<Rational>);

namespace {

void check_beta(double beta) {
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
}

// nodes first + j, j = 0..n-1; solution is reversed so index q matches the level ordering
template <class T>
std::vector<T> shifted_system(const T& first, std::size_t n, std::vector<T> rhs) {
    std::vector<T> nodes(n);
    for (std::size_t j = 0; j < n; ++j) nodes[j] = first + T(static_cast<int>(j));
    auto z = solve_vandermonde<T>(nodes, std::move(rhs));
    std::reverse(z.begin(), z.end());
    return z;
}

template <class T>
std::vector<T> unit_rhs(std::size_t n, std::size_t pos, int value) {
    std::vector<T> r(n, T(0));
    r[pos] = T(value);
    return r;
}

template <class T>
T eta_impl(int k, const T& beta) {
    static constexpr int offset[] = {0, 0, 0, 1, 3, 15};
    return (beta - T(1)) / (beta + T(offset[k]));
}

template <class T>
BasicCoefficients<T> vandermonde_path(int k, const T& beta) {
    const auto n = static_cast<std::size_t>(k);
    BasicCoefficients<T> s;
    s.k = k;
    s.beta = beta;
    s.a = shifted_system<T>(beta - T(1), n + 1, unit_rhs<T>(n + 1, 1, -1));
    s.b = shifted_system<T>(beta - T(1), n, unit_rhs<T>(n, 0, 1));
    s.c = shifted_system<T>(beta, n, unit_rhs<T>(n, 0, 1));
    s.eta = eta_impl(k, beta);
    s.d.resize(n);
    for (std::size_t q = 0; q < n; ++q) s.d[q] = s.b[q] - s.eta * s.c[q];
    return s;
}

}  // namespace

std::vector<double> solve_a(SchemeOrder k, double beta) {
    check_beta(beta);
    const auto n = static_cast<std::size_t>(k.value());
    return shifted_system<double>(beta - 1.0, n + 1, unit_rhs<double>(n + 1, 1, -1));
}

std::vector<double> solve_b(SchemeOrder k, double beta) {
    check_beta(beta);
    const auto n = static_cast<std::size_t>(k.value());
    return shifted_system<double>(beta - 1.0, n, unit_rhs<double>(n, 0, 1));
}

std::vector<double> solve_c(SchemeOrder k, double beta) {
    check_beta(beta);
    const auto n = static_cast<std::size_t>(k.value());
    return shifted_system<double>(beta, n, unit_rhs<double>(n, 0, 1));
}

double eta(SchemeOrder k, double beta) {
    check_beta(beta);
    return eta_impl(k.value(), beta);
}

std::vector<double> split_d(SchemeOrder k, double beta) {
    return scheme_coefficients_unchecked(k, beta).d;
}

SchemeCoefficients scheme_coefficients_unchecked(SchemeOrder k, double beta) {
    check_beta(beta);
    return vandermonde_path(k.value(), beta);
}

SchemeCoefficients scheme_coefficients(SchemeOrder k, ShiftParameter beta) {
    return vandermonde_path(k.value(), beta.value());
}

template <class T>
BasicCoefficients<T> closed_form(SchemeOrder order, const T& x) {
    const int k = order.value();
    BasicCoefficients<T> s;
    s.k = k;
    s.beta = x;
    s.eta = eta_impl(k, x);
    const T one(1);
    const T x2 = x * x;
    const T x3 = x2 * x;
    switch (k) {
        case 2:
            s.a = {(2 * x - one) / 2, -2 * x, (2 * x + one) / 2};
            s.b = {-(x - one), x};
            s.c = {-x, x + one};
            s.d = {T(0), one / x};
            break;
        case 3:
            s.a = {-(3 * x2 - one) / 6, (9 * x2 + 6 * x - 6) / 6, -(9 * x2 + 12 * x - 3) / 6,
                   (3 * x2 + 6 * x + 2) / 6};
            s.b = {(x2 - x) / 2, -(x2 - one), (x2 + x) / 2};
            s.c = {(x2 + x) / 2, -(x2 + 2 * x), (x2 + 3 * x + 2) / 2};
            s.d = {T(0), (one - x) / (one + x), one};
            break;
        case 4:
            s.a = {(2 * x3 + 3 * x2 - x - 1) / 12, (-8 * x3 - 18 * x2 + 4 * x + 6) / 12,
                   (12 * x3 + 36 * x2 + 6 * x - 18) / 12, (-8 * x3 - 30 * x2 - 20 * x + 10) / 12,
                   (2 * x3 + 9 * x2 + 11 * x + 3) / 12};
            s.b = {(-x3 + x) / 6, (x3 + x2 - 2 * x) / 2, (-x3 - 2 * x2 + x + 2) / 2, (x3 + 3 * x2 + 2 * x) / 6};
            s.c = {(-x3 - 3 * x2 - 2 * x) / 6, (x3 + 4 * x2 + 3 * x) / 2, (-x3 - 5 * x2 - 6 * x) / 2,
                   (x3 + 6 * x2 + 11 * x + 6) / 6};
            s.d = {-x * (x2 - one) / (6 * (x + 3)), x * (x - one) / 2, -(x2 / 2 + x / 2 - one),
                   x2 / 6 + x / 2 + one / 3};
            break;
        default:
            throw std::invalid_argument("closed_form: no closed form for k = " + std::to_string(k));
    }
    return s;
}

template BasicCoefficients<double> closed_form(SchemeOrder, const double&);
template BasicCoefficients<Rational> closed_form(SchemeOrder, const Rational&);

SchemeCoefficients closed_form(SchemeOrder k, ShiftParameter beta) { return closed_form<double>(k, beta.value()); }

SchemeCoefficients first_order_baseline() {
    SchemeCoefficients s;
    s.k = 1;
    s.beta = 1.0;
    s.a = {-1.0, 1.0};
    s.b = {1.0};
    s.c = {1.0};
    s.d = {1.0};
    s.eta = 0.0;
    return s;
}

namespace exact {

Rational eta(SchemeOrder k, const Rational& beta) { return eta_impl(k.value(), beta); }

ExactCoefficients coefficients(SchemeOrder k, const Rational& beta) { return vandermonde_path(k.value(), beta); }

}  // namespace exact

std::vector<std::string> admissibility_notes(SchemeOrder k, double beta) {
    std::vector<std::string> notes;
    if (beta == 1.0) notes.emplace_back("beta = 1 gives eta_k = 0; the stability condition cannot hold for gamma > 0");
    if (k.value() == 4 && beta < 2.0)
        notes.emplace_back("k = 4: the D-certificate is only guaranteed for beta >= 2");
    if (k.value() == 5 && (beta < 6.5 || beta > 100.0))
        notes.emplace_back("k = 5: the multiplier certificate is only verified for 6.5 <= beta <= 100");
    if (beta > 100.0) notes.emplace_back("beta > 100: outside the numerically verified range");
    return notes;
}

double normwise_relative_error(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("normwise_relative_error: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num = std::max(num, std::abs(x[i] - y[i]));
        den = std::max(den, std::abs(y[i]));
    }
    return den > 0.0 ? num / den : num;
}

}  // namespace betaimex
