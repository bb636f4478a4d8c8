#include "betaimex/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace betaimex {

namespace {

constexpr double kTrimTol = 1e-14;
constexpr int kMaxCompanion = 16;

template <class T>
void trim_relative(std::vector<T>& c) {
    double m = 0.0;
    for (const auto& v : c) m = std::max(m, static_cast<double>(std::abs(v)));
    while (!c.empty() && std::abs(c.back()) <= kTrimTol * m) c.pop_back();
}

// Parlett-Reinsch balancing with power-of-two scalings.
template <class Mat>
void balance(Mat& A) {
    const Eigen::Index n = A.rows();
    constexpr double radix = 2.0;
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(A(j, i));
                r += std::abs(A(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
}

template <class T>
ComplexValue horner(std::span<const T> c, ComplexValue z) {
    ComplexValue acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + ComplexValue(c[i]);
    return acc;
}

template <class T>
ComplexValue horner_derivative(std::span<const T> c, ComplexValue z) {
    ComplexValue acc = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) acc = acc * z + ComplexValue(c[i]) * static_cast<double>(i);
    return acc;
}

template <class T>
void polish(std::span<const T> c, std::vector<ComplexValue>& rts) {
    for (auto& z : rts) {
        for (int it = 0; it < 3; ++it) {
            const ComplexValue f = horner(c, z);
            const ComplexValue df = horner_derivative(c, z);
            if (df == 0.0) break;
            const ComplexValue zn = z - f / df;
            if (!(std::abs(horner(c, zn)) < std::abs(f))) break;
            z = zn;
        }
    }
}

std::vector<ComplexValue> real_companion_roots(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxCompanion, kMaxCompanion>;
    Mat A = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) A(0, j) = -c[n - 1 - j] / c[n];
    for (int i = 1; i < n; ++i) A(i, i - 1) = 1.0;
    balance(A);
    Eigen::EigenSolver<Mat> es(A, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("roots: eigenvalue iteration failed");
    std::vector<ComplexValue> out(es.eigenvalues().begin(), es.eigenvalues().end());
    return out;
}

std::vector<ComplexValue> complex_companion_roots(const std::vector<ComplexValue>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    using Mat = Eigen::Matrix<ComplexValue, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxCompanion, kMaxCompanion>;
    Mat A = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) A(0, j) = -c[n - 1 - j] / c[n];
    for (int i = 1; i < n; ++i) A(i, i - 1) = 1.0;
    balance(A);
    Eigen::ComplexEigenSolver<Mat> es(A, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("roots: eigenvalue iteration failed");
    std::vector<ComplexValue> out(es.eigenvalues().begin(), es.eigenvalues().end());
    return out;
}

void check_degree(int n) {
    if (n + 1 > kMaxCompanion + 1) throw std::invalid_argument("roots: degree too large for companion solver");
}

}  // namespace

RealPolynomial::RealPolynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    for (double v : c_)
        if (!std::isfinite(v)) throw std::invalid_argument("RealPolynomial: non-finite coefficient");
    trim_relative(c_);
}

RealPolynomial RealPolynomial::from_roots(std::span<const double> rts, double leading) {
    std::vector<double> c{leading};
    for (double r : rts) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return RealPolynomial(std::move(c));
}

double RealPolynomial::operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

ComplexValue RealPolynomial::operator()(ComplexValue z) const { return horner<double>(c_, z); }

RealPolynomial RealPolynomial::derivative() const {
    if (c_.size() <= 1) return RealPolynomial{};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return RealPolynomial(std::move(d));
}

double RealPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

RationalPolynomial::RationalPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RationalPolynomial::operator()(const Rational& x) const {
    Rational acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

RationalPolynomial RationalPolynomial::derivative() const {
    if (c_.size() <= 1) return RationalPolynomial{};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<int>(i);
    return RationalPolynomial(std::move(d));
}

RealPolynomial RationalPolynomial::to_real() const {
    std::vector<double> c(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i] = to_double(c_[i]);
    return RealPolynomial(std::move(c));
}

std::vector<ComplexValue> roots(const RealPolynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("roots: zero polynomial");
    const auto& c = p.coeffs();
    if (p.degree() == 0) return {};
    check_degree(p.degree());
    if (p.degree() == 1) return {ComplexValue(-c[0] / c[1])};
    auto rts = real_companion_roots(c);
    polish<double>(c, rts);
    return rts;
}

std::vector<ComplexValue> roots(std::span<const ComplexValue> coeffs) {
    std::vector<ComplexValue> c(coeffs.begin(), coeffs.end());
    for (const auto& v : c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("roots: non-finite coefficient");
    trim_relative(c);
    if (c.empty()) throw std::invalid_argument("roots: zero polynomial");
    if (c.size() == 1) return {};
    check_degree(static_cast<int>(c.size()) - 1);
    if (c.size() == 2) return {-c[0] / c[1]};
    auto rts = complex_companion_roots(c);
    polish<ComplexValue>(c, rts);
    return rts;
}

double max_root_modulus(const RealPolynomial& p) {
    double m = 0.0;
    for (const auto& r : roots(p)) m = std::max(m, std::abs(r));
    return m;
}

double sylvester_resultant(const RealPolynomial& p, const RealPolynomial& q) {
    const int m = p.degree(), n = q.degree();
    if (m < 1 || n < 1) throw std::invalid_argument("sylvester_resultant: degrees must be >= 1");
    const int N = m + n;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
    for (int r = 0; r < n; ++r)
        for (int j = 0; j <= m; ++j) S(r, r + j) = p[static_cast<std::size_t>(m - j)];
    for (int r = 0; r < m; ++r)
        for (int j = 0; j <= n; ++j) S(n + r, r + j) = q[static_cast<std::size_t>(n - j)];
    return S.partialPivLu().determinant();
}

Rational sylvester_resultant(const RationalPolynomial& p, const RationalPolynomial& q) {
    const int m = p.degree(), n = q.degree();
    if (m < 1 || n < 1) throw std::invalid_argument("sylvester_resultant: degrees must be >= 1");
    const auto N = static_cast<std::size_t>(m + n);
    std::vector<std::vector<Rational>> S(N, std::vector<Rational>(N, Rational(0)));
    for (int r = 0; r < n; ++r)
        for (int j = 0; j <= m; ++j) S[r][r + j] = p.coeffs()[m - j];
    for (int r = 0; r < m; ++r)
        for (int j = 0; j <= n; ++j) S[n + r][r + j] = q.coeffs()[n - j];
    Rational det = 1;
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        while (piv < N && S[piv][col] == 0) ++piv;
        if (piv == N) return Rational(0);
        if (piv != col) {
            std::swap(S[piv], S[col]);
            det = -det;
        }
        det *= S[col][col];
        for (std::size_t r = col + 1; r < N; ++r) {
            if (S[r][col] == 0) continue;
            const Rational f = S[r][col] / S[col][col];
            for (std::size_t j = col; j < N; ++j) S[r][j] -= f * S[col][j];
        }
    }
    return det;
}

std::vector<double> real_roots_in(const RealPolynomial& p, double lo, double hi) {
    std::vector<double> out;
    const int n = p.degree();
    const auto& c = p.coeffs();
    if (n <= 0) return out;
    std::vector<double> cand;
    if (n == 1) {
        cand.push_back(-c[0] / c[1]);
    } else if (n == 2) {
        const double disc = c[1] * c[1] - 4.0 * c[2] * c[0];
        if (disc >= 0.0) {
            const double qq = -0.5 * (c[1] + std::copysign(std::sqrt(disc), c[1]));
            if (qq != 0.0) cand.push_back(c[0] / qq);
            cand.push_back(qq / c[2]);
        }
    } else if (n == 3) {
        const double a = c[2] / c[3], b = c[1] / c[3], cc = c[0] / c[3];
        const double Q = (a * a - 3.0 * b) / 9.0;
        const double R = (2.0 * a * a * a - 9.0 * a * b + 27.0 * cc) / 54.0;
        if (R * R < Q * Q * Q) {
            const double theta = std::acos(std::clamp(R / std::sqrt(Q * Q * Q), -1.0, 1.0));
            const double s = -2.0 * std::sqrt(Q);
            for (int j = 0; j < 3; ++j)
                cand.push_back(s * std::cos((theta + 2.0 * std::numbers::pi * j) / 3.0) - a / 3.0);
        } else {
            const double A = -std::copysign(std::cbrt(std::abs(R) + std::sqrt(R * R - Q * Q * Q)), R);
            const double B = A != 0.0 ? Q / A : 0.0;
            cand.push_back(A + B - a / 3.0);
        }
    } else {
        for (const auto& z : roots(p))
            if (std::abs(z.imag()) <= 1e-7 * (1.0 + std::abs(z.real()))) cand.push_back(z.real());
    }
    const RealPolynomial dp = p.derivative();
    for (double x : cand) {
        for (int it = 0; it < 4; ++it) {
            const double d = dp(x);
            if (d == 0.0) break;
            const double xn = x - p(x) / d;
            if (!(std::abs(p(xn)) < std::abs(p(x)))) break;
            x = xn;
        }
        if (x >= lo && x <= hi) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

IntervalMinimum min_on_interval(const RealPolynomial& p, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("min_on_interval: need lo < hi");
    IntervalMinimum best{lo, p(lo)};
    auto consider = [&](double y) {
        const double v = p(y);
        if (v < best.value) best = {y, v};
    };
    consider(hi);
    for (double y : real_roots_in(p.derivative(), lo, hi)) consider(y);
    constexpr int samples = 10000;
    for (int i = 1; i < samples; ++i) consider(lo + (hi - lo) * i / samples);
    return best;
}

namespace {

int exact_sign(const RationalPolynomial& p, double x) {
    const Rational v = p(to_rational(x));
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// Refines a critical point of p (root of dp) using exact signs of dp at double points.
double refine_critical(const RationalPolynomial& dp, double y0, double lo, double hi) {
    const int s0 = exact_sign(dp, y0);
    if (s0 == 0) return y0;
    double h = std::max(1e-12, 1e-12 * std::abs(y0));
    double a = y0, b = y0;
    int sa = s0, sb = s0;
    while (h < 0.5 * (hi - lo)) {
        a = std::max(lo, y0 - h);
        b = std::min(hi, y0 + h);
        sa = exact_sign(dp, a);
        sb = exact_sign(dp, b);
        if (sa != s0 || sb != s0) break;
        h *= 8.0;
    }
    if (sa == s0 && sb == s0) return y0;
    // keep the side nearest y0 with a sign change
    if (sa != s0) b = y0;
    else a = y0, sa = s0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const int sm = exact_sign(dp, mid);
        if (sm == 0) return mid;
        if (sm == sa) a = mid;
        else b = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace

IntervalMinimum min_on_interval(const RationalPolynomial& p, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("min_on_interval: need lo < hi");
    auto value = [&](double y) { return p(to_rational(y)); };
    double arg = lo;
    Rational best = value(lo);
    auto consider = [&](double y) {
        Rational v = value(y);
        if (v < best) {
            best = std::move(v);
            arg = y;
        }
    };
    consider(hi);
    if (p.degree() >= 2) {
        const RationalPolynomial dp = p.derivative();
        const RealPolynomial approx = p.to_real();
        std::vector<double> cand = real_roots_in(approx.derivative(), lo, hi);
        // the double sample only proposes basins; values are always taken exactly
        constexpr int samples = 2000;
        double sarg = lo, sval = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= samples; ++i) {
            const double y = lo + (hi - lo) * i / samples;
            const double v = approx(y);
            if (v < sval) sval = v, sarg = y;
        }
        cand.push_back(sarg);
        for (double y : cand) consider(refine_critical(dp, y, lo, hi));
    }
    return {arg, to_double(best)};
}

}  // namespace betaimex
