#include "betaimex/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

namespace betaimex {

namespace {

// Horner evaluation of integer coefficients given from the highest power down.
template <class T>
T P(const T& x, std::initializer_list<long long> desc) {
    T acc(0);
    for (long long c : desc) acc = acc * x + T(c);
    return acc;
}

template <class T>
std::vector<T> f_coeffs(int k, const T& b) {
    switch (k) {
        case 2:
            return {P(b, {2, 1, 1}), P(b, {-2, -1, 1})};
        case 3:
            return {P(b, {3, 9, 8, 2, 4}), P(b, {-6, -18, -13, 1, 4}), P(b, {3, 9, 5, -3, -2})};
        case 4:
            return {P(b, {2, 15, 39, 39, 10, 0, 15}), P(b, {-6, -45, -117, -116, -21, 17, 9}),
                    P(b, {6, 45, 117, 115, 12, -34, -12}), P(b, {-2, -15, -39, -38, -1, 17, 6})};
        case 5:
            return {P(b, {5, 70, 380, 990, 1189, 344, -410, -168, 336}),
                    P(b, {-20, -280, -1530, -4060, -5136, -2072, 1070, 652, 36}),
                    P(b, {30, 420, 2310, 6240, 8244, 3932, -1260, -1340, -204}),
                    P(b, {-20, -280, -1550, -4260, -5836, -3024, 950, 1396, 336}),
                    P(b, {5, 70, 390, 1090, 1539, 820, -350, -540, -144})};
        default:
            throw std::invalid_argument("no certificate for this order");
    }
}

template <class T>
std::vector<T> h_coeffs(int k, const T& b) {
    const T one(1);
    switch (k) {
        case 2:
            return {one + one / b, T(-1)};
        case 3:
            return {P(b, {1, 2, 0, 1}) / (b + 1), P(b, {-2, -2, 1}), P(b, {1, 1, 0})};
        case 4:
            return {P(b, {2, 15, 35, 15, -37, -39, 9}) / (9 * (b + 3)), P(b, {-2, -9, -10, 3, 6, 3}) / 3,
                    b * P(b, {2, 9, 12, 3, -2}) / 3, -b * (b + 1) * (b + 1) * P(b, {2, 5, 2}) / 9};
        case 5: {
            const T D = 18 * (b + 15);
            const T q = P(b, {1, 3, 2});
            return {P(b, {6, 73, 322, 571, 91, -926, -995, -312, 18}) / D,
                    -P(b, {24, 292, 1314, 2527, 1203, -2405, -3117, -1008, -270}) / D,
                    3 * b * P(b, {12, 146, 670, 1385, 1021, -553, -1127, -402}) / D,
                    -b * P(b, {24, 292, 1366, 3013, 2881, 193, -1391, -618}) / D,
                    b * q * q * P(b, {6, 37, 48, -27}) / D};
        }
        default:
            throw std::invalid_argument("no certificate for this order");
    }
}

template <class T>
std::vector<T> g4_coeffs(const T& b) {
    const auto w = f_coeffs<T>(4, b);
    return {3 * w[0], 2 * w[1], w[2]};
}

template <class T>
T closed_AC(int k, const T& b) {
    switch (k) {
        case 2:
            return T(-1) / 2;
        case 3:
            return b * b / 8 + 5 * b / 24 + T(1) / 36;
        case 4:
            return -P(b, {18, 144, 426, 566, 321, 55, 3}) / 5184;
        case 5: {
            static const std::pair<long long, long long> terms[] = {
                {1, 221184},      {11, 110592},     {635, 663552},     {78937, 14929920}, {552809, 29859840},
                {638383, 14929920}, {9801769, 149299200}, {4912619, 74649600}, {765683, 18662400},
                {225157, 15552000}, {6143, 2488320},  {2071, 10368000},  {1, 160000}};
            T acc(0);
            for (const auto& [num, den] : terms) acc = acc * b + T(num) / T(den);
            return acc;
        }
        default:
            throw std::invalid_argument("no closed-form resultant for this order");
    }
}

template <class T>
T closed_DC(int k, const T& b) {
    switch (k) {
        case 2:
            return T(-1);
        case 3:
            return b * (b + 1) / 2;
        case 4: {
            const T q = P(b, {1, 3, 2});
            return -b * b * q * q / 36;
        }
        case 5: {
            const T q = P(b, {1, 6, 11, 6});
            return b * b * b * q * q * q / 13824;
        }
        default:
            throw std::invalid_argument("no closed-form resultant for this order");
    }
}

CertificateReport verify_unchecked(int k, double beta) {
    const Rational rb = to_rational(beta);
    const SchemeOrder order(k);
    const ExactCoefficients ex = exact::coefficients(order, rb);
    const RationalPolynomial A(ex.a), C(ex.c), D(ex.d);

    CertificateReport rep;
    rep.k = k;
    rep.beta = beta;
    rep.resultant_AC = to_double(sylvester_resultant(A, C));
    rep.resultant_DC = to_double(sylvester_resultant(D, C));
    rep.closed_form_resultant_AC = to_double(closed_AC(k, rb));
    rep.closed_form_resultant_DC = to_double(closed_DC(k, rb));
    rep.max_root_modulus_C = max_root_modulus(C.to_real());

    const auto cert = certificate_polynomials_exact(order, rb);
    const auto mf = min_on_interval(cert.f, -1.0, 1.0);
    const auto mh = min_on_interval(cert.h, -1.0, 1.0);
    rep.min_f = mf.value;
    rep.argmin_f = mf.argmin;
    rep.min_h = mh.value;
    rep.argmin_h = mh.argmin;
    // A_k(0) = a_{k,0} != 0 is needed for gcd(A, zeta C) = 1 as well.
    const bool coprime = rep.resultant_AC != 0.0 && rep.resultant_DC != 0.0 && ex.a.front() != 0;
    rep.pass = coprime && rep.max_root_modulus_C < 1.0 && rep.min_f >= 0.0 && rep.min_h >= 0.0;
    if (rep.min_f < 0.0) rep.failure_witness = CertificateWitness{'f', mf.argmin, mf.value};
    else if (rep.min_h < 0.0) rep.failure_witness = CertificateWitness{'h', mh.argmin, mh.value};
    return rep;
}

double checked_sqrt(double x, const char* what, double beta) {
    if (!(x >= 0.0)) {
        std::ostringstream os;
        os << "telescoping coefficients: negative radicand in " << what << " at beta = " << beta;
        throw std::domain_error(os.str());
    }
    return std::sqrt(x);
}

Telescoping2 tel2(double b) {
    Telescoping2 t{};
    t.beta = b;
    t.Delta = 2 * b * (2 * b + 1);
    t.e = -checked_sqrt(t.Delta, "e_2", b);
    t.c = t.f = (-std::sqrt(2.0) + std::sqrt(t.Delta)) / 2;
    t.d = std::sqrt(2.0) + t.f;
    t.E = -b * (2 * b - 1);
    t.b = (t.E - 2 * t.e * t.f) / (-2 * t.c);
    t.a = (3 * b + 1 - 2 * checked_sqrt(b * (2 * b + 1), "a_2", b)) / (2 * (b + 1) * (b + 1));
    return t;
}

Telescoping3 tel3(double b) {
    Telescoping3 t{};
    t.beta = b;
    const double b2 = b * b, b3 = b2 * b, b4 = b3 * b;

    t.M_hat = (2 * b3 + 4 * b2 + b + 1) / (b + 1);
    t.N_hat = (2 * b2 + 2 * b - 1) * (2 * b2 + 2 * b - 1) / 4;
    t.Delta_hat = t.M_hat * t.M_hat - 4 * t.N_hat;
    t.e_hat = -checked_sqrt((t.M_hat - checked_sqrt(t.Delta_hat, "Delta_hat", b)) / 2, "e_hat", b);
    t.P_hat = (b3 + 2 * b2 + 1) / (b + 1) - t.e_hat * t.e_hat;
    t.Q_hat = (2 * b3 + 4 * b2 + b + 1) / (b + 1) - t.e_hat * t.e_hat;
    const double sP = checked_sqrt(t.P_hat, "P_hat", b);
    t.f_hat = (-sP + checked_sqrt(t.Q_hat, "Q_hat", b)) / 2;
    t.c_hat = t.f_hat;
    t.d_hat = sP + t.f_hat;
    t.b_hat = (b * (b - 1) + 4 * t.e_hat * t.f_hat) / (4 * t.c_hat);
    t.a_hat = b2 / 2 + 1.5 * b + 1 - t.b_hat * t.b_hat - t.d_hat * t.d_hat;

    t.M = 2 * b4 + 6 * b3 + 13 * b2 / 3 - b / 3 - 1.0 / 3;
    t.N = -(b2 / 2 - 1.0 / 6) * (b2 / 2 + 1.5 * b + 1);
    const double sM = checked_sqrt(t.M, "M", b);
    t.P = (sM + 1) / 2;
    t.Q = -0.5 * (b * (b2 / 2 - 1.0 / 6) * (b + 1));
    t.R = b4 + 3.5 * b3 + 19 * b2 / 6 - b / 3 - 1;
    t.S = 7 * b4 / 4 + 25 * b3 / 4 + 17 * b2 / 3 + b / 2 + 1.0 / 3;
    t.W = (b2 / 2 + 1.5 * b + 1) * (b2 / 2 + b + 1.0 / 3);
    t.U = 0.5 - 79 * b2 / 12 - 21 * b3 / 4 - 5 * b4 / 4 - 23 * b / 12;
    t.f = (checked_sqrt(t.P * t.P + 2 * t.N, "P^2 + 2N", b) + t.P) / 2;
    t.j = t.f;
    t.g = t.f - t.P;
    t.i = -sM - t.g;
    t.h = sM - t.f;
    t.e = (2 * t.i * t.j - t.Q) / (2 * t.f);
    t.d = (t.R - 2 * t.g * t.i) / (2 * t.f);
    t.c = checked_sqrt(t.S - t.e * t.e - t.g * t.g - t.h * t.h, "c_3", b);
    t.b = (t.U - 2 * t.d * t.e - 2 * t.g * t.h) / (2 * t.c);
    t.a = t.W - t.g * t.g - t.d * t.d - t.b * t.b;
    return t;
}

double sq(double x) { return x * x; }

double dot(std::span<const double> w, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
}

}  // namespace

int certificate_f_scale(SchemeOrder k) {
    static constexpr int s[] = {0, 0, 1, 3, 9, 180};
    return s[k.value()];
}

CertificatePolynomials certificate_polynomials(SchemeOrder k, double beta) {
    return {RealPolynomial(f_coeffs<double>(k.value(), beta)), RealPolynomial(h_coeffs<double>(k.value(), beta))};
}

ExactCertificatePolynomials certificate_polynomials_exact(SchemeOrder k, const Rational& beta) {
    return {RationalPolynomial(f_coeffs<Rational>(k.value(), beta)),
            RationalPolynomial(h_coeffs<Rational>(k.value(), beta))};
}

RealPolynomial g4_polynomial(double beta) { return RealPolynomial(g4_coeffs<double>(beta)); }
RationalPolynomial g4_polynomial_exact(const Rational& beta) { return RationalPolynomial(g4_coeffs<Rational>(beta)); }

Rational closed_form_resultant_AC(SchemeOrder k, const Rational& beta) { return closed_AC(k.value(), beta); }
Rational closed_form_resultant_DC(SchemeOrder k, const Rational& beta) { return closed_DC(k.value(), beta); }

CertificateReport verify_certificate(SchemeOrder k, ShiftParameter beta) {
    return verify_unchecked(k.value(), beta.value());
}

std::vector<double> beta_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(lo <= hi)) throw std::invalid_argument("beta_grid: need lo <= hi and step > 0");
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
    return g;
}

std::vector<CertificateReport> verify_k5_range(std::span<const double> betas) {
    std::vector<CertificateReport> out;
    out.reserve(betas.size());
    for (double b : betas) {
        if (!(b >= 0.0 && b <= 100.0)) throw std::invalid_argument("verify_k5_range: beta outside [0, 100]");
        out.push_back(verify_unchecked(5, b));
    }
    return out;
}

TelescopingCertificate telescoping_coefficients(int k, double beta) {
    if (!std::isfinite(beta) || beta < 1.0) throw std::invalid_argument("telescoping: beta must be >= 1");
    if (k == 2) return tel2(beta);
    if (k == 3) return tel3(beta);
    throw std::invalid_argument("telescoping: only k = 2 and k = 3 have explicit formulas");
}

double telescoping_identity_check(int k, double beta, std::span<const double> x) {
    if (x.size() < static_cast<std::size_t>(k + 2))
        throw std::invalid_argument("telescoping_identity_check: sequence too short");
    const auto s = scheme_coefficients_unchecked(SchemeOrder(k), beta);
    const auto cert = telescoping_coefficients(k, beta);
    double worst = 0.0;
    if (k == 2) {
        const auto& t = std::get<Telescoping2>(cert);
        for (std::size_t n = 2; n < x.size(); ++n) {
            const double u = x[n - 2], v = x[n - 1], w = x[n];
            const double cw = s.c[0] * v + s.c[1] * w;
            // the k = 2 expansion is normalised to 2 A_2
            const double lhsA = 2.0 * (s.a[0] * u + s.a[1] * v + s.a[2] * w) * cw;
            const double rhsA = t.a * w * w - t.a * v * v + sq(t.b * w + t.c * v) - sq(t.b * v + t.c * u) +
                                sq(t.d * w + t.e * v + t.f * u);
            const double lhsD = (s.d[0] * v + s.d[1] * w) * cw;
            const double rhsD = w * w / beta + 0.5 * w * w - 0.5 * v * v + 0.5 * sq(w - v);
            worst = std::max({worst, std::abs(lhsA - rhsA), std::abs(lhsD - rhsD)});
        }
    } else {
        const auto& t = std::get<Telescoping3>(cert);
        for (std::size_t n = 3; n < x.size(); ++n) {
            const auto win = x.subspan(n - 3, 4);  // levels n-2 .. n+1
            const double p0 = win[0], p1 = win[1], p2 = win[2], p3 = win[3];
            const double cw = dot(s.c, win.subspan(1));
            const double lhsA = dot(s.a, win) * cw;
            const double lhsD = dot(s.d, win.subspan(1)) * cw;
            const double rhsD = t.a_hat * p3 * p3 - t.a_hat * p2 * p2 + sq(t.b_hat * p3 + t.c_hat * p2) -
                                sq(t.b_hat * p2 + t.c_hat * p1) + sq(t.d_hat * p3 + t.e_hat * p2 + t.f_hat * p1);
            const double rhsA = t.a * p3 * p3 - t.a * p2 * p2 + sq(t.b * p3 + t.c * p2) - sq(t.b * p2 + t.c * p1) +
                                sq(t.d * p3 + t.e * p2 + t.f * p1) - sq(t.d * p2 + t.e * p1 + t.f * p0) +
                                sq(t.g * p3 + t.h * p2 + t.i * p1 + t.j * p0);
            worst = std::max({worst, std::abs(lhsA - rhsA), std::abs(lhsD - rhsD)});
        }
    }
    return worst;
}

ConditionMargin stability_condition(SchemeOrder k, double beta, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("stability_condition: gamma must be >= 0");
    const double m = eta(k, beta) - std::sqrt(gamma);
    return {m, m > 0.0};
}

double classical_eta_tilde(SchemeOrder k) {
    switch (k.value()) {
        case 2: return 0.0;
        case 3: return 0.0836;
        case 4: return 0.2878;
        default: throw std::invalid_argument("classical multiplier known only for k = 2, 3, 4");
    }
}

double classical_c_tilde(SchemeOrder k) {
    classical_eta_tilde(k);  // validates k
    double s = 0.0;
    for (double c : solve_c(k, 1.0)) s += std::abs(c);
    return s;
}

ClassicalCondition classical_condition(SchemeOrder k, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("classical_condition: gamma must be >= 0");
    const double et = classical_eta_tilde(k);
    const double lhs = 1.0 - et;
    const double rhs = std::sqrt(classical_c_tilde(k) * gamma * (1.0 + et * et));
    return {lhs, rhs, lhs > rhs};
}

}  // namespace betaimex
