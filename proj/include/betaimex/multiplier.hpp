#pragma once

#include "betaimex/coefficients.hpp"
#include "betaimex/polynomial.hpp"

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace betaimex {

// Positivity certificates on [-1, 1] in the variable y = cos(theta):
//   Re[A(e^{it}) e^{-it} C(e^{-it})] = (1 - y) f_k(y) / s_k,   Re[D(e^{it}) C(e^{-it})] = h_k(y).
struct CertificatePolynomials {
    RealPolynomial f, h;
};
struct ExactCertificatePolynomials {
    RationalPolynomial f, h;
};

int certificate_f_scale(SchemeOrder k);  // s_k = 1, 3, 9, 180

CertificatePolynomials certificate_polynomials(SchemeOrder k, double beta);
ExactCertificatePolynomials certificate_polynomials_exact(SchemeOrder k, const Rational& beta);

// 3 f_4(y0) = g_4(y0) at any critical point y0 of f_4.
RealPolynomial g4_polynomial(double beta);
RationalPolynomial g4_polynomial_exact(const Rational& beta);

// Closed forms of det Sly(A_k, C_k) and det Sly(D_k, C_k).
Rational closed_form_resultant_AC(SchemeOrder k, const Rational& beta);
Rational closed_form_resultant_DC(SchemeOrder k, const Rational& beta);

struct CertificateWitness {
    char polynomial;  // 'f' or 'h'
    double y;
    double value;
};

struct CertificateReport {
    int k = 0;
    double beta = 0.0;
    double resultant_AC = 0.0;
    double resultant_DC = 0.0;
    double closed_form_resultant_AC = 0.0;
    double closed_form_resultant_DC = 0.0;
    double max_root_modulus_C = 0.0;
    double min_f = 0.0, argmin_f = 0.0;
    double min_h = 0.0, argmin_h = 0.0;
    bool pass = false;
    std::optional<CertificateWitness> failure_witness;
};

CertificateReport verify_certificate(SchemeOrder k, ShiftParameter beta);

// Evenly spaced grid lo, lo + step, ..., hi (inclusive up to rounding).
std::vector<double> beta_grid(double lo, double hi, double step);
// k = 5 sweep; accepts 0 <= beta <= 100.
std::vector<CertificateReport> verify_k5_range(std::span<const double> betas);

struct Telescoping2 {
    double beta;
    double a, b, c, d, e, f;
    double Delta, E;
};

struct Telescoping3 {
    double beta;
    // expansion of (D_3, C_3)
    double a_hat, b_hat, c_hat, d_hat, e_hat, f_hat;
    double M_hat, N_hat, Delta_hat, P_hat, Q_hat;
    // expansion of (A_3, C_3)
    double a, b, c, d, e, f, g, h, i, j;
    double M, N, P, Q, R, S, W, U;
};

using TelescopingCertificate = std::variant<Telescoping2, Telescoping3>;

// Throws std::domain_error when a radicand is negative.
TelescopingCertificate telescoping_coefficients(int k, double beta);

// Max absolute difference between the two sides of the (A_k, C_k) and (D_k, C_k)
// expansions over every window of the sequence (ordered oldest to newest).
double telescoping_identity_check(int k, double beta, std::span<const double> seq);

struct ConditionMargin {
    double margin;
    bool satisfied;
};
ConditionMargin stability_condition(SchemeOrder k, double beta, double gamma);

struct ClassicalCondition {
    double lhs, rhs;
    bool satisfied;
};
double classical_eta_tilde(SchemeOrder k);
double classical_c_tilde(SchemeOrder k);
ClassicalCondition classical_condition(SchemeOrder k, double gamma);

}  // namespace betaimex
