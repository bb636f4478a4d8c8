#pragma once

#include "betaimex/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace betaimex {

// u_t + L u + G[u] = f with L diagonal (one nonnegative symbol entry per degree of freedom).
template <class Scalar>
struct ProblemSpec {
    using Field = std::vector<Scalar>;
    std::vector<double> linear_symbol;
    std::function<void(std::span<const Scalar>, std::span<Scalar>)> nonlinear;  // out = G[u]; empty means G = 0
    std::function<void(double, std::span<Scalar>)> source;                      // out = f(t); empty means f = 0
    Field initial;
    std::function<void(double, std::span<Scalar>)> exact;            // needed by the exact starter
    std::function<double(std::span<const Scalar>)> max_norm;         // blow-up monitor; default max |u_i|
};

enum class StarterKind { exact, rk4_substep };

struct Starter {
    StarterKind kind = StarterKind::rk4_substep;
    int substeps = 0;  // 0 picks max(10, ceil(dt * max symbol / 2.5))
};

inline constexpr double kBlowUpThreshold = 1e10;

class BlowUpError : public std::runtime_error {
public:
    BlowUpError(long step, double time, std::string reason)
        : std::runtime_error(describe(step, time, reason)), step_(step), time_(time), reason_(std::move(reason)) {}
    long step() const noexcept { return step_; }
    double time() const noexcept { return time_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    static std::string describe(long step, double time, const std::string& reason) {
        std::ostringstream os;
        os << "blow-up at step " << step << " (t = " << time << "): " << reason;
        return os.str();
    }
    long step_;
    double time_;
    std::string reason_;
};

template <class Scalar>
class IntegratorState {
public:
    using Field = std::vector<Scalar>;

    IntegratorState(SchemeCoefficients coeffs, double dt, std::vector<Field> history, long newest_index)
        : coeffs_(std::move(coeffs)), dt_(dt), ring_(std::move(history)), n_(newest_index) {
        if (ring_.size() != static_cast<std::size_t>(coeffs_.k))
            throw std::invalid_argument("IntegratorState: history length must equal k");
    }

    int k() const noexcept { return coeffs_.k; }
    double dt() const noexcept { return dt_; }
    long step_index() const noexcept { return n_; }
    double time() const noexcept { return static_cast<double>(n_) * dt_; }
    const SchemeCoefficients& coefficients() const noexcept { return coeffs_; }
    // i = 0 is the oldest level u^{n+1-k}, i = k-1 the newest u^n
    const Field& history(int i) const { return ring_[(head_ + static_cast<std::size_t>(i)) % ring_.size()]; }
    const Field& current() const { return history(k() - 1); }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

    // Overwrites the oldest slot with next and makes it the newest level.
    void push(Field&& next) {
        ring_[head_] = std::move(next);
        head_ = (head_ + 1) % ring_.size();
        ++n_;
    }

    // scratch space reused across steps
    Field work_ext, work_g, work_f, work_next;
    std::vector<double> inv_den;

private:
    SchemeCoefficients coeffs_;
    double dt_;
    std::vector<Field> ring_;
    std::size_t head_ = 0;
    long n_;
    std::vector<std::string> warnings_;
};

namespace detail {

template <class Scalar>
bool all_finite(std::span<const Scalar> u) {
    for (const auto& v : u) {
        if constexpr (std::is_floating_point_v<Scalar>) {
            if (!std::isfinite(v)) return false;
        } else {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        }
    }
    return true;
}

template <class Scalar>
double max_abs(std::span<const Scalar> u) {
    double m = 0.0;
    for (const auto& v : u) m = std::max(m, static_cast<double>(std::abs(v)));
    return m;
}

template <class Scalar>
void check_state(const ProblemSpec<Scalar>& spec, std::span<const Scalar> u, long step, double t) {
    if (!all_finite(u)) throw BlowUpError(step, t, "non-finite value");
    const double norm = spec.max_norm ? spec.max_norm(u) : max_abs(u);
    if (!std::isfinite(norm)) throw BlowUpError(step, t, "non-finite value");
    if (norm > kBlowUpThreshold) {
        std::ostringstream os;
        os << "max-norm " << norm << " exceeds " << kBlowUpThreshold;
        throw BlowUpError(step, t, os.str());
    }
}

// Full right-hand side -L u - G[u] + f(t).
template <class Scalar>
void full_rhs(const ProblemSpec<Scalar>& spec, double t, std::span<const Scalar> u, std::span<Scalar> out,
              std::vector<Scalar>& tmp) {
    const std::size_t n = u.size();
    tmp.resize(n);
    if (spec.source) spec.source(t, out);
    else std::fill(out.begin(), out.end(), Scalar(0));
    for (std::size_t i = 0; i < n; ++i) out[i] -= spec.linear_symbol[i] * u[i];
    if (spec.nonlinear) {
        spec.nonlinear(u, tmp);
        for (std::size_t i = 0; i < n; ++i) out[i] -= tmp[i];
    }
}

template <class Scalar>
std::vector<Scalar> rk4(const ProblemSpec<Scalar>& spec, std::vector<Scalar> u, double t0, double dt, int substeps) {
    const std::size_t n = u.size();
    const double h = dt / substeps;
    std::vector<Scalar> k1(n), k2(n), k3(n), k4(n), tmp(n), scratch;
    for (int s = 0; s < substeps; ++s) {
        const double t = t0 + s * h;
        full_rhs<Scalar>(spec, t, u, k1, scratch);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * h * k1[i];
        full_rhs<Scalar>(spec, t + 0.5 * h, tmp, k2, scratch);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * h * k2[i];
        full_rhs<Scalar>(spec, t + 0.5 * h, tmp, k3, scratch);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * k3[i];
        full_rhs<Scalar>(spec, t + h, tmp, k4, scratch);
        for (std::size_t i = 0; i < n; ++i) u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return u;
}

}  // namespace detail

inline int rk4_substeps(double dt, std::span<const double> symbol, int requested = 0) {
    if (requested > 0) return requested;
    double lmax = 0.0;
    for (double l : symbol) lmax = std::max(lmax, l);
    return std::max(10, static_cast<int>(std::ceil(dt * lmax / 2.5)));
}

template <class Scalar>
IntegratorState<Scalar> initialize(const ProblemSpec<Scalar>& spec, const SchemeCoefficients& coeffs, double dt,
                                   Starter starter = {}) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("initialize: dt must be positive");
    const std::size_t n = spec.linear_symbol.size();
    if (spec.initial.size() != n) throw std::invalid_argument("initialize: initial state has wrong size");
    if (!detail::all_finite<Scalar>(spec.initial)) throw std::invalid_argument("initialize: non-finite initial data");
    for (double l : spec.linear_symbol)
        if (!(l >= 0.0)) throw std::invalid_argument("initialize: linear symbol must be nonnegative");

    const int k = coeffs.k;
    std::vector<std::vector<Scalar>> hist;
    hist.reserve(static_cast<std::size_t>(k));
    hist.push_back(spec.initial);
    std::vector<std::string> warnings;
    if (starter.kind == StarterKind::exact) {
        if (!spec.exact) throw std::invalid_argument("initialize: exact starter needs an exact solution");
        for (int i = 1; i < k; ++i) {
            std::vector<Scalar> u(n);
            spec.exact(i * dt, u);
            hist.push_back(std::move(u));
        }
    } else {
        const int m = rk4_substeps(dt, spec.linear_symbol, starter.substeps);
        if (k >= 5)
            warnings.push_back("k = 5 with the RK4 starter: the O(dt_sub^4) starter error may dominate the scheme error");
        for (int i = 1; i < k; ++i) hist.push_back(detail::rk4(spec, hist.back(), (i - 1) * dt, dt, m));
        if (k > 1) warnings.push_back("rk4 starter with " + std::to_string(m) + " substeps per step");
    }
    for (int i = 1; i < k; ++i) detail::check_state<Scalar>(spec, hist[i], i, i * dt);

    IntegratorState<Scalar> st(coeffs, dt, std::move(hist), k - 1);
    for (auto& w : warnings) st.add_warning(std::move(w));
    st.inv_den.resize(n);
    const double ak = coeffs.a.back() / dt, bk = coeffs.b.back();
    for (std::size_t i = 0; i < n; ++i) {
        const double den = ak + bk * spec.linear_symbol[i];
        if (!(den > 0.0)) throw std::domain_error("initialize: implicit denominator is not positive");
        st.inv_den[i] = 1.0 / den;
    }
    return st;
}

template <class Scalar>
void advance(IntegratorState<Scalar>& st, const ProblemSpec<Scalar>& spec) {
    const auto& s = st.coefficients();
    const int k = s.k;
    const std::size_t n = spec.linear_symbol.size();
    const double dt = st.dt();
    const double t_src = (static_cast<double>(st.step_index()) + s.beta) * dt;

    auto& ext = st.work_ext;
    auto& g = st.work_g;
    auto& f = st.work_f;
    auto& next = st.work_next;
    ext.assign(n, Scalar(0));
    next.resize(n);
    for (int q = 0; q < k; ++q) {
        const auto& h = st.history(q);
        for (std::size_t i = 0; i < n; ++i) ext[i] += s.c[q] * h[i];
    }
    if (spec.nonlinear) {
        g.resize(n);
        spec.nonlinear(ext, g);
    }
    if (spec.source) {
        f.resize(n);
        spec.source(t_src, f);
    }
    std::vector<const Scalar*> hp(static_cast<std::size_t>(k));
    for (int q = 0; q < k; ++q) hp[q] = st.history(q).data();
    for (std::size_t i = 0; i < n; ++i) {
        Scalar acc_a(0), acc_b(0);
        for (int q = 0; q < k; ++q) acc_a += s.a[q] * hp[q][i];
        for (int q = 0; q + 1 < k; ++q) acc_b += s.b[q] * hp[q + 1][i];
        Scalar rhs = -acc_a / dt - spec.linear_symbol[i] * acc_b;
        if (spec.source) rhs += f[i];
        if (spec.nonlinear) rhs -= g[i];
        next[i] = rhs * st.inv_den[i];
    }
    detail::check_state<Scalar>(spec, next, st.step_index() + 1, (st.step_index() + 1) * dt);
    std::vector<Scalar> out(n);
    out.swap(next);
    st.push(std::move(out));
}

template <class Scalar>
IntegratorState<Scalar> step(IntegratorState<Scalar> st, const ProblemSpec<Scalar>& spec) {
    advance(st, spec);
    return st;
}

template <class Scalar>
using Observer = std::function<void(const IntegratorState<Scalar>&)>;

template <class Scalar>
struct RunSummary {
    bool completed = false;
    long steps = 0;  // index of the last computed level
    double final_time = 0.0;
    std::optional<long> blow_up_step;
    std::string blow_up_reason;
    std::vector<Scalar> last_finite;
    std::vector<double> observed_times;
    std::vector<std::string> warnings;
};

// Advances to the first level >= T; observers fire at level k-1, every stride levels and at the end.
template <class Scalar>
RunSummary<Scalar> run(const ProblemSpec<Scalar>& spec, const SchemeCoefficients& coeffs, double dt, double T,
                       Starter starter = {}, const std::vector<Observer<Scalar>>& observers = {}, long stride = 1) {
    if (!(T >= coeffs.k * dt)) throw std::invalid_argument("run: need T >= k dt");
    if (stride < 1) throw std::invalid_argument("run: stride must be >= 1");
    RunSummary<Scalar> sum;
    const long last = static_cast<long>(std::ceil(T / dt - 1e-9));
    auto notify = [&](const IntegratorState<Scalar>& st) {
        for (const auto& ob : observers) ob(st);
        sum.observed_times.push_back(st.time());
    };
    std::optional<IntegratorState<Scalar>> st;
    try {
        st.emplace(initialize(spec, coeffs, dt, starter));
    } catch (const BlowUpError& e) {
        sum.blow_up_step = e.step();
        sum.blow_up_reason = e.reason();
        sum.last_finite = spec.initial;
        return sum;
    }
    sum.warnings = st->warnings();
    notify(*st);
    long since = 0;
    try {
        while (st->step_index() < last) {
            advance(*st, spec);
            if (++since == stride || st->step_index() == last) {
                notify(*st);
                since = 0;
            }
        }
        sum.completed = true;
    } catch (const BlowUpError& e) {
        sum.blow_up_step = e.step();
        sum.blow_up_reason = e.reason();
    }
    sum.steps = st->step_index();
    sum.final_time = st->time();
    sum.last_finite = st->current();
    return sum;
}

}  // namespace betaimex
