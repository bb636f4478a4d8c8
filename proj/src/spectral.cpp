#include "betaimex/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace betaimex {

using std::numbers::pi;

Grid2D::Grid2D(int nx_, int ny_, double lx_, double ly_, double x0_, double y0_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_), x0(x0_), y0(y0_) {
    if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0)
        throw std::invalid_argument("Grid2D: nx and ny must be even and >= 2");
    if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("Grid2D: lengths must be positive");
}

double Grid2D::wavenumber_x(int kx) const { return 2.0 * pi * kx / lx; }

double Grid2D::wavenumber_y(int ky) const {
    const int m = ky <= ny / 2 ? ky : ky - ny;
    return 2.0 * pi * m / ly;
}

struct FourierTransform2D::Impl {
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr, inv = nullptr;
    std::size_t n = 0, nc = 0;

    ~Impl() {
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
        if (real) fftw_free(real);
        if (cplx) fftw_free(cplx);
    }
};

FourierTransform2D::FourierTransform2D(const Grid2D& g) : grid_(g), impl_(std::make_unique<Impl>()) {
    impl_->n = g.size();
    impl_->nc = g.spectral_size();
    impl_->real = fftw_alloc_real(impl_->n);
    impl_->cplx = fftw_alloc_complex(impl_->nc);
    if (!impl_->real || !impl_->cplx) throw std::bad_alloc();
    // FFTW_ESTIMATE keeps plans (and therefore results) independent of timing measurements.
    impl_->fwd = fftw_plan_dft_r2c_2d(g.ny, g.nx, impl_->real, impl_->cplx, FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_2d(g.ny, g.nx, impl_->cplx, impl_->real, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->inv) throw std::runtime_error("FourierTransform2D: plan creation failed");
}

FourierTransform2D::~FourierTransform2D() = default;

void FourierTransform2D::forward(std::span<const double> in, std::span<Complex> out) {
    if (in.size() != impl_->n || out.size() != impl_->nc) throw std::invalid_argument("forward: size mismatch");
    std::copy(in.begin(), in.end(), impl_->real);
    fftw_execute(impl_->fwd);
    const double s = 1.0 / static_cast<double>(impl_->n);
    for (std::size_t i = 0; i < impl_->nc; ++i) out[i] = Complex(impl_->cplx[i][0] * s, impl_->cplx[i][1] * s);
}

void FourierTransform2D::inverse(std::span<const Complex> in, std::span<double> out) {
    if (in.size() != impl_->nc || out.size() != impl_->n) throw std::invalid_argument("inverse: size mismatch");
    for (std::size_t i = 0; i < impl_->nc; ++i) {
        impl_->cplx[i][0] = in[i].real();
        impl_->cplx[i][1] = in[i].imag();
    }
    fftw_execute(impl_->inv);
    std::copy(impl_->real, impl_->real + impl_->n, out.begin());
}

std::vector<Complex> FourierTransform2D::forward(const SpectralField2D& f) {
    std::vector<Complex> out(impl_->nc);
    forward(f.values, out);
    return out;
}

SpectralField2D FourierTransform2D::inverse(std::span<const Complex> coeffs) {
    SpectralField2D f(grid_);
    inverse(coeffs, f.values);
    return f;
}

void validate(const PhaseFieldParams& p) {
    if (!(p.mobility > 0.0)) throw std::invalid_argument("mobility must be positive");
    if (!(p.eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (p.alpha != 0 && p.alpha != 1) throw std::invalid_argument("alpha must be 0 or 1");
}

double linear_symbol(const PhaseFieldParams& p, double xi_x, double xi_y) {
    const double k2 = xi_x * xi_x + xi_y * xi_y;
    return p.mobility * std::pow(k2, p.alpha + 1);
}

PhaseFieldModel::PhaseFieldModel(Grid2D grid, PhaseFieldParams params)
    : grid_(grid), params_(params), fft_(grid) {
    validate(params_);
    const int nxh = grid_.nx / 2 + 1;
    const std::size_t nc = grid_.spectral_size();
    symbol_.resize(nc);
    nl_scale_.resize(nc);
    ksq_.resize(nc);
    for (int ky = 0; ky < grid_.ny; ++ky) {
        const double xy = grid_.wavenumber_y(ky);
        const int my = ky <= grid_.ny / 2 ? ky : grid_.ny - ky;
        for (int kx = 0; kx < nxh; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * nxh + kx;
            const double xx = grid_.wavenumber_x(kx);
            const double k2 = xx * xx + xy * xy;
            ksq_[i] = k2;
            symbol_[i] = linear_symbol(params_, xx, xy);
            double s = -params_.mobility * (params_.alpha == 1 ? k2 : 1.0) / (params_.eps * params_.eps);
            if (params_.dealias && (3 * kx > grid_.nx || 3 * my > grid_.ny)) s = 0.0;
            nl_scale_[i] = s;
        }
    }
    phys_.resize(grid_.size());
    work_.resize(grid_.size());
    spec_.resize(nc);
}

void PhaseFieldModel::nonlinear(std::span<const Complex> uhat, std::span<Complex> out) {
    fft_.inverse(uhat, phys_);
    for (std::size_t i = 0; i < phys_.size(); ++i) {
        const double u = phys_[i];
        work_[i] = u * (1.0 - u * u);
    }
    fft_.forward(work_, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= nl_scale_[i];
}

SpectralField2D PhaseFieldModel::nonlinear_term(const SpectralField2D& u) {
    auto uhat = fft_.forward(u);
    std::vector<Complex> out(uhat.size());
    nonlinear(uhat, out);
    return fft_.inverse(out);
}

double PhaseFieldModel::free_energy(const SpectralField2D& u) {
    fft_.forward(u.values, spec_);
    const int nxh = grid_.nx / 2 + 1;
    double grad = 0.0;
    for (int ky = 0; ky < grid_.ny; ++ky) {
        for (int kx = 0; kx < nxh; ++kx) {
            const std::size_t i = static_cast<std::size_t>(ky) * nxh + kx;
            // modes 1..nx/2-1 stand for themselves and their conjugate partners
            const double w = (kx == 0 || kx == grid_.nx / 2) ? 1.0 : 2.0;
            grad += w * ksq_[i] * std::norm(spec_[i]);
        }
    }
    double well = 0.0;
    for (double v : u.values) {
        const double s = 1.0 - v * v;
        well += s * s;
    }
    const double e2 = params_.eps * params_.eps;
    return 0.5 * grad * grid_.area() + well * grid_.cell_area() / (4.0 * e2);
}

double PhaseFieldModel::max_norm(std::span<const Complex> uhat) {
    fft_.inverse(uhat, phys_);
    double m = 0.0;
    for (double v : phys_) {
        if (!std::isfinite(v)) return v;
        m = std::max(m, std::abs(v));
    }
    return m;
}

ProblemSpec<Complex> PhaseFieldModel::problem(const SpectralField2D& u0) {
    if (u0.grid.nx != grid_.nx || u0.grid.ny != grid_.ny) throw std::invalid_argument("problem: grid mismatch");
    ProblemSpec<Complex> spec;
    spec.linear_symbol = symbol_;
    spec.nonlinear = [this](std::span<const Complex> in, std::span<Complex> out) { nonlinear(in, out); };
    spec.initial = fft_.forward(u0);
    spec.max_norm = [this](std::span<const Complex> in) { return max_norm(in); };
    return spec;
}

double free_energy(const PhaseFieldParams& p, const SpectralField2D& u) {
    PhaseFieldModel m(u.grid, p);
    return m.free_energy(u);
}

SpectralField2D nonlinear_term(const PhaseFieldParams& p, const SpectralField2D& u) {
    PhaseFieldModel m(u.grid, p);
    return m.nonlinear_term(u);
}

SpectralField2D manufactured_solution(const Grid2D& g, double t) {
    SpectralField2D f(g);
    const double st = std::sin(t);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            f.at(ix, iy) = std::exp(std::sin(pi * g.x(ix)) * std::sin(pi * g.y(iy))) * st;
    return f;
}

SpectralField2D manufactured_source(const Grid2D& g, const PhaseFieldParams& p, double t) {
    if (p.alpha != 0) throw std::invalid_argument("manufactured_source: defined for alpha = 0");
    SpectralField2D f(g);
    const double st = std::sin(t), ct = std::cos(t);
    const double m = p.mobility, e2 = p.eps * p.eps;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double sy = std::sin(pi * g.y(iy)), cy = std::cos(pi * g.y(iy));
        for (int ix = 0; ix < g.nx; ++ix) {
            const double sx = std::sin(pi * g.x(ix)), cx = std::cos(pi * g.x(ix));
            const double s = sx * sy;
            const double es = std::exp(s);
            const double grad2 = pi * pi * (cx * cx * sy * sy + sx * sx * cy * cy);
            const double phi = es * st;
            const double lap = es * (grad2 - 2.0 * pi * pi * s) * st;
            f.at(ix, iy) = es * ct - m * lap - (m / e2) * phi * (1.0 - phi * phi);
        }
    }
    return f;
}

namespace {

// Area fraction of a triangle where the linear interpolant of (a, b, c) is positive.
double positive_fraction(double a, double b, double c) {
    const int npos = (a > 0) + (b > 0) + (c > 0);
    if (npos == 0) return 0.0;
    if (npos == 3) return 1.0;
    auto lone = [](double p, double q, double r) { return p * p / ((p - q) * (p - r)); };
    if (npos == 1) {
        if (a > 0) return lone(a, b, c);
        if (b > 0) return lone(b, a, c);
        return lone(c, a, b);
    }
    if (a <= 0) return 1.0 - lone(a, b, c);
    if (b <= 0) return 1.0 - lone(b, a, c);
    return 1.0 - lone(c, a, b);
}

}  // namespace

double radius_of_circle(const SpectralField2D& u, double threshold) {
    const Grid2D& g = u.grid;
    double frac = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const int jy = (iy + 1) % g.ny;
        for (int ix = 0; ix < g.nx; ++ix) {
            const int jx = (ix + 1) % g.nx;
            const double v00 = u.at(ix, iy) - threshold, v10 = u.at(jx, iy) - threshold;
            const double v01 = u.at(ix, jy) - threshold, v11 = u.at(jx, jy) - threshold;
            frac += 0.5 * (positive_fraction(v00, v10, v11) + positive_fraction(v00, v11, v01));
        }
    }
    const double area = frac * g.cell_area();
    if (area <= 0.0) throw std::domain_error("radius_of_circle: empty positive set");
    if (area > 0.95 * g.area()) throw std::domain_error("radius_of_circle: positive set covers > 95% of the domain");
    return std::sqrt(area / pi);
}

}  // namespace betaimex
