#pragma once

#include "betaimex/integrator.hpp"

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace betaimex {

using Complex = std::complex<double>;

// Periodic rectangle [x0, x0 + lx) x [y0, y0 + ly) sampled on nx x ny points (both even).
struct Grid2D {
    int nx = 0, ny = 0;
    double lx = 1.0, ly = 1.0;
    double x0 = 0.0, y0 = 0.0;

    Grid2D() = default;
    Grid2D(int nx, int ny, double lx, double ly, double x0 = 0.0, double y0 = 0.0);

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    // r2c half spectrum: ny rows of nx/2 + 1 modes
    std::size_t spectral_size() const { return static_cast<std::size_t>(ny) * (nx / 2 + 1); }
    double x(int ix) const { return x0 + lx * ix / nx; }
    double y(int iy) const { return y0 + ly * iy / ny; }
    double cell_area() const { return lx * ly / (static_cast<double>(nx) * ny); }
    double area() const { return lx * ly; }
    double wavenumber_x(int kx) const;  // kx in 0..nx/2
    double wavenumber_y(int ky) const;  // ky in 0..ny-1, folded to the signed frequency
};

// Physical values, row-major: values[iy * nx + ix].
struct SpectralField2D {
    Grid2D grid;
    std::vector<double> values;

    SpectralField2D() = default;
    explicit SpectralField2D(Grid2D g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
};

// Normalised 2D real transform: forward divides by nx * ny so the zero mode is the mean.
class FourierTransform2D {
public:
    explicit FourierTransform2D(const Grid2D& g);
    ~FourierTransform2D();
    FourierTransform2D(const FourierTransform2D&) = delete;
    FourierTransform2D& operator=(const FourierTransform2D&) = delete;

    void forward(std::span<const double> in, std::span<Complex> out);
    void inverse(std::span<const Complex> in, std::span<double> out);
    std::vector<Complex> forward(const SpectralField2D& f);
    SpectralField2D inverse(std::span<const Complex> coeffs);
    const Grid2D& grid() const { return grid_; }

private:
    struct Impl;
    Grid2D grid_;
    std::unique_ptr<Impl> impl_;
};

struct PhaseFieldParams {
    double mobility = 1.0;
    double eps = 1.0;
    int alpha = 0;  // 0 Allen-Cahn, 1 Cahn-Hilliard
    bool dealias = false;
};

void validate(const PhaseFieldParams& p);

// m |xi|^{2(alpha+1)}
double linear_symbol(const PhaseFieldParams& p, double xi_x, double xi_y);

// Spectral discretisation of u_t + m(-Lap)^{alpha+1} u - m(-Lap)^alpha (1/eps^2) u(1-u^2) = f.
class PhaseFieldModel {
public:
    PhaseFieldModel(Grid2D grid, PhaseFieldParams params);

    const Grid2D& grid() const { return grid_; }
    const PhaseFieldParams& params() const { return params_; }
    const std::vector<double>& symbol() const { return symbol_; }
    FourierTransform2D& transform() { return fft_; }

    // G[u] for Fourier coefficients in and out.
    void nonlinear(std::span<const Complex> uhat, std::span<Complex> out);
    SpectralField2D nonlinear_term(const SpectralField2D& u);
    double free_energy(const SpectralField2D& u);
    double max_norm(std::span<const Complex> uhat);
    double mean(std::span<const Complex> uhat) const { return uhat[0].real(); }

    // Builds the integrator problem; source and exact map physical fields through the transform.
    ProblemSpec<Complex> problem(const SpectralField2D& u0);

private:
    Grid2D grid_;
    PhaseFieldParams params_;
    FourierTransform2D fft_;
    std::vector<double> symbol_;   // m |xi|^{2(alpha+1)}
    std::vector<double> nl_scale_; // -m |xi|^{2 alpha} / eps^2, zero outside the 2/3 band when dealiasing
    std::vector<double> ksq_;
    std::vector<double> phys_, work_;
    std::vector<Complex> spec_;
};

double free_energy(const PhaseFieldParams& p, const SpectralField2D& u);
SpectralField2D nonlinear_term(const PhaseFieldParams& p, const SpectralField2D& u);

// phi = exp(sin(pi x) sin(pi y)) sin(t) and the source that makes it exact for the model.
SpectralField2D manufactured_solution(const Grid2D& g, double t);
SpectralField2D manufactured_source(const Grid2D& g, const PhaseFieldParams& p, double t);

// sqrt(area{u > threshold} / pi) from a piecewise-linear interpolant on split cells.
double radius_of_circle(const SpectralField2D& u, double threshold = 0.0);

}  // namespace betaimex
