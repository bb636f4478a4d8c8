#pragma once

#include "betaimex/coefficients.hpp"
#include "betaimex/polynomial.hpp"

#include <cstdint>
#include <vector>

namespace betaimex {

struct Window {
    double re_lo = -12.0, re_hi = 4.0, im_lo = -8.0, im_hi = 8.0;
};

struct StabilityGrid {
    Window window;
    int nx = 0, ny = 0;
    // mask[iy * nx + ix] is the cell centred at re_lo + (ix + 0.5) dx, im_lo + (iy + 0.5) dy
    std::vector<std::uint8_t> mask;
    double area = 0.0;

    bool stable(int ix, int iy) const { return mask[static_cast<std::size_t>(iy) * nx + ix] != 0; }
    double re(int ix) const { return window.re_lo + (ix + 0.5) * (window.re_hi - window.re_lo) / nx; }
    double im(int iy) const { return window.im_lo + (iy + 0.5) * (window.im_hi - window.im_lo) / ny; }
};

struct RootConditionOptions {
    double tau = 1e-9;
    double separation = 1e-6;
};

// Coefficient of w^q is a_q - z b'_q with b'_0 = 0 and b'_q = b_{q-1}.
std::vector<ComplexValue> characteristic_coeffs(const SchemeCoefficients& s, ComplexValue z);
std::vector<ComplexValue> characteristic_coeffs(SchemeOrder k, ShiftParameter beta, ComplexValue z);

bool satisfies_root_condition(std::span<const ComplexValue> coeffs, RootConditionOptions opt = {});
bool is_stable(const SchemeCoefficients& s, ComplexValue z, RootConditionOptions opt = {});
bool is_stable(SchemeOrder k, ShiftParameter beta, ComplexValue z, RootConditionOptions opt = {});

StabilityGrid scan_region(const SchemeCoefficients& s, Window window, int nx, int ny,
                          RootConditionOptions opt = {});
StabilityGrid scan_region(SchemeOrder k, ShiftParameter beta, Window window = {}, int nx = 600, int ny = 600);

}  // namespace betaimex
