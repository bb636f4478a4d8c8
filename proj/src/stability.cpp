#include "betaimex/stability.hpp"

#include <cmath>
#include <stdexcept>

namespace betaimex {

std::vector<ComplexValue> characteristic_coeffs(const SchemeCoefficients& s, ComplexValue z) {
    std::vector<ComplexValue> c(s.a.size());
    for (std::size_t q = 0; q < c.size(); ++q) {
        const double bq = q == 0 ? 0.0 : s.b[q - 1];
        c[q] = s.a[q] - z * bq;
    }
    return c;
}

std::vector<ComplexValue> characteristic_coeffs(SchemeOrder k, ShiftParameter beta, ComplexValue z) {
    return characteristic_coeffs(scheme_coefficients(k, beta), z);
}

bool satisfies_root_condition(std::span<const ComplexValue> coeffs, RootConditionOptions opt) {
    // A vanishing leading coefficient sends a root to infinity.
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    if (coeffs.empty() || std::abs(coeffs.back()) <= 1e-14 * scale) return false;
    const auto rts = roots(coeffs);
    for (std::size_t i = 0; i < rts.size(); ++i) {
        const double r = std::abs(rts[i]);
        if (r > 1.0 + opt.tau) return false;
        if (r > 1.0 - opt.tau) {
            for (std::size_t j = 0; j < rts.size(); ++j)
                if (j != i && std::abs(rts[i] - rts[j]) <= opt.separation) return false;
        }
    }
    return true;
}

bool is_stable(const SchemeCoefficients& s, ComplexValue z, RootConditionOptions opt) {
    const auto c = characteristic_coeffs(s, z);
    return satisfies_root_condition(c, opt);
}

bool is_stable(SchemeOrder k, ShiftParameter beta, ComplexValue z, RootConditionOptions opt) {
    return is_stable(scheme_coefficients(k, beta), z, opt);
}

StabilityGrid scan_region(const SchemeCoefficients& s, Window window, int nx, int ny, RootConditionOptions opt) {
    if (!(window.re_lo < window.re_hi) || !(window.im_lo < window.im_hi))
        throw std::invalid_argument("scan_region: empty window");
    if (nx <= 0 || ny <= 0) throw std::invalid_argument("scan_region: resolution must be positive");
    StabilityGrid g;
    g.window = window;
    g.nx = nx;
    g.ny = ny;
    g.mask.assign(static_cast<std::size_t>(nx) * ny, 0);
    const double cell = (window.re_hi - window.re_lo) / nx * (window.im_hi - window.im_lo) / ny;
    std::size_t count = 0;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const bool st = is_stable(s, ComplexValue(g.re(ix), g.im(iy)), opt);
            g.mask[static_cast<std::size_t>(iy) * nx + ix] = st ? 1 : 0;
            count += st;
        }
    }
    g.area = static_cast<double>(count) * cell;
    return g;
}

StabilityGrid scan_region(SchemeOrder k, ShiftParameter beta, Window window, int nx, int ny) {
    return scan_region(scheme_coefficients(k, beta), window, nx, ny);
}

}  // namespace betaimex
