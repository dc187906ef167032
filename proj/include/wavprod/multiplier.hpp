#ifndef WAVPROD_MULTIPLIER_HPP
#define WAVPROD_MULTIPLIER_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wavprod/fft.hpp"
#include "wavprod/grid.hpp"

namespace wavprod {

// Fourier multiplier on the periodic grid. The symbol is sampled at integer
// frequencies; odd operators must satisfy symbol(-xi) = -symbol(xi) and
// symbol(0) = 0.
struct MultiplierOperator {
    int dims = 1;
    bool odd = false;
    std::function<std::complex<double>(std::array<std::int64_t, 2>)> symbol;
};

inline GridFunction apply_multiplier(const MultiplierOperator& op, const GridFunction& f) {
    if (op.dims != f.dims())
        throw std::invalid_argument("apply_multiplier: dimension mismatch");
    const std::int64_t N = f.n();
    std::vector<std::complex<double>> a(f.samples().begin(), f.samples().end());
    if (f.dims() == 1) fft::transform(a, false);
    else fft::transform_2d(a, static_cast<std::size_t>(N), false);

    for (std::size_t i = 0; i < a.size(); ++i) {
        std::array<std::int64_t, 2> xi{0, 0};
        if (f.dims() == 1) {
            xi[0] = fft::signed_freq(i, static_cast<std::size_t>(N));
        } else {
            auto sN = static_cast<std::size_t>(N);
            xi[0] = fft::signed_freq(i / sN, sN);
            xi[1] = fft::signed_freq(i % sN, sN);
        }
        // Nyquist rows have no mirror partner; an odd symbol must vanish there
        bool nyquist = (xi[0] == -N / 2) || (f.dims() == 2 && xi[1] == -N / 2);
        if (op.odd && nyquist) {
            a[i] = 0.0;
            continue;
        }
        a[i] *= op.symbol(xi);
    }
    if (f.dims() == 1) fft::transform(a, true);
    else fft::transform_2d(a, static_cast<std::size_t>(N), true);

    double worst_imag = 0.0, scale = 0.0;
    for (const auto& z : a) {
        worst_imag = std::max(worst_imag, std::abs(z.imag()));
        scale = std::max(scale, std::abs(z.real()));
    }
    if (worst_imag > 1e-10 * std::max(1.0, scale))
        throw std::runtime_error("apply_multiplier: imaginary residue above tolerance");
    GridFunction out(f.box(), f.level());
    for (std::int64_t i = 0; i < out.total_cells(); ++i)
        out[i] = a[static_cast<std::size_t>(i)].real();
    return out;
}

// j-th Riesz transform symbol -i xi_j / |xi| (Hilbert transform in 1D)
inline MultiplierOperator riesz_operator(int dims, int axis) {
    if (axis < 0 || axis >= dims)
        throw std::invalid_argument("riesz_operator: bad axis");
    MultiplierOperator op;
    op.dims = dims;
    op.odd = true;
    op.symbol = [axis](std::array<std::int64_t, 2> xi) -> std::complex<double> {
        double norm = std::sqrt(static_cast<double>(xi[0] * xi[0] + xi[1] * xi[1]));
        if (norm == 0.0) return {0.0, 0.0};
        return {0.0, -static_cast<double>(xi[static_cast<std::size_t>(axis)]) / norm};
    };
    return op;
}

} // namespace wavprod

#endif
