#ifndef WAVPROD_FFT_HPP
#define WAVPROD_FFT_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wavprod::fft {

// In-place iterative radix-2 FFT. Grid sizes in this project are always
// powers of two, so nothing more general is needed.
inline void transform(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: length must be a power of two");
    for (std::size_t i = 1, rev = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; rev & bit; bit >>= 1) rev ^= bit;
        rev ^= bit;
        if (i < rev) std::swap(a[i], a[rev]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

// 2D transform of a row-major n-by-n array.
inline void transform_2d(std::vector<std::complex<double>>& a, std::size_t n, bool inverse) {
    if (a.size() != n * n)
        throw std::invalid_argument("fft: 2d size mismatch");
    std::vector<std::complex<double>> tmp(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) tmp[c] = a[r * n + c];
        transform(tmp, inverse);
        for (std::size_t c = 0; c < n; ++c) a[r * n + c] = tmp[c];
    }
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) tmp[r] = a[r * n + c];
        transform(tmp, inverse);
        for (std::size_t r = 0; r < n; ++r) a[r * n + c] = tmp[r];
    }
}

// signed frequency for bin i of an n-point transform, in [-n/2, n/2)
inline std::int64_t signed_freq(std::size_t i, std::size_t n) {
    auto k = static_cast<std::int64_t>(i);
    auto m = static_cast<std::int64_t>(n);
    return k < m / 2 ? k : k - m;
}

} // namespace wavprod::fft

#endif
