#ifndef WAVPROD_SPACES_HPP
#define WAVPROD_SPACES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavprod/fft.hpp"
#include "wavprod/grid.hpp"
#include "wavprod/wavelet.hpp"

namespace wavprod {

// theta(x,t) = t / (log(e+|x|) + log(e+t)), the position-dependent Orlicz
// growth function. |x| is the Euclidean distance from the coordinate origin.
inline double theta(const std::array<double, 2>& x, int dims, double t) {
    if (t < 0.0) throw std::invalid_argument("theta: t must be non-negative");
    if (t == 0.0) return 0.0;
    double r2 = x[0] * x[0];
    if (dims == 2) r2 += x[1] * x[1];
    double r = std::sqrt(r2);
    return t / (std::log(std::numbers::e + r) + std::log(std::numbers::e + t));
}

namespace detail {

inline double theta_integral(const GridFunction& f, double lambda) {
    double s = 0.0;
    const std::int64_t n = f.n();
    if (f.dims() == 1) {
        for (std::int64_t i = 0; i < n; ++i)
            s += theta(f.midpoint(i), 1, std::abs(f[i]) / lambda);
    } else {
        for (std::int64_t i0 = 0; i0 < n; ++i0)
            for (std::int64_t i1 = 0; i1 < n; ++i1)
                s += theta(f.midpoint(i0, i1), 2, std::abs(f.at(i0, i1)) / lambda);
    }
    return s * f.cell_volume();
}

} // namespace detail

// Luxemburg quasi-norm inf{lambda>0 : int theta(x,|f|/lambda) dx <= 1},
// computed by bisection on the monotone scalar root.
inline double luxemburg_log_norm(const GridFunction& f) {
    double linf = 0.0;
    for (double v : f.samples()) {
        if (!std::isfinite(v)) throw std::invalid_argument("luxemburg_log_norm: non-finite input");
        linf = std::max(linf, std::abs(v));
    }
    if (linf == 0.0) return 0.0;
    double box_vol = std::pow(f.box().side, f.dims());
    double lo = std::numeric_limits<double>::min();
    double hi = linf * box_vol + 1.0; // theta(x,t) <= t forces the integral <= 1 here
    if (detail::theta_integral(f, hi) > 1.0)
        throw std::runtime_error("luxemburg_log_norm: upper bracket failed");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (detail::theta_integral(f, mid) > 1.0) lo = mid; else hi = mid;
        if (hi - lo <= 1e-10 * hi) return 0.5 * (lo + hi);
    }
    throw std::runtime_error("luxemburg_log_norm: bisection did not converge; bracket [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

inline double l1_norm(const GridFunction& f) {
    double s = 0.0;
    for (double v : f.samples()) s += std::abs(v);
    return s * f.cell_volume();
}
inline double l2_norm(const GridFunction& f) {
    double s = 0.0;
    for (double v : f.samples()) s += v * v;
    return std::sqrt(s * f.cell_volume());
}
inline double linf_norm(const GridFunction& f) {
    double s = 0.0;
    for (double v : f.samples()) s = std::max(s, std::abs(v));
    return s;
}

namespace detail {

// per-level sums of squared detail coefficients, indexed by box-relative
// cube position (the filter phase shift is applied here)
inline std::vector<std::vector<double>> level_energies(const WaveletCoeffs& c) {
    std::vector<std::vector<double>> energy;
    const int phase = c.filter().phase();
    for (int j = c.j0(); j < c.J(); ++j) {
        const std::int64_t nj = c.n_at(j);
        std::vector<double> e(static_cast<std::size_t>(c.cells_at(j)), 0.0);
        for (int lam = 1; lam <= c.lambda_count(); ++lam) {
            const auto& b = c.detail(j, lam);
            for (std::int64_t q = 0; q < static_cast<std::int64_t>(b.size()); ++q) {
                double v = b[static_cast<std::size_t>(q)];
                if (v == 0.0) continue;
                std::int64_t k;
                if (c.dims() == 1) {
                    k = (q + phase) % nj;
                } else {
                    std::int64_t k0 = (q / nj + phase) % nj;
                    std::int64_t k1 = (q % nj + phase) % nj;
                    k = k0 * nj + k1;
                }
                e[static_cast<std::size_t>(k)] += v * v;
            }
        }
        energy.push_back(std::move(e));
    }
    return energy;
}

} // namespace detail

// sup over dyadic cubes R of (|R|^-1 sum_{I subset R} |<g,psi_I>|^2)^(1/2),
// computed bottom-up over the coefficient tree.
inline double bmo_wavelet_norm(const WaveletCoeffs& c) {
    auto energy = detail::level_energies(c);
    const int n = c.dims();
    double best = 0.0;
    // cumulative sums from the finest level down to the full box
    std::vector<double> acc;
    for (int r = c.J() - 1; r >= c.box().min_level(); --r) {
        const std::int64_t nr = c.n_at(r);
        std::vector<double> cur(static_cast<std::size_t>(n == 2 ? nr * nr : nr), 0.0);
        if (!acc.empty()) {
            const std::int64_t nc = 2 * nr;
            if (n == 1) {
                for (std::int64_t k = 0; k < nr; ++k)
                    cur[static_cast<std::size_t>(k)] =
                        acc[static_cast<std::size_t>(2 * k)] + acc[static_cast<std::size_t>(2 * k + 1)];
            } else {
                for (std::int64_t k0 = 0; k0 < nr; ++k0)
                    for (std::int64_t k1 = 0; k1 < nr; ++k1) {
                        double s = 0.0;
                        for (int a = 0; a < 2; ++a)
                            for (int b = 0; b < 2; ++b)
                                s += acc[static_cast<std::size_t>((2 * k0 + a) * nc + (2 * k1 + b))];
                        cur[static_cast<std::size_t>(k0 * nr + k1)] = s;
                    }
            }
        }
        if (r >= c.j0()) {
            const auto& e = energy[static_cast<std::size_t>(r - c.j0())];
            for (std::size_t i = 0; i < cur.size(); ++i) cur[i] += e[i];
        }
        const double inv_vol = std::ldexp(1.0, r * n); // |R|^-1
        for (double v : cur) best = std::max(best, v * inv_vol);
        acc = std::move(cur);
    }
    return std::sqrt(best);
}

// |mean over the unit cube| + BMO norm. The unit cube is anchored at the
// box origin; it must fit in the box.
inline double bmo_plus_norm(const GridFunction& f, const WaveletCoeffs& c) {
    if (f.box().side < 1.0)
        throw std::invalid_argument("bmo_plus_norm: unit cube exceeds the box");
    const std::int64_t nq = static_cast<std::int64_t>(std::rint(std::ldexp(1.0, f.level())));
    double mean = 0.0;
    if (f.dims() == 1) {
        for (std::int64_t i = 0; i < nq; ++i) mean += f[i];
        mean /= static_cast<double>(nq);
    } else {
        for (std::int64_t i0 = 0; i0 < nq; ++i0)
            for (std::int64_t i1 = 0; i1 < nq; ++i1) mean += f.at(i0, i1);
        mean /= static_cast<double>(nq * nq);
    }
    return std::abs(mean) + bmo_wavelet_norm(c);
}

// pointwise wavelet square function (sum |c_I|^2 |I|^-1 chi_I)^(1/2)
// assembled on the finest grid
inline GridFunction wavelet_square_function(const WaveletCoeffs& c) {
    GridFunction sf2(c.box(), c.J());
    auto energy = detail::level_energies(c);
    const int n = c.dims();
    const std::int64_t N = sf2.n();
    for (int j = c.j0(); j < c.J(); ++j) {
        const auto& e = energy[static_cast<std::size_t>(j - c.j0())];
        const std::int64_t nj = c.n_at(j);
        const std::int64_t w = N / nj; // cells per cube per axis
        const double inv_vol = std::ldexp(1.0, j * n);
        if (n == 1) {
            for (std::int64_t k = 0; k < nj; ++k) {
                double v = e[static_cast<std::size_t>(k)] * inv_vol;
                if (v == 0.0) continue;
                for (std::int64_t i = k * w; i < (k + 1) * w; ++i) sf2[i] += v;
            }
        } else {
            for (std::int64_t k0 = 0; k0 < nj; ++k0)
                for (std::int64_t k1 = 0; k1 < nj; ++k1) {
                    double v = e[static_cast<std::size_t>(k0 * nj + k1)] * inv_vol;
                    if (v == 0.0) continue;
                    for (std::int64_t i0 = k0 * w; i0 < (k0 + 1) * w; ++i0)
                        for (std::int64_t i1 = k1 * w; i1 < (k1 + 1) * w; ++i1)
                            sf2.at(i0, i1) += v;
                }
        }
    }
    for (auto& v : sf2.samples()) v = std::sqrt(v);
    return sf2;
}

// L1 norm of the wavelet square function. Rejects inputs with a coarse part:
// the norm measures oscillatory content only.
inline double h1_square_norm(const WaveletCoeffs& c) {
    double total = std::sqrt(c.sum_detail_squares() + c.sum_scaling_squares());
    if (c.max_abs_scaling() > 1e-10 * std::max(1.0, total))
        throw std::domain_error(
            "h1_square_norm: nonzero scaling part; subtract the coarse projection first");
    return l1_norm(wavelet_square_function(c));
}

// Grand maximal proxy: one smooth kernel in the class F, dyadic scales only.
struct GrandMaximalParams {
    double margin = 0.9;     // peak of (|Phi|+|grad Phi|)(1+|x|)^(n+1), must be < 1
    int coarsest_level = 0;  // scales t = 2^-l for l = coarsest_level .. J
};

namespace detail {

// amplitude making sup_x (|Phi|+|grad Phi|)(1+|x|)^(n+1) equal the margin,
// for Phi(x) = c exp(-|x|^2/2)
inline double gaussian_f_class_amplitude(int dims, double margin) {
    double peak = 0.0;
    for (double r = 0.0; r <= 12.0; r += 1e-4)
        peak = std::max(peak, std::pow(1.0 + r, dims + 2) * std::exp(-0.5 * r * r));
    return margin / peak;
}

} // namespace detail

inline GridFunction grand_maximal(const GridFunction& f, const GrandMaximalParams& params = {}) {
    if (!(params.margin > 0.0 && params.margin < 1.0))
        throw std::invalid_argument("grand_maximal: kernel fails the F-class bound");
    const int n = f.dims();
    const int J = f.level();
    if (params.coarsest_level > J)
        throw std::invalid_argument("grand_maximal: no scales available");
    const double c_amp = detail::gaussian_f_class_amplitude(n, params.margin);
    const std::int64_t N = f.n();
    const double h = f.cell_width();

    std::vector<std::complex<double>> fhat(f.samples().begin(), f.samples().end());
    if (n == 1) fft::transform(fhat, false);
    else fft::transform_2d(fhat, static_cast<std::size_t>(N), false);

    GridFunction out(f.box(), J);
    std::vector<std::complex<double>> ker(fhat.size());
    for (int l = params.coarsest_level; l <= J; ++l) {
        const double t = std::ldexp(1.0, -l);
        const double tn = std::pow(t, n);
        // circular kernel samples Phi_t at grid offsets
        for (std::size_t i = 0; i < ker.size(); ++i) {
            double r2;
            if (n == 1) {
                double d0 = static_cast<double>(fft::signed_freq(i, static_cast<std::size_t>(N))) * h;
                r2 = d0 * d0;
            } else {
                auto sN = static_cast<std::size_t>(N);
                double d0 = static_cast<double>(fft::signed_freq(i / sN, sN)) * h;
                double d1 = static_cast<double>(fft::signed_freq(i % sN, sN)) * h;
                r2 = d0 * d0 + d1 * d1;
            }
            double y2 = r2 / (t * t); // |x/t|^2
            double phi = c_amp * std::exp(-0.5 * y2);
            double grad = phi * std::sqrt(y2);
            double bound = std::pow(1.0 + std::sqrt(y2), -(n + 1));
            if (phi + grad > bound * (1.0 + 1e-12))
                throw std::invalid_argument("grand_maximal: kernel fails the F-class bound");
            ker[i] = phi / tn;
        }
        if (n == 1) fft::transform(ker, false);
        else fft::transform_2d(ker, static_cast<std::size_t>(N), false);
        for (std::size_t i = 0; i < ker.size(); ++i) ker[i] *= fhat[i];
        if (n == 1) fft::transform(ker, true);
        else fft::transform_2d(ker, static_cast<std::size_t>(N), true);
        const double vol = f.cell_volume();
        for (std::int64_t i = 0; i < out.total_cells(); ++i)
            out[i] = std::max(out[i], std::abs(ker[static_cast<std::size_t>(i)].real()) * vol);
    }
    return out;
}

inline double hlog_norm(const GridFunction& f, const GrandMaximalParams& params = {}) {
    return luxemburg_log_norm(grand_maximal(f, params));
}

struct LogInequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// st/(M + log(e+st)) <= e^(t-M) + s, for s,t > 0 and M >= 1
inline LogInequalityCheck check_scalar_log_inequality(double s, double t, double M) {
    if (!(s > 0.0) || !(t > 0.0))
        throw std::invalid_argument("check_scalar_log_inequality: need s, t > 0");
    if (M < 1.0)
        throw std::invalid_argument("check_scalar_log_inequality: need M >= 1");
    LogInequalityCheck r;
    r.lhs = s * t / (M + std::log(std::numbers::e + s * t));
    r.rhs = std::exp(t - M) + s;
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
    return r;
}

struct HolderReport {
    double llog_product = 0.0;
    double l1_f = 0.0;
    double bmo_plus_g = 0.0;
    double ratio = 0.0;
};

// ||fg||_Llog / (||f||_L1 ||g||_BMO+); the product norm generalizes Holder
inline HolderReport holder_product_bound(const GridFunction& f, const GridFunction& g,
                                         const WaveletCoeffs& g_coeffs) {
    require_same_geometry(f, g);
    HolderReport r;
    r.l1_f = l1_norm(f);
    r.bmo_plus_g = bmo_plus_norm(g, g_coeffs);
    if (r.l1_f == 0.0 || r.bmo_plus_g == 0.0)
        throw std::invalid_argument("holder_product_bound: zero denominator");
    r.llog_product = luxemburg_log_norm(f * g);
    r.ratio = r.llog_product / (r.l1_f * r.bmo_plus_g);
    return r;
}

} // namespace wavprod

#endif
