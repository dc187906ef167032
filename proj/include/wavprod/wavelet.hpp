#ifndef WAVPROD_WAVELET_HPP
#define WAVPROD_WAVELET_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wavprod/filters.hpp"
#include "wavprod/grid.hpp"

namespace wavprod {

namespace detail {

// one periodized analysis step: in (length 2M) -> approx, det (length M)
inline void analysis_step(const std::vector<double>& in, std::vector<double>& approx,
                          std::vector<double>& det, const FilterPair& f) {
    const std::int64_t n2 = static_cast<std::int64_t>(in.size());
    const std::int64_t m = n2 / 2;
    const int t = f.taps();
    approx.assign(static_cast<std::size_t>(m), 0.0);
    det.assign(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t k = 0; k < m; ++k) {
        double a = 0.0, d = 0.0;
        for (int i = 0; i < t; ++i) {
            double v = in[static_cast<std::size_t>((2 * k + i) % n2)];
            a += f.lowpass[static_cast<std::size_t>(i)] * v;
            d += f.highpass[static_cast<std::size_t>(i)] * v;
        }
        approx[static_cast<std::size_t>(k)] = a;
        det[static_cast<std::size_t>(k)] = d;
    }
}

inline void synthesis_step(const std::vector<double>& approx, const std::vector<double>& det,
                           std::vector<double>& out, const FilterPair& f) {
    const std::int64_t m = static_cast<std::int64_t>(approx.size());
    const std::int64_t n2 = 2 * m;
    const int t = f.taps();
    out.assign(static_cast<std::size_t>(n2), 0.0);
    for (std::int64_t k = 0; k < m; ++k) {
        double a = approx[static_cast<std::size_t>(k)];
        double d = det[static_cast<std::size_t>(k)];
        for (int i = 0; i < t; ++i) {
            out[static_cast<std::size_t>((2 * k + i) % n2)] +=
                f.lowpass[static_cast<std::size_t>(i)] * a +
                f.highpass[static_cast<std::size_t>(i)] * d;
        }
    }
}

} // namespace detail

// Wavelet coefficients of a grid function: detail blocks for j0 <= j < J and
// the level-j0 scaling block. Storage is dense per level; zero entries are
// simply zeros.
class WaveletCoeffs {
public:
    WaveletCoeffs() = default;

    WaveletCoeffs(Box box, int j0, int J, FilterPair filter)
        : box_(box), j0_(j0), J_(J), filter_(std::move(filter)) {
        box_.validate();
        if (j0 >= J) throw std::invalid_argument("WaveletCoeffs: need j0 < J");
        if (j0 < box_.min_level())
            throw std::invalid_argument("WaveletCoeffs: j0 coarser than box allows");
        const int nlam = lambda_count();
        detail_.resize(static_cast<std::size_t>(J - j0));
        for (int j = j0; j < J; ++j) {
            auto& blocks = detail_[static_cast<std::size_t>(j - j0)];
            blocks.resize(static_cast<std::size_t>(nlam));
            for (auto& b : blocks) b.assign(static_cast<std::size_t>(cells_at(j)), 0.0);
        }
        scaling_.assign(static_cast<std::size_t>(cells_at(j0)), 0.0);
    }

    const Box& box() const { return box_; }
    int dims() const { return box_.dims; }
    int j0() const { return j0_; }
    int J() const { return J_; }
    const FilterPair& filter() const { return filter_; }

    int lambda_count() const { return (1 << box_.dims) - 1; }

    std::int64_t n_at(int j) const {
        return static_cast<std::int64_t>(std::rint(box_.side * std::ldexp(1.0, j)));
    }
    std::int64_t cells_at(int j) const {
        std::int64_t m = n_at(j);
        return box_.dims == 2 ? m * m : m;
    }

    std::vector<double>& detail(int j, int lambda) {
        check_detail(j, lambda);
        return detail_[static_cast<std::size_t>(j - j0_)][static_cast<std::size_t>(lambda - 1)];
    }
    const std::vector<double>& detail(int j, int lambda) const {
        check_detail(j, lambda);
        return detail_[static_cast<std::size_t>(j - j0_)][static_cast<std::size_t>(lambda - 1)];
    }
    std::vector<double>& scaling() { return scaling_; }
    const std::vector<double>& scaling() const { return scaling_; }

    double sum_detail_squares() const {
        double s = 0.0;
        for (const auto& lvl : detail_)
            for (const auto& b : lvl)
                for (double v : b) s += v * v;
        return s;
    }
    double sum_scaling_squares() const {
        double s = 0.0;
        for (double v : scaling_) s += v * v;
        return s;
    }
    double max_abs_scaling() const {
        double s = 0.0;
        for (double v : scaling_) s = std::max(s, std::abs(v));
        return s;
    }

    // Map between flat array indices and dyadic-cube indices. Array index q
    // along one axis corresponds to cube corner k = (q + phase) mod N_j in
    // box-relative units, plus the lattice offset of the box origin.
    DyadicCube cube_of(int j, int lambda, std::int64_t flat) const {
        const std::int64_t nj = n_at(j);
        DyadicCube I;
        I.j = j;
        I.lambda = lambda;
        I.dims = box_.dims;
        std::array<std::int64_t, 2> q{flat, 0};
        if (box_.dims == 2) q = {flat / nj, flat % nj};
        for (int a = 0; a < box_.dims; ++a)
            I.k[a] = (q[a] + filter_.phase()) % nj + origin_offset(j, a);
        return I;
    }

    std::int64_t flat_index_of(const DyadicCube& I) const {
        const std::int64_t nj = n_at(I.j);
        std::array<std::int64_t, 2> q{0, 0};
        for (int a = 0; a < box_.dims; ++a) {
            std::int64_t kb = I.k[a] - origin_offset(I.j, a) - filter_.phase();
            q[a] = ((kb % nj) + nj) % nj;
        }
        return box_.dims == 2 ? q[0] * nj + q[1] : q[0];
    }

    std::int64_t origin_offset(int j, int axis) const {
        double o = box_.origin[static_cast<std::size_t>(axis)] * std::ldexp(1.0, j);
        if (std::rint(o) != o)
            throw std::invalid_argument("box origin not on the dyadic lattice at this level");
        return static_cast<std::int64_t>(std::rint(o));
    }

    // visit all nonzero detail coefficients
    void for_each_detail(const std::function<void(int j, int lambda, std::int64_t flat, double v)>& fn) const {
        for (int j = j0_; j < J_; ++j)
            for (int lam = 1; lam <= lambda_count(); ++lam) {
                const auto& b = detail(j, lam);
                for (std::int64_t q = 0; q < static_cast<std::int64_t>(b.size()); ++q)
                    if (b[static_cast<std::size_t>(q)] != 0.0)
                        fn(j, lam, q, b[static_cast<std::size_t>(q)]);
            }
    }

private:
    void check_detail(int j, int lambda) const {
        if (j < j0_ || j >= J_)
            throw std::out_of_range("WaveletCoeffs: level out of range");
        if (lambda < 1 || lambda > lambda_count())
            throw std::out_of_range("WaveletCoeffs: bad orientation label");
    }

    Box box_;
    int j0_ = 0;
    int J_ = 0;
    FilterPair filter_;
    std::vector<std::vector<std::vector<double>>> detail_; // [j-j0][lambda-1][flat]
    std::vector<double> scaling_;
};

namespace detail {

// One analysis level in 2D: input (2M)^2 row-major -> four M^2 blocks.
// lambda bit 0 = wavelet along axis 0 (rows), bit 1 = along axis 1 (cols).
inline void analysis_level_2d(const std::vector<double>& in, std::int64_t n2,
                              std::vector<double>& aa, std::array<std::vector<double>*, 3> det,
                              const FilterPair& f) {
    const std::int64_t m = n2 / 2;
    // axis 1 first (contiguous rows)
    std::vector<double> rowL(static_cast<std::size_t>(n2 * m));
    std::vector<double> rowH(static_cast<std::size_t>(n2 * m));
    std::vector<double> buf(static_cast<std::size_t>(n2)), a, d;
    for (std::int64_t r = 0; r < n2; ++r) {
        for (std::int64_t c = 0; c < n2; ++c) buf[static_cast<std::size_t>(c)] = in[static_cast<std::size_t>(r * n2 + c)];
        analysis_step(buf, a, d, f);
        for (std::int64_t c = 0; c < m; ++c) {
            rowL[static_cast<std::size_t>(r * m + c)] = a[static_cast<std::size_t>(c)];
            rowH[static_cast<std::size_t>(r * m + c)] = d[static_cast<std::size_t>(c)];
        }
    }
    aa.assign(static_cast<std::size_t>(m * m), 0.0);
    for (auto* p : det) p->assign(static_cast<std::size_t>(m * m), 0.0);
    std::vector<double> col(static_cast<std::size_t>(n2));
    for (std::int64_t c = 0; c < m; ++c) {
        for (std::int64_t r = 0; r < n2; ++r) col[static_cast<std::size_t>(r)] = rowL[static_cast<std::size_t>(r * m + c)];
        analysis_step(col, a, d, f);
        for (std::int64_t r = 0; r < m; ++r) {
            aa[static_cast<std::size_t>(r * m + c)] = a[static_cast<std::size_t>(r)];
            (*det[0])[static_cast<std::size_t>(r * m + c)] = d[static_cast<std::size_t>(r)]; // lambda=1: wavelet on axis0
        }
        for (std::int64_t r = 0; r < n2; ++r) col[static_cast<std::size_t>(r)] = rowH[static_cast<std::size_t>(r * m + c)];
        analysis_step(col, a, d, f);
        for (std::int64_t r = 0; r < m; ++r) {
            (*det[1])[static_cast<std::size_t>(r * m + c)] = a[static_cast<std::size_t>(r)]; // lambda=2: wavelet on axis1
            (*det[2])[static_cast<std::size_t>(r * m + c)] = d[static_cast<std::size_t>(r)]; // lambda=3: both
        }
    }
}

inline void synthesis_level_2d(const std::vector<double>& aa,
                               std::array<const std::vector<double>*, 3> det,
                               std::int64_t m, std::vector<double>& out, const FilterPair& f) {
    const std::int64_t n2 = 2 * m;
    // invert along axis 0 (columns of the half-width blocks)
    std::vector<double> rowL(static_cast<std::size_t>(n2 * m));
    std::vector<double> rowH(static_cast<std::size_t>(n2 * m));
    std::vector<double> a(static_cast<std::size_t>(m)), d(static_cast<std::size_t>(m)), full;
    for (std::int64_t c = 0; c < m; ++c) {
        for (std::int64_t r = 0; r < m; ++r) {
            a[static_cast<std::size_t>(r)] = aa[static_cast<std::size_t>(r * m + c)];
            d[static_cast<std::size_t>(r)] = (*det[0])[static_cast<std::size_t>(r * m + c)];
        }
        synthesis_step(a, d, full, f);
        for (std::int64_t r = 0; r < n2; ++r) rowL[static_cast<std::size_t>(r * m + c)] = full[static_cast<std::size_t>(r)];
        for (std::int64_t r = 0; r < m; ++r) {
            a[static_cast<std::size_t>(r)] = (*det[1])[static_cast<std::size_t>(r * m + c)];
            d[static_cast<std::size_t>(r)] = (*det[2])[static_cast<std::size_t>(r * m + c)];
        }
        synthesis_step(a, d, full, f);
        for (std::int64_t r = 0; r < n2; ++r) rowH[static_cast<std::size_t>(r * m + c)] = full[static_cast<std::size_t>(r)];
    }
    out.assign(static_cast<std::size_t>(n2 * n2), 0.0);
    std::vector<double> ra(static_cast<std::size_t>(m)), rd(static_cast<std::size_t>(m));
    for (std::int64_t r = 0; r < n2; ++r) {
        for (std::int64_t c = 0; c < m; ++c) {
            ra[static_cast<std::size_t>(c)] = rowL[static_cast<std::size_t>(r * m + c)];
            rd[static_cast<std::size_t>(c)] = rowH[static_cast<std::size_t>(r * m + c)];
        }
        synthesis_step(ra, rd, full, f);
        for (std::int64_t c = 0; c < n2; ++c) out[static_cast<std::size_t>(r * n2 + c)] = full[static_cast<std::size_t>(c)];
    }
}

} // namespace detail

inline WaveletCoeffs dwt_forward(const GridFunction& f, int j0, const FilterPair& filt) {
    const int J = f.level();
    if (j0 >= J) throw std::invalid_argument("dwt_forward: need j0 < J");
    WaveletCoeffs c(f.box(), j0, J, filt);
    const double scale = std::sqrt(f.cell_volume());
    if (f.dims() == 1) {
        std::vector<double> cur(f.samples());
        for (auto& v : cur) v *= scale;
        for (int j = J - 1; j >= j0; --j) {
            std::vector<double> approx;
            detail::analysis_step(cur, approx, c.detail(j, 1), filt);
            cur = std::move(approx);
        }
        c.scaling() = std::move(cur);
    } else {
        std::vector<double> cur(f.samples());
        for (auto& v : cur) v *= scale;
        for (int j = J - 1; j >= j0; --j) {
            std::vector<double> aa;
            std::array<std::vector<double>*, 3> det{&c.detail(j, 1), &c.detail(j, 2), &c.detail(j, 3)};
            detail::analysis_level_2d(cur, c.n_at(j + 1), aa, det, filt);
            cur = std::move(aa);
        }
        c.scaling() = std::move(cur);
    }
    return c;
}

inline GridFunction dwt_inverse(const WaveletCoeffs& c) {
    GridFunction f(c.box(), c.J());
    if (c.dims() == 1) {
        std::vector<double> cur = c.scaling();
        for (int j = c.j0(); j < c.J(); ++j) {
            std::vector<double> next;
            detail::synthesis_step(cur, c.detail(j, 1), next, c.filter());
            cur = std::move(next);
        }
        f.samples() = std::move(cur);
    } else {
        std::vector<double> cur = c.scaling();
        for (int j = c.j0(); j < c.J(); ++j) {
            std::vector<double> next;
            std::array<const std::vector<double>*, 3> det{&c.detail(j, 1), &c.detail(j, 2), &c.detail(j, 3)};
            detail::synthesis_level_2d(cur, det, c.n_at(j), next, c.filter());
            cur = std::move(next);
        }
        f.samples() = std::move(cur);
    }
    const double scale = 1.0 / std::sqrt(f.cell_volume());
    for (auto& v : f.samples()) v *= scale;
    return f;
}

enum class Part { P, Q };

// Samples of P_j f or Q_j f on the full grid.
inline GridFunction project(const GridFunction& f, int j, Part part, const FilterPair& filt) {
    const int J = f.level();
    if (part == Part::P) {
        if (j < f.box().min_level() || j > J)
            throw std::invalid_argument("project: level out of range for P");
        if (j == J) return f;
        WaveletCoeffs c = dwt_forward(f, j, filt);
        for (int l = j; l < J; ++l)
            for (int lam = 1; lam <= c.lambda_count(); ++lam)
                std::fill(c.detail(l, lam).begin(), c.detail(l, lam).end(), 0.0);
        return dwt_inverse(c);
    }
    if (j < f.box().min_level() || j >= J)
        throw std::invalid_argument("project: level out of range for Q");
    WaveletCoeffs c = dwt_forward(f, j, filt);
    std::fill(c.scaling().begin(), c.scaling().end(), 0.0);
    for (int l = j + 1; l < J; ++l)
        for (int lam = 1; lam <= c.lambda_count(); ++lam)
            std::fill(c.detail(l, lam).begin(), c.detail(l, lam).end(), 0.0);
    return dwt_inverse(c);
}

enum class BasisKind { Scaling, Wavelet };

// Grid samples of phi_I or psi_I^lambda on the given geometry.
inline GridFunction synthesize(const DyadicCube& I, BasisKind kind, const Box& box, int J,
                               const FilterPair& filt) {
    if (kind == BasisKind::Wavelet && I.lambda == 0)
        throw std::invalid_argument("synthesize: wavelet kind needs an orientation label");
    const int j = I.j;
    if (j >= J)
        throw std::invalid_argument("synthesize: scale too fine for the grid");
    if (j < Box(box).min_level())
        throw std::invalid_argument("synthesize: scale coarser than the box");
    WaveletCoeffs c(box, j, J, filt);
    std::int64_t flat = c.flat_index_of(I);
    if (kind == BasisKind::Scaling)
        c.scaling()[static_cast<std::size_t>(flat)] = 1.0;
    else
        c.detail(j, I.lambda)[static_cast<std::size_t>(flat)] = 1.0;
    return dwt_inverse(c);
}

// 1D sample profile of the basis element with flat index 0 at level j,
// including the per-axis 2^{J/2} sample normalization. Tensor products of
// these give the samples of every 2D basis element.
inline std::vector<double> basis_profile_1d(int j, bool wavelet, double side, int J,
                                            const FilterPair& filt) {
    const auto nj = static_cast<std::int64_t>(std::rint(side * std::ldexp(1.0, j)));
    std::vector<double> cur(static_cast<std::size_t>(nj), 0.0);
    std::vector<double> zero(static_cast<std::size_t>(nj), 0.0);
    std::vector<double> next;
    if (wavelet) {
        if (j >= J) throw std::invalid_argument("basis_profile_1d: scale too fine");
        cur[0] = 1.0;
        detail::synthesis_step(zero, cur, next, filt);
        cur = std::move(next);
    } else {
        cur[0] = 1.0;
    }
    for (int l = wavelet ? j + 1 : j; l < J; ++l) {
        zero.assign(cur.size(), 0.0);
        detail::synthesis_step(cur, zero, next, filt);
        cur = std::move(next);
    }
    const double scale = std::sqrt(std::ldexp(1.0, J));
    for (auto& v : cur) v *= scale;
    return cur;
}

} // namespace wavprod

#endif
