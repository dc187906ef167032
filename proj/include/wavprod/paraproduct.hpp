#ifndef WAVPROD_PARAPRODUCT_HPP
#define WAVPROD_PARAPRODUCT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wavprod/grid.hpp"
#include "wavprod/multiplier.hpp"
#include "wavprod/spaces.hpp"
#include "wavprod/wavelet.hpp"

namespace wavprod {

// fg = pi1 + pi2 + pi3 + coarse_term, sample-exact. T = pi1 + pi2 keeps the
// cancellation, S = pi3 carries the integrable bulk.
struct ProductSplit {
    GridFunction pi1, pi2, pi3, coarse_term;

    GridFunction renormalized() const { return pi1 + pi2; } // T(f,g)
    const GridFunction& principal() const { return pi3; }    // S(f,g)
};

// Telescoped scale-by-scale split of the pointwise product: with a_j = P_j f
// and b_j = P_j g on the grid, pi1 = sum a_j (b_{j+1}-b_j), pi2 symmetric,
// pi3 = sum of the detail-detail products, coarse_term = a_j0 b_j0. The tail
// beyond the finest level vanishes because grid functions lie in V_J.
inline ProductSplit paraproduct_split(const GridFunction& f, const GridFunction& g, int j0,
                                      const FilterPair& filt, bool fold_coarse_into_pi2 = false) {
    require_same_geometry(f, g);
    const int J = f.level();
    if (j0 >= J) throw std::invalid_argument("paraproduct_split: need j0 < J");

    ProductSplit r{GridFunction(f.box(), J), GridFunction(f.box(), J),
                   GridFunction(f.box(), J), GridFunction(f.box(), J)};
    GridFunction a = project(f, j0, Part::P, filt);
    GridFunction b = project(g, j0, Part::P, filt);
    r.coarse_term = a * b;
    for (int j = j0; j < J; ++j) {
        GridFunction a_next = (j + 1 == J) ? f : project(f, j + 1, Part::P, filt);
        GridFunction b_next = (j + 1 == J) ? g : project(g, j + 1, Part::P, filt);
        GridFunction da = a_next - a;
        GridFunction db = b_next - b;
        r.pi1 = r.pi1 + a * db;
        r.pi2 = r.pi2 + da * b;
        r.pi3 = r.pi3 + da * db;
        a = std::move(a_next);
        b = std::move(b_next);
    }
    if (fold_coarse_into_pi2) {
        r.pi2 = r.pi2 + r.coarse_term;
        r.coarse_term = GridFunction(f.box(), J);
    }
    return r;
}

struct Pi3Chain {
    double pi3_l1 = 0.0;          // ||Pi3||_L1
    double detail_sum = 0.0;      // sum_j ||Q_j f||_2 ||Q_j g||_2
    double cauchy_schwarz = 0.0;  // ||f||_2 ||g||_2 upper end of the chain
};

inline Pi3Chain pi3_l1_bound(const GridFunction& f, const GridFunction& g, int j0,
                             const FilterPair& filt) {
    require_same_geometry(f, g);
    Pi3Chain r;
    GridFunction pi3(f.box(), f.level());
    for (int j = j0; j < f.level(); ++j) {
        GridFunction qf = project(f, j, Part::Q, filt);
        GridFunction qg = project(g, j, Part::Q, filt);
        pi3 = pi3 + qf * qg;
        r.detail_sum += l2_norm(qf) * l2_norm(qg);
    }
    r.pi3_l1 = l1_norm(pi3);
    r.cauchy_schwarz = l2_norm(f) * l2_norm(g);
    return r;
}

namespace detail {

// 1D sample profiles of the level-j basis elements with flat index 0,
// with trailing zero range trimmed for support iteration
struct Profile {
    std::vector<double> samples;
    std::int64_t extent = 0; // last nonzero index
};

inline Profile make_profile(int j, bool wavelet, const Box& box, int J, const FilterPair& filt) {
    Profile p;
    p.samples = basis_profile_1d(j, wavelet, box.side, J, filt);
    p.extent = 0;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(p.samples.size()); ++i)
        if (p.samples[static_cast<std::size_t>(i)] != 0.0) p.extent = i;
    return p;
}

// per-level profile pair (phi, psi)
class ProfileCache {
public:
    ProfileCache(const Box& box, int j0, int J, const FilterPair& filt) : j0_(j0) {
        for (int j = j0; j < J; ++j) {
            phi_.push_back(make_profile(j, false, box, J, filt));
            psi_.push_back(make_profile(j, true, box, J, filt));
        }
    }
    const Profile& phi(int j) const { return phi_[static_cast<std::size_t>(j - j0_)]; }
    const Profile& psi(int j) const { return psi_[static_cast<std::size_t>(j - j0_)]; }

private:
    int j0_;
    std::vector<Profile> phi_, psi_;
};

} // namespace detail

// principal part S0(f,g) = sum_I,lambda <f,psi_I><g,psi_I> |psi_I|^2
inline GridFunction s0(const WaveletCoeffs& fc, const WaveletCoeffs& gc) {
    if (!(fc.box() == gc.box()) || fc.j0() != gc.j0() || fc.J() != gc.J() ||
        fc.filter().name != gc.filter().name)
        throw std::invalid_argument("s0: coefficient bases do not match");
    const int J = fc.J();
    GridFunction out(fc.box(), J);
    detail::ProfileCache cache(fc.box(), fc.j0(), J, fc.filter());
    const std::int64_t N = out.n();
    for (int j = fc.j0(); j < J; ++j) {
        const std::int64_t stride = N / fc.n_at(j);
        for (int lam = 1; lam <= fc.lambda_count(); ++lam) {
            const auto& bf = fc.detail(j, lam);
            const auto& bg = gc.detail(j, lam);
            if (fc.dims() == 1) {
                const auto& p = cache.psi(j);
                for (std::int64_t q = 0; q < static_cast<std::int64_t>(bf.size()); ++q) {
                    double w = bf[static_cast<std::size_t>(q)] * bg[static_cast<std::size_t>(q)];
                    if (w == 0.0) continue;
                    for (std::int64_t off = 0; off <= p.extent; ++off) {
                        double v = p.samples[static_cast<std::size_t>(off)];
                        out[(q * stride + off) % N] += w * v * v;
                    }
                }
            } else {
                const auto& p0 = (lam & 1) ? cache.psi(j) : cache.phi(j);
                const auto& p1 = (lam & 2) ? cache.psi(j) : cache.phi(j);
                const std::int64_t nj = fc.n_at(j);
                for (std::int64_t q = 0; q < static_cast<std::int64_t>(bf.size()); ++q) {
                    double w = bf[static_cast<std::size_t>(q)] * bg[static_cast<std::size_t>(q)];
                    if (w == 0.0) continue;
                    const std::int64_t q0 = q / nj, q1 = q % nj;
                    for (std::int64_t o0 = 0; o0 <= p0.extent; ++o0) {
                        double v0 = p0.samples[static_cast<std::size_t>(o0)];
                        if (v0 == 0.0) continue;
                        std::int64_t i0 = (q0 * stride + o0) % N;
                        for (std::int64_t o1 = 0; o1 <= p1.extent; ++o1) {
                            double v1 = p1.samples[static_cast<std::size_t>(o1)];
                            double v = v0 * v1;
                            out.at(i0, (q1 * stride + o1) % N) += w * v * v;
                        }
                    }
                }
            }
        }
    }
    return out;
}

struct MoleculeReport {
    GridFunction remainder;          // Pi3 - S0
    double max_cross_mean = 0.0;     // worst |integral psi_I psi_I'| over cross pairs
    std::int64_t cross_pairs = 0;    // overlapping same-scale pairs inspected
    std::int64_t neighbor_violations = 0; // overlaps outside the (-m,m]^n offset set
};

// Pi3 - S0 consists of same-scale cross products psi_I psi_I'; each has mean
// zero by orthonormality and support within the m-dilations.
inline MoleculeReport molecule_remainder(const GridFunction& f, const GridFunction& g, int j0,
                                         const FilterPair& filt) {
    require_same_geometry(f, g);
    const int J = f.level();
    WaveletCoeffs fc = dwt_forward(f, j0, filt);
    WaveletCoeffs gc = dwt_forward(g, j0, filt);
    ProductSplit split = paraproduct_split(f, g, j0, filt);
    MoleculeReport rep{split.pi3 - s0(fc, gc)};

    detail::ProfileCache cache(f.box(), j0, J, filt);
    const std::int64_t N = fc.n_at(J);
    const int m = filt.support_m;
    const double cw = std::ldexp(1.0, -J);
    const int dims = f.dims();
    auto axis_pairing = [&](const detail::Profile& pa, const detail::Profile& pb,
                            std::int64_t shift_cells) {
        double s = 0.0;
        for (std::int64_t off = 0; off <= pa.extent; ++off) {
            std::int64_t ib = off - shift_cells;
            ib = ((ib % N) + N) % N;
            if (ib > pb.extent) continue;
            s += pa.samples[static_cast<std::size_t>(off)] * pb.samples[static_cast<std::size_t>(ib)];
        }
        return s * cw;
    };
    for (int j = j0; j < J; ++j) {
        const std::int64_t nj = fc.n_at(j);
        const std::int64_t stride = N / nj;
        for (int la = 1; la <= fc.lambda_count(); ++la) {
            const auto& bf = fc.detail(j, la);
            for (int lb = 1; lb <= fc.lambda_count(); ++lb) {
                const auto& bg = gc.detail(j, lb);
                for (std::int64_t qa = 0; qa < static_cast<std::int64_t>(bf.size()); ++qa) {
                    if (bf[static_cast<std::size_t>(qa)] == 0.0) continue;
                    // same-scale neighbors within support reach
                    for (std::int64_t d0 = -m; d0 <= m; ++d0) {
                        for (std::int64_t d1 = (dims == 2 ? -m : 0); d1 <= (dims == 2 ? m : 0); ++d1) {
                            std::int64_t qb;
                            if (dims == 1) {
                                qb = ((qa + d0) % nj + nj) % nj;
                            } else {
                                std::int64_t b0 = ((qa / nj + d0) % nj + nj) % nj;
                                std::int64_t b1 = ((qa % nj + d1) % nj + nj) % nj;
                                qb = b0 * nj + b1;
                            }
                            if (la == lb && qb == qa) continue; // diagonal term belongs to S0
                            if (bg[static_cast<std::size_t>(qb)] == 0.0) continue;
                            double pair;
                            if (dims == 1) {
                                pair = axis_pairing(cache.psi(j), cache.psi(j), d0 * stride);
                            } else {
                                const auto& a0 = (la & 1) ? cache.psi(j) : cache.phi(j);
                                const auto& a1 = (la & 2) ? cache.psi(j) : cache.phi(j);
                                const auto& c0 = (lb & 1) ? cache.psi(j) : cache.phi(j);
                                const auto& c1 = (lb & 2) ? cache.psi(j) : cache.phi(j);
                                pair = axis_pairing(a0, c0, d0 * stride) *
                                       axis_pairing(a1, c1, d1 * stride);
                            }
                            ++rep.cross_pairs;
                            rep.max_cross_mean = std::max(rep.max_cross_mean, std::abs(pair));
                            // overlapping offsets must lie in the neighbor set (-m, m]^n
                            if (std::abs(pair) > 1e-14 && (d0 <= -m || (dims == 2 && d1 <= -m)))
                                ++rep.neighbor_violations;
                        }
                    }
                }
            }
        }
    }
    return rep;
}

// almost-diagonal decay weight of a Calderon-Zygmund operator between two
// wavelet indices
inline double p_delta(const DyadicCube& I, const DyadicCube& Ip, double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("p_delta: delta must lie in (0,1]");
    if (I.dims != Ip.dims)
        throw std::invalid_argument("p_delta: dimension mismatch");
    const int n = I.dims;
    const double sj = I.side(), sjp = Ip.side();
    auto ci = I.center();
    auto cp = Ip.center();
    double dist2 = 0.0;
    for (int a = 0; a < n; ++a) dist2 += (ci[a] - cp[a]) * (ci[a] - cp[a]);
    double dist = std::sqrt(dist2);
    double scale = std::pow(2.0, -std::abs(I.j - Ip.j) * (delta + 0.5 * n));
    double loc = std::pow((sj + sjp) / (sj + sjp + dist), n + delta);
    return scale * loc;
}

struct BilinearBReport {
    GridFunction value;          // B(f,g) = S0(Af,g) + S0(f,Ag)
    double h1_proxy = 0.0;       // h1 square norm of the detail part of B
    double pairing_lhs = 0.0;    // sum |<f,psi_I>||<g,psi_I>|
    double pairing_rhs = 0.0;    // ||f||_H1-proxy * ||g||_BMO
};

inline BilinearBReport bilinear_B(const WaveletCoeffs& fc, const WaveletCoeffs& gc,
                                  const MultiplierOperator& A) {
    if (!A.odd)
        throw std::invalid_argument("bilinear_B: multiplier must be odd");
    GridFunction f = dwt_inverse(fc);
    GridFunction g = dwt_inverse(gc);
    WaveletCoeffs af = dwt_forward(apply_multiplier(A, f), fc.j0(), fc.filter());
    WaveletCoeffs ag = dwt_forward(apply_multiplier(A, g), gc.j0(), gc.filter());
    BilinearBReport rep{s0(af, gc) + s0(fc, ag)};

    WaveletCoeffs bc = dwt_forward(rep.value, fc.j0(), fc.filter());
    std::fill(bc.scaling().begin(), bc.scaling().end(), 0.0);
    rep.h1_proxy = h1_square_norm(bc);

    for (int j = fc.j0(); j < fc.J(); ++j)
        for (int lam = 1; lam <= fc.lambda_count(); ++lam) {
            const auto& a = fc.detail(j, lam);
            const auto& b = gc.detail(j, lam);
            for (std::size_t q = 0; q < a.size(); ++q)
                rep.pairing_lhs += std::abs(a[q]) * std::abs(b[q]);
        }
    WaveletCoeffs fd = fc;
    std::fill(fd.scaling().begin(), fd.scaling().end(), 0.0);
    rep.pairing_rhs = h1_square_norm(fd) * bmo_wavelet_norm(gc);
    return rep;
}

} // namespace wavprod

#endif
