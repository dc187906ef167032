#ifndef WAVPROD_ATOMS_HPP
#define WAVPROD_ATOMS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "wavprod/paraproduct.hpp"
#include "wavprod/spaces.hpp"
#include "wavprod/wavelet.hpp"

namespace wavprod {

// Normalized mean-zero wavelet packet attached to a dyadic cube R:
// coefficients live on cubes inside R and ||a||_2 <= |R|^{-1/2}.
struct PsiAtom {
    WaveletCoeffs coeffs;
    DyadicCube R;
    double l2_norm = 0.0;
};

namespace detail {

inline double cube_volume(const DyadicCube& R) {
    return std::pow(R.side(), R.dims);
}

inline bool cube_contains(const DyadicCube& R, const DyadicCube& I) {
    if (I.j < R.j) return false;
    const int shift = I.j - R.j;
    for (int a = 0; a < R.dims; ++a)
        if ((I.k[a] >> shift) != R.k[a]) return false;
    return true;
}

// periodic per-axis distance between points in a box
inline double wrapped_dist(double x, double y, double period) {
    double d = std::remainder(x - y, period);
    return std::abs(d);
}

} // namespace detail

inline PsiAtom validate_psi_atom(const WaveletCoeffs& a, const DyadicCube& R) {
    if (R.dims != a.dims() || R.lambda != 0)
        throw std::invalid_argument("validate_psi_atom: R must be a plain cube of matching dimension");
    double l2 = std::sqrt(a.sum_detail_squares() + a.sum_scaling_squares());
    if (a.max_abs_scaling() > 1e-12 * std::max(1.0, l2))
        throw std::invalid_argument("validate_psi_atom: nonzero scaling part");
    bool outside = false;
    a.for_each_detail([&](int j, int lam, std::int64_t q, double) {
        if (!detail::cube_contains(R, a.cube_of(j, lam, q))) outside = true;
    });
    if (outside)
        throw std::invalid_argument("validate_psi_atom: coefficient on a cube outside R");
    double bound = 1.0 / std::sqrt(detail::cube_volume(R));
    if (l2 > bound * (1.0 + 1e-12))
        throw std::invalid_argument("validate_psi_atom: L2 norm exceeds |R|^{-1/2}");
    GridFunction f = dwt_inverse(a);
    if (std::abs(integrate(f)) > 1e-10 * std::max(1.0, linf_norm(f)))
        throw std::invalid_argument("validate_psi_atom: synthesis mean exceeds tolerance");
    return PsiAtom{a, R, l2};
}

struct AtomicDecomposition {
    struct Term {
        double mu = 0.0;
        PsiAtom atom;
        DyadicCube R;
    };
    std::vector<Term> terms;
    double l1_mass = 0.0;
    double mass_ratio = 0.0; // l1_mass / h1_square_norm of the input

    WaveletCoeffs reconstruct(const WaveletCoeffs& like) const {
        WaveletCoeffs out(like.box(), like.j0(), like.J(), like.filter());
        for (const auto& t : terms)
            t.atom.coeffs.for_each_detail([&](int j, int lam, std::int64_t q, double v) {
                out.detail(j, lam)[static_cast<std::size_t>(q)] += t.mu * v;
            });
        return out;
    }
};

// Level-set decomposition of a finite wavelet expansion into psi-atoms.
// Thresholds 2^k on the square function S; a cube joins generation k when
// strictly more than half of it sits inside {S > 2^k} but not inside the
// next level set; generations are grouped under maximal majority cubes.
inline AtomicDecomposition atomic_decompose(const WaveletCoeffs& c) {
    double l2 = std::sqrt(c.sum_detail_squares());
    if (c.max_abs_scaling() > 1e-12 * std::max(1.0, l2))
        throw std::invalid_argument("atomic_decompose: input has a nonzero scaling part");
    AtomicDecomposition dec;
    if (l2 == 0.0) return dec;

    const int n = c.dims();
    const int J = c.J();
    const std::int64_t nJ = c.n_at(J);
    const std::int64_t cellsJ = c.cells_at(J);
    const auto cell_of = [nJ, n](std::int64_t r0, std::int64_t r1) {
        return n == 2 ? r0 * nJ + r1 : r0;
    };

    // square function S^2 on the finest grid, box-relative indexing
    std::vector<double> s2(static_cast<std::size_t>(cellsJ), 0.0);
    auto energies = detail::level_energies(c);
    for (int j = c.j0(); j < J; ++j) {
        const auto& e = energies[static_cast<std::size_t>(j - c.j0())];
        const std::int64_t nj = c.n_at(j);
        const std::int64_t w = nJ / nj;
        const double scale = std::ldexp(1.0, j * n);
        for (std::int64_t q = 0; q < static_cast<std::int64_t>(e.size()); ++q) {
            if (e[static_cast<std::size_t>(q)] == 0.0) continue;
            double add = e[static_cast<std::size_t>(q)] * scale;
            std::int64_t q0 = n == 2 ? q / nj : q, q1 = n == 2 ? q % nj : 0;
            for (std::int64_t r0 = q0 * w; r0 < (q0 + 1) * w; ++r0) {
                if (n == 1) {
                    s2[static_cast<std::size_t>(r0)] += add;
                } else {
                    for (std::int64_t r1 = q1 * w; r1 < (q1 + 1) * w; ++r1)
                        s2[static_cast<std::size_t>(cell_of(r0, r1))] += add;
                }
            }
        }
    }
    std::vector<double> s(s2.size());
    for (std::size_t i = 0; i < s2.size(); ++i) s[i] = std::sqrt(s2[i]);

    // generation of each coefficient cube: largest k whose level set still
    // fills a strict majority of the cube
    struct Coeff {
        int j, lam;
        std::int64_t q;      // storage index
        std::int64_t kb0, kb1; // box-relative cube corner
        double v;
        int gen;
    };
    std::vector<Coeff> coeffs;
    std::vector<double> scratch;
    const std::int64_t ph = c.filter().phase();
    c.for_each_detail([&](int j, int lam, std::int64_t q, double v) {
        const std::int64_t nj = c.n_at(j);
        const std::int64_t w = nJ / nj;
        std::int64_t q0 = ((n == 2 ? q / nj : q) + ph) % nj;
        std::int64_t q1 = n == 2 ? (q % nj + ph) % nj : 0;
        scratch.clear();
        for (std::int64_t r0 = q0 * w; r0 < (q0 + 1) * w; ++r0) {
            if (n == 1) scratch.push_back(s[static_cast<std::size_t>(r0)]);
            else
                for (std::int64_t r1 = q1 * w; r1 < (q1 + 1) * w; ++r1)
                    scratch.push_back(s[static_cast<std::size_t>(cell_of(r0, r1))]);
        }
        // strict majority of cells exceeds t exactly when the lower median does
        auto mid = scratch.begin() + static_cast<std::ptrdiff_t>((scratch.size() - 1) / 2);
        std::nth_element(scratch.begin(), mid, scratch.end());
        double med = *mid;
        if (!(med > 0.0)) throw std::logic_error("atomic_decompose: empty level set over a cube");
        int k = static_cast<int>(std::floor(std::log2(med)));
        while (std::ldexp(1.0, k) >= med) --k;
        while (std::ldexp(1.0, k + 1) < med) ++k;
        coeffs.push_back({j, lam, q, q0, q1, v, k});
    });

    // group each generation under the maximal (coarsest) dyadic cube whose
    // majority still lies in the level set
    const int jmin = c.box().min_level();
    std::map<std::tuple<int, int, std::int64_t>, std::vector<const Coeff*>> groups;
    int cur_gen = 0;
    bool have_counts = false;
    std::vector<std::vector<double>> cnt; // fraction of each cube inside the level set
    auto build_counts = [&](int k) {
        double t = std::ldexp(1.0, k);
        cnt.assign(static_cast<std::size_t>(J - jmin + 1), {});
        for (int j = J; j >= jmin; --j) {
            auto& row = cnt[static_cast<std::size_t>(j - jmin)];
            const std::int64_t nj = c.n_at(j);
            row.assign(static_cast<std::size_t>(n == 2 ? nj * nj : nj), 0.0);
            if (j == J) {
                for (std::int64_t i = 0; i < cellsJ; ++i)
                    row[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)] > t ? 1.0 : 0.0;
            } else {
                const auto& fine = cnt[static_cast<std::size_t>(j + 1 - jmin)];
                const std::int64_t nf = c.n_at(j + 1);
                for (std::int64_t q = 0; q < static_cast<std::int64_t>(row.size()); ++q) {
                    std::int64_t q0 = n == 2 ? q / nj : q, q1 = n == 2 ? q % nj : 0;
                    double sum = fine[static_cast<std::size_t>(n == 2 ? 2 * q0 * nf + 2 * q1 : 2 * q0)];
                    if (n == 1) {
                        sum += fine[static_cast<std::size_t>(2 * q0 + 1)];
                        row[static_cast<std::size_t>(q)] = sum / 2.0;
                    } else {
                        sum += fine[static_cast<std::size_t>(2 * q0 * nf + 2 * q1 + 1)];
                        sum += fine[static_cast<std::size_t>((2 * q0 + 1) * nf + 2 * q1)];
                        sum += fine[static_cast<std::size_t>((2 * q0 + 1) * nf + 2 * q1 + 1)];
                        row[static_cast<std::size_t>(q)] = sum / 4.0;
                    }
                }
            }
        }
    };

    std::vector<int> order(coeffs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return coeffs[static_cast<std::size_t>(lhs)].gen < coeffs[static_cast<std::size_t>(rhs)].gen;
    });
    for (int idx : order) {
        const Coeff& co = coeffs[static_cast<std::size_t>(idx)];
        if (!have_counts || co.gen != cur_gen) {
            build_counts(co.gen);
            cur_gen = co.gen;
            have_counts = true;
        }
        std::int64_t q0 = co.kb0, q1 = co.kb1;
        int jr = co.j;
        std::int64_t r0 = q0, r1 = q1;
        for (int j = jmin; j <= co.j; ++j) {
            std::int64_t p0 = q0 >> (co.j - j), p1 = q1 >> (co.j - j);
            std::int64_t njj = c.n_at(j);
            std::int64_t flat = n == 2 ? p0 * njj + p1 : p0;
            if (cnt[static_cast<std::size_t>(j - jmin)][static_cast<std::size_t>(flat)] > 0.5) {
                jr = j; r0 = p0; r1 = p1;
                break;
            }
        }
        groups[{co.gen, jr, n == 2 ? r0 * c.n_at(jr) + r1 : r0}].push_back(&co);
    }

    double h1 = h1_square_norm(c);
    for (const auto& [key, members] : groups) {
        auto [gen, jr, flatr] = key;
        (void)gen;
        DyadicCube R;
        R.j = jr;
        R.dims = n;
        std::int64_t njr = c.n_at(jr);
        R.k[0] = (n == 2 ? flatr / njr : flatr) + c.origin_offset(jr, 0);
        if (n == 2) R.k[1] = flatr % njr + c.origin_offset(jr, 1);

        double group_l2 = 0.0;
        for (const Coeff* co : members) group_l2 += co->v * co->v;
        group_l2 = std::sqrt(group_l2);
        double mu = group_l2 * std::sqrt(detail::cube_volume(R));

        WaveletCoeffs ac(c.box(), c.j0(), c.J(), c.filter());
        for (const Coeff* co : members)
            ac.detail(co->j, co->lam)[static_cast<std::size_t>(co->q)] = co->v / mu;
        AtomicDecomposition::Term term;
        term.mu = mu;
        term.atom = PsiAtom{std::move(ac), R, group_l2 / mu};
        term.R = R;
        dec.terms.push_back(std::move(term));
        dec.l1_mass += std::abs(mu);
    }
    dec.mass_ratio = h1 > 0.0 ? dec.l1_mass / h1 : 0.0;
    return dec;
}

struct Pi2SplitDiagnostics {
    double split_residual = 0.0;      // || h1 + second - Pi2(a,g) ||_inf
    double b_l2 = 0.0;                // L2 mass of the localized detail part of g
    double b_ratio = 0.0;             // b_l2 / (||g||_BMO |R|^{1/2})
    double h_mean_max = 0.0;          // worst mean of |I|^{1/2} phi_I a
    double h_norm_ratio_max = 0.0;    // worst ||h||_2 |mR|^{1/2}
    double gamma_integral_max = 0.0;  // worst |integral of gamma|
    double gamma_pairing_max = 0.0;   // worst |g_R - |I|^{-1/2} <g, phi_I>|
    double gamma_pairing_ratio = 0.0; // gamma_pairing_max / ||g||_BMO
    double g_R = 0.0;
    double kappa = 0.0;               // normalization making h2 a unit atom for mR
    int phi_terms = 0;
};

struct Pi2AtomSplit {
    GridFunction h1;
    GridFunction second; // kappa g_R h2 recombined, equal to a P_{j0} g
    Pi2SplitDiagnostics diag;
};

// Split Pi2(a, g) into a bounded part and a multiple of a classical atom.
// The second part is a P_{j0} g with j0 the scale of R; the first part is the
// exact complement, so the two always recombine to Pi2(a, g).
inline Pi2AtomSplit pi2_atom_split(const PsiAtom& a, const GridFunction& g,
                                   const WaveletCoeffs& g_coeffs) {
    validate_psi_atom(a.coeffs, a.R);
    const Box& box = a.coeffs.box();
    if (!g.same_geometry(GridFunction(box, a.coeffs.J())))
        throw std::invalid_argument("pi2_atom_split: geometry mismatch");
    const FilterPair& filt = a.coeffs.filter();
    const int m = filt.support_m;
    const int n = box.dims;
    const int j0 = a.R.j;
    if (m * a.R.side() > box.side)
        throw std::invalid_argument("pi2_atom_split: m-dilation of R exceeds the box");
    if (j0 >= a.coeffs.J())
        throw std::invalid_argument("pi2_atom_split: R is at the finest scale");

    GridFunction afun = dwt_inverse(a.coeffs);
    ProductSplit ps = paraproduct_split(afun, g, j0, filt);
    GridFunction second = afun * project(g, j0, Part::P, filt);
    Pi2AtomSplit out{ps.pi2 - second, second, {}};
    out.diag.split_residual = linf_norm((out.h1 + out.second) - ps.pi2);

    double bmo_g = bmo_wavelet_norm(g_coeffs);
    double rside = a.R.side();
    auto rcen = a.R.center();

    // localized detail part b: coefficients of g at scales >= j0 on cubes near R
    double b2 = 0.0;
    g_coeffs.for_each_detail([&](int j, int lam, std::int64_t q, double v) {
        if (j < j0) return;
        auto cen = g_coeffs.cube_of(j, lam, q).center();
        bool near = true;
        for (int ax = 0; ax < n; ++ax)
            if (detail::wrapped_dist(cen[static_cast<std::size_t>(ax)],
                                     rcen[static_cast<std::size_t>(ax)], box.side) > m * rside)
                near = false;
        if (near) b2 += v * v;
    });
    out.diag.b_l2 = std::sqrt(b2);
    double rvol = detail::cube_volume(a.R);
    if (bmo_g > 0.0) out.diag.b_ratio = out.diag.b_l2 / (bmo_g * std::sqrt(rvol));

    // mean of g over R
    std::int64_t njr = a.coeffs.n_at(j0);
    std::int64_t w = a.coeffs.n_at(a.coeffs.J()) / njr;
    std::array<std::int64_t, 2> kb{0, 0};
    for (int ax = 0; ax < n; ++ax)
        kb[static_cast<std::size_t>(ax)] = a.R.k[static_cast<std::size_t>(ax)] - a.coeffs.origin_offset(j0, ax);
    GridFunction chiR(box, a.coeffs.J());
    for (std::int64_t r0 = kb[0] * w; r0 < (kb[0] + 1) * w; ++r0) {
        if (n == 1) chiR[r0] = 1.0 / rvol;
        else
            for (std::int64_t r1 = kb[1] * w; r1 < (kb[1] + 1) * w; ++r1)
                chiR[r0 * chiR.n() + r1] = 1.0 / rvol;
    }
    out.diag.g_R = inner_product(chiR, g);

    // per-cube diagnostics for the scaling terms phi_I near R
    double isqrt = std::sqrt(rvol);
    double mr_sqrt = std::sqrt(std::pow(m * rside, n));
    WaveletCoeffs probe(box, std::max(j0, box.min_level()), a.coeffs.J(), filt);
    for (std::int64_t flat = 0; flat < probe.cells_at(j0); ++flat) {
        DyadicCube I = probe.cube_of(j0, 0, flat);
        auto icen = I.center();
        bool near = true;
        for (int ax = 0; ax < n; ++ax)
            if (detail::wrapped_dist(icen[static_cast<std::size_t>(ax)],
                                     rcen[static_cast<std::size_t>(ax)], box.side) > m * rside)
                near = false;
        if (!near) continue;
        GridFunction phi = synthesize(I, BasisKind::Scaling, box, a.coeffs.J(), filt);
        GridFunction h = isqrt * (phi * afun);
        if (linf_norm(h) == 0.0) continue;
        ++out.diag.phi_terms;
        out.diag.h_mean_max = std::max(out.diag.h_mean_max, std::abs(integrate(h)));
        out.diag.h_norm_ratio_max = std::max(out.diag.h_norm_ratio_max, l2_norm(h) * mr_sqrt);
        GridFunction gamma = chiR - (1.0 / isqrt) * phi;
        out.diag.gamma_integral_max = std::max(out.diag.gamma_integral_max, std::abs(integrate(gamma)));
        out.diag.gamma_pairing_max =
            std::max(out.diag.gamma_pairing_max, std::abs(inner_product(gamma, g)));
    }
    if (bmo_g > 0.0) out.diag.gamma_pairing_ratio = out.diag.gamma_pairing_max / bmo_g;
    if (std::abs(out.diag.g_R) > 0.0)
        out.diag.kappa = l2_norm(out.second) * mr_sqrt / std::abs(out.diag.g_R);
    return out;
}

// Lemma-style pairing: integral of |g - g_Q| against the maximal function of
// the atom, with Q the m-dilation of the atom's cube.
inline double classical_atom_pairing(const PsiAtom& a, const GridFunction& g) {
    const Box& box = a.coeffs.box();
    const int m = a.coeffs.filter().support_m;
    double qside = std::min(static_cast<double>(m) * a.R.side(), box.side);
    auto qcen = a.R.center();

    GridFunction f = dwt_inverse(a.coeffs);
    if (!g.same_geometry(f))
        throw std::invalid_argument("classical_atom_pairing: geometry mismatch");

    double gsum = 0.0;
    std::int64_t cells = 0;
    for (std::int64_t i = 0; i < g.total_cells(); ++i) {
        auto x = g.midpoint(i);
        bool inside = true;
        for (int ax = 0; ax < g.dims(); ++ax)
            if (detail::wrapped_dist(x[static_cast<std::size_t>(ax)],
                                     qcen[static_cast<std::size_t>(ax)], box.side) > qside / 2.0)
                inside = false;
        if (inside) { gsum += g[i]; ++cells; }
    }
    double gq = cells > 0 ? gsum / static_cast<double>(cells) : 0.0;

    GridFunction mf = grand_maximal(f);
    double acc = 0.0;
    for (std::int64_t i = 0; i < g.total_cells(); ++i)
        acc += std::abs(g[i] - gq) * mf[i];
    return acc * g.cell_volume();
}

} // namespace wavprod

#endif
