#ifndef WAVPROD_SELFCHECK_HPP
#define WAVPROD_SELFCHECK_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wavprod/atoms.hpp"
#include "wavprod/corpus.hpp"
#include "wavprod/divcurl.hpp"
#include "wavprod/paraproduct.hpp"
#include "wavprod/spaces.hpp"

namespace wavprod {

// One acceptance criterion. `measured` is the worst subcheck value normalized
// by its tolerance, so the criterion passes exactly when measured <= 1.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 1.0;
    std::string note; // which subcheck was binding
};

namespace detail {

struct Worst {
    double value = 0.0;
    std::string label;

    void track(double v, const std::string& what) {
        if (!(v <= value)) { // catches NaN too
            value = v;
            label = what;
        }
    }
    CriterionResult done(int id, std::string name) const {
        CriterionResult r;
        r.id = id;
        r.name = std::move(name);
        r.measured = value;
        r.tolerance = 1.0;
        r.pass = std::isfinite(value) && value <= 1.0;
        r.note = label;
        return r;
    }
};

inline GridFunction random_fun(const Box& box, int J, CounterRng& rng) {
    GridFunction f(box, J);
    for (auto& v : f.samples()) v = rng.symmetric();
    return f;
}

} // namespace detail

inline CriterionResult criterion_wavelets(std::uint64_t seed) {
    detail::Worst w;
    const Box box;
    const int J = 10;
    CounterRng rng{seed, 0};
    for (const char* name : {"db2", "db3", "db4", "db5", "db6", "db7", "db8"}) {
        FilterPair filt = load_filter(name);
        GridFunction f = detail::random_fun(box, J, rng);
        GridFunction g = dwt_inverse(dwt_forward(f, 0, filt));
        w.track(linf_norm(g - f) / (1e-10 * linf_norm(f)), std::string("roundtrip ") + name);

        // moment condition on an interior cube
        GridFunction psi = synthesize(DyadicCube{5, {16, 0}, 1, 1}, BasisKind::Wavelet, box, J, filt);
        double m0 = 0.0, m1 = 0.0;
        for (std::int64_t i = 0; i < psi.total_cells(); ++i) {
            m0 += psi[i];
            m1 += psi[i] * psi.midpoint(i)[0];
        }
        m0 *= psi.cell_volume();
        m1 *= psi.cell_volume();
        w.track(std::abs(m0) / 1e-8, std::string("zeroth moment ") + name);
        w.track(std::abs(m1) / 1e-8, std::string("first moment ") + name);
    }

    FilterPair db4 = load_filter("db4");
    std::vector<GridFunction> basis;
    std::vector<std::pair<int, std::int64_t>> picked;
    while (basis.size() < 50) {
        int j = static_cast<int>(rng.range(2, J - 1));
        std::int64_t n = std::int64_t{1} << j;
        std::int64_t q = rng.range(0, n - 1);
        if (std::find(picked.begin(), picked.end(), std::make_pair(j, q)) != picked.end()) continue;
        picked.emplace_back(j, q);
        WaveletCoeffs c(box, 0, J, db4);
        basis.push_back(synthesize(c.cube_of(j, 1, q), BasisKind::Wavelet, box, J, db4));
    }
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t k = i; k < basis.size(); ++k) {
            double ip = inner_product(basis[i], basis[k]);
            if (i == k) w.track(std::abs(ip - 1.0) / 1e-8, "Gram diagonal");
            else w.track(std::abs(ip) / 1e-8, "Gram off-diagonal");
        }
    return w.done(1, "wavelet correctness");
}

inline CriterionResult criterion_splitting(std::uint64_t seed) {
    detail::Worst w;
    CorpusSpec spec;
    spec.J = 10;
    spec.filter = "db4";
    spec.count = 200;
    spec.sparsity = 0.4;
    FilterPair filt = load_filter(spec.filter);
    auto corpus = gen_corpus(spec, seed);
    for (int p = 0; p < 100; ++p) {
        GridFunction f = corpus[static_cast<std::size_t>(2 * p)].fun;
        GridFunction g = corpus[static_cast<std::size_t>(2 * p + 1)].fun;
        if (p % 2 == 1) // exercise a nonzero coarse part on half the pairs
            for (auto& v : f.samples()) v += 0.3;
        ProductSplit s = paraproduct_split(f, g, 0, filt);
        GridFunction sum = s.pi1 + s.pi2 + s.pi3 + s.coarse_term;
        w.track(linf_norm(sum - f * g) / (1e-10 * linf_norm(f) * linf_norm(g)), "splitting identity");
        ProductSplit t = paraproduct_split(g, f, 0, filt);
        w.track(linf_norm(s.pi2 - t.pi1) > 0.0 ? 2.0 : 0.0, "pi2/pi1 symmetry");
    }
    return w.done(2, "exact product splitting");
}

inline CriterionResult criterion_pi3_chain(std::uint64_t seed) {
    detail::Worst w;
    CorpusSpec spec;
    spec.J = 10;
    spec.filter = "db3";
    spec.count = 100;
    FilterPair filt = load_filter(spec.filter);
    auto corpus = gen_corpus(spec, seed);
    for (int p = 0; p < 50; ++p) {
        const GridFunction& f = corpus[static_cast<std::size_t>(2 * p)].fun;
        const GridFunction& g = corpus[static_cast<std::size_t>(2 * p + 1)].fun;
        Pi3Chain c = pi3_l1_bound(f, g, 0, filt);
        w.track((c.pi3_l1 - c.detail_sum) / 1e-10, "pi3 L1 vs level sums");
        w.track((c.detail_sum - l2_norm(f) * l2_norm(g)) / 1e-10, "level sums vs Cauchy-Schwarz");
    }
    return w.done(3, "pi3 chain");
}

inline CriterionResult criterion_cancellation(std::uint64_t seed) {
    detail::Worst w;
    CorpusSpec spec;
    spec.J = 10;
    spec.filter = "db3";
    spec.count = 100;
    FilterPair filt = load_filter(spec.filter);
    auto corpus = gen_corpus(spec, seed);
    for (int p = 0; p < 50; ++p) {
        const GridFunction& f = corpus[static_cast<std::size_t>(2 * p)].fun;
        const GridFunction& g = corpus[static_cast<std::size_t>(2 * p + 1)].fun;
        ProductSplit s = paraproduct_split(f, g, 0, filt);
        double t_mean = std::abs(integrate(s.renormalized()));
        w.track(t_mean / (1e-8 * l2_norm(f) * l2_norm(g)), "mean of T");
    }

    CorpusSpec small = spec;
    small.J = 9;
    small.count = 10;
    auto mcorp = gen_corpus(small, seed + 1);
    for (int p = 0; p < 5; ++p) {
        MoleculeReport rep = molecule_remainder(mcorp[static_cast<std::size_t>(2 * p)].fun,
                                                mcorp[static_cast<std::size_t>(2 * p + 1)].fun, 0, filt);
        w.track(rep.max_cross_mean / 1e-8, "cross-term means");
        w.track(rep.neighbor_violations > 0 ? 2.0 : 0.0, "cross-term supports");
    }
    return w.done(4, "cancellation of the renormalized part");
}

namespace detail {

// independent scalar oracle for || c chi_E ||_Llog with E = [0, b)
inline double luxemburg_indicator_oracle(double c, double b) {
    auto integral = [c, b](double lam) {
        const int steps = 4096; // Simpson on [0, b]
        double h = b / steps;
        double acc = 0.0;
        for (int i = 0; i <= steps; ++i) {
            double x = i * h;
            double wgt = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc += wgt * theta({x, 0.0}, 1, c / lam);
        }
        return acc * h / 3.0;
    };
    double lo = std::numeric_limits<double>::min();
    double hi = c * b + 1.0;
    for (int it = 0; it < 300; ++it) {
        double mid = 0.5 * (lo + hi);
        if (integral(mid) > 1.0) lo = mid; else hi = mid;
        if (hi - lo <= 1e-12 * hi) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

inline CriterionResult criterion_luxemburg(std::uint64_t seed) {
    detail::Worst w;
    const Box box;
    const int J = 10;
    const double b = 0.125;
    for (double c : {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}) {
        GridFunction f(box, J);
        for (std::int64_t i = 0; i < f.total_cells(); ++i)
            if (f.midpoint(i)[0] < b) f[i] = c;
        double got = luxemburg_log_norm(f);
        double want = detail::luxemburg_indicator_oracle(c, b);
        w.track(std::abs(got - want) / (1e-6 * want), "indicator oracle");
    }
    CounterRng rng{seed, 0};
    for (int p = 0; p < 50; ++p) {
        GridFunction f = detail::random_fun(box, J, rng);
        double n1 = luxemburg_log_norm(f);
        double n2 = luxemburg_log_norm(2.0 * f);
        w.track(std::abs(n2 - 2.0 * n1) / (1e-8 * 2.0 * n1), "homogeneity");
    }
    return w.done(5, "Luxemburg norm");
}

inline CriterionResult criterion_log_inequality(std::uint64_t seed) {
    detail::Worst w;
    CounterRng rng{seed, 0};
    for (int i = 0; i < 10000; ++i) {
        double s = 100.0 * std::max(rng.unit(), 1e-12);
        double t = 100.0 * std::max(rng.unit(), 1e-12);
        double M = 1.0 + 19.0 * rng.unit();
        LogInequalityCheck c = check_scalar_log_inequality(s, t, M);
        w.track(c.lhs / c.rhs, "sampled triple");
    }
    for (double M : {1.0, 2.0, 5.0, 10.0, 20.0})
        for (int i = 1; i <= 100; ++i) {
            double t = (M + std::log(100.0)) * i / 100.0;
            double s = std::min(std::exp(t - M), 100.0);
            LogInequalityCheck c = check_scalar_log_inequality(s, t, M);
            w.track(c.lhs / c.rhs, "boundary family");
        }
    return w.done(6, "scalar log inequality");
}

inline CriterionResult criterion_holder(std::uint64_t seed) {
    detail::Worst w;
    double sup9 = 0.0, sup10 = 0.0;
    for (int J : {9, 10}) {
        CorpusSpec fs;
        fs.J = J;
        fs.filter = "db4";
        fs.count = 200;
        fs.sparsity = 0.2;
        CorpusSpec gs = fs;
        gs.kind = CorpusKind::BmoLogExemplar;
        gs.trunc_level = 5.0;
        auto fc = gen_corpus(fs, seed);
        auto gc = gen_corpus(gs, seed + 1);
        double sup = 0.0;
        for (int p = 0; p < 200; ++p) {
            HolderReport r = holder_product_bound(fc[static_cast<std::size_t>(p)].fun,
                                                  gc[static_cast<std::size_t>(p)].fun,
                                                  gc[static_cast<std::size_t>(p)].coeffs);
            w.track(std::isfinite(r.ratio) ? 0.0 : 2.0, "finiteness");
            sup = std::max(sup, r.ratio);
        }
        (J == 9 ? sup9 : sup10) = sup;
    }
    double drift = std::max(sup10 / sup9, sup9 / sup10);
    w.track(drift / 2.0, "sup ratio J=9 vs J=10");
    return w.done(7, "generalized Holder");
}

inline CriterionResult criterion_atomic(std::uint64_t seed) {
    detail::Worst w;
    CorpusSpec spec;
    spec.J = 10;
    spec.filter = "db4";
    spec.sparsity = 0.3;
    double cmin = 0.0, cmax = 0.0;
    bool first = true;
    for (int size : {50, 100, 200}) {
        spec.count = size;
        auto corpus = gen_corpus(spec, seed);
        double cbound = 0.0;
        for (const auto& item : corpus) {
            AtomicDecomposition d = atomic_decompose(item.coeffs);
            WaveletCoeffs rec = d.reconstruct(item.coeffs);
            double diff = 0.0, scale = 0.0;
            for (int j = 0; j < spec.J; ++j) {
                const auto& x = rec.detail(j, 1);
                const auto& y = item.coeffs.detail(j, 1);
                for (std::size_t i = 0; i < x.size(); ++i) {
                    diff = std::max(diff, std::abs(x[i] - y[i]));
                    scale = std::max(scale, std::abs(y[i]));
                }
            }
            w.track(diff / (1e-12 * std::max(1.0, scale)), "reconstruction");
            cbound = std::max(cbound, d.mass_ratio);
        }
        cmin = first ? cbound : std::min(cmin, cbound);
        cmax = first ? cbound : std::max(cmax, cbound);
        first = false;
    }
    w.track(cmax / cmin / 2.0, "constant stability across corpus sizes");
    return w.done(8, "atomic decomposition");
}

inline CriterionResult criterion_atom_split(std::uint64_t seed) {
    detail::Worst w;
    CorpusSpec as;
    as.kind = CorpusKind::Atom;
    as.J = 9;
    as.filter = "db2";
    as.count = 20;
    as.scale_min = 2;
    as.scale_max = 5;
    as.sparsity = 0.6;
    CorpusSpec gs;
    gs.kind = CorpusKind::BmoLogExemplar;
    gs.J = 9;
    gs.filter = "db2";
    gs.count = 20;
    auto atoms = gen_corpus(as, seed);
    auto gfun = gen_corpus(gs, seed + 1);
    for (int p = 0; p < 20; ++p) {
        const auto& item = atoms[static_cast<std::size_t>(p)];
        PsiAtom a = validate_psi_atom(item.coeffs, item.R);
        const auto& g = gfun[static_cast<std::size_t>(p)];
        Pi2AtomSplit sp = pi2_atom_split(a, g.fun, g.coeffs);
        double scale = std::max(1.0, linf_norm(g.fun) * linf_norm(dwt_inverse(a.coeffs)));
        w.track(sp.diag.split_residual / (1e-10 * scale), "split recombination");
        w.track(sp.diag.gamma_integral_max / 1e-10, "gamma mean");
        w.track(sp.diag.h_mean_max / 1e-8, "phi_I a mean");
        w.track(std::isfinite(sp.diag.b_ratio) ? 0.0 : 2.0, "b localization bound");
    }
    return w.done(9, "pi2 atom split");
}

inline CriterionResult criterion_divcurl(std::uint64_t seed) {
    detail::Worst w;
    const Box box1;
    GridFunction c(box1, 10), s(box1, 10);
    for (std::int64_t i = 0; i < c.total_cells(); ++i) {
        double x = c.midpoint(i)[0];
        c[i] = std::cos(2.0 * std::numbers::pi * x);
        s[i] = std::sin(2.0 * std::numbers::pi * x);
    }
    w.track(linf_norm(riesz_transform(c, 0) - s) / 1e-10, "Hilbert eigenfunction");

    FilterPair filt = load_filter("db2");
    double sup6 = 0.0, sup7 = 0.0;
    for (int J : {6, 7}) {
        CorpusSpec spec;
        spec.kind = CorpusKind::BandLimitedPotential;
        spec.box.dims = 2;
        spec.J = J;
        spec.count = 100;
        auto pots = gen_corpus(spec, seed);
        double sup = 0.0;
        for (int p = 0; p < 50; ++p) {
            auto [F, G] = potential_fields(pots[static_cast<std::size_t>(2 * p)].fun,
                                           pots[static_cast<std::size_t>(2 * p + 1)].fun);
            DivCurlReport rep = divcurl_product(F, G, filt);
            w.track(rep.riesz_identity_residual / 1e-8, "sum R_j G_j");
            w.track(std::abs(rep.integral_FG) / (1e-8 * rep.l2_F * rep.l2_G), "integral of F.G");
            w.track(std::isfinite(rep.ratio) ? 0.0 : 2.0, "hlog ratio finiteness");
            sup = std::max(sup, rep.ratio);
        }
        (J == 6 ? sup6 : sup7) = sup;
    }
    w.track(std::max(sup7 / sup6, sup6 / sup7) / 2.0, "hlog ratio stability J=6 vs J=7");
    return w.done(10, "div-curl pipeline");
}

inline CriterionResult criterion_pdelta(std::uint64_t seed) {
    detail::Worst w;
    CounterRng rng{seed, 0};
    for (int trial = 0; trial < 200; ++trial) {
        DyadicCube A{static_cast<int>(rng.range(0, 6)), {rng.range(0, 40), rng.range(0, 40)},
                     1, trial % 2 == 0 ? 1 : 2};
        DyadicCube B{static_cast<int>(rng.range(0, 6)), {rng.range(0, 40), rng.range(0, 40)},
                     1, A.dims};
        double d = 0.3 + 0.7 * rng.unit();
        w.track(p_delta(A, A, d) == 1.0 ? 0.0 : 2.0, "identity");
        w.track(p_delta(A, B, d) == p_delta(B, A, d) ? 0.0 : 2.0, "symmetry");
    }

    const Box box;
    FilterPair filt = load_filter("db3");
    MultiplierOperator H = riesz_operator(1, 0);
    double sup9 = 0.0, sup10 = 0.0;
    for (int J : {9, 10}) {
        CorpusSpec spec;
        spec.J = J;
        spec.filter = "db3";
        spec.count = 60;
        spec.sparsity = 0.2;
        auto corpus = gen_corpus(spec, seed + 2);
        double sup = 0.0;
        for (int p = 0; p < 30; ++p) {
            BilinearBReport rep = bilinear_B(corpus[static_cast<std::size_t>(2 * p)].coeffs,
                                             corpus[static_cast<std::size_t>(2 * p + 1)].coeffs, H);
            if (rep.pairing_rhs > 0.0) sup = std::max(sup, rep.pairing_lhs / rep.pairing_rhs);
            w.track(std::isfinite(rep.h1_proxy) ? 0.0 : 2.0, "B-form H1 proxy");
        }
        (J == 9 ? sup9 : sup10) = sup;
    }
    w.track(std::max(sup10 / sup9, sup9 / sup10) / 2.0, "B-form constant stability");
    return w.done(11, "p_delta and B-form sanity");
}

inline std::vector<CriterionResult> run_selfcheck(std::uint64_t seed = 2026) {
    return {
        criterion_wavelets(seed),      criterion_splitting(seed),  criterion_pi3_chain(seed),
        criterion_cancellation(seed),  criterion_luxemburg(seed),  criterion_log_inequality(seed),
        criterion_holder(seed),        criterion_atomic(seed),     criterion_atom_split(seed),
        criterion_divcurl(seed),       criterion_pdelta(seed),
    };
}

} // namespace wavprod

#endif
