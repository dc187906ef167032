#ifndef WAVPROD_CORPUS_HPP
#define WAVPROD_CORPUS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavprod/atoms.hpp"
#include "wavprod/wavelet.hpp"

namespace wavprod {

// Counter-based generator: every draw is a pure function of (seed, counter),
// so corpora are reproducible across platforms and parallel schedules.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_rand(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

struct CounterRng {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    std::uint64_t u64() { return counter_rand(seed, counter++); }
    double unit() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; } // [0,1)
    double symmetric() { return 2.0 * unit() - 1.0; }                      // (-1,1)
    std::int64_t range(std::int64_t lo, std::int64_t hi) { // inclusive
        return lo + static_cast<std::int64_t>(u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

enum class CorpusKind { FiniteWaveletRandom, Atom, BmoLogExemplar, BandLimitedPotential };

struct CorpusSpec {
    CorpusKind kind = CorpusKind::FiniteWaveletRandom;
    Box box;
    int J = 8;
    std::string filter = "db4";
    int count = 1;
    double sparsity = 0.3;       // fill probability for wavelet coefficients
    double amplitude_decay = 0.0; // coefficients scaled by 2^{-decay*j}
    int scale_min = 0;           // coarsest level used (atom cube / coefficients)
    int scale_max = -1;          // default: J-2 for atoms, J-1 otherwise
    int band_limit = 4;          // |k| cap for band-limited potentials
    double trunc_level = 4.0;    // cap for the log exemplar

    void validate() const {
        box.validate();
        if (J <= box.min_level()) throw std::invalid_argument("CorpusSpec: J too coarse");
        if (count < 0) throw std::invalid_argument("CorpusSpec: negative count");
        if (sparsity < 0.0 || sparsity > 1.0) throw std::invalid_argument("CorpusSpec: bad sparsity");
        if (scale_min < box.min_level() || scale_min >= J)
            throw std::invalid_argument("CorpusSpec: bad scale_min");
        if (scale_max >= 0 && (scale_max < scale_min || scale_max >= J))
            throw std::invalid_argument("CorpusSpec: bad scale_max");
        if (band_limit < 1) throw std::invalid_argument("CorpusSpec: bad band_limit");
        if (trunc_level <= 0.0) throw std::invalid_argument("CorpusSpec: bad trunc_level");
        load_filter(filter);
    }
};

struct CorpusItem {
    GridFunction fun;
    WaveletCoeffs coeffs;
    bool has_coeffs = false;
    bool is_atom = false;
    DyadicCube R; // atom cube when is_atom
};

namespace detail {

inline CorpusItem gen_wavelet_random(const CorpusSpec& spec, CounterRng& rng) {
    FilterPair filt = load_filter(spec.filter);
    WaveletCoeffs c(spec.box, spec.box.min_level(), spec.J, filt);
    int top = spec.scale_max >= 0 ? spec.scale_max : spec.J - 1;
    for (int j = spec.scale_min; j <= top; ++j) {
        double amp = std::pow(2.0, -spec.amplitude_decay * j);
        for (int lam = 1; lam <= c.lambda_count(); ++lam)
            for (auto& v : c.detail(j, lam)) {
                double keep = rng.unit();
                double val = rng.symmetric();
                if (keep < spec.sparsity) v = amp * val;
            }
    }
    CorpusItem item{dwt_inverse(c), std::move(c), true, false, {}};
    return item;
}

inline CorpusItem gen_atom(const CorpusSpec& spec, CounterRng& rng) {
    FilterPair filt = load_filter(spec.filter);
    const int n = spec.box.dims;
    int top = spec.scale_max >= 0 ? spec.scale_max : spec.J - 2;
    if (top < spec.scale_min) top = spec.scale_min;
    WaveletCoeffs c(spec.box, spec.box.min_level(), spec.J, filt);
    int jR = static_cast<int>(rng.range(spec.scale_min, top));
    std::int64_t nR = c.n_at(jR);
    DyadicCube R;
    R.j = jR;
    R.dims = n;
    for (int a = 0; a < n; ++a)
        R.k[static_cast<std::size_t>(a)] = rng.range(0, nR - 1) + c.origin_offset(jR, a);

    for (int j = jR; j < spec.J; ++j) {
        const int shift = j - jR;
        std::int64_t w = std::int64_t{1} << shift;
        for (int lam = 1; lam <= c.lambda_count(); ++lam)
            for (std::int64_t d0 = 0; d0 < w; ++d0)
                for (std::int64_t d1 = 0; d1 < (n == 2 ? w : 1); ++d1) {
                    double keep = rng.unit();
                    double val = rng.symmetric();
                    if (keep >= spec.sparsity && j != jR) continue;
                    DyadicCube I;
                    I.j = j;
                    I.dims = n;
                    I.lambda = lam;
                    I.k[0] = (R.k[0] << shift) + d0;
                    if (n == 2) I.k[1] = (R.k[1] << shift) + d1;
                    c.detail(j, lam)[static_cast<std::size_t>(c.flat_index_of(I))] = val;
                }
    }
    double norm = std::sqrt(c.sum_detail_squares());
    double target = 1.0 / std::sqrt(detail::cube_volume(R));
    for (int j = jR; j < spec.J; ++j)
        for (int lam = 1; lam <= c.lambda_count(); ++lam)
            for (auto& v : c.detail(j, lam)) v *= target / norm;
    PsiAtom a = validate_psi_atom(c, R);
    CorpusItem item{dwt_inverse(a.coeffs), std::move(a.coeffs), true, true, R};
    return item;
}

inline CorpusItem gen_bmo_log(const CorpusSpec& spec, CounterRng& rng) {
    FilterPair filt = load_filter(spec.filter);
    const int n = spec.box.dims;
    std::array<double, 2> x0{0.0, 0.0};
    for (int a = 0; a < n; ++a)
        x0[static_cast<std::size_t>(a)] =
            spec.box.origin[static_cast<std::size_t>(a)] + rng.unit() * spec.box.side;
    GridFunction f(spec.box, spec.J);
    for (std::int64_t i = 0; i < f.total_cells(); ++i) {
        auto x = f.midpoint(i);
        double d2 = 0.0;
        for (int a = 0; a < n; ++a) {
            double d = std::remainder(x[static_cast<std::size_t>(a)] - x0[static_cast<std::size_t>(a)],
                                      spec.box.side);
            d2 += d * d;
        }
        double dist = std::sqrt(d2);
        double v = dist > 0.0 ? -std::log(dist) : spec.trunc_level;
        f[i] = std::min(v, spec.trunc_level);
    }
    WaveletCoeffs c = dwt_forward(f, spec.box.min_level(), filt);
    CorpusItem item{std::move(f), std::move(c), true, false, {}};
    return item;
}

inline CorpusItem gen_band_limited(const CorpusSpec& spec, CounterRng& rng) {
    const int n = spec.box.dims;
    const double tau = 2.0 * std::numbers::pi / spec.box.side;
    struct Mode {
        double k0, k1, a, b;
    };
    std::vector<Mode> modes;
    for (int k0 = -spec.band_limit; k0 <= spec.band_limit; ++k0)
        for (int k1 = n == 2 ? -spec.band_limit : 0; k1 <= (n == 2 ? spec.band_limit : 0); ++k1) {
            double a = rng.symmetric(), b = rng.symmetric();
            if (k0 == 0 && k1 == 0) continue;
            modes.push_back({static_cast<double>(k0), static_cast<double>(k1), a, b});
        }
    GridFunction f(spec.box, spec.J);
    for (std::int64_t i = 0; i < f.total_cells(); ++i) {
        auto x = f.midpoint(i);
        double s = 0.0;
        for (const auto& m : modes) {
            double ph = tau * (m.k0 * x[0] + m.k1 * x[1]);
            s += m.a * std::cos(ph) + m.b * std::sin(ph);
        }
        f[i] = s;
    }
    CorpusItem item{std::move(f), WaveletCoeffs(), false, false, {}};
    return item;
}

} // namespace detail

inline std::vector<CorpusItem> gen_corpus(const CorpusSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::vector<CorpusItem> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        // one disjoint counter block per item, independent of evaluation order
        CounterRng rng{counter_rand(seed, static_cast<std::uint64_t>(i)), 0};
        switch (spec.kind) {
        case CorpusKind::FiniteWaveletRandom: out.push_back(detail::gen_wavelet_random(spec, rng)); break;
        case CorpusKind::Atom: out.push_back(detail::gen_atom(spec, rng)); break;
        case CorpusKind::BmoLogExemplar: out.push_back(detail::gen_bmo_log(spec, rng)); break;
        case CorpusKind::BandLimitedPotential: out.push_back(detail::gen_band_limited(spec, rng)); break;
        }
    }
    return out;
}

} // namespace wavprod

#endif
