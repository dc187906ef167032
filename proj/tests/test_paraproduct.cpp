#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wavprod/paraproduct.hpp"

using namespace wavprod;

namespace {

GridFunction random_grid(const Box& box, int J, unsigned seed) {
    GridFunction f(box, J);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : f.samples()) v = u(rng);
    return f;
}

GridFunction haar_wavelet(const Box& box, int J) {
    GridFunction f(box, J);
    for (std::int64_t i = 0; i < f.total_cells(); ++i)
        f[i] = i < f.total_cells() / 2 ? 1.0 : -1.0;
    return f;
}

double linf(const GridFunction& f) { return linf_norm(f); }

// random function with zero coarse part (details only)
GridFunction random_detail_only(const Box& box, int J, const FilterPair& filt, unsigned seed) {
    GridFunction f = random_grid(box, J, seed);
    WaveletCoeffs c = dwt_forward(f, 0, filt);
    std::fill(c.scaling().begin(), c.scaling().end(), 0.0);
    return dwt_inverse(c);
}

} // namespace

TEST_CASE("single-scale Haar product") {
    Box box;
    FilterPair haar = load_filter("haar");
    GridFunction psi = haar_wavelet(box, 6);
    ProductSplit s = paraproduct_split(psi, psi, 0, haar);
    CHECK(linf(s.pi1) < 1e-14);
    CHECK(linf(s.pi2) < 1e-14);
    CHECK(linf(s.coarse_term) < 1e-14);
    for (std::int64_t i = 0; i < s.pi3.total_cells(); ++i)
        CHECK(s.pi3[i] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant second factor") {
    Box box;
    FilterPair filt = load_filter("db3");
    GridFunction f = random_grid(box, 8, 1);
    GridFunction g(box, 8);
    for (auto& v : g.samples()) v = 2.0;
    ProductSplit s = paraproduct_split(f, g, 2, filt);
    CHECK(linf(s.pi1) < 1e-12);
    CHECK(linf(s.pi3) < 1e-12);
    GridFunction p2f = project(f, 2, Part::P, filt);
    CHECK(linf(s.pi2 - 2.0 * (f - p2f)) < 1e-10);
    CHECK(linf(s.coarse_term - 2.0 * p2f) < 1e-10);
}

TEST_CASE("exact splitting, symmetry, bilinearity") {
    Box box;
    FilterPair filt = load_filter("db4");
    for (unsigned seed = 0; seed < 25; ++seed) {
        GridFunction f = random_grid(box, 8, 1000 + seed);
        GridFunction g = random_grid(box, 8, 2000 + seed);
        ProductSplit s = paraproduct_split(f, g, 0, filt);
        GridFunction recon = s.pi1 + s.pi2 + s.pi3 + s.coarse_term;
        CHECK(linf(recon - f * g) <= 1e-10 * linf(f) * linf(g));

        // pi2(f,g) = pi1(g,f) sample-exact
        ProductSplit t = paraproduct_split(g, f, 0, filt);
        CHECK(linf(s.pi2 - t.pi1) == 0.0);
        CHECK(linf(s.pi1 - t.pi2) == 0.0);
    }

    // bilinearity on a random linear combination
    GridFunction f1 = random_grid(box, 7, 31), f2 = random_grid(box, 7, 32);
    GridFunction g = random_grid(box, 7, 33);
    double al = 0.7, be = -1.3;
    ProductSplit sc = paraproduct_split(al * f1 + be * f2, g, 0, filt);
    ProductSplit s1 = paraproduct_split(f1, g, 0, filt);
    ProductSplit s2 = paraproduct_split(f2, g, 0, filt);
    CHECK(linf(sc.pi1 - (al * s1.pi1 + be * s2.pi1)) < 1e-12 * linf(g));
    CHECK(linf(sc.pi2 - (al * s1.pi2 + be * s2.pi2)) < 1e-12 * linf(g));
    CHECK(linf(sc.pi3 - (al * s1.pi3 + be * s2.pi3)) < 1e-12 * linf(g));
}

TEST_CASE("fold-coarse option reproduces the two-term convention") {
    Box box;
    FilterPair filt = load_filter("db2");
    GridFunction f = random_grid(box, 7, 3);
    GridFunction g = random_grid(box, 7, 4);
    ProductSplit folded = paraproduct_split(f, g, 1, filt, true);
    ProductSplit plain = paraproduct_split(f, g, 1, filt);
    CHECK(linf(folded.coarse_term) == 0.0);
    CHECK(linf(folded.pi2 - (plain.pi2 + plain.coarse_term)) == 0.0);
}

TEST_CASE("paraproducts of zero-coarse inputs have near-zero mean") {
    Box box;
    FilterPair filt = load_filter("db3");
    for (unsigned seed = 0; seed < 10; ++seed) {
        GridFunction f = random_detail_only(box, 8, filt, 50 + seed);
        GridFunction g = random_detail_only(box, 8, filt, 80 + seed);
        ProductSplit s = paraproduct_split(f, g, 0, filt);
        double scale = l2_norm(f) * l2_norm(g);
        CHECK(std::abs(integrate(s.pi1)) <= 1e-8 * scale);
        CHECK(std::abs(integrate(s.pi2)) <= 1e-8 * scale);
    }
}

TEST_CASE("pi3 L1 chain") {
    Box box;
    FilterPair haar = load_filter("haar");
    GridFunction psi = haar_wavelet(box, 6);
    Pi3Chain c = pi3_l1_bound(psi, psi, 0, haar);
    CHECK(c.pi3_l1 == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(c.detail_sum == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(c.cauchy_schwarz == Catch::Approx(1.0).epsilon(1e-12));

    // disjoint-scale pair: f oscillates at fine scales only, g at coarse only
    FilterPair db2 = load_filter("db2");
    WaveletCoeffs cf(box, 0, 7, db2), cg(box, 0, 7, db2);
    cf.detail(5, 1)[3] = 1.0;
    cg.detail(1, 1)[0] = 1.0;
    GridFunction f = dwt_inverse(cf);
    GridFunction g = dwt_inverse(cg);
    Pi3Chain d = pi3_l1_bound(f, g, 0, db2);
    CHECK(d.pi3_l1 < 1e-10);
    CHECK(d.detail_sum < 1e-10);
    CHECK(d.cauchy_schwarz == Catch::Approx(l2_norm(f) * l2_norm(g)).epsilon(1e-12));

    for (unsigned seed = 0; seed < 10; ++seed) {
        GridFunction a = random_grid(box, 8, 500 + seed);
        GridFunction b = random_grid(box, 8, 600 + seed);
        Pi3Chain r = pi3_l1_bound(a, b, 0, db2);
        CHECK(r.pi3_l1 <= r.detail_sum + 1e-10);
        CHECK(r.detail_sum <= r.cauchy_schwarz + 1e-10);
    }
}

TEST_CASE("principal part S0") {
    Box box;
    FilterPair filt = load_filter("db3");
    WaveletCoeffs cf(box, 0, 8, filt), cg(box, 0, 8, filt);
    cf.detail(2, 1)[3] = 1.0;
    cg.detail(2, 1)[3] = 1.0;
    GridFunction d = s0(cf, cg);
    CHECK(integrate(d) == Catch::Approx(1.0).epsilon(1e-10));
    for (std::int64_t i = 0; i < d.total_cells(); ++i) CHECK(d[i] >= -1e-15);

    // disjoint coefficient supports contribute nothing
    WaveletCoeffs ch(box, 0, 8, filt);
    ch.detail(4, 1)[9] = 2.0;
    CHECK(linf_norm(s0(cf, ch)) == 0.0);

    // integral identity against the coefficient-sum oracle
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    WaveletCoeffs ca(box, 0, 8, filt), cb(box, 0, 8, filt);
    double dot = 0.0;
    for (int j = 0; j < 8; ++j)
        for (std::size_t q = 0; q < ca.detail(j, 1).size(); ++q) {
            ca.detail(j, 1)[q] = u(rng);
            cb.detail(j, 1)[q] = u(rng);
            dot += ca.detail(j, 1)[q] * cb.detail(j, 1)[q];
        }
    CHECK(integrate(s0(ca, cb)) == Catch::Approx(dot).margin(1e-10));
}

TEST_CASE("molecule remainder") {
    Box box;
    FilterPair filt = load_filter("db2");

    // same single coefficient in f and g: remainder vanishes
    WaveletCoeffs cf(box, 0, 7, filt);
    cf.detail(3, 1)[2] = 1.5;
    GridFunction f = dwt_inverse(cf);
    MoleculeReport rep = molecule_remainder(f, f, 0, filt);
    CHECK(linf_norm(rep.remainder) < 1e-9);
    CHECK(rep.max_cross_mean < 1e-12);

    // Haar neighbors at one scale: explicit product of the two wavelets
    FilterPair haar = load_filter("haar");
    WaveletCoeffs ha(box, 0, 6, haar), hb(box, 0, 6, haar);
    ha.detail(2, 1)[1] = 1.0;
    hb.detail(2, 1)[2] = 1.0;
    GridFunction fa = dwt_inverse(ha), fb = dwt_inverse(hb);
    MoleculeReport hrep = molecule_remainder(fa, fb, 0, haar);
    CHECK(linf_norm(hrep.remainder - fa * fb) < 1e-12); // disjoint supports: S0 empty here
    CHECK(hrep.max_cross_mean < 1e-12);

    for (unsigned seed = 0; seed < 5; ++seed) {
        GridFunction a = random_grid(box, 8, 700 + seed);
        GridFunction b = random_grid(box, 8, 800 + seed);
        MoleculeReport r = molecule_remainder(a, b, 0, filt);
        CHECK(std::abs(integrate(r.remainder)) <= 1e-8 * l2_norm(a) * l2_norm(b));
        CHECK(r.max_cross_mean <= 1e-8);
        CHECK(r.neighbor_violations == 0);
        CHECK(r.cross_pairs > 0);
    }
}

TEST_CASE("p_delta weights") {
    DyadicCube I{3, {5, 0}, 1, 1};
    CHECK(p_delta(I, I, 1.0) == 1.0);

    DyadicCube Ip{3, {7, 0}, 1, 1}; // distance 2 * 2^-3
    CHECK(p_delta(I, Ip, 1.0) == Catch::Approx(0.25).epsilon(1e-14));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        DyadicCube A{static_cast<int>(rng() % 6), {static_cast<std::int64_t>(rng() % 32), 0}, 1, 1};
        DyadicCube B{static_cast<int>(rng() % 6), {static_cast<std::int64_t>(rng() % 32), 0}, 1, 1};
        double d = 0.25 + 0.75 * (rng() % 100) / 100.0;
        CHECK(p_delta(A, B, d) == p_delta(B, A, d));
    }
    CHECK_THROWS_AS(p_delta(I, Ip, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(p_delta(I, Ip, 1.5), std::invalid_argument);
}

TEST_CASE("bilinear form B") {
    Box box;
    FilterPair filt = load_filter("db3");
    MultiplierOperator H = riesz_operator(1, 0);

    WaveletCoeffs cf(box, 0, 8, filt);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int j = 2; j < 6; ++j)
        for (auto& v : cf.detail(j, 1)) v = u(rng);
    WaveletCoeffs zero(box, 0, 8, filt);
    BilinearBReport rep0 = bilinear_B(cf, zero, H);
    CHECK(linf_norm(rep0.value) < 1e-12);

    // oddness: <Af, f> = 0
    GridFunction f = dwt_inverse(cf);
    CHECK(std::abs(inner_product(apply_multiplier(H, f), f)) <= 1e-10 * inner_product(f, f));

    BilinearBReport rep = bilinear_B(cf, cf, H);
    CHECK(std::isfinite(rep.h1_proxy));
    CHECK(rep.pairing_lhs <= 10.0 * rep.pairing_rhs); // Lemma-style pairing, loose sanity factor

    MultiplierOperator even;
    even.dims = 1;
    even.odd = false;
    CHECK_THROWS_AS(bilinear_B(cf, cf, even), std::invalid_argument);
}
