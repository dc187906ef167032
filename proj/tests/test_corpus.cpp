#include <catch2/catch_amalgamated.hpp>

#include "wavprod/corpus.hpp"
#include "wavprod/divcurl.hpp"
#include "wavprod/spaces.hpp"

using namespace wavprod;

TEST_CASE("counter rng is pure and seedable") {
    CHECK(counter_rand(1, 0) == counter_rand(1, 0));
    CHECK(counter_rand(1, 0) != counter_rand(2, 0));
    CHECK(counter_rand(1, 0) != counter_rand(1, 1));

    CounterRng a{42, 0}, b{42, 0};
    for (int i = 0; i < 100; ++i) CHECK(a.u64() == b.u64());

    CounterRng r{7, 0};
    for (int i = 0; i < 1000; ++i) {
        double u = r.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        std::int64_t k = r.range(-3, 5);
        CHECK(k >= -3);
        CHECK(k <= 5);
    }
}

TEST_CASE("corpus generation is deterministic") {
    CorpusSpec spec;
    spec.kind = CorpusKind::FiniteWaveletRandom;
    spec.J = 8;
    spec.count = 3;
    auto first = gen_corpus(spec, 99);
    auto second = gen_corpus(spec, 99);
    REQUIRE(first.size() == 3);
    for (std::size_t i = 0; i < first.size(); ++i)
        for (std::int64_t c = 0; c < first[i].fun.total_cells(); ++c)
            CHECK(first[i].fun[c] == second[i].fun[c]);

    auto other = gen_corpus(spec, 100);
    double diff = 0.0;
    for (std::int64_t c = 0; c < first[0].fun.total_cells(); ++c)
        diff = std::max(diff, std::abs(first[0].fun[c] - other[0].fun[c]));
    CHECK(diff > 0.0);
}

TEST_CASE("finite wavelet random outputs") {
    CorpusSpec spec;
    spec.kind = CorpusKind::FiniteWaveletRandom;
    spec.J = 9;
    spec.count = 5;
    spec.sparsity = 0.25;
    for (const auto& item : gen_corpus(spec, 3)) {
        REQUIRE(item.has_coeffs);
        CHECK(item.coeffs.max_abs_scaling() == 0.0);
        CHECK(item.coeffs.sum_detail_squares() > 0.0);
        // roughly the requested sparsity
        std::int64_t nonzero = 0, total = 0;
        for (int j = 0; j < 9; ++j)
            for (double v : item.coeffs.detail(j, 1)) {
                ++total;
                if (v != 0.0) ++nonzero;
            }
        double fill = static_cast<double>(nonzero) / static_cast<double>(total);
        CHECK(fill > 0.1);
        CHECK(fill < 0.45);
    }
}

TEST_CASE("atom corpus validates") {
    CorpusSpec spec;
    spec.kind = CorpusKind::Atom;
    spec.J = 9;
    spec.count = 10;
    spec.scale_min = 1;
    for (const auto& item : gen_corpus(spec, 11)) {
        REQUIRE(item.is_atom);
        CHECK_NOTHROW(validate_psi_atom(item.coeffs, item.R));
        double bound = std::pow(item.R.side(), -item.fun.dims() / 2.0);
        double l2 = std::sqrt(item.coeffs.sum_detail_squares());
        CHECK(l2 == Catch::Approx(bound).epsilon(1e-10));
    }

    // 2D atoms
    spec.box.dims = 2;
    spec.J = 5;
    spec.count = 4;
    for (const auto& item : gen_corpus(spec, 12))
        CHECK_NOTHROW(validate_psi_atom(item.coeffs, item.R));
}

TEST_CASE("bmo log exemplar sweep") {
    CorpusSpec spec;
    spec.kind = CorpusKind::BmoLogExemplar;
    spec.J = 9;
    spec.count = 1;
    std::vector<double> linf, bmo;
    for (double L : {3.0, 5.0, 8.0}) {
        spec.trunc_level = L;
        auto items = gen_corpus(spec, 21);
        linf.push_back(linf_norm(items[0].fun));
        bmo.push_back(bmo_wavelet_norm(items[0].coeffs));
    }
    CHECK(linf[0] < linf[1]);
    CHECK(linf[1] < linf[2]);
    for (double b : bmo) {
        CHECK(b > 0.0);
        CHECK(std::isfinite(b));
    }
    double lo = *std::min_element(bmo.begin(), bmo.end());
    double hi = *std::max_element(bmo.begin(), bmo.end());
    CHECK(hi / lo < 2.0);
}

TEST_CASE("band limited potentials feed the divcurl pipeline") {
    CorpusSpec spec;
    spec.kind = CorpusKind::BandLimitedPotential;
    spec.box.dims = 2;
    spec.J = 6;
    spec.count = 2;
    auto items = gen_corpus(spec, 31);
    CHECK_NOTHROW(potential_fields(items[0].fun, items[1].fun));
}

TEST_CASE("invalid specs are rejected") {
    CorpusSpec spec;
    spec.sparsity = 1.5;
    CHECK_THROWS_AS(gen_corpus(spec, 0), std::invalid_argument);
    spec.sparsity = 0.5;
    spec.filter = "nosuch";
    CHECK_THROWS_AS(gen_corpus(spec, 0), std::invalid_argument);
    spec.filter = "db2";
    spec.scale_min = 12;
    CHECK_THROWS_AS(gen_corpus(spec, 0), std::invalid_argument);
    spec.scale_min = 0;
    spec.count = -1;
    CHECK_THROWS_AS(gen_corpus(spec, 0), std::invalid_argument);
}
