#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wavprod/filters.hpp"
#include "wavprod/grid.hpp"
#include "wavprod/wavelet.hpp"

using namespace wavprod;

namespace {

GridFunction random_grid(const Box& box, int J, unsigned seed) {
    GridFunction f(box, J);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : f.samples()) v = u(rng);
    return f;
}

double linf(const GridFunction& f) {
    double m = 0.0;
    for (double v : f.samples()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

TEST_CASE("filter catalog invariants") {
    FilterPair haar = load_filter("haar");
    CHECK(haar.lowpass[0] == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(haar.lowpass[1] == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(haar.support_m == 1);
    CHECK(haar.vanishing_moments == 1);
    CHECK(haar.violates_moment_condition);

    FilterPair db3 = load_filter("db3");
    double s = 0.0;
    for (double v : db3.lowpass) s += v;
    CHECK(s == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
    CHECK_FALSE(db3.violates_moment_condition);

    // db2 highpass kills discrete moments 0 and 1 (published D4 taps)
    FilterPair db2 = load_filter("db2");
    for (int p = 0; p <= 1; ++p) {
        double mom = 0.0;
        for (int i = 0; i < db2.taps(); ++i)
            mom += db2.highpass[static_cast<std::size_t>(i)] * std::pow(double(i), p);
        CHECK(std::abs(mom) < 1e-10);
    }

    CHECK_THROWS_AS(load_filter("db9"), std::invalid_argument);
}

TEST_CASE("constants have zero detail everywhere") {
    Box box;
    GridFunction f(box, 8);
    for (auto& v : f.samples()) v = 3.25;
    for (auto name : {"haar", "db4"}) {
        WaveletCoeffs c = dwt_forward(f, 0, load_filter(name));
        CHECK(c.sum_detail_squares() < 1e-24);
    }
}

TEST_CASE("Haar wavelet is a single unit coefficient") {
    Box box;
    GridFunction f(box, 8);
    for (std::int64_t i = 0; i < f.total_cells(); ++i)
        f[i] = i < f.total_cells() / 2 ? 1.0 : -1.0;
    WaveletCoeffs c = dwt_forward(f, 0, load_filter("haar"));
    CHECK(c.detail(0, 1)[0] == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(c.scaling()[0]) < 1e-14);
    CHECK(c.sum_detail_squares() == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("perfect reconstruction and Parseval, all filters") {
    Box box;
    GridFunction f = random_grid(box, 10, 42);
    const double l2sq = inner_product(f, f);
    for (const auto& name : filter_names()) {
        FilterPair filt = load_filter(name);
        WaveletCoeffs c = dwt_forward(f, 0, filt);
        GridFunction r = dwt_inverse(c);
        CHECK(linf(r - f) / linf(f) < 1e-10);
        double coeffsq = c.sum_detail_squares() + c.sum_scaling_squares();
        CHECK(coeffsq == Catch::Approx(l2sq).epsilon(1e-10));
    }
}

TEST_CASE("2D perfect reconstruction and tensor consistency") {
    Box box;
    box.dims = 2;
    GridFunction f = random_grid(box, 5, 9);
    FilterPair filt = load_filter("db3");
    WaveletCoeffs c = dwt_forward(f, 0, filt);
    GridFunction r = dwt_inverse(c);
    CHECK(linf(r - f) / linf(f) < 1e-10);
    CHECK(c.sum_detail_squares() + c.sum_scaling_squares() ==
          Catch::Approx(inner_product(f, f)).epsilon(1e-10));

    // <f, psi_I^lambda> from the 2D transform equals iterated 1D transforms:
    // check against the inner product with the synthesized basis element.
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        int j = static_cast<int>(rng() % 3);
        int lam = 1 + static_cast<int>(rng() % 3);
        std::int64_t nj = c.n_at(j);
        std::int64_t flat = static_cast<std::int64_t>(rng()) % (nj * nj);
        if (flat < 0) flat += nj * nj;
        DyadicCube I = c.cube_of(j, lam, flat);
        GridFunction psi = synthesize(I, BasisKind::Wavelet, box, 5, filt);
        CHECK(c.detail(j, lam)[static_cast<std::size_t>(flat)] ==
              Catch::Approx(inner_product(f, psi)).margin(1e-12));
    }
}

TEST_CASE("projections: identity at J, telescoping, orthogonality") {
    Box box;
    GridFunction f = random_grid(box, 9, 5);
    FilterPair filt = load_filter("db4");

    GridFunction pJ = project(f, 9, Part::P, filt);
    CHECK(linf(pJ - f) == 0.0);

    GridFunction one(box, 9);
    for (auto& v : one.samples()) v = 1.0;
    for (int j = 0; j < 9; ++j)
        CHECK(linf(project(one, j, Part::Q, filt)) < 1e-12);

    double l2sq = inner_product(f, f);
    for (int j = 0; j < 9; ++j) {
        GridFunction pj = project(f, j, Part::P, filt);
        GridFunction qj = project(f, j, Part::Q, filt);
        GridFunction pj1 = project(f, j + 1, Part::P, filt);
        CHECK(linf(pj1 - (pj + qj)) < 1e-12 * linf(f));
        CHECK(std::abs(inner_product(pj, qj)) < 1e-10 * l2sq);
    }

    CHECK_THROWS_AS(project(f, 10, Part::Q, filt), std::invalid_argument);
    CHECK_THROWS_AS(project(f, -1, Part::P, filt), std::invalid_argument);
}

TEST_CASE("synthesized Haar wavelet on [0,1)") {
    Box box;
    DyadicCube I{0, {0, 0}, 1, 1};
    GridFunction psi = synthesize(I, BasisKind::Wavelet, box, 6, load_filter("haar"));
    for (std::int64_t i = 0; i < psi.total_cells(); ++i)
        CHECK(psi[i] == Catch::Approx(i < psi.total_cells() / 2 ? 1.0 : -1.0).epsilon(1e-14));
}

TEST_CASE("synthesized wavelets: unit norm, support, Gram matrix") {
    Box box;
    const int J = 10;
    FilterPair filt = load_filter("db4");
    std::mt19937_64 rng(23);
    std::vector<GridFunction> basis;
    std::vector<DyadicCube> cubes;
    for (int trial = 0; trial < 50; ++trial) {
        DyadicCube I;
        I.j = 1 + static_cast<int>(rng() % 5);
        I.k[0] = static_cast<std::int64_t>(rng() % (1ull << I.j));
        I.lambda = 1;
        I.dims = 1;
        if (std::any_of(cubes.begin(), cubes.end(),
                        [&](const DyadicCube& o) { return o.same_index(I); })) continue;
        GridFunction psi = synthesize(I, BasisKind::Wavelet, box, J, filt);
        CHECK(inner_product(psi, psi) == Catch::Approx(1.0).margin(1e-8));

        // support inside dilate_cube(I, m), modulo periodic wrap
        Box supp = dilate_cube(I, filt.support_m);
        double h = psi.cell_width();
        for (std::int64_t i = 0; i < psi.total_cells(); ++i) {
            if (psi[i] == 0.0) continue;
            double lo = i * h, hi = (i + 1) * h;
            bool inside = false;
            for (int wrap = -1; wrap <= 1; ++wrap)
                if (lo + wrap >= supp.origin[0] - 1e-14 &&
                    hi + wrap <= supp.origin[0] + supp.side + 1e-14)
                    inside = true;
            CHECK(inside);
        }
        basis.push_back(std::move(psi));
        cubes.push_back(I);
    }
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = a + 1; b < basis.size(); ++b)
            CHECK(std::abs(inner_product(basis[a], basis[b])) < 1e-8);
}

TEST_CASE("moment condition for db2 and up") {
    Box box;
    const int J = 10;
    for (auto name : {"db2", "db3", "db5"}) {
        FilterPair filt = load_filter(name);
        // scale chosen so the support m*2^-j fits strictly inside the box
        DyadicCube I{5, {16, 0}, 1, 1};
        GridFunction psi = synthesize(I, BasisKind::Wavelet, box, J, filt);
        double m0 = 0.0, m1 = 0.0;
        for (std::int64_t i = 0; i < psi.total_cells(); ++i) {
            double x = psi.midpoint(i)[0];
            m0 += psi[i];
            m1 += x * psi[i];
        }
        m0 *= psi.cell_volume();
        m1 *= psi.cell_volume();
        CHECK(std::abs(m0) < 1e-8);
        CHECK(std::abs(m1) < 1e-8);
    }
}

TEST_CASE("dwt rejects bad levels") {
    Box box;
    GridFunction f = random_grid(box, 4, 1);
    CHECK_THROWS_AS(dwt_forward(f, 4, load_filter("haar")), std::invalid_argument);
    CHECK_THROWS_AS(dwt_forward(f, 5, load_filter("haar")), std::invalid_argument);
}
