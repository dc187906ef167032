#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <random>

#include "wavprod/grid.hpp"

using namespace wavprod;

TEST_CASE("dilate_cube keeps the center and scales the side") {
    DyadicCube I{0, {0, 0}, 0, 1}; // [0,1)
    Box b1 = dilate_cube(I, 1);
    CHECK(b1.origin[0] == 0.0);
    CHECK(b1.side == 1.0);

    Box b3 = dilate_cube(I, 3);
    CHECK(b3.origin[0] == -1.0);
    CHECK(b3.side == 3.0);

    DyadicCube Q{1, {0, 0}, 0, 2}; // [0,1/2)^2
    Box b2 = dilate_cube(Q, 2);
    CHECK(b2.origin[0] == -0.25);
    CHECK(b2.origin[1] == -0.25);
    CHECK(b2.side == 1.0);

    CHECK_THROWS_AS(dilate_cube(I, 0), std::invalid_argument);
}

TEST_CASE("dilate_cube preserves centers over random cubes") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        DyadicCube I;
        I.j = static_cast<int>(rng() % 12) - 4;
        I.dims = 1 + static_cast<int>(rng() % 2);
        for (int a = 0; a < I.dims; ++a)
            I.k[a] = static_cast<std::int64_t>(rng() % 64) - 32;
        int kf = 1 + static_cast<int>(rng() % 7);
        Box d = dilate_cube(I, kf);
        auto c = I.center();
        for (int a = 0; a < I.dims; ++a)
            CHECK(d.origin[a] + 0.5 * d.side == Catch::Approx(c[a]).margin(1e-15));
    }
}

TEST_CASE("midpoint quadrature basics") {
    Box box;
    GridFunction one(box, 8);
    for (auto& v : one.samples()) v = 1.0;
    CHECK(integrate(one) == Catch::Approx(1.0).epsilon(1e-14));

    GridFunction zero(box, 8);
    CHECK(inner_product(zero, one) == 0.0);

    GridFunction haar(box, 8);
    for (std::int64_t i = 0; i < haar.total_cells(); ++i)
        haar[i] = i < haar.total_cells() / 2 ? 1.0 : -1.0;
    CHECK(inner_product(haar, haar) == Catch::Approx(1.0).epsilon(1e-14));

    GridFunction other(box, 7);
    CHECK_THROWS_AS(inner_product(one, other), std::invalid_argument);
}

TEST_CASE("quadrature is linear and exact on dyadic indicators") {
    Box box;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridFunction f(box, 9), g(box, 9);
    for (auto& v : f.samples()) v = u(rng);
    for (auto& v : g.samples()) v = u(rng);
    double a = 1.7, b = -0.3;
    GridFunction comb = a * f + b * g;
    CHECK(integrate(comb) == Catch::Approx(a * integrate(f) + b * integrate(g)).margin(1e-12));

    // indicator of a level-4 cell integrates to its volume exactly
    GridFunction ind(box, 9);
    std::int64_t stride = 1 << 5; // cells per level-4 cell
    for (std::int64_t i = 3 * stride; i < 4 * stride; ++i) ind[i] = 1.0;
    CHECK(integrate(ind) == Catch::Approx(std::ldexp(1.0, -4)).epsilon(1e-15));
}

TEST_CASE("GFN1 round trips bit exactly") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);

    Box box1;
    GridFunction f(box1, 10);
    for (auto& v : f.samples()) v = u(rng);
    const std::string p1 = "test_grid_1d.gfn";
    write_grid(f, p1);
    GridFunction r = read_grid(p1);
    REQUIRE(r.same_geometry(f));
    CHECK(r.samples() == f.samples());

    Box box2;
    box2.dims = 2;
    box2.origin = {0.25, -0.5};
    GridFunction g(box2, 6); // 64x64
    for (auto& v : g.samples()) v = u(rng);
    const std::string p2 = "test_grid_2d.gfn";
    write_grid(g, p2);
    GridFunction r2 = read_grid(p2);
    REQUIRE(r2.same_geometry(g));
    CHECK(r2.samples() == g.samples());

    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("GFN1 csv variant round trips") {
    Box box;
    GridFunction f(box, 5);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : f.samples()) v = u(rng);
    const std::string p = "test_grid_csv.gfn";
    write_grid(f, p, true);
    GridFunction r = read_grid(p, true);
    for (std::int64_t i = 0; i < f.total_cells(); ++i)
        CHECK(r[i] == Catch::Approx(f[i]).epsilon(1e-16));
    std::remove(p.c_str());
}

TEST_CASE("malformed grid files are rejected") {
    const std::string p = "test_grid_bad.gfn";
    {
        std::ofstream os(p);
        os << "NOPE\n";
    }
    CHECK_THROWS_WITH(read_grid(p), Catch::Matchers::ContainsSubstring("bad magic"));
    {
        std::ofstream os(p, std::ios::binary);
        os << "GFN1\ndims 1\nJ 3\norigin 0\nside 1\n\n";
        double d = 1.0;
        os.write(reinterpret_cast<const char*>(&d), sizeof(d)); // 1 of 8 samples
    }
    CHECK_THROWS_WITH(read_grid(p), Catch::Matchers::ContainsSubstring("sample count"));
    std::remove(p.c_str());
}
