#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "macbounds/region_geom.hpp"

using namespace macbounds;

namespace {

RateConstraints rc3(double a, double b, double c) { return RateConstraints{a, b, c}; }

RegionBoundary make_boundary(std::vector<double> grid, std::vector<std::optional<double>> vals) {
    return RegionBoundary{std::move(grid), std::move(vals)};
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

TEST_CASE("constraint_polygon vertex lists") {
    SUBCASE("min equals sum gives a triangle") {
        const auto v = constraint_polygon(rc3(1, 1, 1));
        REQUIRE(v.size() == 3);
        CHECK(v[0].rc == 0.0);
        CHECK(v[0].r1 == 0.0);
        CHECK(v[1].rc == 0.0);
        CHECK(v[1].r1 == 1.0);
        CHECK(v[2].rc == 1.0);
        CHECK(v[2].r1 == 0.0);
    }
    SUBCASE("pentagon corner arithmetic") {
        const auto v = constraint_polygon(rc3(0.5, 2, 3));
        REQUIRE(v.size() == 4);
        CHECK(v[1].rc == 0.0);
        CHECK(v[1].r1 == 0.5);
        CHECK(v[2].rc == 2.5);
        CHECK(v[2].r1 == 0.5);
        CHECK(v[3].rc == 3.0);
        CHECK(v[3].r1 == 0.0);
    }
    SUBCASE("sum constraint dominates") {
        const auto v = constraint_polygon(rc3(1, 1, 0.5));
        REQUIRE(v.size() == 3);
        CHECK(v[1].r1 == 0.5);
        CHECK(v[2].rc == 0.5);
    }
    SUBCASE("degenerate regions collapse to segment or origin") {
        CHECK(constraint_polygon(rc3(0, 1, 2)).size() == 2);
        CHECK(constraint_polygon(rc3(1, 1, 0)).size() == 1);
    }
    SUBCASE("absent r1_b is allowed") {
        const auto v = constraint_polygon(rc3(1, kInf, 1));
        REQUIRE(v.size() == 3);
    }
    SUBCASE("preconditions enforced") {
        CHECK_THROWS_AS(constraint_polygon(rc3(1, 1, kInf)), std::invalid_argument);
        CHECK_THROWS_AS(constraint_polygon(rc3(-0.1, 1, 1)), std::invalid_argument);
    }
}

TEST_CASE("polygon vertices satisfy their constraints with tiny slack") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const RateConstraints c{uniform(rng, 0, 3), uniform(rng, 0, 3), uniform(rng, 0, 3)};
        for (const RatePair& v : constraint_polygon(c)) {
            CHECK(v.r1 <= std::min(c.r1_a, c.r1_b) + 1e-12);
            CHECK(v.rc + v.r1 <= c.sum_c + 1e-12);
            CHECK(v.rc >= 0.0);
            CHECK(v.r1 >= 0.0);
        }
    }
}

TEST_CASE("union_upper_boundary over two regions") {
    const std::vector<std::vector<RatePair>> polys = {constraint_polygon(rc3(1, kInf, 1)),
                                                      constraint_polygon(rc3(0.5, kInf, 3))};
    const auto b = union_upper_boundary(polys, {0.0, 0.75, 2.0});
    REQUIRE(b.r1_max.size() == 3);
    CHECK(*b.r1_max[0] == doctest::Approx(1.0));
    CHECK(*b.r1_max[1] == doctest::Approx(0.5));
    CHECK(*b.r1_max[2] == doctest::Approx(0.5));

    SUBCASE("empty polygon list gives empty boundary") {
        const auto e = union_upper_boundary({}, {0.0, 1.0});
        CHECK_FALSE(e.r1_max[0]);
        CHECK_FALSE(e.r1_max[1]);
    }
    SUBCASE("grid cells beyond every region are empty") {
        const auto e = union_upper_boundary(polys, {0.0, 3.5});
        CHECK(e.r1_max[0]);
        CHECK_FALSE(e.r1_max[1]);
    }
}

TEST_CASE("boundary_of_constraints matches the polygon route") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RateConstraints> cs;
        std::vector<std::vector<RatePair>> polys;
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int k = 0; k < n; ++k) {
            RateConstraints c{uniform(rng, 0, 2), uniform(rng, 0, 2), uniform(rng, 0, 2)};
            cs.push_back(c);
            polys.push_back(constraint_polygon(c));
        }
        const auto grid = linspace(0.0, 2.2, 45);
        const auto direct = boundary_of_constraints(cs, grid);
        const auto viapoly = union_upper_boundary(polys, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(direct.r1_max[i].has_value() == viapoly.r1_max[i].has_value());
            if (direct.r1_max[i])
                CHECK(*direct.r1_max[i] == doctest::Approx(*viapoly.r1_max[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("union boundary is non-increasing in rc") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RateConstraints> cs;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int k = 0; k < n; ++k)
            cs.push_back({uniform(rng, 0, 2), uniform(rng, 0, 2), uniform(rng, 0, 2)});
        const auto b = boundary_of_constraints(cs, default_rc_grid(cs, 64));
        for (std::size_t i = 0; i + 1 < b.r1_max.size(); ++i) {
            if (!b.r1_max[i + 1]) continue;
            REQUIRE(b.r1_max[i]);
            CHECK(*b.r1_max[i] >= *b.r1_max[i + 1] - 1e-12);
        }
    }
}

TEST_CASE("upper_concave_envelope") {
    SUBCASE("chord over a dip") {
        const auto e = upper_concave_envelope(make_boundary({0, 1, 2}, {1.0, 0.2, 0.0}));
        CHECK(*e.r1_max[1] == doctest::Approx(0.5));
        CHECK(*e.r1_max[0] == doctest::Approx(1.0));
        CHECK(*e.r1_max[2] == doctest::Approx(0.0));
    }
    SUBCASE("already-concave boundary unchanged") {
        const auto in = make_boundary({0, 1, 2, 3}, {1.0, 0.9, 0.7, 0.0});
        const auto e = upper_concave_envelope(in);
        for (std::size_t i = 0; i < 4; ++i) CHECK(*e.r1_max[i] == doctest::Approx(*in.r1_max[i]));
    }
    SUBCASE("single point unchanged") {
        const auto e = upper_concave_envelope(make_boundary({0.5}, {0.25}));
        CHECK(*e.r1_max[0] == 0.25);
    }
    SUBCASE("idempotent and pointwise above input on random boundaries") {
        std::mt19937_64 rng(59);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 3 + rng() % 40;
            RegionBoundary b;
            b.rc_grid = linspace(0.0, 2.0, n);
            double level = uniform(rng, 1, 3);
            for (std::size_t i = 0; i < n; ++i) {
                level -= uniform(rng, 0, 0.2);
                b.r1_max.push_back(std::max(level, 0.0));
            }
            const auto e1 = upper_concave_envelope(b);
            const auto e2 = upper_concave_envelope(e1);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(*e1.r1_max[i] >= *b.r1_max[i] - 1e-12);
                CHECK(*e2.r1_max[i] == doctest::Approx(*e1.r1_max[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("dominates") {
    const auto grid = linspace(0.0, 1.0, 11);
    RegionBoundary a, b, c;
    a.rc_grid = b.rc_grid = c.rc_grid = grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = 1.0 - grid[i];
        a.r1_max.push_back(v);
        b.r1_max.push_back(v - 0.1);
        c.r1_max.push_back(v - 0.2);
    }

    CHECK(dominates(a, a, 0.0));
    CHECK_FALSE(dominates(b, a, 0.05));  // outer shifted down by 0.1, tol 0.05
    CHECK(dominates(a, b, 0.0));         // outer shifted up by 0.1

    SUBCASE("transitivity") {
        CHECK(dominates(a, b, 0.0));
        CHECK(dominates(b, c, 0.0));
        CHECK(dominates(a, c, 0.0));
    }
    SUBCASE("empty inner cells are skipped, empty outer cells fail") {
        RegionBoundary inner = b;
        inner.r1_max[3] = std::nullopt;
        CHECK(dominates(a, inner, 0.0));
        RegionBoundary outer = a;
        outer.r1_max[3] = std::nullopt;
        CHECK_FALSE(dominates(outer, b, 0.0));
    }
    SUBCASE("grid mismatch is an error") {
        RegionBoundary other = a;
        other.rc_grid[1] += 1e-3;
        CHECK_THROWS_AS(dominates(other, a, 0.0), std::invalid_argument);
    }
}
