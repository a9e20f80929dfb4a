#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "macbounds/gauss_oracle.hpp"
#include "macbounds/gauss_region.hpp"

using namespace macbounds;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

GridSpec coarse_grid() {
    GridSpec g;
    g.theta_points = g.xi_points = g.rho_points = 11;
    g.alpha_points = 51;
    g.rho12_points = g.rho2s_points = 21;
    g.arc_points = 501;
    return g;
}

std::optional<double> boundary_value(const RegionBoundary& b, std::size_t i) { return b.r1_max[i]; }

}  // namespace

TEST_CASE("q_tilde") {
    CHECK(q_tilde(ChannelParams{1, 2, 1.5, 1}, 0.0) == doctest::Approx(1.5));
    CHECK(q_tilde(ChannelParams{1, 2, 2, 1}, -1.0) == doctest::Approx(0.0));
    CHECK(q_tilde(ChannelParams{1, 1, 4, 1}, -0.5) == doctest::Approx(2.25));
    CHECK_THROWS_AS(q_tilde(ChannelParams{1, 1, 1, 1}, 0.5), std::invalid_argument);
}

TEST_CASE("inner_constraints closed form") {
    SUBCASE("zero-state hand arithmetic") {
        const auto c = inner_constraints(ChannelParams{1, 1, 0, 1}, InnerParams{1, 1, 0, 1});
        REQUIRE(c);
        CHECK(c->r1_a == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(c->r1_b == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-12));
        CHECK(c->sum_c == doctest::Approx(0.5 * std::log2(1.5) + 0.5).epsilon(1e-12));
    }
    SUBCASE("alpha = 1 cancels the residual term exactly") {
        const auto c = inner_constraints(ChannelParams{1, 3, 10, 1}, InnerParams{1, 1, 0, 1});
        REQUIRE(c);
        CHECK(c->r1_a == 0.5);
    }
    SUBCASE("matches the log-det oracle") {
        const ChannelParams ch{2.5, 2, 1.5, 2};
        const InnerParams p{0.5, 0.5, -0.3, 0.6};
        const auto closed = inner_constraints_detailed(ch, p);
        REQUIRE(closed);
        const OracleInner oracle = oracle_inner(ch, p);
        CHECK(closed->rates.r1_a == doctest::Approx(oracle.rates.r1_a).epsilon(1e-9));
        CHECK(closed->rates.r1_b == doctest::Approx(oracle.rates.r1_b).epsilon(1e-9));
        CHECK(closed->rates.sum_c == doctest::Approx(oracle.rates.sum_c).epsilon(1e-9));
        CHECK(closed->sum_second_term == doctest::Approx(oracle.feasibility).epsilon(1e-9));
    }
    SUBCASE("binning infeasibility returns empty, not an error") {
        // Large alpha against a strong state makes both log arguments < 1.
        const auto c = inner_constraints(ChannelParams{1, 1, 50, 1}, InnerParams{1, 0.2, 0, 3.0});
        CHECK_FALSE(c);
    }
    SUBCASE("p2 = 0 degenerates to NaN denominators, treated as infeasible") {
        CHECK_FALSE(inner_constraints(ChannelParams{1, 0, 1, 1}, InnerParams{1, 0.5, 0, 0}));
    }
    SUBCASE("invariant violations throw") {
        CHECK_THROWS_AS(inner_constraints(ChannelParams{1, 1, 1, 1}, InnerParams{1.5, 1, 0, 1}),
                        std::invalid_argument);
        CHECK_THROWS_AS(inner_constraints(ChannelParams{1, 1, 1, 1}, InnerParams{1, 0.5, -0.9, 1}),
                        std::invalid_argument);
    }
}

TEST_CASE("alpha = 1 residual cancellation holds across parameters") {
    // alpha = 1 is not always feasible (small binning power against a
    // strong state fails the second R1 bound); the exactness claim applies
    // to every feasible tuple.
    std::mt19937_64 rng(7);
    int feasible = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const ChannelParams ch{uniform(rng, 0.1, 4), uniform(rng, 0.1, 4), uniform(rng, 0.1, 4),
                               uniform(rng, 0.2, 4)};
        const double xi = uniform(rng, 0.05, 1.0);
        const double rho = -uniform(rng, 0, 1) * std::sqrt(1.0 - xi);
        const double theta = uniform(rng, 0, 1);
        const auto c = inner_constraints(ch, InnerParams{theta, xi, rho, 1.0});
        if (!c) continue;
        ++feasible;
        CHECK(c->r1_a == 0.5 * std::log2(1.0 + theta * ch.p1 / ch.n0));
    }
    CHECK(feasible > 100);
}

TEST_CASE("outer_constraints closed form") {
    SUBCASE("independent inputs") {
        const auto c = outer_constraints(ChannelParams{1, 1, 1, 1}, OuterParams{0, 0});
        CHECK(c.r1_a == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::isinf(c.r1_b));
        CHECK(c.sum_c == doctest::Approx(0.5 * std::log2(4.0 / 3.0) + 0.5).epsilon(1e-12));
    }
    SUBCASE("full input correlation kills R1") {
        const auto c = outer_constraints(ChannelParams{1, 1, 1, 1}, OuterParams{1, 0});
        CHECK(c.r1_a == 0.0);
        CHECK(c.sum_c == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-12));
    }
    SUBCASE("matches the log-det oracle") {
        const ChannelParams ch{2.5, 2, 1.5, 2};
        const OuterParams p{0.5, -0.5};
        const RateConstraints closed = outer_constraints(ch, p);
        const RateConstraints oracle = oracle_outer(ch, p);
        CHECK(closed.r1_a == doctest::Approx(oracle.r1_a).epsilon(1e-9));
        CHECK(closed.sum_c == doctest::Approx(oracle.sum_c).epsilon(1e-9));
    }
    SUBCASE("rho2s = -1 corner uses the circle limit 0") {
        const auto c = outer_constraints(ChannelParams{1, 1, 1, 1}, OuterParams{0, -1});
        CHECK(c.r1_a == 0.0);
    }
    SUBCASE("invariant violation throws") {
        CHECK_THROWS_AS(outer_constraints(ChannelParams{1, 1, 1, 1}, OuterParams{0.9, -0.9}),
                        std::invalid_argument);
    }
}

TEST_CASE("inner_boundary") {
    const GridSpec g;
    SUBCASE("zero-state channel reaches the clean-MAC intercept") {
        const auto b = inner_boundary(ChannelParams{1, 1, 0, 1}, g);
        REQUIRE(b.r1_max[0]);
        CHECK(*b.r1_max[0] == doctest::Approx(0.5).epsilon(0.01 / 0.5));
    }
    SUBCASE("strong-state helper channel intercept is exact") {
        const auto b = inner_boundary(ChannelParams{1, 3, 10, 1}, g);
        REQUIRE(b.r1_max[0]);
        CHECK(*b.r1_max[0] == 0.5);
    }
    SUBCASE("boundary is non-increasing") {
        const auto b = inner_boundary(ChannelParams{2.5, 2, 1.5, 2}, g);
        for (std::size_t i = 0; i + 1 < b.r1_max.size(); ++i) {
            REQUIRE(boundary_value(b, i));
            CHECK(*b.r1_max[i] >= *b.r1_max[i + 1] - 1e-12);
        }
    }
}

TEST_CASE("outer_boundary") {
    SUBCASE("fig2 intercept value") {
        const auto b = outer_boundary(ChannelParams{2.5, 2, 1.5, 2}, GridSpec{});
        REQUIRE(b.r1_max[0]);
        CHECK(*b.r1_max[0] == doctest::Approx(0.5849625007).epsilon(1e-4 / 0.58));
    }
    SUBCASE("single-point sweep gives a single pentagon") {
        GridSpec g1;
        g1.rho12_points = g1.rho2s_points = 1;
        g1.arc_points = 0;
        const ChannelParams ch{1.5, 1, 2.5, 1};
        const auto b = outer_boundary(ch, g1);
        const RateConstraints c = outer_constraints(ch, OuterParams{0, 0});
        for (std::size_t i = 0; i < b.rc_grid.size(); ++i) {
            REQUIRE(b.r1_max[i]);
            const double expect = std::min(c.r1_a, c.sum_c - b.rc_grid[i]);
            CHECK(*b.r1_max[i] == doctest::Approx(expect).epsilon(1e-12));
        }
    }
    SUBCASE("outer dominates inner on a shared grid") {
        const GridSpec g = coarse_grid();
        const ChannelParams ch{1, 2, 1.5, 2};
        auto inner_cs = inner_region_constraints(ch, g);
        auto all = inner_cs;
        const auto outer_cs = outer_region_constraints(ch, g);
        all.insert(all.end(), outer_cs.begin(), outer_cs.end());
        const auto grid = default_rc_grid(all);
        CHECK(dominates(boundary_of_constraints(outer_cs, grid),
                        boundary_of_constraints(inner_cs, grid), 1e-6));
    }
}

TEST_CASE("grid enlargement never shrinks boundaries") {
    const ChannelParams ch{2.5, 2, 1.5, 2};
    GridSpec small = coarse_grid();
    GridSpec large;  // defaults double the small counts minus one
    const auto grid = linspace(0.0, 1.2, 61);
    const auto is = inner_boundary_on(ch, small, grid);
    const auto il = inner_boundary_on(ch, large, grid);
    const auto os = outer_boundary_on(ch, small, grid);
    const auto ol = outer_boundary_on(ch, large, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (is.r1_max[i]) {
            REQUIRE(il.r1_max[i]);
            CHECK(*il.r1_max[i] >= *is.r1_max[i] - 1e-12);
        }
        if (os.r1_max[i]) {
            REQUIRE(ol.r1_max[i]);
            CHECK(*ol.r1_max[i] >= *os.r1_max[i] - 1e-12);
        }
    }
}

TEST_CASE("common_message_capacity") {
    const GridSpec g;
    SUBCASE("zero-state full-coherence value") {
        const auto bp = common_message_capacity(ChannelParams{1, 1, 0, 1}, g);
        const double target = 0.5 * std::log2(5.0);
        CHECK(bp.lower == doctest::Approx(target).epsilon(0.02 / target));
        CHECK(bp.upper == doctest::Approx(target).epsilon(0.02 / target));
    }
    SUBCASE("fig2 preset bounds match") {
        const auto bp = common_message_capacity(ChannelParams{2.5, 2, 1.5, 2}, g);
        CHECK(bp.lower <= bp.upper + 1e-9);
        CHECK(std::abs(bp.upper - bp.lower) <= 0.02);
    }
    SUBCASE("silent uninformed encoder") {
        const auto bp = common_message_capacity(ChannelParams{0, 2, 1.5, 2}, g);
        CHECK(bp.lower <= bp.upper + 1e-9);
        CHECK(std::abs(bp.upper - bp.lower) <= 0.02);
    }
}

TEST_CASE("helper_rate_bounds") {
    const GridSpec g;
    SUBCASE("strong interference pins 1/2 log2(1 + min(P1,P2)/N)") {
        for (const double q : {10.0, 1000.0}) {
            const auto bp = helper_rate_bounds(ChannelParams{1, 3, q, 1}, g);
            CHECK(bp.lower == doctest::Approx(0.5).epsilon(0.01 / 0.5));
            CHECK(bp.upper == doctest::Approx(0.5).epsilon(0.01 / 0.5));
            CHECK(bp.lower <= bp.upper + 1e-9);
        }
    }
    SUBCASE("no state to help with") {
        const auto bp = helper_rate_bounds(ChannelParams{1, 3, 0, 1}, g);
        CHECK(bp.lower == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(bp.upper == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("strong_interference_reference") {
    const auto big = strong_interference_reference(ChannelParams{1e4, 1e4, 1, 1});
    CHECK(big.r1_a == doctest::Approx(6.6439284).epsilon(1e-6));
    CHECK(big.sum_c == doctest::Approx(6.6439284).epsilon(1e-6));

    CHECK(strong_interference_reference(ChannelParams{0, 1, 1, 1}).r1_a == 0.0);

    const auto c = strong_interference_reference(ChannelParams{3, 1, 1, 1});
    CHECK(c.r1_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isinf(c.r1_b));
    CHECK(c.sum_c == doctest::Approx(0.5).epsilon(1e-12));
}
