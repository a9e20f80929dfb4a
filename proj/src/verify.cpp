#include "macbounds/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "macbounds/cli.hpp"
#include "macbounds/dm_region.hpp"
#include "macbounds/gauss_oracle.hpp"
#include "macbounds/gauss_region.hpp"
#include "macbounds/region_geom.hpp"

namespace fs = std::filesystem;

namespace macbounds {

namespace {

double unit_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_open(rng);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename... Args>
std::string fmt(const char* format, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, args...);
    return buf;
}

// Draw protocol: channels uniform over a documented desk-scale box, coding
// parameters uniform over their invariant sets.
ChannelParams draw_channel(std::mt19937_64& rng) {
    return ChannelParams{uniform(rng, 0.05, 5.0), uniform(rng, 0.05, 5.0), uniform(rng, 0.05, 5.0),
                         uniform(rng, 0.1, 5.0)};
}

InnerParams draw_inner(std::mt19937_64& rng) {
    InnerParams p;
    p.theta = uniform(rng, 0.0, 1.0);
    p.xi = uniform(rng, 0.0, 1.0);
    p.rho = -uniform(rng, 0.0, 1.0) * std::sqrt(std::max(0.0, 1.0 - p.xi));
    p.alpha = uniform(rng, -2.0, 3.0);
    return p;
}

OuterParams draw_outer(std::mt19937_64& rng) {
    for (;;) {
        const double r12 = uniform(rng, 0.0, 1.0);
        const double r2s = -uniform(rng, 0.0, 1.0);
        if (r12 * r12 + r2s * r2s <= 1.0) return OuterParams{r12, r2s};
    }
}

/// Per-cell excess of the inner boundary over the outer one; an inner value
/// on a cell the outer misses counts fully, and an outer-only cell counts
/// its own height as disagreement when symmetric=true.
double boundary_gap(const RegionBoundary& outer, const RegionBoundary& inner, bool symmetric) {
    double worst = 0.0;
    for (std::size_t i = 0; i < outer.rc_grid.size(); ++i) {
        const auto& o = outer.r1_max[i];
        const auto& in = inner.r1_max[i];
        if (in && o) {
            worst = std::max(worst, symmetric ? std::abs(*o - *in) : *in - *o);
        } else if (in && !o) {
            worst = std::max(worst, *in);
        } else if (!in && o && symmetric) {
            worst = std::max(worst, *o);
        }
    }
    return worst;
}

CheckResult combine(std::string name, const std::vector<CheckResult>& parts) {
    CheckResult out;
    out.name = std::move(name);
    out.pass = true;
    std::string detail;
    for (const CheckResult& r : parts) {
        out.pass = out.pass && r.pass;
        out.max_err = std::max(out.max_err, r.max_err);
        if (!detail.empty()) detail += "; ";
        detail += r.name + (r.pass ? " ok" : " FAILED") + " (" + r.detail + ")";
    }
    out.detail = detail;
    return out;
}

DmChannel random_binary_channel(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DmChannel ch;
    ch.ns = ch.nx1 = ch.nx2 = ch.ny = 2;
    ch.state_dist.p.resize(2);
    ch.kernel.resize(16);
    auto dirichlet2 = [&](double* slice) {
        const double e0 = -std::log(unit_open(rng));
        const double e1 = -std::log(unit_open(rng));
        slice[0] = e0 / (e0 + e1);
        slice[1] = e1 / (e0 + e1);
    };
    dirichlet2(ch.state_dist.p.data());
    for (std::size_t i = 0; i < 8; ++i) dirichlet2(ch.kernel.data() + 2 * i);
    return ch;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

CheckResult check_oracle_inner(int trials, std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    int accepted = 0, discards = 0;
    double max_err = 0.0;
    const long attempt_cap = 1000L * std::max(trials, 1);
    for (long attempt = 0; accepted < trials; ++attempt) {
        if (attempt > attempt_cap)
            return {"oracle agreement (inner)", false, max_err, "draw rejection cap exceeded"};
        const ChannelParams ch = draw_channel(rng);
        const InnerParams p = draw_inner(rng);
        const auto closed = inner_constraints_detailed(ch, p);
        if (!closed) {
            ++discards;
            continue;
        }
        ++accepted;
        const OracleInner oracle = oracle_inner(ch, p);
        max_err = std::max({max_err, std::abs(closed->rates.r1_a - oracle.rates.r1_a),
                            std::abs(closed->rates.r1_b - oracle.rates.r1_b),
                            std::abs(closed->rates.sum_c - oracle.rates.sum_c),
                            std::abs(closed->sum_second_term - oracle.feasibility)});
    }
    CheckResult r;
    r.name = "oracle agreement (inner)";
    r.max_err = max_err;
    r.pass = max_err <= tol;
    r.detail = fmt("%d trials, %d infeasible discards, max |closed-oracle| = %.3g bits", trials,
                   discards, max_err);
    return r;
}

CheckResult check_oracle_outer(int trials, std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    double max_err = 0.0;
    for (int i = 0; i < trials; ++i) {
        const ChannelParams ch = draw_channel(rng);
        const OuterParams p = draw_outer(rng);
        const RateConstraints closed = outer_constraints(ch, p);
        const RateConstraints oracle = oracle_outer(ch, p);
        max_err = std::max(
            {max_err, std::abs(closed.r1_a - oracle.r1_a), std::abs(closed.sum_c - oracle.sum_c)});
    }
    CheckResult r;
    r.name = "oracle agreement (outer)";
    r.max_err = max_err;
    r.pass = max_err <= tol;
    r.detail = fmt("%d trials, max |closed-oracle| = %.3g bits", trials, max_err);
    return r;
}

std::vector<CheckResult> check_containment(double tol) {
    std::vector<CheckResult> out;
    const GridSpec g;
    for (const FigurePreset& preset : figure_presets()) {
        const auto inner_cs = inner_region_constraints(preset.ch, g);
        const auto outer_cs = outer_region_constraints(preset.ch, g);
        auto merged = inner_cs;
        merged.insert(merged.end(), outer_cs.begin(), outer_cs.end());
        const auto grid = default_rc_grid(merged);
        const RegionBoundary inner = boundary_of_constraints(inner_cs, grid);
        const RegionBoundary outer = boundary_of_constraints(outer_cs, grid);
        CheckResult r;
        r.name = "containment " + preset.name;
        r.max_err = boundary_gap(outer, inner, false);
        r.pass = dominates(outer, inner, tol);
        r.detail = fmt("max inner excess = %.3g bits", r.max_err);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CheckResult> check_zero_state(double tol) {
    std::vector<CheckResult> out;
    const GridSpec g;
    for (const ChannelParams ch : {ChannelParams{1.0, 1.0, 0.0, 1.0}, ChannelParams{2.5, 2.0, 0.0, 2.0}}) {
        const auto inner_cs = inner_region_constraints(ch, g);
        const auto outer_cs = outer_region_constraints(ch, g);
        auto merged = inner_cs;
        merged.insert(merged.end(), outer_cs.begin(), outer_cs.end());
        const auto grid = default_rc_grid(merged);
        const RegionBoundary inner = boundary_of_constraints(inner_cs, grid);
        const RegionBoundary outer = boundary_of_constraints(outer_cs, grid);
        CheckResult r;
        r.name = fmt("zero-state reduction (P1=%g, P2=%g, N=%g)", ch.p1, ch.p2, ch.n0);
        r.max_err = boundary_gap(outer, inner, true);
        r.pass = r.max_err <= tol;
        r.detail = fmt("max |inner-outer| = %.3g bits", r.max_err);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CheckResult> check_common_message(double tol) {
    std::vector<CheckResult> out;
    const GridSpec g;
    {
        const BoundPair bp = common_message_capacity(ChannelParams{2.5, 2.0, 1.5, 2.0}, g);
        CheckResult r;
        r.name = "common-message match (fig2 preset)";
        r.max_err = std::abs(bp.upper - bp.lower);
        r.pass = r.max_err <= tol && bp.lower <= bp.upper + 1e-9;
        r.detail = fmt("lower = %.6f, upper = %.6f bits", bp.lower, bp.upper);
        out.push_back(std::move(r));
    }
    {
        const ChannelParams ch{1.0, 1.0, 0.0, 1.0};
        const BoundPair bp = common_message_capacity(ch, g);
        const double coherent = std::sqrt(ch.p1) + std::sqrt(ch.p2);
        const double target = 0.5 * std::log2(1.0 + coherent * coherent / ch.n0);
        CheckResult r;
        r.name = "common-message full-coherence value (Q=0)";
        r.max_err = std::max(std::abs(bp.lower - target), std::abs(bp.upper - target));
        r.pass = r.max_err <= tol;
        r.detail = fmt("lower = %.6f, upper = %.6f, target = %.6f", bp.lower, bp.upper, target);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CheckResult> check_helper(double tol) {
    std::vector<CheckResult> out;
    const GridSpec g;
    for (const double q : {10.0, 100.0, 1000.0}) {
        const ChannelParams ch{1.0, 3.0, q, 1.0};
        const double target = 0.5 * std::log2(1.0 + std::min(ch.p1, ch.p2) / ch.n0);
        const BoundPair bp = helper_rate_bounds(ch, g);
        CheckResult r;
        r.name = fmt("helper intercepts (Q=%g)", q);
        r.max_err = std::max(std::abs(bp.lower - target), std::abs(bp.upper - target));
        r.pass = r.max_err <= tol;
        r.detail = fmt("lower = %.6f, upper = %.6f, target = %.6f", bp.lower, bp.upper, target);
        out.push_back(std::move(r));
    }
    return out;
}

CheckResult check_strong_interference_trend() {
    const GridSpec g;
    std::vector<double> gap_r1, gap_rc;
    std::string detail;
    for (const double p : {1e2, 1e3, 1e4}) {
        const ChannelParams ch{p, p, 10.0 * p, 1.0};
        const RateConstraints ref = strong_interference_reference(ch);
        double r1_intercept = 0.0, rc_intercept = 0.0;
        for (const RateConstraints& c : inner_region_constraints(ch, g)) {
            r1_intercept = std::max(r1_intercept, std::min(std::min(c.r1_a, c.r1_b), c.sum_c));
            rc_intercept = std::max(rc_intercept, c.sum_c);
        }
        gap_r1.push_back(std::abs(r1_intercept - ref.r1_a) / ref.r1_a);
        gap_rc.push_back(std::abs(rc_intercept - ref.sum_c) / ref.sum_c);
        detail += fmt("P=%g: rel gaps %.4f%%/", p, 100.0 * gap_r1.back());
        detail += fmt("%.4f%% ", 100.0 * gap_rc.back());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < gap_r1.size(); ++i)
        monotone = monotone && gap_r1[i] <= gap_r1[i - 1] + 1e-9 && gap_rc[i] <= gap_rc[i - 1] + 1e-9;
    CheckResult r;
    r.name = "strong-interference corner trend";
    r.max_err = std::max(gap_r1.back(), gap_rc.back());
    r.pass = monotone && r.max_err < 0.05;
    r.detail = detail + (monotone ? "(monotone)" : "(NOT monotone)");
    return r;
}

CheckResult check_fm_grid() {
    int checked = 0;
    bool all = true;
    for (int ia = 0; ia <= 8 && all; ++ia)
        for (int ib = 0; ib <= 8 && all; ++ib)
            for (int ic = 0; ic <= 8 && all; ++ic)
                for (int id = 1; id <= 8 && all; ++id) {
                    ++checked;
                    all = fm_equivalence_check(0.25 * ia, 0.25 * ib, 0.25 * ic, 0.25 * id, 0.05);
                }
    CheckResult r;
    r.name = "Fourier-Motzkin projection equivalence";
    r.pass = all;
    r.detail = fmt("%d grid tuples with d > 0 at step 0.05", checked);
    return r;
}

std::vector<CheckResult> check_dm_sanity() {
    std::vector<CheckResult> out;
    {
        const DmChannel ch = xor_channel();
        const auto inner_cs = dm_inner_search_constraints(ch, 2, 2, 2000, 7);
        const auto outer_cs = dm_outer_search_constraints(ch, 2000, 7);
        double r1_intercept = 0.0, rc_intercept = 0.0;
        for (const RateConstraints& c : inner_cs) {
            r1_intercept = std::max(r1_intercept, std::min(std::min(c.r1_a, c.r1_b), c.sum_c));
            rc_intercept = std::max(rc_intercept, c.sum_c);
        }
        CheckResult corners;
        corners.name = "xor-channel corners";
        corners.max_err = std::max(1.0 - r1_intercept, 1.0 - rc_intercept);
        corners.pass = r1_intercept >= 0.98 && rc_intercept >= 0.98;
        corners.detail = fmt("(0, %.4f) and (%.4f, 0) reached", r1_intercept, rc_intercept);
        out.push_back(std::move(corners));

        auto merged = inner_cs;
        merged.insert(merged.end(), outer_cs.begin(), outer_cs.end());
        const auto grid = default_rc_grid(merged);
        const RegionBoundary inner = boundary_of_constraints(inner_cs, grid);
        const RegionBoundary outer = boundary_of_constraints(outer_cs, grid);
        CheckResult dom;
        dom.name = "xor-channel outer dominates inner";
        dom.max_err = boundary_gap(outer, inner, false);
        dom.pass = dominates(outer, inner, 0.02);
        dom.detail = fmt("max inner excess = %.3g bits", dom.max_err);
        out.push_back(std::move(dom));
    }
    {
        double worst = 0.0;
        bool all = true;
        for (int i = 0; i < 20; ++i) {
            const DmChannel ch = random_binary_channel(100 + static_cast<std::uint64_t>(i));
            const auto inner_cs = dm_inner_search_constraints(ch, 2, 2, 2000, 7000 + i);
            const auto outer_cs = dm_outer_search_constraints(ch, 2000, 9000 + i);
            auto merged = inner_cs;
            merged.insert(merged.end(), outer_cs.begin(), outer_cs.end());
            const auto grid = default_rc_grid(merged);
            const RegionBoundary inner = boundary_of_constraints(inner_cs, grid);
            const RegionBoundary outer = boundary_of_constraints(outer_cs, grid);
            worst = std::max(worst, boundary_gap(outer, inner, false));
            all = all && dominates(outer, inner, 0.02);
        }
        CheckResult r;
        r.name = "random binary channels containment (20 seeds)";
        r.max_err = worst;
        r.pass = all;
        r.detail = fmt("max inner excess = %.3g bits", worst);
        out.push_back(std::move(r));
    }
    return out;
}

CheckResult check_csv_determinism() {
    const fs::path base = fs::temp_directory_path() /
                          ("macbounds-determinism-" + std::to_string(std::random_device{}()));
    CheckResult r;
    r.name = "CSV determinism";
    try {
        bool same = true;
        const GridSpec g;
        for (int rep = 0; rep < 2; ++rep)
            if (run_figure("fig2", (base / ("fig" + std::to_string(rep))).string(), false, g) != 0)
                throw std::runtime_error("figure run failed");
        for (const char* f : {"inner.csv", "outer.csv"})
            same = same && read_file(base / "fig0" / f) == read_file(base / "fig1" / f);

        const ChannelParams ch{1.7, 0.9, 0.4, 1.1};
        for (int rep = 0; rep < 2; ++rep)
            if (run_sweep(ch, g, false, (base / ("sweep" + std::to_string(rep))).string()) != 0)
                throw std::runtime_error("sweep run failed");
        for (const char* f : {"inner.csv", "outer.csv"})
            same = same && read_file(base / "sweep0" / f) == read_file(base / "sweep1" / f);

        r.pass = same;
        r.detail = same ? "repeated figure and sweep runs byte-identical"
                        : "outputs differ between repeated runs";
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    std::error_code ec;
    fs::remove_all(base, ec);
    return r;
}

std::vector<CheckResult> run_all_checks() {
    std::vector<CheckResult> out;
    const auto timed = [&](CheckResult r, const std::chrono::steady_clock::time_point& t0,
                           double budget_s) {
        const double elapsed = seconds_since(t0);
        r.detail += fmt("; %.2f s", elapsed);
        if (budget_s > 0.0 && elapsed >= budget_s) {
            r.pass = false;
            r.detail += fmt(" (budget %.0f s exceeded)", budget_s);
        }
        return r;
    };

    auto t0 = std::chrono::steady_clock::now();
    CheckResult c1 = check_oracle_inner(1000, 42, 1e-9);
    c1.name = "criterion 1: " + c1.name;
    out.push_back(timed(std::move(c1), t0, 10.0));

    t0 = std::chrono::steady_clock::now();
    CheckResult c2 = check_oracle_outer(1000, 43, 1e-9);
    c2.name = "criterion 2: " + c2.name;
    out.push_back(timed(std::move(c2), t0, 10.0));

    out.push_back(combine("criterion 3: containment on figure presets", check_containment(1e-6)));
    out.push_back(combine("criterion 4: zero-state reduction", check_zero_state(0.02)));
    out.push_back(combine("criterion 5: common-message capacity", check_common_message(0.02)));
    out.push_back(combine("criterion 6: helper-problem intercepts", check_helper(0.01)));

    CheckResult c7 = check_strong_interference_trend();
    c7.name = "criterion 7: " + c7.name;
    out.push_back(std::move(c7));

    t0 = std::chrono::steady_clock::now();
    CheckResult c8 = check_fm_grid();
    c8.name = "criterion 8: " + c8.name;
    out.push_back(timed(std::move(c8), t0, 60.0));

    out.push_back(combine("criterion 9: discrete-channel sanity", check_dm_sanity()));

    CheckResult c10 = check_csv_determinism();
    c10.name = "criterion 10: " + c10.name;
    out.push_back(std::move(c10));
    return out;
}

bool report(const std::vector<CheckResult>& results) {
    bool all = true;
    for (const CheckResult& r : results) {
        all = all && r.pass;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
    }
    std::cout << (all ? "all checks passed" : "SOME CHECKS FAILED") << '\n';
    return all;
}

}  // namespace macbounds
