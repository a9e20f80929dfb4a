#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace macbounds {

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_err = 0.0;
    std::string detail;
};

/// Closed-form/oracle agreement over seeded random feasible draws, inner
/// case: the three rate values plus the feasibility-vs-second-logarithm
/// identity, each within tol bits.
CheckResult check_oracle_inner(int trials, std::uint64_t seed, double tol);

/// Same for the converse closed forms.
CheckResult check_oracle_outer(int trials, std::uint64_t seed, double tol);

/// Inner boundary pointwise below outer boundary for the three figure
/// presets, on a shared default grid.
std::vector<CheckResult> check_containment(double tol);

/// At Q = 0 the achievable and converse boundaries coincide with the clean
/// MAC region; pointwise agreement within tol bits.
std::vector<CheckResult> check_zero_state(double tol);

/// Common-message capacity: bounds match at the fig2 preset, and both hit
/// the full-coherence value at Q = 0, (1,1,1).
std::vector<CheckResult> check_common_message(double tol);

/// Helper problem: R1 intercepts equal 1/2 log2(1 + min(P1,P2)/N) for
/// strong interference, stable over Q in {10, 100, 1000}.
std::vector<CheckResult> check_helper(double tol);

/// Relative gaps between computed corner points and the strong-interference
/// reference shrink in P and stay below 5% at P = 1e4.
CheckResult check_strong_interference_trend();

/// fm_equivalence_check over the documented (a,b,c,d) grid with d > 0.
CheckResult check_fm_grid();

/// XOR-channel corner recovery plus inner-in-outer containment on seeded
/// random binary channels.
std::vector<CheckResult> check_dm_sanity();

/// Byte-identical CSVs from repeated figure and sweep invocations.
CheckResult check_csv_determinism();

/// All acceptance checks in order, one CheckResult per criterion line.
std::vector<CheckResult> run_all_checks();

/// Prints "[PASS]/[FAIL] name: detail" lines; returns true iff all passed.
bool report(const std::vector<CheckResult>& results);

}  // namespace macbounds
