#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "macbounds/region_geom.hpp"

namespace macbounds {

/// Probability vector over a finite alphabet; sums to 1 within 1e-12.
struct FiniteDist {
    std::vector<double> p;
};

/// Discrete memoryless state-dependent MAC: state pmf and the conditional
/// kernel W(y | x1, x2, s), stored row-major over ((x1, x2, s), y).
struct DmChannel {
    std::size_t ns = 1, nx1 = 2, nx2 = 2, ny = 2;
    FiniteDist state_dist;
    std::vector<double> kernel;

    double w(std::size_t y, std::size_t x1, std::size_t x2, std::size_t s) const {
        return kernel[((x1 * nx2 + x2) * ns + s) * ny + y];
    }
};

void validate(const DmChannel& ch);

/// Input distribution of the achievable region:
/// P(u1) P(x1|u1) P(u2|u1,s) P(x2|u1,u2,s).
struct InnerFactorization {
    std::size_t nu1 = 1, nu2 = 1;
    std::vector<double> p_u1;                // [u1]
    std::vector<double> p_x1_given_u1;       // [u1][x1]
    std::vector<double> p_u2_given_u1_s;     // [u1][s][u2]
    std::vector<double> p_x2_given_u1_u2_s;  // [u1][u2][s][x2]
};

/// Input distribution of the converse region: P(x1) P(x2|x1,s).
struct OuterFactorization {
    std::vector<double> p_x1;            // [x1]
    std::vector<double> p_x2_given_x1_s; // [x1][s][x2]
};

/// Dense joint pmf with named axes, row-major in axis order.
struct JointPmf {
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
    std::vector<double> p;

    std::size_t size() const { return p.size(); }
};

/// Product of the six factors, axes (S, U1, U2, X1, X2, Y).
JointPmf inner_joint(const DmChannel& ch, const InnerFactorization& f);

/// Product of the four factors, axes (S, X1, X2, Y).
JointPmf outer_joint(const DmChannel& ch, const OuterFactorization& f);

/// Marginal over the named axes, in their order of appearance in j.
JointPmf marginal(const JointPmf& j, const std::vector<std::string>& axes);

/// Shannon entropy in bits, 0 log 0 := 0.
double entropy_bits(const JointPmf& j);

/// I(A; B | C) in bits from the joint pmf; A, B non-empty and all three
/// pairwise disjoint.
double mutual_info(const JointPmf& j, const std::vector<std::string>& a,
                   const std::vector<std::string>& b, const std::vector<std::string>& c);

struct DmInnerEval {
    RateConstraints rates;   // clamped at 0
    double feasibility = 0.0;
    double raw_r1_a = 0.0, raw_r1_b = 0.0, raw_sum_c = 0.0;

    bool feasible() const { return feasibility > 1e-12; }
};

/// The three achievable-rate expressions and the binning feasibility value
/// I(U2; Y | U1, X1) - I(U2; S | U1), evaluated on a six-axis joint.
DmInnerEval dm_inner_constraints(const JointPmf& j);

/// (I(X1; Y | S, X2), +inf, I(X1, X2; Y | S) - I(X1; S | Y)) on a
/// four-axis joint, sum clamped at 0.
RateConstraints dm_outer_constraints(const JointPmf& j);

/// All feasible triples found by seeded Dirichlet sampling plus greedy
/// per-cell coordinate refinement. Deterministic for fixed (budget, seed).
std::vector<RateConstraints> dm_inner_search_constraints(const DmChannel& ch,
                                                         std::size_t u1_size,
                                                         std::size_t u2_size, int budget,
                                                         std::uint64_t seed);
std::vector<RateConstraints> dm_outer_search_constraints(const DmChannel& ch, int budget,
                                                         std::uint64_t seed);

RegionBoundary dm_inner_search(const DmChannel& ch, std::size_t u1_size, std::size_t u2_size,
                               int budget, std::uint64_t seed);
RegionBoundary dm_outer_search(const DmChannel& ch, int budget, std::uint64_t seed);

/// Checks on an (Rc, R1) grid of the given step that splitting the common
/// rate as Rc = Rc1 + Rc2 under the five decoding inequalities
///   R1 <= a, R1 <= b, Rc+R1 <= c, Rc2+R1 <= b, Rc2 <= d
/// describes the same set as {R1 <= a, R1 <= b, Rc+R1 <= c} when d > 0.
/// d <= 0 violates the binning feasibility constraint; no check is
/// performed and true is returned.
bool fm_equivalence_check(double a, double b, double c, double d, double grid_step);

/// Text format: "ns nx1 nx2 ny" sizes line, state pmf line, then one line
/// of ny conditional probabilities per (x1, x2, s), row-major. Blank lines
/// and '#' comments are ignored.
DmChannel load_dm_channel(const std::string& path);
void save_dm_channel(const DmChannel& ch, const std::string& path);

/// Binary MAC with Y = X1 xor X2 and a single (degenerate) state.
DmChannel xor_channel();

}  // namespace macbounds
