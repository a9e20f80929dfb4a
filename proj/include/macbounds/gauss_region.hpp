#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "macbounds/region_geom.hpp"

namespace macbounds {

/// Additive Gaussian channel Y = X1 + X2 + S + Z with transmit powers
/// P1 (uninformed encoder) and P2 (informed encoder), state variance Q
/// and noise variance N.
struct ChannelParams {
    double p1 = 1.0;
    double p2 = 1.0;
    double q = 1.0;
    double n0 = 1.0;
};

/// Coding parameters of the achievable region: theta splits P1 between the
/// individual message and the coherent part, xi is the normalized binning
/// power fraction, rho the informed-encoder/state correlation in
/// [-sqrt(1-xi), 0], alpha the interference pre-cancellation scale.
struct InnerParams {
    double theta = 1.0;
    double xi = 1.0;
    double rho = 0.0;
    double alpha = 1.0;
};

/// Correlation parameters of the converse region: rho12 = corr(X1, X2) in
/// [0, 1], rho2s = corr(X2, S) in [-1, 0], with rho12^2 + rho2s^2 <= 1.
struct OuterParams {
    double rho12 = 0.0;
    double rho2s = 0.0;
};

/// Sweep resolution. Inner counts must be >= 2; the outer counts allow 1
/// for degenerate single-point sweeps. alpha candidates {0, 1} are always
/// added on top of the swept range. arc_points additionally samples the
/// quarter-circle rho12^2 + rho2s^2 = 1, where the sum-rate corner of the
/// converse region sits; the rectangular grid alone under-approximates it.
struct GridSpec {
    int theta_points = 21;
    int xi_points = 21;
    int rho_points = 21;
    int alpha_points = 101;
    double alpha_lo = -2.0;
    double alpha_hi = 3.0;
    double xi_floor = 1e-4;
    int rho12_points = 41;
    int rho2s_points = 41;
    int arc_points = 1001;
};

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
};

void validate(const ChannelParams& ch);
void validate(const InnerParams& p);
void validate(const OuterParams& p);
void validate(const GridSpec& g);

/// (sqrt(Q) + rho*sqrt(P2))^2: the effective state power left after
/// correlating the informed encoder's input with the state.
double q_tilde(const ChannelParams& ch, double rho);

/// Closed-form achievable triple plus the second logarithm term of the sum
/// bound (the binning feasibility value).
struct InnerEval {
    RateConstraints rates;
    double sum_second_term = 0.0;
};

/// Closed-form evaluation of the achievable region at one parameter tuple.
/// Returns nullopt when the binning constraint fails (the r1_b or second
/// sum logarithm argument drops below 1, including NaN denominators).
std::optional<InnerEval> inner_constraints_detailed(const ChannelParams& ch,
                                                    const InnerParams& p);
std::optional<RateConstraints> inner_constraints(const ChannelParams& ch, const InnerParams& p);

/// Closed-form converse triple (r1_b is unconstrained). At rho2s = +-1 the
/// 0/0 first bound is evaluated as its limit along the unit circle, 0.
RateConstraints outer_constraints(const ChannelParams& ch, const OuterParams& p);

/// All feasible triples over the (theta, xi, rho, alpha) grid, in
/// lexicographic sweep order.
std::vector<RateConstraints> inner_region_constraints(const ChannelParams& ch, const GridSpec& g);

/// All triples over the (rho12, rho2s) quarter-disk grid.
std::vector<RateConstraints> outer_region_constraints(const ChannelParams& ch, const GridSpec& g);

RegionBoundary inner_boundary(const ChannelParams& ch, const GridSpec& g);
RegionBoundary outer_boundary(const ChannelParams& ch, const GridSpec& g);
RegionBoundary inner_boundary_on(const ChannelParams& ch, const GridSpec& g,
                                 std::vector<double> rc_grid);
RegionBoundary outer_boundary_on(const ChannelParams& ch, const GridSpec& g,
                                 std::vector<double> rc_grid);

/// Largest common rate at R1 = 0: achievable (theta = 0 sweep) and converse.
BoundPair common_message_capacity(const ChannelParams& ch, const GridSpec& g);

/// Largest individual rate at Rc = 0: achievable and converse intercepts.
BoundPair helper_rate_bounds(const ChannelParams& ch, const GridSpec& g);

/// Strong-interference, high-SNR reference corners
/// (1/2 log2(1 + P1/N), +inf, 1/2 log2(1 + P2/N)).
RateConstraints strong_interference_reference(const ChannelParams& ch);

}  // namespace macbounds
