#include "macbounds/gauss_region.hpp"

#include <cmath>
#include <stdexcept>

namespace macbounds {

namespace {

constexpr double kTolInv = 1e-12;

double half_log2(double x) { return 0.5 * std::log2(x); }

std::vector<double> alpha_grid(const GridSpec& g) {
    std::vector<double> alphas = linspace(g.alpha_lo, g.alpha_hi, static_cast<std::size_t>(g.alpha_points));
    alphas.push_back(0.0);  // treat-state-as-noise
    alphas.push_back(1.0);  // full residual cancellation
    return alphas;
}

}  // namespace

void validate(const ChannelParams& ch) {
    if (!(ch.p1 >= 0.0) || !(ch.p2 >= 0.0) || !(ch.q >= 0.0) || !(ch.n0 > 0.0) ||
        !std::isfinite(ch.p1 + ch.p2 + ch.q + ch.n0))
        throw std::invalid_argument("channel requires p1, p2, q >= 0 and n0 > 0");
}

void validate(const InnerParams& p) {
    if (!(p.theta >= 0.0 && p.theta <= 1.0)) throw std::invalid_argument("theta outside [0, 1]");
    if (!(p.xi >= 0.0 && p.xi <= 1.0)) throw std::invalid_argument("xi outside [0, 1]");
    if (!(p.rho <= 0.0) || !(p.rho * p.rho <= 1.0 - p.xi + kTolInv))
        throw std::invalid_argument("rho outside [-sqrt(1 - xi), 0]");
    if (!std::isfinite(p.alpha)) throw std::invalid_argument("alpha not finite");
}

void validate(const OuterParams& p) {
    if (!(p.rho12 >= 0.0 && p.rho12 <= 1.0)) throw std::invalid_argument("rho12 outside [0, 1]");
    if (!(p.rho2s >= -1.0 && p.rho2s <= 0.0)) throw std::invalid_argument("rho2s outside [-1, 0]");
    if (p.rho12 * p.rho12 + p.rho2s * p.rho2s > 1.0 + kTolInv)
        throw std::invalid_argument("rho12^2 + rho2s^2 > 1");
}

void validate(const GridSpec& g) {
    if (g.theta_points < 2 || g.xi_points < 2 || g.rho_points < 2 || g.alpha_points < 2)
        throw std::invalid_argument("inner sweep counts must be >= 2");
    if (g.rho12_points < 1 || g.rho2s_points < 1 || g.arc_points < 0)
        throw std::invalid_argument("outer sweep counts must be >= 1 (arc_points >= 0)");
    if (!(g.alpha_lo <= g.alpha_hi)) throw std::invalid_argument("empty alpha range");
    if (!(g.xi_floor > 0.0 && g.xi_floor < 1.0)) throw std::invalid_argument("xi_floor outside (0, 1)");
}

double q_tilde(const ChannelParams& ch, double rho) {
    if (!(rho >= -1.0 && rho <= 0.0)) throw std::invalid_argument("rho outside [-1, 0]");
    validate(ch);
    const double r = std::sqrt(ch.q) + rho * std::sqrt(ch.p2);
    return r * r;
}

std::optional<InnerEval> inner_constraints_detailed(const ChannelParams& ch, const InnerParams& p) {
    validate(ch);
    validate(p);

    const double a = ch.p2 * p.xi;             // binning power
    const double b = q_tilde(ch, p.rho);       // residual state power
    const double tp1 = p.theta * ch.p1;
    const double one_m_alpha2 = (1.0 - p.alpha) * (1.0 - p.alpha);
    const double den = a + p.alpha * p.alpha * b;
    const double big_den = a * b * one_m_alpha2 + ch.n0 * den;

    const double r1b_arg = a * (a + b + ch.n0 + tp1) / big_den;
    const double sum2_arg = a * (a + b + ch.n0) / big_den;
    // Binning feasibility: both logarithm arguments must stay >= 1.
    // NaN from degenerate denominators fails these comparisons as well.
    if (!(r1b_arg >= 1.0) || !(sum2_arg >= 1.0)) return std::nullopt;

    const double r1a = half_log2(1.0 + tp1 / (ch.n0 + a * b * one_m_alpha2 / den));
    const double coh = std::sqrt(std::max(0.0, 1.0 - p.xi - p.rho * p.rho));
    const double coherent = std::sqrt((1.0 - p.theta) * ch.p1) + coh * std::sqrt(ch.p2);
    const double sum1 = half_log2(1.0 + (coherent * coherent + tp1) / (a + b + ch.n0));
    const double sum2 = half_log2(sum2_arg);

    InnerEval out;
    out.rates = RateConstraints{r1a, half_log2(r1b_arg), sum1 + sum2};
    out.sum_second_term = sum2;
    return out;
}

std::optional<RateConstraints> inner_constraints(const ChannelParams& ch, const InnerParams& p) {
    const auto eval = inner_constraints_detailed(ch, p);
    if (!eval) return std::nullopt;
    return eval->rates;
}

RateConstraints outer_constraints(const ChannelParams& ch, const OuterParams& p) {
    validate(ch);
    validate(p);

    const double rem = std::max(0.0, 1.0 - p.rho12 * p.rho12 - p.rho2s * p.rho2s);
    const double one_m_r2s2 = 1.0 - p.rho2s * p.rho2s;
    const double r1a =
        one_m_r2s2 > 0.0 ? half_log2(1.0 + ch.p1 * rem / (ch.n0 * one_m_r2s2)) : 0.0;

    const double coherent = std::sqrt(ch.p1) + p.rho12 * std::sqrt(ch.p2);
    const double sum1 =
        half_log2(1.0 + coherent * coherent / (ch.p2 * rem + q_tilde(ch, p.rho2s) + ch.n0));
    const double sum2 = half_log2(1.0 + ch.p2 * rem / ch.n0);
    return RateConstraints{r1a, kInf, sum1 + sum2};
}

std::vector<RateConstraints> inner_region_constraints(const ChannelParams& ch, const GridSpec& g) {
    validate(ch);
    validate(g);
    const auto thetas = linspace(0.0, 1.0, static_cast<std::size_t>(g.theta_points));
    const auto xis = linspace(g.xi_floor, 1.0, static_cast<std::size_t>(g.xi_points));
    const auto alphas = alpha_grid(g);

    std::vector<RateConstraints> out;
    out.reserve(thetas.size() * xis.size() * static_cast<std::size_t>(g.rho_points));
    for (const double theta : thetas) {
        for (const double xi : xis) {
            const double rho_lo = -std::sqrt(std::max(0.0, 1.0 - xi));
            const auto rhos = linspace(rho_lo, 0.0, static_cast<std::size_t>(g.rho_points));
            for (const double rho : rhos) {
                for (const double alpha : alphas) {
                    const auto eval = inner_constraints(ch, InnerParams{theta, xi, rho, alpha});
                    if (eval) out.push_back(*eval);
                }
            }
        }
    }
    return out;
}

std::vector<RateConstraints> outer_region_constraints(const ChannelParams& ch, const GridSpec& g) {
    validate(ch);
    validate(g);
    const auto rho12s = linspace(0.0, 1.0, static_cast<std::size_t>(g.rho12_points));
    const auto rho2ss = linspace(0.0, -1.0, static_cast<std::size_t>(g.rho2s_points));
    std::vector<RateConstraints> out;
    out.reserve(rho12s.size() * rho2ss.size() + static_cast<std::size_t>(g.arc_points));
    for (const double r12 : rho12s)
        for (const double r2s : rho2ss) {
            if (r12 * r12 + r2s * r2s > 1.0) continue;
            out.push_back(outer_constraints(ch, OuterParams{r12, r2s}));
        }
    if (g.arc_points > 0) {
        // The sum-rate corner typically lies on the unit quarter-circle,
        // which the rectangular grid only grazes.
        for (const double r2s : linspace(0.0, -1.0, static_cast<std::size_t>(g.arc_points))) {
            const double r12 = std::sqrt(std::max(0.0, 1.0 - r2s * r2s));
            out.push_back(outer_constraints(ch, OuterParams{std::min(r12, 1.0), r2s}));
        }
    }
    return out;
}

RegionBoundary inner_boundary(const ChannelParams& ch, const GridSpec& g) {
    const auto cs = inner_region_constraints(ch, g);
    return boundary_of_constraints(cs, default_rc_grid(cs));
}

RegionBoundary outer_boundary(const ChannelParams& ch, const GridSpec& g) {
    const auto cs = outer_region_constraints(ch, g);
    return boundary_of_constraints(cs, default_rc_grid(cs));
}

RegionBoundary inner_boundary_on(const ChannelParams& ch, const GridSpec& g,
                                 std::vector<double> rc_grid) {
    return boundary_of_constraints(inner_region_constraints(ch, g), std::move(rc_grid));
}

RegionBoundary outer_boundary_on(const ChannelParams& ch, const GridSpec& g,
                                 std::vector<double> rc_grid) {
    return boundary_of_constraints(outer_region_constraints(ch, g), std::move(rc_grid));
}

BoundPair common_message_capacity(const ChannelParams& ch, const GridSpec& g) {
    validate(ch);
    validate(g);
    // Lower bound: largest sum_c of the achievable sweep restricted to
    // theta = 0 (the individual message is silent, so (rc, 0) is inside the
    // pentagon exactly when rc <= sum_c).
    double lower = 0.0;
    const auto xis = linspace(g.xi_floor, 1.0, static_cast<std::size_t>(g.xi_points));
    const auto alphas = alpha_grid(g);
    for (const double xi : xis) {
        const double rho_lo = -std::sqrt(std::max(0.0, 1.0 - xi));
        const auto rhos = linspace(rho_lo, 0.0, static_cast<std::size_t>(g.rho_points));
        for (const double rho : rhos)
            for (const double alpha : alphas) {
                const auto eval = inner_constraints(ch, InnerParams{0.0, xi, rho, alpha});
                if (eval && eval->sum_c > lower) lower = eval->sum_c;
            }
    }
    double upper = 0.0;
    for (const RateConstraints& c : outer_region_constraints(ch, g))
        if (c.sum_c > upper) upper = c.sum_c;
    return BoundPair{lower, upper};
}

BoundPair helper_rate_bounds(const ChannelParams& ch, const GridSpec& g) {
    double lower = 0.0;
    for (const RateConstraints& c : inner_region_constraints(ch, g))
        lower = std::max(lower, std::min(std::min(c.r1_a, c.r1_b), c.sum_c));
    double upper = 0.0;
    for (const RateConstraints& c : outer_region_constraints(ch, g))
        upper = std::max(upper, std::min(c.r1_a, c.sum_c));
    return BoundPair{lower, upper};
}

RateConstraints strong_interference_reference(const ChannelParams& ch) {
    validate(ch);
    return RateConstraints{half_log2(1.0 + ch.p1 / ch.n0), kInf, half_log2(1.0 + ch.p2 / ch.n0)};
}

}  // namespace macbounds
