#include "macbounds/region_geom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace macbounds {

namespace {

bool nonneg_extended(double x) { return x >= 0.0 && !std::isnan(x); }

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("rc grid is empty");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1])) throw std::invalid_argument("rc grid not strictly increasing");
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points == 0) throw std::invalid_argument("linspace needs at least one point");
    std::vector<double> v(points);
    if (points == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < points; ++i)
        v[i] = (i + 1 == points) ? hi : lo + (hi - lo) * static_cast<double>(i) /
                                            static_cast<double>(points - 1);
    return v;
}

std::vector<RatePair> constraint_polygon(const RateConstraints& c) {
    if (!nonneg_extended(c.r1_a) || !nonneg_extended(c.r1_b) || !nonneg_extended(c.sum_c) ||
        !std::isfinite(c.sum_c))
        throw std::invalid_argument("constraint_polygon: fields must be non-negative, sum_c finite");
    const double m = std::min(c.r1_a, c.r1_b);
    const double cap = std::min(m, c.sum_c);

    std::vector<RatePair> verts;
    verts.push_back({0.0, 0.0});
    verts.push_back({0.0, cap});
    if (m < c.sum_c) verts.push_back({c.sum_c - m, m});
    verts.push_back({c.sum_c, 0.0});

    std::vector<RatePair> out;
    for (const RatePair& v : verts)
        if (out.empty() || out.back().rc != v.rc || out.back().r1 != v.r1) out.push_back(v);
    if (out.size() > 1 && out.front().rc == out.back().rc && out.front().r1 == out.back().r1)
        out.pop_back();
    return out;
}

std::optional<double> polygon_max_r1_at(const std::vector<RatePair>& polygon, double rc) {
    if (polygon.empty()) return std::nullopt;
    std::optional<double> best;
    auto consider = [&](double y) {
        if (!best || y > *best) best = y;
    };
    if (polygon.size() == 1) {
        if (polygon[0].rc == rc) consider(polygon[0].r1);
        return best;
    }
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const RatePair& p = polygon[i];
        const RatePair& q = polygon[(i + 1) % polygon.size()];
        const double lo = std::min(p.rc, q.rc), hi = std::max(p.rc, q.rc);
        if (rc < lo || rc > hi) continue;
        if (p.rc == q.rc) {
            consider(std::max(p.r1, q.r1));
        } else {
            const double t = (rc - p.rc) / (q.rc - p.rc);
            consider(p.r1 + t * (q.r1 - p.r1));
        }
    }
    return best;
}

RegionBoundary union_upper_boundary(const std::vector<std::vector<RatePair>>& polygons,
                                    std::vector<double> rc_grid) {
    check_grid(rc_grid);
    RegionBoundary b;
    b.rc_grid = std::move(rc_grid);
    b.r1_max.assign(b.rc_grid.size(), std::nullopt);
    for (std::size_t i = 0; i < b.rc_grid.size(); ++i) {
        for (const auto& poly : polygons) {
            const auto y = polygon_max_r1_at(poly, b.rc_grid[i]);
            if (y && (!b.r1_max[i] || *y > *b.r1_max[i])) b.r1_max[i] = *y;
        }
    }
    return b;
}

RegionBoundary boundary_of_constraints(const std::vector<RateConstraints>& cs,
                                       std::vector<double> rc_grid) {
    check_grid(rc_grid);
    // Reduce to the Pareto set of (r1 cap, sum) pairs; a triple dominated in
    // both coordinates never contributes to the upper boundary.
    std::vector<std::pair<double, double>> pts;
    pts.reserve(cs.size());
    for (const RateConstraints& c : cs) {
        const double cap = std::min(c.r1_a, c.r1_b);
        if (!(cap >= 0.0) || !(c.sum_c >= 0.0)) continue;
        pts.emplace_back(cap, c.sum_c);
    }
    std::sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) {
        if (l.first != r.first) return l.first > r.first;
        return l.second > r.second;
    });
    std::vector<std::pair<double, double>> pareto;
    double best_sum = -1.0;
    for (const auto& pt : pts) {
        if (pt.second > best_sum) {
            pareto.push_back(pt);
            best_sum = pt.second;
        }
    }

    RegionBoundary b;
    b.rc_grid = std::move(rc_grid);
    b.r1_max.assign(b.rc_grid.size(), std::nullopt);
    for (std::size_t i = 0; i < b.rc_grid.size(); ++i) {
        const double rc = b.rc_grid[i];
        for (const auto& [cap, sum] : pareto) {
            if (rc > sum) continue;
            const double y = std::min(cap, sum - rc);
            if (!b.r1_max[i] || y > *b.r1_max[i]) b.r1_max[i] = y;
        }
    }
    return b;
}

std::vector<double> default_rc_grid(const std::vector<RateConstraints>& cs, std::size_t points) {
    double hi = 0.0;
    for (const RateConstraints& c : cs)
        if (std::isfinite(c.sum_c)) hi = std::max(hi, c.sum_c);
    if (hi <= 0.0) return {0.0};
    return linspace(0.0, hi, points);
}

RegionBoundary upper_concave_envelope(const RegionBoundary& b) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < b.r1_max.size(); ++i)
        if (b.r1_max[i]) idx.push_back(i);
    if (idx.size() <= 2) return b;

    // Upper hull over the non-empty points (rc ordered); slopes non-increasing.
    std::vector<std::size_t> hull;
    auto keeps_concave = [&](std::size_t p0, std::size_t p1, std::size_t p2) {
        const double x0 = b.rc_grid[p0], y0 = *b.r1_max[p0];
        const double x1 = b.rc_grid[p1], y1 = *b.r1_max[p1];
        const double x2 = b.rc_grid[p2], y2 = *b.r1_max[p2];
        // p1 below or on the chord p0->p2 means p1 is redundant.
        return (y1 - y0) * (x2 - x0) > (y2 - y0) * (x1 - x0);
    };
    for (std::size_t i : idx) {
        while (hull.size() >= 2 && !keeps_concave(hull[hull.size() - 2], hull.back(), i))
            hull.pop_back();
        hull.push_back(i);
    }

    RegionBoundary out;
    out.rc_grid = b.rc_grid;
    out.r1_max.assign(b.rc_grid.size(), std::nullopt);
    std::size_t seg = 0;
    for (std::size_t i = idx.front(); i <= idx.back(); ++i) {
        const double rc = b.rc_grid[i];
        while (seg + 1 < hull.size() && b.rc_grid[hull[seg + 1]] < rc) ++seg;
        if (seg + 1 >= hull.size()) {
            out.r1_max[i] = *b.r1_max[hull.back()];
            continue;
        }
        const double x0 = b.rc_grid[hull[seg]], y0 = *b.r1_max[hull[seg]];
        const double x1 = b.rc_grid[hull[seg + 1]], y1 = *b.r1_max[hull[seg + 1]];
        out.r1_max[i] = (x1 == x0) ? std::max(y0, y1) : y0 + (y1 - y0) * (rc - x0) / (x1 - x0);
    }
    // Guard against interpolation rounding below the input.
    for (std::size_t i : idx)
        if (out.r1_max[i] && *out.r1_max[i] < *b.r1_max[i]) out.r1_max[i] = *b.r1_max[i];
    return out;
}

bool dominates(const RegionBoundary& outer, const RegionBoundary& inner, double tol) {
    if (outer.rc_grid != inner.rc_grid)
        throw std::invalid_argument("dominates: rc grids differ");
    if (outer.r1_max.size() != outer.rc_grid.size() || inner.r1_max.size() != inner.rc_grid.size())
        throw std::invalid_argument("dominates: malformed boundary");
    for (std::size_t i = 0; i < inner.r1_max.size(); ++i) {
        if (!inner.r1_max[i]) continue;
        if (!outer.r1_max[i]) return false;
        if (*outer.r1_max[i] < *inner.r1_max[i] - tol) return false;
    }
    return true;
}

}  // namespace macbounds
