#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace macbounds {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A point in the (common rate, individual rate) plane, bits per channel use.
struct RatePair {
    double rc = 0.0;
    double r1 = 0.0;
};

/// One pentagon-shaped region slice:
///   R1 <= min(r1_a, r1_b),  Rc + R1 <= sum_c,  Rc, R1 >= 0.
/// A field equal to +infinity means that constraint is absent.
struct RateConstraints {
    double r1_a = 0.0;
    double r1_b = kInf;
    double sum_c = 0.0;
};

/// Pareto frontier R1_max(Rc) of a down-closed region on an increasing rc
/// grid. A nullopt cell means no feasible R1 exists at that common rate.
struct RegionBoundary {
    std::vector<double> rc_grid;
    std::vector<std::optional<double>> r1_max;
};

/// Vertices of {R1 <= min(r1_a, r1_b), Rc + R1 <= sum_c, Rc, R1 >= 0},
/// listed from the origin up the R1 axis and around to the Rc axis.
/// Degenerate (zero-area) inputs yield a segment or the origin alone.
/// Requires sum_c finite and all fields non-negative.
std::vector<RatePair> constraint_polygon(const RateConstraints& c);

/// Largest r1 with (rc, r1) inside the polygon, or nullopt if rc is not
/// covered. Polygons are vertex lists as produced by constraint_polygon.
std::optional<double> polygon_max_r1_at(const std::vector<RatePair>& polygon, double rc);

/// Upper boundary of the union of polygons, sampled on rc_grid
/// (strictly increasing). An empty polygon list gives an all-empty boundary.
RegionBoundary union_upper_boundary(const std::vector<std::vector<RatePair>>& polygons,
                                    std::vector<double> rc_grid);

/// Same boundary, computed directly from the constraint triples. Large
/// sweeps use this path; it agrees with union_upper_boundary over the
/// corresponding polygons.
RegionBoundary boundary_of_constraints(const std::vector<RateConstraints>& cs,
                                       std::vector<double> rc_grid);

/// Evenly spaced rc grid from 0 to the largest sum_c in cs.
std::vector<double> default_rc_grid(const std::vector<RateConstraints>& cs,
                                    std::size_t points = 201);

std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Pointwise-smallest concave non-increasing majorant on the same grid
/// (time-sharing convexification). Idempotent.
RegionBoundary upper_concave_envelope(const RegionBoundary& b);

/// True iff outer.r1_max >= inner.r1_max - tol wherever inner is non-empty.
/// The two boundaries must share the same rc grid.
bool dominates(const RegionBoundary& outer, const RegionBoundary& inner, double tol);

}  // namespace macbounds
