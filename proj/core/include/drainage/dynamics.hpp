#pragma once

#include <cstdint>
#include <vector>

#include "drainage/env.hpp"
#include "drainage/geometry.hpp"

namespace drainage {

/// Successor of u: the minimal-priority open vertex on the first
/// nonempty open slab above u.
struct SuccessorResult {
    LatticePoint next;
    std::int64_t level_jump = 0;
};

/// One traced path h_0, h_1, ... from a start vertex. Increments
/// X_k = h_k(1)-h_{k-1}(1) and Y_k = h_k(d)-h_{k-1}(d) are derived views.
struct PathRecord {
    LatticePoint start;
    std::vector<LatticePoint> vertices;  // h_0 = start first

    std::size_t steps() const { return vertices.size() - 1; }
    std::int64_t x_increment(std::size_t k) const {
        return vertices[k].c[0] - vertices[k - 1].c[0];
    }
    std::int64_t y_increment(std::size_t k) const {
        return vertices[k].level() - vertices[k - 1].level();
    }
};

/// Applies rule items (i)-(iii): scan levels l = 1, 2, ... and return
/// the minimal-priority open vertex of the first slab that has one.
/// Valid for closed starts too; the joint construction needs that.
/// Throws SearchExceeded past params.max_search_height.
SuccessorResult successor(const Environment& env, const LatticePoint& u);

/// Iterates successor until the path level reaches start level + horizon.
PathRecord trace(const Environment& env, const LatticePoint& u, std::int64_t horizon);

/// Piecewise-linear path value at level t (d=2). Exact at knots,
/// linear in between. t must lie within the traced range.
double path_at(const PathRecord& record, double t);

/// Exact rational path position at an integer level: x = num/den.
/// Used where floating point equality would be unreliable.
struct RationalPos {
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool operator==(const RationalPos& o) const {
        return num * o.den == o.num * den;
    }
};
RationalPos path_at_exact(const PathRecord& record, std::int64_t t);

/// Planarity probe over a box of Z^2: computes the successor edge of
/// every open vertex with both coordinates in [-half_width, half_width]
/// x [0, height], then checks that no two straight-line edges intersect
/// away from shared endpoints, and that the shared-level argument holds:
/// whenever each of two edges' endpoints lies in the other's light cone,
/// the endpoints coincide.
struct PlanarityReport {
    std::int64_t edges = 0;
    std::int64_t crossings = 0;
    std::int64_t shared_level_violations = 0;
};
PlanarityReport check_planarity(const ModelParams& params, std::int64_t half_width,
                                std::int64_t height, int n_seeds);

}  // namespace drainage
