#pragma once

#include <cstdint>
#include <vector>

#include "drainage/lattice.hpp"

namespace drainage {

/// m_k(u): u with the level coordinate raised by k.
inline LatticePoint apex(const LatticePoint& u, std::int64_t k) {
    LatticePoint v = u;
    v.level() += k;
    return v;
}

/// H(base,k): the level plane base.level()+k restricted to the l1 ball
/// of radius k around the apex. H(base,0) is empty by convention.
/// In d=2 it holds exactly 2k+1 points.
struct LevelSlab {
    LatticePoint base;
    std::int64_t k = 1;
};

/// V(base,h) = union of H(base,k) for k=1..h; V(base,0) empty.
/// |V(.,h)| = h^2+2h in d=2.
struct Cone {
    LatticePoint base;
    std::int64_t h = 0;
};

/// V(base,s) \ V(base,r) with r <= s relative to base's level: the
/// history region shape of the joint construction. Empty iff r == s.
struct Trapezoid {
    LatticePoint base;
    std::int64_t r = 0;
    std::int64_t s = 0;
};

/// Number of points of Z^dim with l1 norm <= radius.
std::int64_t l1_ball_size(int dim, std::int64_t radius);

/// |H(.,k)| for lattice dimension d: the (d-1)-dimensional l1 ball count.
inline std::int64_t slab_size(int d, std::int64_t k) {
    return k < 1 ? 0 : l1_ball_size(d - 1, k);
}

/// |V(.,h)|.
std::int64_t cone_size(int d, std::int64_t h);

/// Visits the points of a slab in a fixed deterministic order
/// (lexicographic in the spatial offsets). Regions are descriptors;
/// nothing is materialized unless the caller collects.
template <typename Fn>
void for_each_slab_point(const LevelSlab& slab, Fn&& fn) {
    if (slab.k < 1) return;
    const int sd = slab.base.d - 1;  // spatial dimensions
    LatticePoint w = apex(slab.base, slab.k);
    // Recurse over spatial offsets with remaining l1 budget.
    auto rec = [&](auto&& self, int i, std::int64_t budget) -> void {
        if (i == sd - 1) {
            const std::int64_t c0 = slab.base.c[i];
            for (std::int64_t off = -budget; off <= budget; ++off) {
                w.c[i] = c0 + off;
                fn(static_cast<const LatticePoint&>(w));
            }
            return;
        }
        const std::int64_t c0 = slab.base.c[i];
        for (std::int64_t off = -budget; off <= budget; ++off) {
            w.c[i] = c0 + off;
            self(self, i + 1, budget - std::abs(off));
        }
    };
    rec(rec, 0, slab.k);
}

std::vector<LatticePoint> slab_points(const LevelSlab& slab);

/// Visits V(base,h) slab by slab, levels ascending.
template <typename Fn>
void for_each_cone_point(const Cone& cone, Fn&& fn) {
    for (std::int64_t k = 1; k <= cone.h; ++k)
        for_each_slab_point(LevelSlab{cone.base, k}, fn);
}

bool slab_contains(const LevelSlab& slab, const LatticePoint& w);
bool cone_contains(const Cone& cone, const LatticePoint& w);
bool trapezoid_contains(const Trapezoid& t, const LatticePoint& w);

template <typename Fn>
void for_each_trapezoid_point(const Trapezoid& t, Fn&& fn) {
    for (std::int64_t k = t.r + 1; k <= t.s; ++k)
        for_each_slab_point(LevelSlab{t.base, k}, fn);
}

inline bool trapezoid_empty(const Trapezoid& t) { return t.r == t.s; }

}  // namespace drainage
