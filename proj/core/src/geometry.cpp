#include "drainage/geometry.hpp"

#include <cmath>
#include <cstdlib>

namespace drainage {

std::int64_t l1_ball_size(int dim, std::int64_t radius) {
    if (radius < 0) return 0;
    if (dim == 0) return 1;
    // sum_j 2^j C(dim,j) C(radius,j): points split by the number j of
    // nonzero coordinates.
    std::int64_t total = 0;
    std::int64_t c_dim = 1;  // C(dim, j)
    std::int64_t pow2 = 1;
    for (int j = 0; j <= dim; ++j) {
        if (j > radius) break;
        std::int64_t c_rad = 1;  // C(radius, j)
        for (int i = 0; i < j; ++i) c_rad = c_rad * (radius - i) / (i + 1);
        total += pow2 * c_dim * c_rad;
        c_dim = c_dim * (dim - j) / (j + 1);
        pow2 *= 2;
    }
    return total;
}

std::int64_t cone_size(int d, std::int64_t h) {
    std::int64_t total = 0;
    for (std::int64_t k = 1; k <= h; ++k) total += slab_size(d, k);
    return total;
}

std::vector<LatticePoint> slab_points(const LevelSlab& slab) {
    std::vector<LatticePoint> out;
    out.reserve(static_cast<std::size_t>(slab_size(slab.base.d, slab.k)));
    for_each_slab_point(slab, [&](const LatticePoint& w) { out.push_back(w); });
    return out;
}

bool slab_contains(const LevelSlab& slab, const LatticePoint& w) {
    if (slab.k < 1 || w.d != slab.base.d) return false;
    if (w.level() != slab.base.level() + slab.k) return false;
    std::int64_t dist = 0;
    for (int i = 0; i < w.d - 1; ++i) dist += std::llabs(w.c[i] - slab.base.c[i]);
    return dist <= slab.k;
}

bool cone_contains(const Cone& cone, const LatticePoint& w) {
    const std::int64_t k = w.level() - cone.base.level();
    if (k < 1 || k > cone.h) return false;
    return slab_contains(LevelSlab{cone.base, k}, w);
}

bool trapezoid_contains(const Trapezoid& t, const LatticePoint& w) {
    const std::int64_t k = w.level() - t.base.level();
    if (k <= t.r || k > t.s) return false;
    return slab_contains(LevelSlab{t.base, k}, w);
}

}  // namespace drainage
