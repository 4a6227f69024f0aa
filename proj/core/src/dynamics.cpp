#include "drainage/dynamics.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace drainage {

SuccessorResult successor(const Environment& env, const LatticePoint& u) {
    const ModelParams& params = env.params();
    for (std::int64_t l = 1; l <= params.max_search_height; ++l) {
        // Openness first, priority only among open vertices.
        bool found = false;
        LatticePoint best;
        double best_u = 0.0;
        for_each_slab_point(LevelSlab{u, l}, [&](const LatticePoint& w) {
            if (!env.is_open(w)) return;
            const double uw = env.uniform_at(w);
            if (!found || Environment::priority_less_values(uw, w, best_u, best)) {
                found = true;
                best = w;
                best_u = uw;
            }
        });
        if (found) return SuccessorResult{best, l};
    }
    throw SearchExceeded("successor: no open vertex within " +
                         std::to_string(params.max_search_height) +
                         " levels above " + u.str());
}

PathRecord trace(const Environment& env, const LatticePoint& u, std::int64_t horizon) {
    PathRecord rec;
    rec.start = u;
    rec.vertices.push_back(u);
    const std::int64_t target = u.level() + horizon;
    while (rec.vertices.back().level() < target)
        rec.vertices.push_back(successor(env, rec.vertices.back()).next);
    return rec;
}

namespace {

std::size_t knot_interval(const PathRecord& record, double t) {
    const auto& v = record.vertices;
    if (v.size() < 1 || record.start.d != 2)
        throw std::invalid_argument("path_at: d=2 path required");
    if (t < static_cast<double>(v.front().level()) ||
        t > static_cast<double>(v.back().level()))
        throw std::out_of_range("path_at: level outside traced range");
    // First knot with level >= t.
    auto it = std::lower_bound(v.begin(), v.end(), t, [](const LatticePoint& a, double s) {
        return static_cast<double>(a.level()) < s;
    });
    return static_cast<std::size_t>(it - v.begin());
}

}  // namespace

double path_at(const PathRecord& record, double t) {
    const auto& v = record.vertices;
    std::size_t i = knot_interval(record, t);
    if (static_cast<double>(v[i].level()) == t) return static_cast<double>(v[i].c[0]);
    const LatticePoint& a = v[i - 1];
    const LatticePoint& b = v[i];
    const double span = static_cast<double>(b.level() - a.level());
    const double frac = (t - static_cast<double>(a.level())) / span;
    return static_cast<double>(a.c[0]) +
           frac * static_cast<double>(b.c[0] - a.c[0]);
}

RationalPos path_at_exact(const PathRecord& record, std::int64_t t) {
    const auto& v = record.vertices;
    std::size_t i = knot_interval(record, static_cast<double>(t));
    if (v[i].level() == t) return RationalPos{v[i].c[0], 1};
    const LatticePoint& a = v[i - 1];
    const LatticePoint& b = v[i];
    const std::int64_t den = b.level() - a.level();
    return RationalPos{a.c[0] * den + (t - a.level()) * (b.c[0] - a.c[0]), den};
}

namespace {

struct Edge {
    LatticePoint tail, head;
};

std::int64_t orient(const LatticePoint& p, const LatticePoint& q, const LatticePoint& r) {
    const std::int64_t v =
        (q.c[0] - p.c[0]) * (r.c[1] - p.c[1]) - (q.c[1] - p.c[1]) * (r.c[0] - p.c[0]);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

bool strictly_inside(const Edge& e, const LatticePoint& p) {
    if (orient(e.tail, e.head, p) != 0) return false;
    if (p == e.tail || p == e.head) return false;
    // Edges are oriented upward, so the level coordinate is monotone.
    return e.tail.c[1] <= p.c[1] && p.c[1] <= e.head.c[1] &&
           std::min(e.tail.c[0], e.head.c[0]) <= p.c[0] &&
           p.c[0] <= std::max(e.tail.c[0], e.head.c[0]);
}

// Intersection away from shared endpoints: a transversal interior
// crossing or any endpoint touching the other edge's interior.
bool edges_cross(const Edge& a, const Edge& b) {
    const int o1 = orient(a.tail, a.head, b.tail);
    const int o2 = orient(a.tail, a.head, b.head);
    const int o3 = orient(b.tail, b.head, a.tail);
    const int o4 = orient(b.tail, b.head, a.head);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return strictly_inside(a, b.tail) || strictly_inside(a, b.head) ||
           strictly_inside(b, a.tail) || strictly_inside(b, a.head);
}

bool in_cone_d2(const LatticePoint& base, const LatticePoint& w) {
    const std::int64_t k = w.c[1] - base.c[1];
    return k >= 1 && std::llabs(w.c[0] - base.c[0]) <= k;
}

}  // namespace

PlanarityReport check_planarity(const ModelParams& params, std::int64_t half_width,
                                std::int64_t height, int n_seeds) {
    if (params.d != 2) throw std::invalid_argument("check_planarity: d=2 only");
    PlanarityReport report;
    for (int s = 0; s < n_seeds; ++s) {
        ModelParams ps = params;
        ps.seed = replicate_seed(params.seed, static_cast<std::uint64_t>(s));
        Environment env(ps);

        std::vector<Edge> edges;
        for (std::int64_t x = -half_width; x <= half_width; ++x) {
            for (std::int64_t t = 0; t <= height; ++t) {
                LatticePoint u{x, t};
                if (!env.is_open(u)) continue;
                edges.push_back(Edge{u, successor(env, u).next});
            }
        }
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return a.tail.c[1] < b.tail.c[1];
        });
        report.edges += static_cast<std::int64_t>(edges.size());

        // Only pairs with overlapping level spans can interact.
        for (std::size_t i = 0; i < edges.size(); ++i) {
            for (std::size_t j = i + 1; j < edges.size(); ++j) {
                if (edges[j].tail.c[1] > edges[i].head.c[1]) break;
                const Edge& a = edges[i];
                const Edge& b = edges[j];
                if (edges_cross(a, b)) ++report.crossings;
                if (a.tail != b.tail && in_cone_d2(b.tail, a.head) &&
                    in_cone_d2(a.tail, b.head) && a.head != b.head)
                    ++report.shared_level_violations;
            }
        }
    }
    return report;
}

}  // namespace drainage
