#include "drainage/treescan.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "drainage/parallel.hpp"
#include "drainage/statutil.hpp"

namespace drainage {

namespace {

class UnionFind {
public:
    explicit UnionFind(long n) : parent_(static_cast<std::size_t>(n)) {
        for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = static_cast<long>(i);
    }
    long find(long x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(long a, long b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[static_cast<std::size_t>(b)] = a;
        return true;
    }

private:
    std::vector<long> parent_;
};

// Enumerates the start window, iterating spatial coordinates of the box.
template <typename Fn>
void for_each_window_point(int d, std::int64_t half_width, Fn&& fn) {
    LatticePoint w;
    w.d = d;
    auto rec = [&](auto&& self, int i) -> void {
        if (i == d - 1) {
            fn(static_cast<const LatticePoint&>(w));
            return;
        }
        for (std::int64_t v = -half_width; v <= half_width; ++v) {
            w.c[i] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
}

}  // namespace

ComponentReport component_count(const BoxSpec& box) {
    box.params.validate();
    double window = 1.0;
    for (int i = 0; i < box.params.d - 1; ++i)
        window *= static_cast<double>(2 * box.half_width + 1);
    if (window > 1e7)
        throw std::invalid_argument("component_count: start window exceeds 1e7 vertices");

    Environment env(box.params);
    std::vector<LatticePoint> starts;
    for_each_window_point(box.params.d, box.half_width, [&](const LatticePoint& w) {
        if (env.is_open(w)) starts.push_back(w);
    });

    ComponentReport report;
    report.starts = static_cast<long>(starts.size());
    if (starts.empty()) return report;

    // Trace each start upward; the first vertex already claimed by an
    // earlier path is a merge (paths coincide beyond it), so tracing can
    // stop there. Records (level, i, j) merge events for the histogram.
    std::unordered_map<LatticePoint, long, PointHash> claimed;
    struct MergeEvent {
        std::int64_t level;
        long a, b;
    };
    std::vector<MergeEvent> events;
    for (long i = 0; i < static_cast<long>(starts.size()); ++i) {
        LatticePoint cur = starts[static_cast<std::size_t>(i)];
        while (true) {
            auto [it, fresh] = claimed.emplace(cur, i);
            if (!fresh) {
                events.push_back(MergeEvent{cur.level(), it->second, i});
                break;
            }
            if (cur.level() >= box.height) break;
            cur = successor(env, cur).next;
        }
    }

    std::sort(events.begin(), events.end(),
              [](const MergeEvent& a, const MergeEvent& b) { return a.level < b.level; });
    std::vector<std::int64_t> grid;
    for (std::int64_t h = 1; h < box.height; h *= 2) grid.push_back(h);
    grid.push_back(box.height);

    UnionFind uf(report.starts);
    long components = report.starts;
    std::size_t next_event = 0;
    for (const std::int64_t h : grid) {
        while (next_event < events.size() && events[next_event].level <= h) {
            if (uf.unite(events[next_event].a, events[next_event].b)) --components;
            ++next_event;
        }
        report.histogram.emplace_back(h, components);
    }
    // Merges at the stopping knots just above the box line still identify
    // positions at the top.
    while (next_event < events.size()) {
        if (uf.unite(events[next_event].a, events[next_event].b)) --components;
        ++next_event;
    }
    report.components_at_top = components;
    return report;
}

SurvivalReport pair_survival(const ModelParams& params, std::int64_t spacing,
                             std::int64_t height, long n_runs, int threads) {
    if (spacing < 0) throw std::invalid_argument("pair_survival: spacing >= 0");
    struct Counter {
        long survived = 0, n = 0;
        void merge(const Counter& o) {
            survived += o.survived;
            n += o.n;
        }
    };
    auto acc = parallel_accumulate<Counter>(
        n_runs, threads, 16, [&](Counter& c, long i) {
            ModelParams ps = params;
            ps.seed = replicate_seed(params.seed, static_cast<std::uint64_t>(i));
            Environment env(ps);
            LatticePoint u, v;
            u.d = v.d = params.d;
            u.c[0] = spacing;
            JointProcess proc(env, {u, v});
            bool alive = spacing != 0;
            while (alive && proc.min_level() < height) {
                proc.step();
                if (proc.fully_coalesced()) alive = false;
            }
            c.n += 1;
            if (alive) c.survived += 1;
        });
    SurvivalReport rep;
    rep.spacing = spacing;
    rep.height = height;
    rep.survived = acc.survived;
    rep.n = acc.n;
    rep.fraction = wilson_interval(acc.survived, acc.n, kZ99);
    return rep;
}

}  // namespace drainage
