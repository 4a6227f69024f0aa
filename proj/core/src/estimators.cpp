#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "drainage/parallel.hpp"
#include "drainage/stats.hpp"

namespace drainage {

namespace {

struct IncrementMoments {
    MomentAccumulator x, y;
    void merge(const IncrementMoments& o) {
        x.merge(o.x);
        y.merge(o.y);
    }
};

LatticePoint origin(int d) {
    LatticePoint p;
    p.d = d;
    return p;
}

}  // namespace

ScalingEstimate estimate_scaling(const ModelParams& params, long n_samples,
                                 int threads) {
    if (n_samples < 1) throw std::invalid_argument("estimate_scaling: n >= 1");
    const LatticePoint start = origin(params.d);
    auto acc = parallel_accumulate<IncrementMoments>(
        n_samples, threads, 4096, [&](IncrementMoments& m, long i) {
            ModelParams ps = params;
            ps.seed = replicate_seed(params.seed, static_cast<std::uint64_t>(i));
            const SuccessorResult res = successor(Environment(ps), start);
            m.x.add(static_cast<double>(res.next.c[0]));
            m.y.add(static_cast<double>(res.level_jump));
        });
    return ScalingEstimate{acc.y.mean_estimate(), acc.x.sd_estimate()};
}

std::vector<double> rescaled_endpoint_sample(const ModelParams& params,
                                             const ScalingParams& scaling,
                                             long n_replicates, int threads) {
    const double T = static_cast<double>(scaling.n) * scaling.n * scaling.gamma;
    if (T < 10.0)
        throw std::invalid_argument("rescaled_endpoint_sample: n^2 gamma must be >= 10");
    const std::int64_t horizon = static_cast<std::int64_t>(std::ceil(T)) + 1;
    const LatticePoint start = origin(params.d);
    return parallel_map(n_replicates, threads, [&](long i) {
        ModelParams ps = params;
        ps.seed = replicate_seed(params.seed, static_cast<std::uint64_t>(i));
        Environment env(ps);
        const PathRecord path = trace(env, start, horizon);
        // S_{N(T)} plus the linear remainder on the straddling edge.
        const double value = path_at(path, T);
        return value / (static_cast<double>(scaling.n) * scaling.sigma);
    });
}

GridStart grid_start(const ModelParams& params, const ScalingParams& scaling,
                     double x1, double x2) {
    if (params.d != 2) throw std::invalid_argument("grid_start: d=2 only");
    Environment env(params);
    const auto col = static_cast<std::int64_t>(
        std::floor(static_cast<double>(scaling.n) * scaling.sigma * x1));
    const auto level = static_cast<std::int64_t>(std::floor(
        static_cast<double>(scaling.n) * scaling.n * scaling.gamma * x2));
    const std::int64_t guard = static_cast<std::int64_t>(params.max_search_height) *
                               params.max_search_height;
    for (std::int64_t i = 1; i <= guard; ++i) {
        const LatticePoint w{col + i, level};
        if (env.is_open(w)) return GridStart{w, i};
    }
    throw SearchExceeded("grid_start: no open vertex within guard");
}

namespace {

struct EtaCounts {
    long ge2 = 0, ge3 = 0, n = 0;
    void merge(const EtaCounts& o) {
        ge2 += o.ge2;
        ge3 += o.ge3;
        n += o.n;
    }
};

// Distinct walker positions at the first knot at or above level H, for
// walkers started on every lattice point of [0, width] x {0}. Coalesced
// paths share all later knots, so path suffixes are memoized by vertex.
int distinct_endpoints(const Environment& env, std::int64_t width, std::int64_t H) {
    std::unordered_map<LatticePoint, LatticePoint, PointHash> memo;
    std::vector<LatticePoint> chain, endpoints;
    for (std::int64_t x = 0; x <= width; ++x) {
        LatticePoint cur{x, 0};
        chain.clear();
        LatticePoint endpoint;
        while (true) {
            if (cur.level() >= H) {
                endpoint = cur;
                break;
            }
            auto it = memo.find(cur);
            if (it != memo.end()) {
                endpoint = it->second;
                break;
            }
            chain.push_back(cur);
            cur = successor(env, cur).next;
        }
        for (const auto& v : chain) memo.emplace(v, endpoint);
        bool seen = false;
        for (const auto& e : endpoints) seen = seen || e == endpoint;
        if (!seen) endpoints.push_back(endpoint);
    }
    return static_cast<int>(endpoints.size());
}

}  // namespace

EtaEstimate eta_window_estimate(const ModelParams& params, std::int64_t width,
                                std::int64_t H, long n_replicates, int threads) {
    if (params.d != 2) throw std::invalid_argument("eta_estimate: d=2 only");
    auto counts = parallel_accumulate<EtaCounts>(
        n_replicates, threads, 8, [&](EtaCounts& acc, long i) {
            ModelParams ps = params;
            ps.seed = replicate_seed(params.seed, static_cast<std::uint64_t>(i));
            const int k = distinct_endpoints(Environment(ps), width, H);
            acc.n += 1;
            if (k >= 2) acc.ge2 += 1;
            if (k >= 3) acc.ge3 += 1;
        });
    EtaEstimate out;
    out.window_width = width;
    out.n = counts.n;
    out.ge2 = wilson_interval(counts.ge2, counts.n, kZ99);
    out.ge3 = wilson_interval(counts.ge3, counts.n, kZ99);
    return out;
}

EtaEstimate eta_estimate(const ModelParams& params, const ScalingParams& scaling,
                         double t, double epsilon, long n_replicates, int threads) {
    const std::int64_t width = static_cast<std::int64_t>(std::ceil(
                                   static_cast<double>(scaling.n) * scaling.sigma *
                                   epsilon)) +
                               3;
    const std::int64_t H = static_cast<std::int64_t>(std::ceil(
        static_cast<double>(scaling.n) * scaling.n * scaling.gamma * t));
    EtaEstimate out = eta_window_estimate(params, width, H, n_replicates, threads);
    out.t = t;
    out.epsilon = epsilon;
    return out;
}

std::vector<DriftBin> martingale_drift(const ModelParams& params,
                                       const std::vector<std::int64_t>& start_gaps,
                                       long n_transitions, int threads) {
    if (params.d != 2) throw std::invalid_argument("martingale_drift: d=2 only");
    if (start_gaps.empty()) throw std::invalid_argument("martingale_drift: no gaps");
    constexpr long kRenewalsPerRun = 32;
    constexpr long kPostMerge = 2;

    struct Transition {
        std::int64_t gap;
        double delta;
    };
    // Z_l sequence of one pair run, including a couple of post-merge
    // renewals so the absorbing bin is populated.
    auto run_one = [&](long run) {
        ModelParams ps = params;
        ps.seed = replicate_seed(params.seed, static_cast<std::uint64_t>(run));
        Environment env(ps);
        const std::int64_t gap0 = start_gaps[static_cast<std::size_t>(run) % start_gaps.size()];
        std::vector<std::int64_t> zs{gap0};
        long merged_seen = 0;
        run_joint(env, {LatticePoint{gap0, 0}, LatticePoint{0, 0}},
                  [&](const RegenRecord& rec) {
                      const std::int64_t z = rec.pair_gap()[0];
                      zs.push_back(z);
                      if (z == 0) ++merged_seen;
                      return rec.l < kRenewalsPerRun && merged_seen <= kPostMerge;
                  });
        std::vector<Transition> out;
        out.reserve(zs.size());
        for (std::size_t i = 0; i + 1 < zs.size(); ++i)
            out.push_back(Transition{zs[i], static_cast<double>(zs[i + 1] - zs[i])});
        return out;
    };

    std::unordered_map<std::int64_t, std::pair<MomentAccumulator, MomentAccumulator>> bins;
    long collected = 0;
    long next_run = 0;
    const long batch = std::max(threads, 1) * 16L;
    while (collected < n_transitions) {
        auto results = parallel_map(batch, threads,
                                    [&](long b) { return run_one(next_run + b); });
        next_run += batch;
        for (const auto& transitions : results) {
            for (const auto& tr : transitions) {
                auto& [inc, sq] = bins[tr.gap];
                inc.add(tr.delta);
                sq.add(tr.delta * tr.delta);
                ++collected;
            }
        }
    }
    std::vector<DriftBin> out;
    out.reserve(bins.size());
    for (const auto& [gap, accs] : bins)
        out.push_back(DriftBin{gap, accs.first.mean_estimate(), accs.second.mean()});
    std::sort(out.begin(), out.end(),
              [](const DriftBin& a, const DriftBin& b) { return a.gap < b.gap; });
    return out;
}

double lyapunov_f(double g1, double g2) {
    return std::sqrt(std::log1p(g1 * g1 + g2 * g2));
}

LyapunovDrift lyapunov_drift(const ModelParams& params, std::int64_t gap1,
                             std::int64_t gap2, long n_replicates, int threads) {
    if (params.d != 3) throw std::invalid_argument("lyapunov_drift: d=3 only");
    const double g1 = static_cast<double>(gap1);
    const double g2 = static_cast<double>(gap2);
    const double x2 = g1 * g1 + g2 * g2;
    const double fx = lyapunov_f(g1, g2);
    // grad f(x) = x / ((1+|x|^2) sqrt(ln(1+|x|^2)))
    const double grad_scale = x2 > 0.0 ? 1.0 / ((1.0 + x2) * std::sqrt(std::log1p(x2))) : 0.0;
    struct Acc {
        MomentAccumulator plain, controlled;
        void merge(const Acc& o) {
            plain.merge(o.plain);
            controlled.merge(o.controlled);
        }
    };
    auto acc = parallel_accumulate<Acc>(
        n_replicates, threads, 256, [&](Acc& m, long i) {
            ModelParams ps = params;
            ps.seed = replicate_seed(params.seed, static_cast<std::uint64_t>(i));
            Environment env(ps);
            JointProcess proc(env, {LatticePoint{gap1, gap2, 0}, LatticePoint{0, 0, 0}});
            while (!proc.at_renewal()) proc.step();
            const SpatialVec z = spatial_gap(proc.positions()[0], proc.positions()[1]);
            const double dz1 = static_cast<double>(z[0]) - g1;
            const double dz2 = static_cast<double>(z[1]) - g2;
            const double delta =
                lyapunov_f(static_cast<double>(z[0]), static_cast<double>(z[1])) - fx;
            m.plain.add(delta);
            m.controlled.add(delta - grad_scale * (g1 * dz1 + g2 * dz2));
        });
    return LyapunovDrift{acc.plain.mean_estimate(), acc.controlled.mean_estimate()};
}

AlphaEstimate alpha_estimate(const ModelParams& params, std::int64_t gap1,
                             std::int64_t gap2, long n_replicates, int threads) {
    if (params.d != 3) throw std::invalid_argument("alpha_estimate: d=3 only");
    const double x2 = static_cast<double>(gap1 * gap1 + gap2 * gap2);
    struct Moments {
        MomentAccumulator m1, m2, m3, margin;
        void merge(const Moments& o) {
            m1.merge(o.m1);
            m2.merge(o.m2);
            m3.merge(o.m3);
            margin.merge(o.margin);
        }
    };
    const LatticePoint u{gap1, gap2, 0};
    const LatticePoint v{0, 0, 0};
    auto acc = parallel_accumulate<Moments>(
        n_replicates, threads, 256, [&](Moments& m, long i) {
            ModelParams ps = params;
            ps.seed = replicate_seed(params.seed, 2 * static_cast<std::uint64_t>(i));
            const std::uint64_t seed_v =
                replicate_seed(params.seed, 2 * static_cast<std::uint64_t>(i) + 1);
            const IndependentPairRecord rec = independent_pair(ps, seed_v, u, v, 1);
            const double d1 = static_cast<double>(gap1 + rec.psi_u[0][0] - rec.psi_v[0][0]);
            const double d2 = static_cast<double>(gap2 + rec.psi_u[0][1] - rec.psi_v[0][1]);
            const double delta = d1 * d1 + d2 * d2 - x2;
            m.m1.add(delta);
            m.m2.add(delta * delta);
            m.m3.add(delta * delta * delta);
            m.margin.add(delta * delta - 2.0 * x2 * delta);
        });
    AlphaEstimate out;
    out.alpha = acc.m1.mean_estimate();
    out.second_moment = acc.m2.mean_estimate();
    out.second_moment_margin = acc.margin.mean_estimate();
    out.third_moment = acc.m3.mean_estimate();
    out.third_ratio = std::fabs(out.third_moment.value) / x2;
    return out;
}

NuRegression nu_regression(const ModelParams& params,
                           const std::vector<std::pair<std::int64_t, std::int64_t>>& gaps,
                           long n_each, std::int64_t t_cap, int threads) {
    if (params.d != 2) throw std::invalid_argument("nu_regression: d=2 only");
    NuRegression out;
    std::uint64_t stream = 0;
    for (const auto& [g1, g2] : gaps) {
        struct TripleMoments {
            MomentAccumulator nu, nsteps, t1;
            long censored = 0;
            void merge(const TripleMoments& o) {
                nu.merge(o.nu);
                nsteps.merge(o.nsteps);
                t1.merge(o.t1);
                censored += o.censored;
            }
        };
        const std::uint64_t salt = stream++ << 40;
        auto acc = parallel_accumulate<TripleMoments>(
            n_each, threads, 64, [&](TripleMoments& m, long i) {
                ModelParams ps = params;
                ps.seed = replicate_seed(params.seed, salt + static_cast<std::uint64_t>(i));
                const TripleResult res =
                    triple_collision(ps, 0, g1, g1 + g2, t_cap);
                if (res.record.hit_cap) {
                    ++m.censored;
                    // Censored runs enter as lower bounds at the cap level.
                    m.nu.add(static_cast<double>(res.record.T_at_coalescence));
                    m.nsteps.add(static_cast<double>(res.record.n_steps));
                } else {
                    m.nu.add(static_cast<double>(res.nu));
                    m.nsteps.add(static_cast<double>(res.record.n_steps));
                }
                m.t1.add(static_cast<double>(res.T1));
            });
        TripleGridPoint pt;
        pt.gap1 = g1;
        pt.gap2 = g2;
        pt.product = static_cast<double>(g1 * g2);
        pt.mean_nu = acc.nu.mean_estimate();
        pt.mean_nsteps = acc.nsteps.mean_estimate();
        pt.mean_T1 = acc.t1.mean_estimate();
        pt.censored = acc.censored;
        pt.n = n_each;
        out.grid.push_back(pt);
    }
    std::vector<double> xs, nu_y, ns_y;
    for (const auto& pt : out.grid) {
        xs.push_back(pt.product);
        nu_y.push_back(pt.mean_nu.value);
        ns_y.push_back(pt.mean_nsteps.value);
    }
    if (xs.size() >= 2) {
        out.nu_line = fit_line_ols(xs, nu_y);
        out.nsteps_line = fit_line_ols(xs, ns_y);
    }
    if (xs.size() >= 3) {
        out.nu_quad = fit_quadratic_ols(xs, nu_y);
        out.nsteps_quad = fit_quadratic_ols(xs, ns_y);
    }
    return out;
}

}  // namespace drainage
