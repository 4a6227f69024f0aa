// C1-C5: exact-law and oracle-equivalence criteria.

#include <cmath>
#include <random>

#include "acceptance/harness.hpp"
#include "drainage/analytic.hpp"
#include "drainage/parallel.hpp"
#include "drainage/stats.hpp"
#include "support/oracles.hpp"

namespace acceptance {
namespace {

using namespace drainage;
namespace an = drainage::analytic;

// Tally of first increments: Y tails for m=0..4 plus per-(k, offset)
// counts for the conditional-law cells.
struct IncrementTally {
    long tail[5] = {};
    long cell[3][7] = {};  // k=1..3, offset index 0..2k
    long n = 0;
    void merge(const IncrementTally& o) {
        for (int m = 0; m < 5; ++m) tail[m] += o.tail[m];
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 7; ++j) cell[k][j] += o.cell[k][j];
        n += o.n;
    }
};

IncrementTally sample_increments(double p, std::uint64_t seed, long n, int threads) {
    return parallel_accumulate<IncrementTally>(
        n, threads, 8192, [&](IncrementTally& t, long i) {
            Environment env(
                ModelParams{2, p, replicate_seed(seed, static_cast<std::uint64_t>(i)), 64});
            const auto res = successor(env, LatticePoint{0, 0});
            ++t.n;
            for (int m = 0; m < 5; ++m)
                if (res.level_jump > m) ++t.tail[m];
            if (res.level_jump <= 3) {
                const auto k = static_cast<std::size_t>(res.level_jump);
                t.cell[k - 1][static_cast<std::size_t>(res.next.c[0] + res.level_jump)]++;
            }
        });
}

CriterionResult c01(const Config& cfg) {
    const long n = 1000000;
    double worst_z = 0.0;
    for (const double p : {0.25, 0.5, 0.75}) {
        const auto tally = sample_increments(p, 101, n, cfg.threads);
        for (int m = 0; m <= 4; ++m) {
            const double expected = an::y_tail(p, m);
            const double got = static_cast<double>(tally.tail[m]) / n;
            const double se =
                std::sqrt(std::max(expected * (1 - expected) / n, 1e-300));
            const double z = std::fabs(got - expected) / se;
            worst_z = std::max(worst_z, z);
            if (z >= 3.0 && std::fabs(got - expected) > 1e-12)
                return {false, format("p=", p, " m=", m, " z=", z)};
        }
    }
    return {true, format("max |z| = ", worst_z, " over 15 tail points, N=1e6 each p")};
}

CriterionResult c02(const Config& cfg) {
    // exact agreement of the closed form with the enumeration oracle
    double worst = 0.0;
    for (const double p : {0.3, 0.5, 0.7}) {
        for (int k = 1; k <= 4; ++k) {
            const auto closed_form = an::x_given_y(p, k);
            const auto enumerated = oracles::x_given_y_enumerated(p, k);
            for (std::size_t j = 0; j < closed_form.size(); ++j)
                worst = std::max(worst, std::fabs(closed_form[j] - enumerated[j]));
        }
    }
    if (worst >= 1e-12) return {false, format("max |closed-enum| = ", worst)};

    // simulated conditional histograms vs uniform at the 1% level
    const auto tally = sample_increments(0.5, 202, 1000000, cfg.threads);
    double min_p = 1.0;
    for (int k = 1; k <= 3; ++k) {
        std::vector<long> counts(static_cast<std::size_t>(2 * k + 1));
        std::vector<double> probs(counts.size(), 1.0 / static_cast<double>(2 * k + 1));
        for (int j = 0; j <= 2 * k; ++j)
            counts[static_cast<std::size_t>(j)] =
                tally.cell[k - 1][static_cast<std::size_t>(j)];
        const auto res = chi_square_gof(counts, probs);
        min_p = std::min(min_p, res.pvalue);
        if (res.pvalue <= 0.01)
            return {false, format("chi-square p=", res.pvalue, " at k=", k)};
    }
    return {true, format("oracle dev ", worst, "; min chi-square p = ", min_p)};
}

CriterionResult c03(const Config& cfg) {
    ModelParams params{2, 0.5, 303, 64};
    const auto est = estimate_scaling(params, 1000000, cfg.threads);
    const double zg =
        std::fabs(est.gamma_hat.value - an::gamma_exact(0.5)) / est.gamma_hat.se;
    const double zs = std::fabs(est.sigma_hat.value - std::sqrt(an::sigma2_exact(0.5))) /
                      est.sigma_hat.se;
    const bool pass = zg < 3.0 && zs < 3.0;
    return {pass, format("gamma z=", zg, ", sigma z=", zs, ", N=1e6")};
}

CriterionResult c04(const Config&) {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<std::int64_t> coord(-1000000, 1000000);
    std::uniform_real_distribution<double> pdist(0.15, 0.85);
    long checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const int d = 2 + (i % 2);
        ModelParams params{d, pdist(rng), rng(), 64};
        Environment env(params);
        LatticePoint u;
        u.d = d;
        for (int c = 0; c < d; ++c) u.c[c] = coord(rng);
        const auto expected = oracles::brute_force_successor(env, u, 64);
        if (!expected) return {false, format("oracle found no successor at case ", i)};
        const auto got = successor(env, u);
        if (!(got.next == expected->next) || got.level_jump != expected->level_jump)
            return {false, format("mismatch at case ", i)};
        ++checked;
    }
    return {true, format(checked, " random (seed,u,p) cases, zero mismatches")};
}

CriterionResult c05(const Config&) {
    std::int64_t edges = 0;
    for (const double p : {0.3, 0.5, 0.7}) {
        const auto rep = check_planarity(ModelParams{2, p, 505, 64}, 25, 50, 100);
        edges += rep.edges;
        if (rep.crossings != 0 || rep.shared_level_violations != 0)
            return {false, format("p=", p, " crossings=", rep.crossings,
                                  " shared-level violations=", rep.shared_level_violations)};
    }
    return {true, format("0 crossings across ", edges, " edges (300 boxes)")};
}

Register r01("C01", "exact-increment-tail", c01);
Register r02("C02", "conditional-law-oracle", c02);
Register r03("C03", "scaling-constants", c03);
Register r04("C04", "successor-oracle-equivalence", c04);
Register r05("C05", "planarity", c05);

}  // namespace
}  // namespace acceptance
