#include <cmath>
#include <vector>

#include "doctest.h"
#include "drainage/analytic.hpp"
#include "drainage/dynamics.hpp"
#include "drainage/statutil.hpp"
#include "support/oracles.hpp"

using namespace drainage;
namespace an = drainage::analytic;

TEST_CASE("y_tail basics") {
    CHECK(an::y_tail(0.5, 0) == 1.0);                    // Y1 >= 1 always
    CHECK(an::y_tail(0.5, 1) == doctest::Approx(0.125)); // (1/2)^3
    CHECK(an::y_tail(0.3, 2) == doctest::Approx(std::pow(0.7, 8)));
    for (int m = 0; m < 6; ++m) CHECK(an::y_tail(0.4, m) > an::y_tail(0.4, m + 1));
}

TEST_CASE("gamma series: limit and frozen oracle values") {
    CHECK(an::gamma_exact(1.0 - 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    // series values computed independently to 20 digits before the build
    CHECK(an::gamma_exact(0.25) == doctest::Approx(1.5363981660437473).epsilon(1e-12));
    CHECK(an::gamma_exact(0.5) == doctest::Approx(1.1289368272118772).epsilon(1e-12));
    CHECK(an::gamma_exact(0.75) == doctest::Approx(1.0156402597203886).epsilon(1e-12));
}

TEST_CASE("sigma2 series: limit and frozen oracle values") {
    CHECK(an::sigma2_exact(1.0 - 1e-12) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(an::sigma2_exact(0.25) == doctest::Approx(1.4685473145700729).epsilon(1e-12));
    CHECK(an::sigma2_exact(0.5) == doctest::Approx(0.8412274123402478).epsilon(1e-12));
    CHECK(an::sigma2_exact(0.75) == doctest::Approx(0.6875305200616637).epsilon(1e-12));
}

TEST_CASE("x_given_y equals the pattern-enumeration oracle") {
    for (double p : {0.3, 0.5, 0.7}) {
        for (int k = 1; k <= 4; ++k) {
            const auto closed_form = an::x_given_y(p, k);
            const auto enumerated = oracles::x_given_y_enumerated(p, k);
            REQUIRE(closed_form.size() == enumerated.size());
            for (std::size_t j = 0; j < closed_form.size(); ++j)
                CHECK(std::fabs(closed_form[j] - enumerated[j]) < 1e-12);
            // palindromic by exchangeability
            for (std::size_t j = 0; j < closed_form.size(); ++j)
                CHECK(closed_form[j] ==
                      closed_form[closed_form.size() - 1 - j]);
        }
    }
    CHECK(an::x_given_y(0.5, 1)[0] == doctest::Approx(1.0 / 3.0));
    CHECK(an::x_given_y(0.5, 2)[0] == doctest::Approx(0.2));
}

TEST_CASE("simulated joint (X1, Y1) histogram matches the product law") {
    const double p = 0.5;
    const long n = 200000;
    // cells: (k, offset) for k <= 3, plus a pooled remainder row per k
    std::vector<long> counts;
    std::vector<double> probs;
    std::vector<std::pair<int, int>> index;  // (k, offset index)
    for (int k = 1; k <= 3; ++k)
        for (int j = 0; j < 2 * k + 1; ++j) {
            index.emplace_back(k, j);
            probs.push_back(an::y_pmf(p, k) / static_cast<double>(2 * k + 1));
        }
    counts.assign(index.size() + 1, 0);
    probs.push_back(an::y_tail(p, 3));  // Y > 3 pooled
    for (long i = 0; i < n; ++i) {
        Environment env(ModelParams{2, p, replicate_seed(31337, static_cast<std::uint64_t>(i)), 64});
        const auto res = successor(env, LatticePoint{0, 0});
        const std::int64_t k = res.level_jump;
        if (k > 3) {
            ++counts.back();
            continue;
        }
        const std::int64_t j = res.next.c[0] + k;
        for (std::size_t c = 0; c < index.size(); ++c)
            if (index[c].first == k && index[c].second == j) ++counts[c];
    }
    const auto res = chi_square_gof(counts, probs);
    CHECK(res.pvalue > 0.01);
}

TEST_CASE("gamma and sigma agree with simulation at moderate N") {
    const double p = 0.5;
    const long n = 200000;
    MomentAccumulator xs, ys;
    for (long i = 0; i < n; ++i) {
        Environment env(ModelParams{2, p, replicate_seed(2718, static_cast<std::uint64_t>(i)), 64});
        const auto res = successor(env, LatticePoint{0, 0});
        xs.add(static_cast<double>(res.next.c[0]));
        ys.add(static_cast<double>(res.level_jump));
    }
    const Estimate g = ys.mean_estimate();
    CHECK(std::fabs(g.value - an::gamma_exact(p)) < 3 * g.se);
    const Estimate s = xs.sd_estimate();
    CHECK(std::fabs(s.value - std::sqrt(an::sigma2_exact(p))) < 3 * s.se);
}

TEST_CASE("analytic argument validation") {
    CHECK_THROWS_AS((void)an::y_tail(0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)an::y_tail(0.5, -1), std::invalid_argument);
    CHECK_THROWS_AS((void)an::x_given_y(0.5, 0), std::invalid_argument);
}
