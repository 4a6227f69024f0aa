#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace drainage {

/// Point estimate with standard error and sample size.
struct Estimate {
    double value = 0.0;
    double se = 0.0;
    long n = 0;

    double ci_lo(double z) const { return value - z * se; }
    double ci_hi(double z) const { return value + z * se; }
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

/// Wilson score interval for a binomial proportion.
struct Proportion {
    double p_hat = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    long successes = 0;
    long n = 0;
};
Proportion wilson_interval(long successes, long n, double z);

/// Mean / variance / higher-moment accumulator with a deterministic
/// merge so threaded replicate fan-out reduces identically.
struct MomentAccumulator {
    double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;
    long n = 0;

    void add(double x) {
        sum += x;
        sum2 += x * x;
        sum3 += x * x * x;
        sum4 += x * x * x * x;
        ++n;
    }
    void merge(const MomentAccumulator& o) {
        sum += o.sum;
        sum2 += o.sum2;
        sum3 += o.sum3;
        sum4 += o.sum4;
        n += o.n;
    }
    double mean() const { return sum / static_cast<double>(n); }
    double variance() const;         // unbiased
    double central_moment4() const;  // biased plug-in
    Estimate mean_estimate() const;
    /// Standard deviation with its delta-method standard error.
    Estimate sd_estimate() const;
};

double normal_cdf(double x);

/// Upper regularized incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Upper-tail p-value of a chi-square statistic.
double chi_square_pvalue(double stat, int df);

/// Chi-square goodness-of-fit of integer-indexed counts against given
/// probabilities; cells with small expectation are pooled to >= 5.
struct ChiSquareResult {
    double stat = 0.0;
    int df = 0;
    double pvalue = 1.0;
};
ChiSquareResult chi_square_gof(std::span<const long> counts,
                               std::span<const double> probs);

/// One-sample Kolmogorov-Smirnov statistic against a cdf; the sample is
/// sorted internally.
double ks_statistic(std::vector<double> sample, double (*cdf)(double));
double ks_statistic_uniform(std::vector<double> sample);
/// Asymptotic critical value at significance alpha for sample size n.
double ks_critical(double alpha, long n);

/// Weighted least squares line y ~ a + b x.
struct LineFit {
    double intercept = 0.0, slope = 0.0;
    double se_intercept = 0.0, se_slope = 0.0;
    double r2 = 0.0;
    long n = 0;
};
LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w);

/// Ordinary least squares with residual-scaled parameter errors (the
/// textbook regression covariance).
LineFit fit_line_ols(std::span<const double> x, std::span<const double> y);

/// Weighted quadratic y ~ a + b x + c x^2 with parameter covariance
/// taken from the measurement weights (w = 1/se^2).
struct QuadFit {
    double a = 0.0, b = 0.0, c = 0.0;
    double se_a = 0.0, se_b = 0.0, se_c = 0.0;
    double r2 = 0.0;
};
QuadFit fit_quadratic_weighted(std::span<const double> x, std::span<const double> y,
                               std::span<const double> w);
QuadFit fit_quadratic_ols(std::span<const double> x, std::span<const double> y);

/// Exponential-tail fit: weighted LS on log-survival of positive integer
/// samples over the observed support, weights = tail sample counts.
struct TailFit {
    double rate = 0.0;  // decay rate per unit (slope is -rate)
    double se = 0.0;
    double r2 = 0.0;
    long n = 0;          // sample size
    long support = 0;    // number of fitted points
    long censored = 0;   // censored samples included as lower bounds
};
TailFit fit_log_survival(std::span<const std::int64_t> samples);

/// Power-law fit on log-log scale of survival estimates at given times.
struct PowerFit {
    double exponent = 0.0;
    double se = 0.0;
    double r2 = 0.0;
};
PowerFit fit_power_law(std::span<const double> t, std::span<const double> survival,
                       std::span<const double> weight);

}  // namespace drainage
