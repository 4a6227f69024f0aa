#include "drainage/statutil.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drainage {

Proportion wilson_interval(long successes, long n, double z) {
    if (n <= 0) throw std::invalid_argument("wilson_interval: n >= 1");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return Proportion{p, center - half, center + half, successes, n};
}

double MomentAccumulator::variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sum2 - static_cast<double>(n) * m * m) /
                             static_cast<double>(n - 1));
}

double MomentAccumulator::central_moment4() const {
    const double m = mean();
    const double nn = static_cast<double>(n);
    // E[(x-m)^4] expanded in raw moments.
    return (sum4 - 4.0 * m * sum3 + 6.0 * m * m * sum2 - 3.0 * nn * m * m * m * m) / nn;
}

Estimate MomentAccumulator::mean_estimate() const {
    return Estimate{mean(), std::sqrt(variance() / static_cast<double>(n)), n};
}

Estimate MomentAccumulator::sd_estimate() const {
    const double v = variance();
    const double m4 = central_moment4();
    // Delta method: Var(s) ~ (m4 - v^2) / (4 v n).
    const double var_s =
        v > 0.0 ? std::max(0.0, m4 - v * v) / (4.0 * v * static_cast<double>(n)) : 0.0;
    return Estimate{std::sqrt(v), std::sqrt(var_s), n};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    // Lentz continued fraction for Q(a,x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_pvalue(double stat, int df) {
    if (df < 1) throw std::invalid_argument("chi_square_pvalue: df >= 1");
    return gamma_q(static_cast<double>(df) / 2.0, stat / 2.0);
}

ChiSquareResult chi_square_gof(std::span<const long> counts,
                               std::span<const double> probs) {
    if (counts.size() != probs.size() || counts.empty())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    long total = 0;
    for (long c : counts) total += c;
    const double n = static_cast<double>(total);

    // Pool adjacent cells until each expected count reaches 5.
    std::vector<double> obs, exp;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        o_acc += static_cast<double>(counts[i]);
        e_acc += probs[i] * n;
        if (e_acc >= 5.0) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0) {
        if (exp.empty()) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
        } else {
            obs.back() += o_acc;
            exp.back() += e_acc;
        }
    }
    if (obs.size() < 2) return ChiSquareResult{0.0, 0, 1.0};
    double stat = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double d = obs[i] - exp[i];
        stat += d * d / exp[i];
    }
    const int df = static_cast<int>(obs.size()) - 1;
    return ChiSquareResult{stat, df, chi_square_pvalue(stat, df)};
}

double ks_statistic(std::vector<double> sample, double (*cdf)(double)) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

namespace {
double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

double ks_statistic_uniform(std::vector<double> sample) {
    return ks_statistic(std::move(sample), &uniform_cdf);
}

double ks_critical(double alpha, long n) {
    return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w) {
    if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
        throw std::invalid_argument("fit_line_weighted: need >= 2 points");
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
        swxx += w[i] * x[i] * x[i];
        swxy += w[i] * x[i] * y[i];
    }
    const double det = sw * swxx - swx * swx;
    LineFit fit;
    fit.n = static_cast<long>(x.size());
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swy - fit.slope * swx) / sw;
    fit.se_slope = std::sqrt(sw / det);
    fit.se_intercept = std::sqrt(swxx / det);
    double ss_res = 0, ss_tot = 0;
    const double ybar = swy / sw;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.intercept + fit.slope * x[i];
        ss_res += w[i] * (y[i] - pred) * (y[i] - pred);
        ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

QuadFit fit_quadratic_weighted(std::span<const double> x, std::span<const double> y,
                               std::span<const double> w) {
    if (x.size() != y.size() || x.size() != w.size() || x.size() < 3)
        throw std::invalid_argument("fit_quadratic_weighted: need >= 3 points");
    // Normal equations A beta = b with A = X^T W X (3x3, symmetric).
    double m[3][3] = {};
    double b[3] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r[3] = {1.0, x[i], x[i] * x[i]};
        for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 3; ++c) m[a][c] += w[i] * r[a] * r[c];
            b[a] += w[i] * r[a] * y[i];
        }
    }
    // Invert the 3x3 by adjugate.
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (det == 0.0) throw std::invalid_argument("fit_quadratic_weighted: singular design");
    double inv[3][3];
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;

    QuadFit fit;
    fit.a = inv[0][0] * b[0] + inv[0][1] * b[1] + inv[0][2] * b[2];
    fit.b = inv[1][0] * b[0] + inv[1][1] * b[1] + inv[1][2] * b[2];
    fit.c = inv[2][0] * b[0] + inv[2][1] * b[1] + inv[2][2] * b[2];
    fit.se_a = std::sqrt(inv[0][0]);
    fit.se_b = std::sqrt(inv[1][1]);
    fit.se_c = std::sqrt(inv[2][2]);
    double sw = 0, swy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        swy += w[i] * y[i];
    }
    const double ybar = swy / sw;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.a + fit.b * x[i] + fit.c * x[i] * x[i];
        ss_res += w[i] * (y[i] - pred) * (y[i] - pred);
        ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

LineFit fit_line_ols(std::span<const double> x, std::span<const double> y) {
    std::vector<double> w(x.size(), 1.0);
    LineFit fit = fit_line_weighted(x, y, w);
    if (x.size() > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            ssr += r * r;
        }
        const double scale = std::sqrt(ssr / static_cast<double>(x.size() - 2));
        fit.se_intercept *= scale;
        fit.se_slope *= scale;
    }
    return fit;
}

QuadFit fit_quadratic_ols(std::span<const double> x, std::span<const double> y) {
    std::vector<double> w(x.size(), 1.0);
    QuadFit fit = fit_quadratic_weighted(x, y, w);
    if (x.size() > 3) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - fit.a - fit.b * x[i] - fit.c * x[i] * x[i];
            ssr += r * r;
        }
        const double scale = std::sqrt(ssr / static_cast<double>(x.size() - 3));
        fit.se_a *= scale;
        fit.se_b *= scale;
        fit.se_c *= scale;
    }
    return fit;
}

TailFit fit_log_survival(std::span<const std::int64_t> samples) {
    if (samples.empty()) throw std::invalid_argument("fit_log_survival: empty");
    std::int64_t max_v = 1;
    for (auto v : samples) max_v = std::max(max_v, v);
    std::vector<long> tail_count(static_cast<std::size_t>(max_v) + 1, 0);
    for (auto v : samples) ++tail_count[static_cast<std::size_t>(std::max<std::int64_t>(v, 1))];
    // tail_count[m] (after suffix sum) = #{samples >= m}.
    for (std::size_t m = tail_count.size() - 1; m >= 1; --m) {
        tail_count[m - 1] += tail_count[m];
        if (m == 1) break;
    }
    const double n = static_cast<double>(samples.size());
    std::vector<double> xs, ys, ws;
    for (std::int64_t m = 1; m <= max_v; ++m) {
        const long c = tail_count[static_cast<std::size_t>(m)];
        if (c <= 0) break;
        xs.push_back(static_cast<double>(m));
        ys.push_back(std::log(static_cast<double>(c) / n));
        ws.push_back(static_cast<double>(c));
    }
    TailFit out;
    out.n = samples.size();
    out.support = static_cast<long>(xs.size());
    if (xs.size() >= 2) {
        const LineFit lf = fit_line_weighted(xs, ys, ws);
        out.rate = -lf.slope;
        out.se = lf.se_slope;
        out.r2 = lf.r2;
    }
    return out;
}

PowerFit fit_power_law(std::span<const double> t, std::span<const double> survival,
                       std::span<const double> weight) {
    std::vector<double> xs, ys, ws;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (survival[i] <= 0.0) continue;
        xs.push_back(std::log(t[i]));
        ys.push_back(std::log(survival[i]));
        ws.push_back(weight[i]);
    }
    PowerFit out;
    if (xs.size() >= 2) {
        const LineFit lf = fit_line_weighted(xs, ys, ws);
        out.exponent = lf.slope;
        out.se = lf.se_slope;
        out.r2 = lf.r2;
    }
    return out;
}

}  // namespace drainage
