#include "drainage/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace drainage::analytic {

namespace {
void check_p(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("analytic: p in (0,1)");
}
}  // namespace

double y_tail(double p, int m) {
    check_p(p);
    if (m < 0) throw std::invalid_argument("y_tail: m >= 0");
    const double exponent = static_cast<double>(m + 1) * (m + 1) - 1.0;
    return std::pow(1.0 - p, exponent);
}

double y_pmf(double p, int k) {
    if (k < 1) throw std::invalid_argument("y_pmf: k >= 1");
    return y_tail(p, k - 1) - y_tail(p, k);
}

double gamma_exact(double p) {
    check_p(p);
    double sum = 0.0;
    for (int m = 0;; ++m) {
        const double t = y_tail(p, m);
        sum += t;
        if (t < 1e-15) break;
    }
    return sum;
}

double sigma2_exact(double p) {
    check_p(p);
    double sum = 0.0;
    for (int k = 1;; ++k) {
        const double pk = y_pmf(p, k);
        sum += pk * static_cast<double>(k) * (k + 1) / 3.0;
        if (y_tail(p, k) < 1e-15) break;
    }
    return sum;
}

std::vector<double> x_given_y(double p, int k) {
    check_p(p);
    if (k < 1) throw std::invalid_argument("x_given_y: k >= 1");
    return std::vector<double>(static_cast<std::size_t>(2 * k + 1),
                               1.0 / static_cast<double>(2 * k + 1));
}

}  // namespace drainage::analytic
