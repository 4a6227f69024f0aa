#pragma once

#include <vector>

namespace drainage::analytic {

/// P{Y1 > m} = (1-p)^((m+1)^2-1): the first level jump exceeds m exactly
/// when all (m+1)^2-1 vertices of the height-m light cone are closed (d=2).
double y_tail(double p, int m);

/// P{Y1 = k} = y_tail(p, k-1) - y_tail(p, k).
double y_pmf(double p, int k);

/// gamma = E[Y1] as the tail series, truncated once terms drop below
/// 1e-15 (the super-geometric exponent makes the remainder smaller than
/// the last kept term).
double gamma_exact(double p);

/// sigma^2 = Var(X1) = E[Y1(Y1+1)]/3, using Var(X1 | Y1=k) = k(k+1)/3
/// for the uniform law on {-k,...,k} and E[X1] = 0.
double sigma2_exact(double p);

/// Conditional law of X1 given Y1=k: the uniform vector over the 2k+1
/// slab offsets. Exchangeability of the slab sites makes the argmin
/// uniform; the enumeration oracle in the test suite is the authority
/// this closed form is checked against.
std::vector<double> x_given_y(double p, int k);

}  // namespace drainage::analytic
