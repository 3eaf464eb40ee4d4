#pragma once

#include <vector>

namespace qtr::special {

/// ln B(a, b) through log-gamma; a, b > 0.
double log_beta(double a, double b);

/// B(a, b) = exp(log_beta(a, b)).
double beta(double a, double b);

/// Standard normal CDF.
double normal_cdf(double x);

/// ln Phi(x), accurate deep into the lower tail.
double log_normal_cdf(double x);

/// ln(1 - exp(x)) for x < 0.
double log1mexp(double x);

/// Gauss-Hermite rule for the weight exp(-x^2): sum_i w_i f(x_i)
/// approximates the integral of exp(-x^2) f(x) over the real line.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int n);

}  // namespace qtr::special
