#include "qtr/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "qtr/error.hpp"
#include "qtr/special.hpp"

namespace qtr {

namespace {

void check_physical(double kappa, double n_s, double n_b) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw ParameterError("kappa must be non-negative and finite");
  }
  if (!(n_s > 0.0) || !std::isfinite(n_s)) {
    throw ParameterError("n_s must be positive and finite");
  }
  if (!(n_b > 0.0) || !std::isfinite(n_b)) {
    throw ParameterError("n_b must be positive and finite");
  }
}

void check_d(double d) {
  if (!(d >= 2.0) || !std::isfinite(d)) {
    throw ParameterError("d must be at least 2");
  }
}

constexpr int kPrimaryNodes = 200;
constexpr int kCheckNodes = 400;
constexpr double kRuleTolerance = 1e-8;
constexpr double kTailThreshold = 1e-12;

const special::GaussHermiteRule& hermite_rule(int n) {
  static const special::GaussHermiteRule primary = special::gauss_hermite(kPrimaryNodes);
  static const special::GaussHermiteRule check = special::gauss_hermite(kCheckNodes);
  return n == kPrimaryNodes ? primary : check;
}

// ln(1 - Phi(x)^{d-1}). For large x, Phi(-x) = q underflows inside
// ln Phi(x), so expand 1 - (1 - q)^{d-1} = (d-1) q (1 - (d-2) q / 2 + O(q^2)).
double log_miss(double x, int d) {
  if (x > 5.0) {
    const double log_q = special::log_normal_cdf(-x);
    const double q = std::exp(log_q);
    if (q < 1e-8) return std::log(d - 1.0) + log_q + std::log1p(-0.5 * (d - 2) * q);
  }
  return special::log1mexp((d - 1) * special::log_normal_cdf(x));
}

// Integral of phi(u) (1 - Phi(u + z)^{d-1}) du, evaluated directly.
double error_linear(const special::GaussHermiteRule& rule, int d, double z) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = std::numbers::sqrt2 * rule.nodes[i];
    sum += rule.weights[i] * std::exp(log_miss(u + z, d));
  }
  return sum / std::sqrt(std::numbers::pi);
}

// Same integral in log space with u = s + c, c = -z / 2 (the integrand peak):
// phi(s + c) = phi(s) exp(-s c - c^2 / 2).
double error_log_shifted(const special::GaussHermiteRule& rule, int d, double z) {
  const double c = -0.5 * z;
  std::vector<double> terms;
  terms.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    if (rule.weights[i] <= 0.0) continue;
    const double s = std::numbers::sqrt2 * rule.nodes[i];
    terms.push_back(std::log(rule.weights[i]) - s * c + log_miss(s + c + z, d));
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - peak);
  return peak + std::log(acc) - 0.5 * c * c - 0.5 * std::log(std::numbers::pi);
}

double log_error_with_rule(const special::GaussHermiteRule& rule, int d, double z) {
  const double linear = error_linear(rule, d, z);
  if (linear >= kTailThreshold) return std::log(linear);
  return error_log_shifted(rule, d, z);
}

}  // namespace

double xi_ctr(double kappa, double n_s, double n_b) {
  check_physical(kappa, n_s, n_b);
  return kappa * n_s / (2.0 * n_b);
}

double xi_qtr(double kappa, double n_s, double n_b) {
  check_physical(kappa, n_s, n_b);
  return 2.0 * kappa * n_s / n_b;
}

double hh_advantage_factor(double d) {
  check_d(d);
  return 1.0 + 0.5 * special::beta(0.5 * d, 0.5);
}

double xi_hh(double d, double kappa, double n_s, double n_b) {
  return hh_advantage_factor(d) * xi_ctr(kappa, n_s, n_b);
}

double xi_hh_asymptotic(double d, double kappa, double n_s, double n_b) {
  check_d(d);
  return (1.0 + std::sqrt(std::numbers::pi / (2.0 * d))) * xi_ctr(kappa, n_s, n_b);
}

double xi_cct(double kappa, double n_s, double n_b, CctRegime regime) {
  check_physical(kappa, n_s, n_b);
  switch (regime) {
    case CctRegime::LargeIdler:
      return kappa * n_s / (2.0 * n_b);
    case CctRegime::EqualSmall:
      return 2.0 * kappa * n_s * n_s / n_b;
  }
  throw ParameterError("xi_cct: unknown regime");
}

double lambda_gap_mean(double d) {
  check_d(d);
  const double log_gap = -(d - 2.0) * std::numbers::ln2 + std::log(std::numbers::pi) +
                         std::lgamma(d) - std::lgamma(0.5 * (d - 1.0)) -
                         std::lgamma(0.5 * (d + 1.0));
  return std::exp(log_gap);
}

double wishart_lambda_max_mean_closed(double d) {
  return (d - 1.0) * hh_advantage_factor(d);
}

double qtr_error_log_bound(double d, double kappa, double n_s, double n_b, double m,
                           bool include_prefactor) {
  if (!(m >= 0.0)) throw ParameterError("qtr_error_log_bound: m must be non-negative");
  const double decay = -xi_hh(d, kappa, n_s, n_b) * m;
  return include_prefactor ? std::log(0.5 * (d - 1.0)) + decay : decay;
}

double ctr_separation(double kappa, double n_s, double n_b, double m) {
  check_physical(kappa, n_s, n_b);
  if (!(m >= 0.0)) throw ParameterError("ctr_separation: m must be non-negative");
  return 2.0 * std::sqrt(kappa * n_s * m / (2.0 * n_b + 1.0));
}

double ctr_exact_log_error_z(int d, double z) {
  if (d < 2) throw ParameterError("ctr_exact_log_error: d must be at least 2");
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw ParameterError("ctr_exact_log_error: separation must be finite and non-negative");
  }
  const double primary = log_error_with_rule(hermite_rule(kPrimaryNodes), d, z);
  const double check = log_error_with_rule(hermite_rule(kCheckNodes), d, z);
  // Relative discrepancy of the probabilities, computed from the logs.
  const double discrepancy = std::abs(std::expm1(primary - check));
  if (!std::isfinite(primary) || discrepancy > kRuleTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "ctr_exact_log_error: Gauss-Hermite rules disagree (d=" << d << ", z=" << z
        << ", ln P[200]=" << primary << ", ln P[400]=" << check
        << ", relative discrepancy=" << discrepancy << ")";
    throw NumericalError(msg.str());
  }
  return primary;
}

double ctr_exact_log_error(int d, double kappa, double n_s, double n_b, double m) {
  if (!(m >= 1.0)) throw ParameterError("ctr_exact_log_error: m must be at least 1");
  return ctr_exact_log_error_z(d, ctr_separation(kappa, n_s, n_b, m));
}

ExponentReport exponent_report(double d, double kappa, double n_s, double n_b) {
  ExponentReport r;
  r.xi_ctr = xi_ctr(kappa, n_s, n_b);
  r.xi_qtr = xi_qtr(kappa, n_s, n_b);
  r.xi_hh = xi_hh(d, kappa, n_s, n_b);
  r.xi_hh_large_d = xi_hh_asymptotic(d, kappa, n_s, n_b);
  r.ratio_hh_over_ctr = hh_advantage_factor(d);
  return r;
}

double LogConvention::apply(double natural_log) const noexcept {
  return base10 ? natural_log / std::numbers::ln10 : natural_log;
}

std::vector<RatioRow> ratio_curve(int d, double kappa, double n_s, double n_b,
                                  std::span<const double> m_grid, LogConvention convention) {
  if (m_grid.empty()) throw ParameterError("ratio_curve: empty m grid");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (!(m_grid[i] >= 1.0) || (i > 0 && !(m_grid[i] > m_grid[i - 1]))) {
      throw ParameterError("ratio_curve: m grid must be strictly increasing and >= 1");
    }
  }
  std::vector<RatioRow> rows;
  rows.reserve(m_grid.size());
  for (double m : m_grid) {
    RatioRow row;
    row.m = m;
    row.log_qtr_bound = convention.apply(
        qtr_error_log_bound(d, kappa, n_s, n_b, m, convention.include_prefactor));
    row.log_ctr_exact = convention.apply(ctr_exact_log_error(d, kappa, n_s, n_b, m));
    row.ratio = row.log_qtr_bound / row.log_ctr_exact;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qtr
