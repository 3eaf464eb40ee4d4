#include "qtr/oracles.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qtr/error.hpp"
#include "qtr/parallel.hpp"
#include "qtr/random.hpp"
#include "qtr/stats.hpp"

namespace qtr {

namespace {

// Half-discriminant sqrt(((a - c) / 2)^2 + b^2), free of cancellation.
double half_gap(const ScatterMatrix& s) noexcept {
  return 0.5 * std::hypot(s.s_xx - s.s_yy, 2.0 * s.s_xy);
}

void check_run(const OracleRun& run) {
  if (run.batch_size < 1) throw ParameterError("oracle batch size must be positive");
}

std::int64_t batch_count(std::int64_t n, std::int64_t batch) { return (n + batch - 1) / batch; }

std::int64_t batch_length(std::int64_t n, std::int64_t batch, std::int64_t b) {
  return std::min(batch, n - b * batch);
}

// Error count of argmax over d statistics with spread sigma and target shift.
std::int64_t count_argmax_errors(int d, double shift, double sigma, std::int64_t trials,
                                 RandomStream& rng) {
  std::int64_t errors = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const int target = static_cast<int>(rng.below(static_cast<std::uint32_t>(d)));
    int best = -1;
    double best_value = 0.0;
    for (int k = 0; k < d; ++k) {
      const double value = (k == target ? shift : 0.0) + sigma * rng.normal();
      if (best < 0 || value > best_value) {
        best = k;
        best_value = value;
      }
    }
    if (best != target) ++errors;
  }
  return errors;
}

OracleResult argmax_error_mc(int d, double shift, double sigma, std::int64_t trials,
                             const OracleRun& run) {
  if (d < 2) throw ParameterError("ctr_error_mc: d must be at least 2");
  if (trials < 1000) throw ParameterError("ctr_error_mc: need at least 1000 trials");
  check_run(run);
  const std::int64_t batches = batch_count(trials, run.batch_size);
  std::vector<std::int64_t> errors(static_cast<std::size_t>(batches), 0);
  parallel_for_index(batches, run.parallelism, [&](std::int64_t b) {
    RandomStream rng(run.seed, static_cast<std::uint64_t>(b));
    errors[static_cast<std::size_t>(b)] =
        count_argmax_errors(d, shift, sigma, batch_length(trials, run.batch_size, b), rng);
  });
  std::int64_t total = 0;
  for (auto e : errors) total += e;
  const Interval ci = wilson_interval(total, trials);
  OracleResult result;
  result.estimate = static_cast<double>(total) / static_cast<double>(trials);
  result.standard_error = 0.5 * (ci.high - ci.low) / kZ95;
  result.n_samples = trials;
  return result;
}

}  // namespace

double lambda_max_2x2(const ScatterMatrix& s) noexcept {
  return 0.5 * (s.s_xx + s.s_yy) + half_gap(s);
}

double principal_angle_eig(const ScatterMatrix& s) noexcept {
  if (2.0 * half_gap(s) < 1e-30) return 0.0;
  const double lambda = lambda_max_2x2(s);
  // Both (s_xy, lambda - s_xx) and (lambda - s_yy, s_xy) solve the eigen
  // equation; the longer one is the better conditioned.
  const double ax = s.s_xy, ay = lambda - s.s_xx;
  const double bx = lambda - s.s_yy, by = s.s_xy;
  const bool use_a = std::hypot(ax, ay) > std::hypot(bx, by);
  double angle = use_a ? std::atan2(ay, ax) : std::atan2(by, bx);
  // Fold the eigenvector direction into (-pi/2, pi/2].
  if (angle > std::numbers::pi / 2) angle -= std::numbers::pi;
  if (angle <= -std::numbers::pi / 2) angle += std::numbers::pi;
  return angle;
}

OracleResult wishart_lambda_max_mean_mc(int d, std::int64_t n_samples, const OracleRun& run) {
  if (d < 2) throw ParameterError("wishart_lambda_max_mean_mc: d must be at least 2");
  if (n_samples < 1000) {
    throw ParameterError("wishart_lambda_max_mean_mc: need at least 1000 samples");
  }
  check_run(run);
  const std::int64_t batches = batch_count(n_samples, run.batch_size);
  std::vector<RunningMoments> partial(static_cast<std::size_t>(batches));
  parallel_for_index(batches, run.parallelism, [&](std::int64_t b) {
    RandomStream rng(run.seed, static_cast<std::uint64_t>(b));
    std::vector<double> xs(static_cast<std::size_t>(d)), ys(static_cast<std::size_t>(d));
    RunningMoments& moments = partial[static_cast<std::size_t>(b)];
    const std::int64_t count = batch_length(n_samples, run.batch_size, b);
    for (std::int64_t i = 0; i < count; ++i) {
      double mx = 0.0, my = 0.0;
      for (int k = 0; k < d; ++k) {
        xs[k] = rng.normal();
        ys[k] = rng.normal();
        mx += xs[k];
        my += ys[k];
      }
      mx /= d;
      my /= d;
      ScatterMatrix s;
      for (int k = 0; k < d; ++k) {
        const double dx = xs[k] - mx, dy = ys[k] - my;
        s.s_xx += dx * dx;
        s.s_xy += dx * dy;
        s.s_yy += dy * dy;
      }
      moments.add(lambda_max_2x2(s));
    }
  });
  RunningMoments total;
  for (const auto& p : partial) total.merge(p);
  return {total.mean(), total.standard_error(), total.count()};
}

OracleResult ctr_error_mc_z(int d, double z, std::int64_t trials, const OracleRun& run) {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw ParameterError("ctr_error_mc: separation must be finite and non-negative");
  }
  return argmax_error_mc(d, z, 1.0, trials, run);
}

OracleResult ctr_error_mc(int d, double kappa, double n_s, double n_b, double m,
                          std::int64_t trials, const OracleRun& run) {
  if (!(kappa >= 0.0) || !(n_s > 0.0) || !(n_b > 0.0) || !(m >= 1.0)) {
    throw ParameterError("ctr_error_mc: need kappa >= 0, n_s > 0, n_b > 0, m >= 1");
  }
  const double shift = 2.0 * m * std::sqrt(kappa * n_s);
  const double sigma = std::sqrt(m * (2.0 * n_b + 1.0));
  return argmax_error_mc(d, shift, sigma, trials, run);
}

}  // namespace qtr
