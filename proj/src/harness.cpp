#include "qtr/harness.hpp"

#include <cmath>
#include <string>

#include "qtr/analytics.hpp"
#include "qtr/error.hpp"
#include "qtr/parallel.hpp"
#include "qtr/receiver.hpp"
#include "qtr/stats.hpp"

namespace qtr {

namespace {

constexpr std::int64_t kTrialsPerBatch = 512;

int target_for_trial(const ProtocolParams& params, const TrialStreams& streams,
                     std::int64_t trial, IndexSchedule schedule) {
  if (schedule == IndexSchedule::Cycle) {
    return static_cast<int>(trial % params.d) + 1;
  }
  auto rng = streams.trial_stream();
  return static_cast<int>(rng.below(static_cast<std::uint32_t>(params.d))) + 1;
}

}  // namespace

ErrorEstimate estimate_error_probability(const ProtocolParams& params, std::int64_t trials,
                                         const SimulationOptions& options) {
  params.validate();
  if (trials < 1) throw ParameterError("estimate_error_probability: trials must be positive");
  TrialStreams(options.master_seed, 0, params.d).check_capacity(params.m_pulses);

  const std::int64_t batches = (trials + kTrialsPerBatch - 1) / kTrialsPerBatch;
  std::vector<std::int64_t> errors(static_cast<std::size_t>(batches), 0);
  parallel_for_index(batches, options.parallelism, [&](std::int64_t b) {
    const std::int64_t first = b * kTrialsPerBatch;
    const std::int64_t last = std::min(trials, first + kTrialsPerBatch);
    std::int64_t count = 0;
    for (std::int64_t i = first; i < last; ++i) {
      const TrialStreams streams(options.master_seed, static_cast<std::uint64_t>(i), params.d);
      const int target = target_for_trial(params, streams, i, options.schedule);
      if (run_trial_streaming(params, target, streams) != target) ++count;
    }
    errors[static_cast<std::size_t>(b)] = count;
  });

  ErrorEstimate estimate;
  for (auto e : errors) estimate.errors += e;
  estimate.trials = trials;
  estimate.p_hat = static_cast<double>(estimate.errors) / static_cast<double>(trials);
  const Interval ci = wilson_interval(estimate.errors, trials);
  estimate.ci_low = ci.low;
  estimate.ci_high = ci.high;
  return estimate;
}

std::vector<SweepPoint> sweep_qtr_vs_ctr(const ProtocolParams& params,
                                         std::span<const int> m_grid,
                                         std::int64_t trials_per_point,
                                         const SimulationOptions& options) {
  if (m_grid.empty()) throw ParameterError("sweep_qtr_vs_ctr: empty m grid");
  for (int m : m_grid) {
    if (m < 1) throw ParameterError("sweep_qtr_vs_ctr: every m must be at least 1");
  }
  std::vector<SweepPoint> sweep;
  sweep.reserve(m_grid.size());
  for (int m : m_grid) {
    ProtocolParams point_params = params;
    point_params.m_pulses = m;
    SimulationOptions point_options = options;
    point_options.master_seed = mix_seed(options.master_seed, static_cast<std::uint64_t>(m));

    SweepPoint point;
    point.m = m;
    point.estimate = estimate_error_probability(point_params, trials_per_point, point_options);
    point.log_bound_qtr = qtr_error_log_bound(params.d, params.kappa, params.n_s, params.n_b, m);
    point.log_ctr_exact = ctr_exact_log_error(params.d, params.kappa, params.n_s, params.n_b, m);
    sweep.push_back(point);
  }
  return sweep;
}

bool ExponentFit::exceeds(double threshold, double z_one_sided) const noexcept {
  return (exponent - threshold) > z_one_sided * standard_error;
}

ExponentFit exponent_fit(std::span<const SweepPoint> sweep) {
  double sw = 0.0, swx = 0.0, swy = 0.0;
  std::vector<double> xs, ys, ws;
  for (const auto& point : sweep) {
    const auto& e = point.estimate;
    if (e.errors < kMinFitErrors) continue;
    const double sigma = 0.5 * (std::log(e.ci_high) - std::log(e.ci_low)) / kZ95;
    const double w = 1.0 / (sigma * sigma);
    xs.push_back(point.m);
    ys.push_back(std::log(e.p_hat));
    ws.push_back(w);
    sw += w;
    swx += w * point.m;
    swy += w * ys.back();
  }
  if (xs.size() < 3) {
    throw StatisticalFloorError("exponent_fit: only " + std::to_string(xs.size()) +
                                " points have at least " + std::to_string(kMinFitErrors) +
                                " errors; need 3");
  }
  const double x_bar = swx / sw;
  const double y_bar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - x_bar) * (xs[i] - x_bar);
    sxy += ws[i] * (xs[i] - x_bar) * (ys[i] - y_bar);
  }
  if (!(sxx > 0.0)) throw StatisticalFloorError("exponent_fit: all points share one m");
  ExponentFit fit;
  const double slope = sxy / sxx;
  fit.exponent = -slope;
  fit.standard_error = std::sqrt(1.0 / sxx);
  fit.intercept = y_bar - slope * x_bar;
  fit.points_used = static_cast<int>(xs.size());
  return fit;
}

}  // namespace qtr
