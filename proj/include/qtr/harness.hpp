#pragma once

// Monte Carlo experiments over the hetero-homodyne protocol.
//
// Seeding: trial i of a run uses TrialStreams(master_seed, i, d), so every
// output is a function of (master_seed, params, trials) alone. Parallel
// workers only change which thread evaluates a trial, never its draws, and
// per-batch error counts are summed in batch order.

#include <cstdint>
#include <span>
#include <vector>

#include "qtr/model.hpp"

namespace qtr {

/// How the true target index is chosen per trial.
enum class IndexSchedule {
  Uniform,  ///< drawn uniformly from trial lane 0 (equal priors)
  Cycle,    ///< trial i uses index (i mod d) + 1
};

struct SimulationOptions {
  std::uint64_t master_seed = 1;
  int parallelism = 1;
  IndexSchedule schedule = IndexSchedule::Uniform;
};

struct ErrorEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;   ///< Wilson 95%
  double ci_high = 1.0;  ///< Wilson 95%
  std::int64_t errors = 0;
  std::int64_t trials = 0;
};

ErrorEstimate estimate_error_probability(const ProtocolParams& params,
                                         std::int64_t trials,
                                         const SimulationOptions& options);

struct SweepPoint {
  int m = 0;
  ErrorEstimate estimate;
  double log_bound_qtr = 0.0;  ///< natural log, prefactor included
  double log_ctr_exact = 0.0;  ///< natural log
};

/// One Monte Carlo estimate per m (params.m_pulses is overridden), paired
/// with the analytic QTR bound and exact CTR error. Point j runs with master
/// seed mix_seed(options.master_seed, m_j) so points are independent.
std::vector<SweepPoint> sweep_qtr_vs_ctr(const ProtocolParams& params,
                                         std::span<const int> m_grid,
                                         std::int64_t trials_per_point,
                                         const SimulationOptions& options);

/// Points with fewer errors than this are left out of exponent fits.
inline constexpr std::int64_t kMinFitErrors = 20;

struct ExponentFit {
  double exponent = 0.0;        ///< -slope of ln p_hat against m
  double standard_error = 0.0;  ///< of the slope
  double intercept = 0.0;
  int points_used = 0;

  /// One-sided test exponent > threshold at the given normal quantile
  /// (2.326 for 99%).
  bool exceeds(double threshold, double z_one_sided = 2.326347874040841) const noexcept;
};

/// Weighted least squares of ln p_hat on m with weights 1/sigma^2, where
/// sigma is the Wilson half-width in log space divided by 1.96. Throws
/// StatisticalFloorError when fewer than 3 points have >= 20 errors.
ExponentFit exponent_fit(std::span<const SweepPoint> sweep);

}  // namespace qtr
