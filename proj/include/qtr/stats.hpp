#pragma once

#include <cstdint>

namespace qtr {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for `successes` out of `trials` (trials >= 1).
Interval wilson_interval(std::int64_t successes, std::int64_t trials,
                         double z = kZ95);

/// Running mean and sum of squared deviations; merge() is Chan's
/// pairwise update, so an ordered merge of batches is deterministic.
class RunningMoments {
 public:
  void add(double x) noexcept;
  void merge(const RunningMoments& other) noexcept;

  std::int64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  ///< unbiased sample variance
  double standard_error() const noexcept;

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace qtr
