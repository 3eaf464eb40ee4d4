#pragma once

// Hetero-homodyne receiver: per pulse, heterodyne all d returned modes,
// pick the idler homodyne angle from the principal axis of the conjugated
// outcomes, homodyne the idler; after M pulses decide by maximum likelihood.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qtr/model.hpp"
#include "qtr/random.hpp"

namespace qtr {

/// Second moments of the centered conjugate outcomes z_k = conj(alpha_k) - mean.
struct ScatterMatrix {
  double s_xx = 0.0;
  double s_xy = 0.0;
  double s_yy = 0.0;
};

/// Canonical representative of an axis direction: theta mod pi in (-pi/2, pi/2].
double normalize_angle(double theta) noexcept;

ScatterMatrix scatter_matrix(std::span<const std::complex<double>> alphas);

/// theta = arg(sum_k z_k^2) / 2 in (-pi/2, pi/2]; 0 when the resultant
/// vanishes (|sum z_k^2| < 1e-30, i.e. isotropic or coincident points).
/// Throws ParameterError for fewer than two outcomes.
double homodyne_angle(std::span<const std::complex<double>> alphas);

/// g in mu_k = g Re(conj(alpha_k) e^{-i theta}): twice the idler
/// displacement gain of the sampling mode.
double ml_gain(const ProtocolParams& params);

/// Running squared distances sum_l (X_l - mu_{k,l})^2 for every candidate.
/// Lets a trial stream its pulses in O(d) memory.
class DistanceAccumulator {
 public:
  DistanceAccumulator(int d, double gain);

  void add_pulse(std::span<const std::complex<double>> alphas, double theta,
                 double homodyne);

  /// Same, with the angle given as the unit phasor e^{i theta}.
  void add_pulse(std::span<const std::complex<double>> alphas,
                 std::complex<double> phase, double homodyne);

  /// 1-based argmin; ties go to the lowest index.
  int argmin() const noexcept;

  std::span<const double> distances() const noexcept { return distances_; }

 private:
  double gain_;
  std::vector<double> distances_;
};

/// Everything observed and decided in one run of the protocol.
struct TrialRecord {
  int d = 0;
  int m = 0;
  /// Pulse-major: heterodyne[l * d + k] is alpha_{k+1, l+1}.
  std::vector<std::complex<double>> heterodyne;
  std::vector<double> thetas;
  std::vector<double> homodyne;
  int true_index = 0;
  int estimate = 0;

  std::complex<double> alpha(int mode, int pulse) const {
    return heterodyne[static_cast<std::size_t>(pulse) * d + mode];
  }
  std::span<const std::complex<double>> pulse_outcomes(int pulse) const {
    return std::span(heterodyne).subspan(static_cast<std::size_t>(pulse) * d, d);
  }
};

/// argmin_k || X - g Re(conj(alpha_k) o e^{-i theta}) ||^2 over k = 1..d.
/// `heterodyne` is pulse-major (M blocks of d outcomes).
int ml_estimate(std::span<const std::complex<double>> heterodyne,
                std::span<const double> thetas, std::span<const double> homodyne,
                const ProtocolParams& params);

/// Substream addressing for one trial. Lane 0 carries trial-level draws;
/// (pulse, mode) maps to lane 1 + pulse * (d + 1) + mode, where modes
/// 0..d-1 are the heterodyned returns and mode d is the idler homodyne.
class TrialStreams {
 public:
  TrialStreams(std::uint64_t master_seed, std::uint64_t trial, int d);

  RandomStream trial_stream() const noexcept { return {seed_, trial_, 0}; }
  RandomStream mode_stream(int pulse, int mode) const;
  RandomStream homodyne_stream(int pulse) const { return mode_stream(pulse, d_); }

  /// Throws ParameterError if m pulses do not fit the 32-bit lane space.
  void check_capacity(int m) const;

 private:
  std::uint64_t seed_;
  std::uint64_t trial_;
  int d_;
};

/// Full protocol run with the target at `target` (1-based); O(dM) record.
TrialRecord run_trial(const ProtocolParams& params, int target,
                      const TrialStreams& streams);

/// Same draws and decision as run_trial, keeping only O(d) state.
int run_trial_streaming(const ProtocolParams& params, int target,
                        const TrialStreams& streams);

}  // namespace qtr
