#include "qtr/receiver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qtr/error.hpp"

namespace qtr {

double normalize_angle(double theta) noexcept {
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(theta, pi);  // [-pi/2, pi/2]
  if (r <= -pi / 2) r += pi;
  return r;
}

namespace {

std::complex<double> conjugate_mean(std::span<const std::complex<double>> alphas) {
  std::complex<double> sum{};
  for (const auto& a : alphas) sum += std::conj(a);
  return sum / static_cast<double>(alphas.size());
}

void require_two(std::span<const std::complex<double>> alphas, const char* who) {
  if (alphas.size() < 2) {
    throw ParameterError(std::string(who) + ": need at least two heterodyne outcomes");
  }
}

// Re(conj(alpha) e^{-i theta}) given the phasor e^{i theta}.
inline double projected(std::complex<double> alpha, std::complex<double> phase) noexcept {
  return alpha.real() * phase.real() - alpha.imag() * phase.imag();
}

}  // namespace

ScatterMatrix scatter_matrix(std::span<const std::complex<double>> alphas) {
  require_two(alphas, "scatter_matrix");
  const auto mean = conjugate_mean(alphas);
  ScatterMatrix s;
  for (const auto& a : alphas) {
    const auto z = std::conj(a) - mean;
    s.s_xx += z.real() * z.real();
    s.s_xy += z.real() * z.imag();
    s.s_yy += z.imag() * z.imag();
  }
  return s;
}

double homodyne_angle(std::span<const std::complex<double>> alphas) {
  require_two(alphas, "homodyne_angle");
  const auto mean = conjugate_mean(alphas);
  std::complex<double> resultant{};
  for (const auto& a : alphas) {
    const auto z = std::conj(a) - mean;
    resultant += z * z;
  }
  if (std::norm(resultant) < 1e-60) return 0.0;
  // atan2 lies in [-pi, pi]; only the -pi/2 endpoint needs folding.
  const double theta = 0.5 * std::arg(resultant);
  return theta <= -std::numbers::pi / 2 ? theta + std::numbers::pi : theta;
}

double ml_gain(const ProtocolParams& params) {
  return 2.0 * idler_displacement_gain(params);
}

DistanceAccumulator::DistanceAccumulator(int d, double gain)
    : gain_(gain), distances_(static_cast<std::size_t>(d), 0.0) {}

void DistanceAccumulator::add_pulse(std::span<const std::complex<double>> alphas, double theta,
                                    double homodyne) {
  add_pulse(alphas, std::polar(1.0, theta), homodyne);
}

void DistanceAccumulator::add_pulse(std::span<const std::complex<double>> alphas,
                                    std::complex<double> phase, double homodyne) {
  if (alphas.size() != distances_.size()) {
    throw ParameterError("DistanceAccumulator: pulse has " + std::to_string(alphas.size()) +
                         " outcomes, expected " + std::to_string(distances_.size()));
  }
  for (std::size_t k = 0; k < distances_.size(); ++k) {
    const double residual = homodyne - gain_ * projected(alphas[k], phase);
    distances_[k] += residual * residual;
  }
}

int DistanceAccumulator::argmin() const noexcept {
  std::size_t best = 0;
  for (std::size_t k = 1; k < distances_.size(); ++k) {
    if (distances_[k] < distances_[best]) best = k;
  }
  return static_cast<int>(best) + 1;
}

int ml_estimate(std::span<const std::complex<double>> heterodyne, std::span<const double> thetas,
                std::span<const double> homodyne, const ProtocolParams& params) {
  const auto d = static_cast<std::size_t>(params.d);
  const std::size_t m = thetas.size();
  if (d < 2 || homodyne.size() != m || heterodyne.size() != d * m || m == 0) {
    throw ParameterError("ml_estimate: inconsistent dimensions (d=" + std::to_string(d) +
                         ", thetas=" + std::to_string(m) + ", homodyne=" +
                         std::to_string(homodyne.size()) + ", heterodyne=" +
                         std::to_string(heterodyne.size()) + ")");
  }
  DistanceAccumulator acc(params.d, ml_gain(params));
  for (std::size_t l = 0; l < m; ++l) {
    acc.add_pulse(heterodyne.subspan(l * d, d), thetas[l], homodyne[l]);
  }
  return acc.argmin();
}

TrialStreams::TrialStreams(std::uint64_t master_seed, std::uint64_t trial, int d)
    : seed_(master_seed), trial_(trial), d_(d) {
  if (d < 2) throw ParameterError("TrialStreams: d must be at least 2");
}

RandomStream TrialStreams::mode_stream(int pulse, int mode) const {
  const auto lane = 1 + static_cast<std::uint64_t>(pulse) * (d_ + 1) + mode;
  return {seed_, trial_, static_cast<std::uint32_t>(lane)};
}

void TrialStreams::check_capacity(int m) const {
  const auto lanes = 1 + static_cast<std::uint64_t>(m) * (d_ + 1);
  if (lanes > std::numeric_limits<std::uint32_t>::max()) {
    throw ParameterError("TrialStreams: d * M too large for the substream lane space");
  }
}

namespace {

struct PulseResult {
  double theta;
  std::complex<double> phase;  // e^{i theta}
  double homodyne;
};

// Draws pulse `pulse` and leaves its d heterodyne outcomes in `alphas`.
PulseResult run_pulse(const ProtocolParams& params, int target,
                                    const TrialStreams& streams, int pulse,
                                    std::vector<RandomStream>& lane_buffer,
                                    std::span<std::complex<double>> alphas) {
  lane_buffer.clear();
  for (int k = 0; k < params.d; ++k) lane_buffer.push_back(streams.mode_stream(pulse, k));
  sample_heterodyne_round(params, target, lane_buffer, alphas);
  const double theta = homodyne_angle(alphas);
  const auto phase = std::polar(1.0, theta);
  auto homodyne_rng = streams.homodyne_stream(pulse);
  const double x = sample_protocol_homodyne(params, alphas[target - 1], phase, homodyne_rng);
  return {theta, phase, x};
}

void check_trial_inputs(const ProtocolParams& params, int target, const TrialStreams& streams) {
  params.validate();
  if (target < 1 || target > params.d) {
    throw ParameterError("run_trial: target index " + std::to_string(target) + " outside [1, " +
                         std::to_string(params.d) + "]");
  }
  streams.check_capacity(params.m_pulses);
}

}  // namespace

TrialRecord run_trial(const ProtocolParams& params, int target, const TrialStreams& streams) {
  check_trial_inputs(params, target, streams);
  const auto d = static_cast<std::size_t>(params.d);
  const auto m = static_cast<std::size_t>(params.m_pulses);

  TrialRecord record;
  record.d = params.d;
  record.m = params.m_pulses;
  record.true_index = target;
  record.heterodyne.resize(d * m);
  record.thetas.resize(m);
  record.homodyne.resize(m);

  std::vector<RandomStream> lanes;
  lanes.reserve(d);
  for (std::size_t l = 0; l < m; ++l) {
    auto alphas = std::span(record.heterodyne).subspan(l * d, d);
    const auto pulse = run_pulse(params, target, streams, static_cast<int>(l), lanes, alphas);
    record.thetas[l] = pulse.theta;
    record.homodyne[l] = pulse.homodyne;
  }
  record.estimate = ml_estimate(record.heterodyne, record.thetas, record.homodyne, params);
  return record;
}

int run_trial_streaming(const ProtocolParams& params, int target, const TrialStreams& streams) {
  check_trial_inputs(params, target, streams);
  std::vector<std::complex<double>> alphas(static_cast<std::size_t>(params.d));
  std::vector<RandomStream> lanes;
  lanes.reserve(alphas.size());
  DistanceAccumulator acc(params.d, ml_gain(params));
  for (int l = 0; l < params.m_pulses; ++l) {
    const auto pulse = run_pulse(params, target, streams, l, lanes, alphas);
    acc.add_pulse(alphas, pulse.phase, pulse.homodyne);
  }
  return acc.argmin();
}

}  // namespace qtr
