#pragma once

// Physical parameters and measurement-outcome distributions of the
// hetero-homodyne ranging protocol.
//
// Conventions: quadratures are x = a + a^dagger and p = -i(a - a^dagger),
// so the vacuum has unit variance and a thermal state with mean photon
// number N has variance 2N + 1. No hbar factors appear anywhere.
// CN(0, s) denotes a complex normal whose real and imaginary parts are
// independent N(0, s / 2).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qtr/random.hpp"

namespace qtr {

enum class SamplingMode {
  /// Exact Gaussian covariances of the returned modes and the idler.
  Exact,
  /// Leading-order model for kappa, N_S << 1 << N_B.
  Asymptotic,
};

struct ProtocolParams {
  double kappa = 0.01;  ///< target reflectivity, 0 <= kappa < 1
  double n_s = 0.1;     ///< mean signal photon number per pulse
  double n_b = 600.0;   ///< mean background photon number per mode
  int d = 2;            ///< number of candidate positions
  int m_pulses = 1;     ///< number of signal-idler pulses M
  SamplingMode mode = SamplingMode::Asymptotic;

  /// Throws ParameterError unless 0 <= kappa < 1, n_s > 0, n_b > 0,
  /// d >= 2 and m_pulses >= 1. kappa == 0 is the no-target limit.
  void validate() const;

  /// Set when the parameters leave the kappa, N_S << 1 << N_B regime in
  /// which the Asymptotic model is accurate. Informational only.
  bool regime_warning() const noexcept;
};

/// Real symmetric covariance matrix in (x1, p1, x2, p2, ...) ordering.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  double& operator()(std::size_t row, std::size_t col) {
    return entries_[row * dim_ + col];
  }

  bool is_symmetric(double tolerance = 0.0) const noexcept;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

/// Idler state after one heterodyne round: a thermal state of mean photon
/// number n_th displaced by mu.
struct ConditionalIdler {
  std::complex<double> mu;
  double n_th = 0.0;
};

/// Outcomes of one signal-idler pulse.
struct PulseOutcome {
  std::vector<std::complex<double>> heterodyne;
  double theta = 0.0;
  double homodyne = 0.0;
};

/// Two-mode squeezed vacuum with mean photon number n_s per mode:
/// diagonal blocks (2 n_s + 1) I, off-diagonal blocks 2 sqrt(n_s (n_s + 1)) Z.
CovarianceMatrix tmsv_covariance(double n_s);

/// Returned-mode / idler covariance when a classically correlated thermal
/// pair (signal n_s, idler n_i) probes a target of reflectivity kappa in a
/// background of n_b photons.
CovarianceMatrix cct_joint_covariance(double n_s, double n_i, double kappa,
                                      double n_b);

/// Variance s of the CN(0, s) heterodyne outcome of returned mode `mode`
/// (1-based) when the target sits at `target` (1-based).
double heterodyne_variance(const ProtocolParams& params, int target, int mode);

/// One heterodyne round over all d returned modes; `streams[k]` feeds mode k.
/// `target` is 1-based.
void sample_heterodyne_round(const ProtocolParams& params, int target,
                             std::span<RandomStream> streams,
                             std::span<std::complex<double>> out);

/// Convenience overload drawing all d outcomes sequentially from one stream.
std::vector<std::complex<double>> sample_heterodyne_round(
    const ProtocolParams& params, int target, RandomStream& rng);

/// Displacement coefficient c in mu = c * conj(alpha_t).
double idler_displacement_gain(const ProtocolParams& params);

ConditionalIdler conditional_idler(std::complex<double> alpha_target,
                                   const ProtocolParams& params);

/// Homodyne of x cos(theta) + p sin(theta) on a displaced thermal idler:
/// N(2 Re(mu e^{-i theta}), 2 n_th + 1).
double sample_homodyne(const ConditionalIdler& idler, double theta,
                       RandomStream& rng);

/// Same, with the angle given as the unit phasor e^{i theta}.
double sample_homodyne(const ConditionalIdler& idler, std::complex<double> phase,
                       RandomStream& rng);

/// Variance of the protocol's homodyne outcome: 2 n_th + 1 from the exact
/// conditional idler in Exact mode; 1 in Asymptotic mode, where the outcome
/// model takes 2 n_th + 1 -> 1 for N_S << 1.
double protocol_homodyne_variance(const ProtocolParams& params);

/// Homodyne outcome of one pulse under the sampling model of params.mode,
/// given the heterodyne outcome of the target mode.
double sample_protocol_homodyne(const ProtocolParams& params,
                                std::complex<double> alpha_target,
                                std::complex<double> phase, RandomStream& rng);

}  // namespace qtr
