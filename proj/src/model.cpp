#include "qtr/model.hpp"

#include <cmath>
#include <string>

#include "qtr/error.hpp"

namespace qtr {

void ProtocolParams::validate() const {
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    throw ParameterError("kappa must lie in [0, 1), got " + std::to_string(kappa));
  }
  if (!(n_s > 0.0) || !std::isfinite(n_s)) {
    throw ParameterError("n_s must be positive, got " + std::to_string(n_s));
  }
  if (!(n_b > 0.0) || !std::isfinite(n_b)) {
    throw ParameterError("n_b must be positive, got " + std::to_string(n_b));
  }
  if (d < 2) {
    throw ParameterError("d must be at least 2, got " + std::to_string(d));
  }
  if (m_pulses < 1) {
    throw ParameterError("m_pulses must be at least 1, got " + std::to_string(m_pulses));
  }
}

bool ProtocolParams::regime_warning() const noexcept {
  return kappa > 0.1 || n_s > 0.5 || n_b < 10.0;
}

CovarianceMatrix::CovarianceMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {
  if (dim == 0 || dim % 2 != 0) {
    throw ParameterError("covariance dimension must be a positive even number");
  }
}

bool CovarianceMatrix::is_symmetric(double tolerance) const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tolerance) return false;
    }
  }
  return true;
}

namespace {

void require_non_negative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ParameterError(std::string(name) + " must be non-negative and finite");
  }
}

// Fills the 2x2 block at (row, col) with diag(a, sign * a) and its transpose.
void set_block(CovarianceMatrix& v, std::size_t row, std::size_t col, double a, double sign) {
  v(row, col) = a;
  v(row + 1, col + 1) = sign * a;
  if (row != col) {
    v(col, row) = a;
    v(col + 1, row + 1) = sign * a;
  }
}

}  // namespace

CovarianceMatrix tmsv_covariance(double n_s) {
  require_non_negative(n_s, "n_s");
  CovarianceMatrix v(4);
  set_block(v, 0, 0, 2.0 * n_s + 1.0, 1.0);
  set_block(v, 2, 2, 2.0 * n_s + 1.0, 1.0);
  set_block(v, 0, 2, 2.0 * std::sqrt(n_s * (n_s + 1.0)), -1.0);
  return v;
}

CovarianceMatrix cct_joint_covariance(double n_s, double n_i, double kappa, double n_b) {
  require_non_negative(n_s, "n_s");
  require_non_negative(n_i, "n_i");
  require_non_negative(kappa, "kappa");
  require_non_negative(n_b, "n_b");
  CovarianceMatrix v(4);
  set_block(v, 0, 0, 2.0 * n_b + 2.0 * kappa * n_s + 1.0, 1.0);
  set_block(v, 2, 2, 2.0 * n_i + 1.0, 1.0);
  set_block(v, 0, 2, 2.0 * std::sqrt(kappa * n_s * n_i), 1.0);
  return v;
}

double heterodyne_variance(const ProtocolParams& params, int target, int mode) {
  if (target < 1 || target > params.d || mode < 1 || mode > params.d) {
    throw ParameterError("heterodyne_variance: index out of range [1, d]");
  }
  if (params.mode == SamplingMode::Asymptotic) return params.n_b;
  // Quadrature variance of the returned mode plus one vacuum unit, halved.
  return mode == target ? params.n_b + params.kappa * params.n_s + 1.0 : params.n_b + 1.0;
}

void sample_heterodyne_round(const ProtocolParams& params, int target,
                             std::span<RandomStream> streams,
                             std::span<std::complex<double>> out) {
  const auto d = static_cast<std::size_t>(params.d);
  if (target < 1 || target > params.d) {
    throw ParameterError("sample_heterodyne_round: target index " + std::to_string(target) +
                         " outside [1, " + std::to_string(params.d) + "]");
  }
  if (streams.size() != d || out.size() != d) {
    throw ParameterError("sample_heterodyne_round: expected d streams and d outputs");
  }
  for (std::size_t k = 0; k < d; ++k) {
    out[k] = streams[k].complex_normal(heterodyne_variance(params, target, static_cast<int>(k) + 1));
  }
}

std::vector<std::complex<double>> sample_heterodyne_round(const ProtocolParams& params,
                                                          int target, RandomStream& rng) {
  if (target < 1 || target > params.d) {
    throw ParameterError("sample_heterodyne_round: target index " + std::to_string(target) +
                         " outside [1, " + std::to_string(params.d) + "]");
  }
  std::vector<std::complex<double>> out(static_cast<std::size_t>(params.d));
  for (int k = 1; k <= params.d; ++k) {
    out[k - 1] = rng.complex_normal(heterodyne_variance(params, target, k));
  }
  return out;
}

double idler_displacement_gain(const ProtocolParams& params) {
  const double kappa_ns = params.kappa * params.n_s;
  if (params.mode == SamplingMode::Asymptotic) {
    return std::sqrt(kappa_ns) / params.n_b;
  }
  return std::sqrt(kappa_ns * (params.n_s + 1.0)) / (params.n_b + kappa_ns + 1.0);
}

ConditionalIdler conditional_idler(std::complex<double> alpha_target,
                                   const ProtocolParams& params) {
  ConditionalIdler idler;
  idler.mu = idler_displacement_gain(params) * std::conj(alpha_target);
  if (params.mode == SamplingMode::Asymptotic) {
    idler.n_th = params.n_s;
  } else {
    idler.n_th = params.n_s * (params.n_b + 1.0 - params.kappa) /
                 (params.n_b + params.kappa * params.n_s + 1.0);
  }
  return idler;
}

double sample_homodyne(const ConditionalIdler& idler, double theta, RandomStream& rng) {
  return sample_homodyne(idler, std::polar(1.0, theta), rng);
}

double sample_homodyne(const ConditionalIdler& idler, std::complex<double> phase,
                       RandomStream& rng) {
  // 2 Re(mu e^{-i theta})
  const double mean = 2.0 * (idler.mu.real() * phase.real() + idler.mu.imag() * phase.imag());
  return mean + std::sqrt(2.0 * idler.n_th + 1.0) * rng.normal();
}

double protocol_homodyne_variance(const ProtocolParams& params) {
  if (params.mode == SamplingMode::Asymptotic) return 1.0;
  return 2.0 * conditional_idler({}, params).n_th + 1.0;
}

double sample_protocol_homodyne(const ProtocolParams& params, std::complex<double> alpha_target,
                                std::complex<double> phase, RandomStream& rng) {
  ConditionalIdler idler = conditional_idler(alpha_target, params);
  if (params.mode == SamplingMode::Asymptotic) {
    idler.n_th = 0.0;
  }
  return sample_homodyne(idler, phase, rng);
}

}  // namespace qtr
