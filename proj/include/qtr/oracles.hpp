#pragma once

// Brute-force cross-checks for the closed forms in analytics and receiver.
// Nothing here calls into the routines it is meant to check.

#include <cstdint>

#include "qtr/receiver.hpp"

namespace qtr {

struct OracleResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::int64_t n_samples = 0;
};

/// Sampling layout shared by the Monte Carlo oracles. Batch b draws from
/// substream (seed, b); the batch size is part of the result's identity.
struct OracleRun {
  std::uint64_t seed = 1;
  int parallelism = 1;
  std::int64_t batch_size = 1 << 15;
};

/// Largest eigenvalue of the 2x2 scatter matrix by the quadratic formula.
double lambda_max_2x2(const ScatterMatrix& s) noexcept;

/// Angle of the dominant eigenvector in (-pi/2, pi/2]; 0 when isotropic.
double principal_angle_eig(const ScatterMatrix& s) noexcept;

/// Mean of lambda_max(sum_k (v_k - vbar)(v_k - vbar)^T) for d i.i.d.
/// standard bivariate normals v_k, i.e. of the W(2, d - 1) scatter matrix.
OracleResult wishart_lambda_max_mean_mc(int d, std::int64_t n_samples,
                                        const OracleRun& run = {});

/// Error rate of argmax decoding over d unit-variance Gaussian statistics
/// when the true one is shifted by z (ties to the lowest index). The
/// standard error is the Wilson 95% half-width divided by 1.96.
OracleResult ctr_error_mc_z(int d, double z, std::int64_t trials,
                            const OracleRun& run = {});

/// Simulates the summed homodyne statistics of the classical receiver:
/// mean 2 m sqrt(kappa N_S) on the target index, 0 elsewhere, common
/// variance m (2 N_B + 1).
OracleResult ctr_error_mc(int d, double kappa, double n_s, double n_b,
                          double m, std::int64_t trials,
                          const OracleRun& run = {});

}  // namespace qtr
