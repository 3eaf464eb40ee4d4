#pragma once

// Batch command-line surface. Each cmd_* builds a complete CSV table in
// memory; run_cli parses arguments, dispatches, and maps failures to exit
// codes:
//   0 success, 2 parameter error, 3 numerical-convergence error,
//   4 statistical-floor error, 1 anything else (I/O).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtr/csv.hpp"
#include "qtr/harness.hpp"
#include "qtr/model.hpp"

namespace qtr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitStatisticalFloor = 4;

/// Environment variable supplying the default --parallelism.
inline constexpr const char* kParallelismEnv = "QTR_PARALLELISM";

struct RunConfig {
  double kappa = 0.01;
  double n_s = 0.1;
  double n_b = 600.0;
  std::vector<int> d_values{2};
  std::vector<double> m_grid{1.0};
  SamplingMode mode = SamplingMode::Asymptotic;
  IndexSchedule schedule = IndexSchedule::Uniform;
  std::int64_t trials = 10000;
  std::uint64_t master_seed = 1;
  int parallelism = 1;
  bool log_base10 = false;
  bool include_prefactor = true;
  bool fit = false;  ///< simulate: also fit the empirical exponent
  std::optional<std::string> out_path;

  /// Protocol parameters for the single-d subcommands.
  ProtocolParams params(int d, int m) const;

  /// Throws ParameterError when the config violates a shared precondition.
  void validate() const;
};

/// "a:b:step" (inclusive arithmetic grid), or a comma list "a,b,c".
std::vector<double> parse_grid(const std::string& text);

/// Comma list of integers, e.g. "2,15".
std::vector<int> parse_int_list(const std::string& text);

CsvTable cmd_exponents(const RunConfig& config);
CsvTable cmd_bounds(const RunConfig& config);
CsvTable cmd_ctr_exact(const RunConfig& config);
CsvTable cmd_wishart_oracle(const RunConfig& config);

/// Writes the fitted exponent to `diagnostics` when config.fit is set.
CsvTable cmd_simulate(const RunConfig& config, std::ostream& diagnostics);

/// Entry point shared by the executable and the tests. args[0] is the
/// program name. CSV goes to `out` unless --out is given.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qtr::cli
