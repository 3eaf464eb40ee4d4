#include "qtr/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

#include "qtr/analytics.hpp"
#include "qtr/error.hpp"
#include "qtr/oracles.hpp"

namespace qtr::cli {

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, sep)) parts.push_back(current);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

int single_d(const RunConfig& config, const char* command) {
  if (config.d_values.size() != 1) {
    throw ParameterError(std::string(command) + " takes exactly one value of --d");
  }
  return config.d_values.front();
}

int whole_pulses(double m) {
  if (!(m >= 1.0) || m != std::floor(m) || m > 2147483647.0) {
    throw ParameterError("pulse count must be a positive integer, got " + format_double(m));
  }
  return static_cast<int>(m);
}

}  // namespace

ProtocolParams RunConfig::params(int d, int m) const {
  ProtocolParams p;
  p.kappa = kappa;
  p.n_s = n_s;
  p.n_b = n_b;
  p.d = d;
  p.m_pulses = m;
  p.mode = mode;
  p.validate();
  return p;
}

void RunConfig::validate() const {
  if (d_values.empty()) throw ParameterError("--d: at least one value required");
  for (int d : d_values) params(d, 1);
  if (m_grid.empty()) throw ParameterError("--m-grid: at least one value required");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (!(m_grid[i] >= 1.0)) throw ParameterError("--m-grid: every m must be at least 1");
    if (i > 0 && !(m_grid[i] > m_grid[i - 1])) {
      throw ParameterError("--m-grid: values must be strictly increasing");
    }
  }
  if (trials < 1) throw ParameterError("--trials must be positive");
  if (parallelism < 1) throw ParameterError("--parallelism must be positive");
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ParameterError("grid must look like start:stop:step");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || !(stop >= start)) {
      throw ParameterError("grid needs step > 0 and stop >= start");
    }
    const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 10'000'000) throw ParameterError("grid has too many points");
    for (std::int64_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
  }
  for (const auto& part : split(text, ',')) grid.push_back(parse_double(part));
  if (grid.empty()) throw ParameterError("empty grid");
  return grid;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (const auto& part : split(text, ',')) {
    const double v = parse_double(part);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw ParameterError("expected an integer, got '" + part + "'");
    }
    values.push_back(static_cast<int>(v));
  }
  if (values.empty()) throw ParameterError("empty integer list");
  return values;
}

CsvTable cmd_exponents(const RunConfig& config) {
  config.validate();
  CsvTable table;
  table.header = {"d",      "kappa",      "n_s",        "n_b",
                  "xi_ctr", "xi_qtr",     "xi_hh",      "xi_hh_asym",
                  "xi_cct_large_idler",   "xi_cct_equal_small", "ratio_hh_ctr"};
  for (int d : config.d_values) {
    const auto r = exponent_report(d, config.kappa, config.n_s, config.n_b);
    table.rows.push_back({fmt(d), fmt(config.kappa), fmt(config.n_s), fmt(config.n_b),
                          fmt(r.xi_ctr), fmt(r.xi_qtr), fmt(r.xi_hh), fmt(r.xi_hh_large_d),
                          fmt(xi_cct(config.kappa, config.n_s, config.n_b, CctRegime::LargeIdler)),
                          fmt(xi_cct(config.kappa, config.n_s, config.n_b, CctRegime::EqualSmall)),
                          fmt(r.ratio_hh_over_ctr)});
  }
  return table;
}

CsvTable cmd_bounds(const RunConfig& config) {
  config.validate();
  const int d = single_d(config, "bounds");
  const LogConvention convention{config.log_base10, config.include_prefactor};
  CsvTable table;
  table.header = {"m", "log_qtr_bound", "log_ctr_exact", "ratio"};
  for (const auto& row :
       ratio_curve(d, config.kappa, config.n_s, config.n_b, config.m_grid, convention)) {
    table.rows.push_back({fmt(row.m), fmt(row.log_qtr_bound), fmt(row.log_ctr_exact),
                          fmt(row.ratio)});
  }
  return table;
}

CsvTable cmd_ctr_exact(const RunConfig& config) {
  config.validate();
  const LogConvention convention{config.log_base10, config.include_prefactor};
  CsvTable table;
  table.header = {"d", "m", "z", "log_ctr_exact", "p_ctr_exact"};
  for (int d : config.d_values) {
    for (double m : config.m_grid) {
      const double log_p = ctr_exact_log_error(d, config.kappa, config.n_s, config.n_b, m);
      table.rows.push_back({fmt(d), fmt(m),
                            fmt(ctr_separation(config.kappa, config.n_s, config.n_b, m)),
                            fmt(convention.apply(log_p)), fmt(std::exp(log_p))});
    }
  }
  return table;
}

CsvTable cmd_wishart_oracle(const RunConfig& config) {
  config.validate();
  CsvTable table;
  table.header = {"d", "n_samples", "mc_mean", "mc_stderr", "closed_form", "rel_err"};
  OracleRun run;
  run.seed = config.master_seed;
  run.parallelism = config.parallelism;
  for (int d : config.d_values) {
    const auto mc = wishart_lambda_max_mean_mc(d, config.trials, run);
    const double closed = wishart_lambda_max_mean_closed(d);
    table.rows.push_back({fmt(d), fmt(mc.n_samples), fmt(mc.estimate), fmt(mc.standard_error),
                          fmt(closed), fmt(std::abs(mc.estimate - closed) / closed)});
  }
  return table;
}

CsvTable cmd_simulate(const RunConfig& config, std::ostream& diagnostics) {
  config.validate();
  const int d = single_d(config, "simulate");
  std::vector<int> grid;
  for (double m : config.m_grid) grid.push_back(whole_pulses(m));
  const ProtocolParams params = config.params(d, grid.front());
  if (params.mode == SamplingMode::Asymptotic && params.regime_warning()) {
    diagnostics << "warning: parameters are outside kappa, N_S << 1 << N_B; the asymptotic "
                   "outcome model is a rescaled stand-in here\n";
  }
  SimulationOptions options;
  options.master_seed = config.master_seed;
  options.parallelism = config.parallelism;
  options.schedule = config.schedule;
  const auto sweep = sweep_qtr_vs_ctr(params, grid, config.trials, options);

  const LogConvention convention{config.log_base10, config.include_prefactor};
  CsvTable table;
  table.header = {"m", "trials", "errors", "p_hat", "ci_low", "ci_high", "log_p_hat",
                  "log_qtr_bound"};
  for (const auto& point : sweep) {
    const auto& e = point.estimate;
    const double bound = qtr_error_log_bound(d, config.kappa, config.n_s, config.n_b, point.m,
                                             config.include_prefactor);
    table.rows.push_back({fmt(point.m), fmt(e.trials), fmt(e.errors), fmt(e.p_hat),
                          fmt(e.ci_low), fmt(e.ci_high), fmt(convention.apply(std::log(e.p_hat))),
                          fmt(convention.apply(bound))});
  }
  if (config.fit) {
    const auto fit = exponent_fit(sweep);
    const double classical = xi_ctr(config.kappa, config.n_s, config.n_b);
    diagnostics << "fitted exponent " << format_double(fit.exponent) << " +/- "
                << format_double(fit.standard_error) << " (xi_hh "
                << format_double(xi_hh(d, config.kappa, config.n_s, config.n_b)) << ", xi_ctr "
                << format_double(classical) << ", above xi_ctr at 99%: "
                << (fit.exceeds(classical) ? "yes" : "no") << ")\n";
  }
  return table;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string text;
  for (const auto& part : parts) {
    if (!text.empty()) text += ',';
    text += part;
  }
  return text;
}

int default_parallelism() {
  if (const char* env = std::getenv(kParallelismEnv); env != nullptr && *env != '\0') {
    const double v = parse_double(env);
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw ParameterError(std::string(kParallelismEnv) + " must be a positive integer");
    }
    return static_cast<int>(v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum target ranging with the hetero-homodyne receiver"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value configuration file; command-line flags win");

  RunConfig config;
  // Lists also arrive split, e.g. from "d=2,15" in a config file.
  std::vector<std::string> d_parts{"2"};
  std::string m_text;
  std::vector<std::string> grid_parts;
  std::string mode_text = "asymptotic";
  std::string schedule_text = "uniform";
  std::string log_base = "e";
  std::string out_path;
  int parallelism = 0;

  app.add_option("--kappa", config.kappa, "target reflectivity");
  app.add_option("--n-s", config.n_s, "mean signal photon number");
  app.add_option("--n-b", config.n_b, "mean background photon number");
  app.add_option("--d", d_parts, "number of candidate positions (comma list allowed)")
      ->delimiter(',');
  app.add_option("--m", m_text, "single pulse count");
  app.add_option("--m-grid", grid_parts, "pulse grid start:stop:step or comma list")
      ->delimiter(',');
  app.add_option("--trials", config.trials, "Monte Carlo trials (samples for wishart-oracle)");
  app.add_option("--seed", config.master_seed, "master seed");
  app.add_option("--parallelism", parallelism,
                 std::string("worker threads (default: $") + kParallelismEnv +
                     " or hardware concurrency)");
  app.add_option("--mode", mode_text, "sampling model")
      ->check(CLI::IsMember({"exact", "asymptotic"}));
  app.add_option("--schedule", schedule_text, "true-index schedule")
      ->check(CLI::IsMember({"uniform", "cycle"}));
  app.add_option("--log-base", log_base, "logarithm base for log columns")
      ->check(CLI::IsMember({"e", "10"}));
  app.add_flag("--include-prefactor,!--exclude-prefactor", config.include_prefactor,
               "include the (d-1)/2 union-bound prefactor (default on)");
  app.add_flag("--fit", config.fit, "simulate: fit and report the empirical exponent");
  app.add_option("--out", out_path, "write CSV here (atomically) instead of stdout");

  auto* exponents = app.add_subcommand("exponents", "closed-form error exponents per d");
  auto* bounds = app.add_subcommand("bounds", "QTR union bound vs exact CTR error over M");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo error probability over M");
  auto* wishart = app.add_subcommand("wishart-oracle", "Monte Carlo check of E lambda_max");
  auto* ctr = app.add_subcommand("ctr-exact", "exact classical-receiver error over M");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitParameter;
  }

  try {
    config.d_values = parse_int_list(join(d_parts));
    if (!grid_parts.empty()) {
      config.m_grid = parse_grid(join(grid_parts));
    } else if (!m_text.empty()) {
      config.m_grid = {parse_double(m_text)};
    }
    config.mode = mode_text == "exact" ? SamplingMode::Exact : SamplingMode::Asymptotic;
    config.schedule = schedule_text == "cycle" ? IndexSchedule::Cycle : IndexSchedule::Uniform;
    config.log_base10 = log_base == "10";
    config.parallelism = parallelism > 0 ? parallelism : default_parallelism();
    if (app.count("--parallelism") > 0 && parallelism < 1) {
      throw ParameterError("--parallelism must be positive");
    }
    if (!out_path.empty()) config.out_path = out_path;

    CsvTable table;
    if (exponents->parsed()) {
      table = cmd_exponents(config);
    } else if (bounds->parsed()) {
      table = cmd_bounds(config);
    } else if (simulate->parsed()) {
      table = cmd_simulate(config, err);
    } else if (wishart->parsed()) {
      table = cmd_wishart_oracle(config);
    } else if (ctr->parsed()) {
      table = cmd_ctr_exact(config);
    }
    const std::string text = table.to_string();
    if (config.out_path) {
      write_file_atomically(*config.out_path, text);
    } else {
      out << text;
    }
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const StatisticalFloorError& e) {
    err << "statistical floor: " << e.what() << '\n';
    return kExitStatisticalFloor;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace qtr::cli
