#pragma once

#include "seirssp/checks.hpp"
#include "seirssp/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace seirssp {

// ---------------------------------------------------------------- config

struct ExperimentConfig {
  ModelParams params;
  std::string incidence;
  IncidenceParams incidence_params;
  std::string recruitment;
  double kappa = 0.0;
  std::vector<std::string> table_recruitments;
  std::vector<std::string> methods;
  double s0 = 0.0, e0 = 0.0, i0 = 0.0, r0 = 0.0;
  double tf_table = 0.0;
  double tf_simulate = 0.0;
  double tf_convergence = 0.0;
  double bisect_tol = 0.0;
  std::string convergence_recruitment;
  double convergence_output_dt = 0.0;
  std::string out_dir;

  Model model() const { return model_with(recruitment); }
  Model model_with(std::string_view recruitment_key) const;
  State initial_state() const { return State::make(s0, e0, i0, r0); }
};

/// Built-in configuration text (key=value lines).
std::string_view default_config_text();

/// Strict parse: every key must be present exactly once, no unknown keys.
ExperimentConfig parse_config(std::string_view text);

/// Parses `text` as an override of the built-in configuration. Keys may be
/// omitted; unknown or repeated keys are still rejected.
ExperimentConfig parse_config_overlay(std::string_view text);

ExperimentConfig default_config();
ExperimentConfig load_config(const std::string& path);

/// Serializes in parse_config format; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& config);

// ---------------------------------------------------------- bounds table

struct BoundsRow {
  std::string pi;
  std::string method;
  double tau_t = 0.0;
  double tau_r = 0.0;
  double ratio = 0.0;
  EmpiricalBound search;
};

/// One row per (table_recruitments × methods), in config order. Rows are
/// computed concurrently.
std::vector<BoundsRow> bounds_table(const ExperimentConfig& config, bool include_stages = false);

void write_bounds_csv(std::ostream& os, const std::vector<BoundsRow>& rows);

// ------------------------------------------------------------- simulate

struct SimulationResult {
  Trajectory trajectory;
  PropertyVerdict verdict;
  BoundReport bound;
};

/// ceil(t_f/tau) steps of `method` from the config's initial state; tau = 0
/// yields the initial state only.
SimulationResult simulate(const ExperimentConfig& config, std::string_view method, double tau,
                          double t_f, bool include_stages = false);

bool verdict_passes(const PropertyVerdict& verdict);

// ---------------------------------------------------------- convergence

struct ConvergencePoint {
  std::string method;
  double tau = 0.0;
  double error = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergencePoint> points;
  std::map<std::string, double> slopes;
  std::vector<std::string> order;  // method order as configured
  double reference_tau = 0.0;
};

/// Least-squares slope of log2(error) against log2(tau).
double fit_slope(const std::vector<double>& taus, const std::vector<double>& errors);

/// Max-norm error at every output time against an ssprk104 reference at
/// 2^-10 of its theoretical step, for tau = tau_t·2^-k, k = 1..levels
/// (shrunk onto the output grid). Slopes use the `fit_points` smallest steps.
ConvergenceResult convergence_study(const ExperimentConfig& config,
                                    const std::vector<std::string>& methods, int levels = 8,
                                    int fit_points = 5);

void write_convergence_csv(std::ostream& os, const ConvergenceResult& result);
void write_slopes_csv(std::ostream& os, const ConvergenceResult& result);

// ------------------------------------------------------- counterexample

struct CounterexampleReport {
  Trajectory trajectory;
  double even_limit = 0.0;
  double odd_limit = 0.0;
  double gap_inf = 0.0;  // over the last `tail` steps
  double gap_sup = 0.0;
  std::size_t tail = 0;
};

/// Euler with mu = 1, tau = 1/2, N0 = 2, Pi = 1 - cos(2·pi·t), f = 0.
CounterexampleReport counterexample(std::size_t steps = 500, std::size_t tail = 100);

void write_counterexample_report(std::ostream& os, const CounterexampleReport& report);

// ---------------------------------------------------------- check suite

struct SuiteLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SweepFailure {
  std::size_t config = 0;
  std::string method;
  std::string incidence;
  std::string recruitment;
  double tau = 0.0;
  Witness witness;
};

struct SweepResult {
  std::size_t runs = 0;
  std::vector<SweepFailure> failures;
};

/// Random parameters in [0,1]^4, catalog f and Pi, tau uniform in
/// (0, rk_step_bound]; every builtin method is run on every configuration.
SweepResult guarantee_sweep(std::uint64_t seed, std::size_t configs = 200,
                            std::size_t steps = 200, bool include_stages = false);

/// Every property check in one pass; one line per check.
std::vector<SuiteLine> run_check_suite(const ExperimentConfig& config, std::uint64_t seed,
                                       bool include_stages = false);

}  // namespace seirssp
