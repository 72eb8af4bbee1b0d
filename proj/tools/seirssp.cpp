#include "seirssp/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace seirssp;

namespace {

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  return os;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SEIR model with SSP Runge-Kutta integrators"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string method = "ssprk22";
  std::optional<double> tau;
  std::optional<double> tf;
  bool stages = false;
  bool strict = false;
  std::uint64_t seed = 20240101;

  app.add_option("--config", config_path, "key=value config (overrides built-in defaults)");
  app.add_option("--out", out_dir, "output directory (default: out_dir from config)");

  auto* table = app.add_subcommand("bounds-table", "theoretical vs empirical step bounds");
  table->add_flag("--stages", stages, "check stage values too");
  table->add_option("--tf", tf, "final time");

  auto* sim = app.add_subcommand("simulate", "integrate one trajectory and check it");
  sim->add_option("--method", method, "euler | ssprk22 | ssprk33 | ssprk104");
  sim->add_option("--tau", tau, "step size")->required();
  sim->add_option("--tf", tf, "final time");
  sim->add_flag("--stages", stages, "check stage values too");
  sim->add_flag("--strict", strict, "exit with status 2 if any property fails");

  auto* conv = app.add_subcommand("convergence", "empirical orders against a reference");
  conv->add_option("--tf", tf, "final time");

  app.add_subcommand("counterexample", "non-convergence of N to Pi/mu for oscillating Pi");

  auto* check = app.add_subcommand("check", "run the full property suite");
  check->add_flag("--stages", stages, "check stage values too");
  check->add_flag("--strict", strict, "exit with status 2 if any check fails");
  check->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig config = config_path.empty() ? default_config() : load_config(config_path);
    const fs::path dir = out_dir.empty() ? fs::path(config.out_dir) : fs::path(out_dir);

    if (*table) {
      ExperimentConfig c = config;
      if (tf) c.tf_table = *tf;
      const auto rows = bounds_table(c, stages);
      auto os = open_out(dir, "bounds_table.csv");
      write_bounds_csv(os, rows);
      write_bounds_csv(std::cout, rows);
      for (const auto& r : rows) {
        if (r.search.approximate) {
          std::cerr << "warning: " << r.pi << '/' << r.method
                    << ": positivity not monotone in tau; tau_r is approximate\n";
        }
      }
    } else if (*sim) {
      const SimulationResult res =
          simulate(config, method, *tau, tf.value_or(config.tf_simulate), stages);
      auto os = open_out(dir, "trajectory.csv");
      write_trajectory_csv(os, res.trajectory.states);
      auto vs = open_out(dir, "verdict.txt");
      write_verdict_text(vs, res.verdict);
      write_verdict_text(std::cout, res.verdict);
      if (strict && !verdict_passes(res.verdict)) return 2;
    } else if (*conv) {
      ExperimentConfig c = config;
      if (tf) c.tf_convergence = *tf;
      const ConvergenceResult res = convergence_study(c, c.methods);
      auto os = open_out(dir, "convergence.csv");
      write_convergence_csv(os, res);
      auto ss = open_out(dir, "slopes.csv");
      write_slopes_csv(ss, res);
      write_slopes_csv(std::cout, res);
    } else if (app.got_subcommand("counterexample")) {
      const CounterexampleReport rep = counterexample();
      auto os = open_out(dir, "counterexample.csv");
      write_trajectory_csv(os, rep.trajectory.states);
      write_counterexample_report(std::cout, rep);
    } else if (*check) {
      bool all = true;
      for (const auto& line : run_check_suite(config, seed, stages)) {
        std::cout << (line.pass ? "PASS " : "FAIL ") << line.name << "  " << line.detail << '\n';
        all = all && line.pass;
      }
      if (strict && !all) return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
