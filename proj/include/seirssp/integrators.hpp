#pragma once

#include "seirssp/model.hpp"
#include "seirssp/ssp.hpp"

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace seirssp {

/// Smallest compartment value among the stages of one step.
struct StageMinimum {
  double value = std::numeric_limits<double>::infinity();
  int compartment = -1;
};

struct Trajectory {
  std::vector<State> states;
  double tau = 0.0;
  std::string method;
  /// Minimum compartment value over every stage of every step (and x0).
  double stage_min = std::numeric_limits<double>::infinity();
  /// stage_minima[k] covers the stages computed while producing states[k+1].
  std::vector<StageMinimum> stage_minima;

  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
};

/// x + tau·F(t, x), with t advanced by tau.
State euler_step(const State& x, double tau, const Model& model);

/// One step of the Shu-Osher form with internal Euler step tau/r. Stage
/// recruitment is evaluated at t + c_j·tau. Summation over j is ascending, so
/// runs are bitwise reproducible. If `stage_min` is given, it receives the
/// smallest compartment over the computed stages (including the result).
State ssp_rk_step(const State& x, double tau, const ShuOsherForm<double>& method, const Model& model,
                  StageMinimum* stage_min = nullptr);

/// n_steps repeated ssp_rk_step calls starting at x0. Throws OverflowError at
/// the first step producing a non-finite state.
Trajectory integrate(const State& x0, double tau, std::size_t n_steps,
                     const ShuOsherForm<double>& method, const Model& model);

/// CSV with header t,S,E,I,R,N and shortest round-trip numbers.
void write_trajectory_csv(std::ostream& os, const std::vector<State>& states);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace seirssp
