#pragma once

#include "seirssp/bounds.hpp"
#include "seirssp/integrators.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace seirssp {

/// Values at or above this count as non-negative (absorbs round-off on
/// trajectories that sit exactly at zero).
inline constexpr double kNegativityThreshold = -1e-12;

/// Where a check failed: step index into Trajectory::states, compartment
/// (0..3 = S,E,I,R; -1 for the total N) and the offending value.
struct Witness {
  std::size_t step = 0;
  int compartment = -1;
  double value = 0.0;
  bool from_stage = false;
};

struct CheckResult {
  bool pass = true;
  std::optional<Witness> witness;
};

/// Passes iff every step state (and with include_stages every stage) has all
/// compartments >= kNegativityThreshold. The witness is the first violation.
CheckResult check_nonnegativity(const Trajectory& traj, bool include_stages = false);

/// Passes iff N_k <= cap·(1 + 1e-10) for every k.
CheckResult check_population_bound(const Trajectory& traj, double cap);

/// Same against a PopulationCap; unbounded caps use the linear envelope
/// N0 + k·h·K with h = tau/C.
CheckResult check_population_bound(const Trajectory& traj, const PopulationCap& cap, double h);

/// max |N_k - p_target/mu| over the trailing `window` states.
double check_limit(const Trajectory& traj, double p_target, double mu, std::size_t window);

/// Tail-averaged limit of each residue class k mod period of N_k (the last
/// tenth of each class's samples). Throws InsufficientDataError when the
/// trajectory has fewer than 10·period states.
std::vector<double> detect_oscillation(const Trajectory& traj, std::size_t period);

struct PropertyVerdict {
  CheckResult nonneg;
  CheckResult pop_bound;
  double pop_cap = 0.0;
  /// Residual of N against p_target/mu over the last 10% of steps (mu > 0 only).
  std::optional<double> limit_residual;
  std::optional<double> limit_target;
  std::vector<double> oscillation;
};

/// Runs every applicable check on a trajectory. `p_target` is the limit of
/// the recruitment used for the N -> P/mu estimate.
PropertyVerdict evaluate_properties(const Trajectory& traj, const PopulationCap& cap, double h,
                                    double mu, double p_target, bool include_stages = false);

void write_verdict_text(std::ostream& os, const PropertyVerdict& verdict);
void write_verdict_csv_header(std::ostream& os);
void write_verdict_csv_row(std::ostream& os, const PropertyVerdict& verdict);

// ------------------------------------------------------- empirical threshold

struct PositivityProbe {
  double tau = 0.0;
  bool pass = false;
  std::optional<Witness> witness;  // empty on pass or on overflow
  bool overflow = false;
};

/// Integrates ceil(t_f/tau) steps and checks non-negativity. An overflowing
/// run counts as a failure.
PositivityProbe probe_positivity(const Model& model, const State& x0,
                                 const ShuOsherForm<double>& method, double t_f, double tau,
                                 bool include_stages = false);

struct EmpiricalBound {
  double tau_r = 0.0;
  double lo = 0.0;  // last passing probe
  double hi = 0.0;  // last failing probe
  bool approximate = false;
  /// Set when a pass was observed above a fail inside the bracket.
  std::optional<PositivityProbe> pass_above;
  std::optional<PositivityProbe> fail_below;
  int evaluations = 0;
};

/// Bisection on tau of the positivity predicate. The bracket is expanded
/// geometrically until the predicate passes at lo and fails at hi; the result
/// is the midpoint of the final bracket of width <= tol. A 16-point scan of
/// the bracket checks monotonicity and flags the result approximate if a pass
/// lies above a fail.
EmpiricalBound find_empirical_bound(const Model& model, const State& x0,
                                    const ShuOsherForm<double>& method, double t_f, double lo,
                                    double hi, double tol, bool include_stages = false);

}  // namespace seirssp
