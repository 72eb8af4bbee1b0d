#pragma once

#include "seirssp/integrators.hpp"
#include "seirssp/model.hpp"
#include "seirssp/ssp.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace seirssp {

/// N(t) = N0·exp(-mu·t) + integral_0^t Pi(s)·exp(-mu·(t-s)) ds.
///
/// Closed form for constant recruitment; otherwise adaptive Simpson on unit
/// panels to absolute tolerance quad_tol. Throws QuadratureError if the
/// recursion depth is exhausted before the tolerance is met.
double exact_population(double n0, double mu, const RecruitmentFunction& pi, double t,
                        double quad_tol = 1e-10);

struct ReferenceSolution {
  std::vector<double> times;
  std::vector<State> states;  // one per requested time, no interpolation
  std::string method;
  double tau = 0.0;
  std::size_t steps = 0;
};

/// Largest step <= tau_target that puts every offset on the grid. Offsets
/// must be integer multiples of their smallest positive gap.
double grid_step(std::span<const double> offsets, double tau_target);

/// Fine-step solution recorded at `output_times` (each >= x0.t). The step is
/// tau_target shrunk minimally so each output time is a grid point.
ReferenceSolution reference_trajectory(const Model& model, const State& x0,
                                       std::span<const double> output_times, double tau_target,
                                       const ShuOsherForm<double>& method);

}  // namespace seirssp
