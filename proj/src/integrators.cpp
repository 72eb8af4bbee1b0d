#include "seirssp/integrators.hpp"

#include "seirssp/errors.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace seirssp {

namespace {

void track(StageMinimum& acc, const Compartments& y) {
  Eigen::Index idx = 0;
  const double low = y.minCoeff(&idx);
  if (low < acc.value) {
    acc.value = low;
    acc.compartment = static_cast<int>(idx);
  }
}

}  // namespace

State euler_step(const State& x, double tau, const Model& model) {
  State next;
  next.y = x.y + tau * detail::rhs_unchecked(x.t, x.y, model);
  next.t = x.t + tau;
  return next;
}

State ssp_rk_step(const State& x, double tau, const ShuOsherForm<double>& method, const Model& model,
                  StageMinimum* stage_min) {
  const Eigen::Index n = method.v.size();
  const double h = tau / method.r;
  std::vector<Compartments> stage(n);
  std::vector<Compartments> euler(n);  // U_j + h·F(U_j)
  StageMinimum low;
  stage[0] = x.y;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) {
      bool started = false;
      Compartments acc = Compartments::Zero();
      if (method.v[i] != 0.0) {
        acc = method.v[i] * x.y;
        started = true;
      }
      for (Eigen::Index j = 0; j < i; ++j) {
        const double a = method.alpha(i, j);
        if (a == 0.0) continue;
        if (started) {
          acc += a * euler[j];
        } else {
          acc = a * euler[j];
          started = true;
        }
      }
      stage[i] = acc;
      track(low, acc);
    }
    if (i + 1 < n) {
      const double ts = x.t + method.c_stage[i] * tau;
      euler[i] = stage[i] + h * detail::rhs_unchecked(ts, stage[i], model);
    }
  }
  if (stage_min) *stage_min = low;
  State next;
  next.y = stage[n - 1];
  next.t = x.t + tau;
  return next;
}

Trajectory integrate(const State& x0, double tau, std::size_t n_steps,
                     const ShuOsherForm<double>& method, const Model& model) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("integrate: tau must be finite and >= 0");
  if (n_steps > 0 && tau == 0.0) throw DomainError("integrate: tau must be positive");
  Trajectory traj;
  traj.tau = tau;
  traj.method = method.name;
  traj.states.reserve(n_steps + 1);
  traj.stage_minima.reserve(n_steps);
  traj.states.push_back(x0);
  traj.stage_min = x0.y.minCoeff();
  State x = x0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    StageMinimum low;
    x = ssp_rk_step(x, tau, method, model, &low);
    // Times are recomputed from the index so they do not drift.
    x.t = x0.t + static_cast<double>(k) * tau;
    if (!x.y.allFinite() || !std::isfinite(low.value)) {
      throw OverflowError(k, "integrate: non-finite state at step " + std::to_string(k));
    }
    traj.stage_min = std::min(traj.stage_min, low.value);
    traj.stage_minima.push_back(low);
    traj.states.push_back(x);
  }
  return traj;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void write_trajectory_csv(std::ostream& os, const std::vector<State>& states) {
  os << "t,S,E,I,R,N\n";
  for (const State& x : states) {
    os << format_double(x.t) << ',' << format_double(x.s()) << ',' << format_double(x.e()) << ','
       << format_double(x.i()) << ',' << format_double(x.r()) << ',' << format_double(x.total())
       << '\n';
  }
}

}  // namespace seirssp
