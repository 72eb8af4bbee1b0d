#include "seirssp/reference.hpp"

#include "seirssp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace seirssp {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  double worst = 0.0;
  bool converged = true;

  double run(double a, double b, double fa, double fm, double fb, double whole, double tol,
             int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth) {
      converged = false;
      worst = std::max(worst, std::abs(delta) / 15.0);
      return left + right + delta / 15.0;
    }
    return run(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           run(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

double exact_population(double n0, double mu, const RecruitmentFunction& pi, double t,
                        double quad_tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("exact_population: t must be >= 0");
  if (!(mu >= 0.0)) throw DomainError("exact_population: mu must be >= 0");
  if (!(quad_tol > 0.0)) throw DomainError("exact_population: quad_tol must be positive");
  const double decay = std::exp(-mu * t);
  if (pi.kind() == RecruitmentFunction::Kind::Constant) {
    const double p = pi(0.0);
    if (mu == 0.0) return n0 + p * t;
    return n0 * decay + p / mu * (1.0 - decay);
  }
  if (t == 0.0) return n0;
  const std::function<double(double)> integrand = [&](double s) {
    return pi(s) * std::exp(-mu * (t - s));
  };
  Simpson simpson{integrand, 50};
  const auto panels = static_cast<int>(std::ceil(t));
  const double width = t / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = k * width;
    const double b = (k + 1 == panels) ? t : a + width;
    const double fa = integrand(a);
    const double fb = integrand(b);
    const double fm = integrand(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    sum += simpson.run(a, b, fa, fm, fb, whole, quad_tol / panels, 0);
  }
  if (!simpson.converged) {
    throw QuadratureError(simpson.worst, "exact_population: quadrature did not converge");
  }
  return n0 * decay + sum;
}

double grid_step(std::span<const double> offsets, double tau_target) {
  if (!(tau_target > 0.0)) throw DomainError("grid_step: tau_target must be positive");
  std::vector<double> sorted(offsets.begin(), offsets.end());
  sorted.push_back(0.0);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0.0) throw DomainError("grid_step: output times precede the initial time");
  double spacing = 0.0;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const double gap = sorted[k] - sorted[k - 1];
    if (gap > 1e-12 * (1.0 + sorted[k]) && (spacing == 0.0 || gap < spacing)) spacing = gap;
  }
  if (spacing == 0.0) return tau_target;
  for (double d : sorted) {
    const double ratio = d / spacing;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * (1.0 + ratio)) {
      throw DomainError("grid_step: output times are not multiples of their spacing");
    }
  }
  const double per_spacing = std::ceil(spacing / tau_target * (1.0 - 1e-12));
  return spacing / per_spacing;
}

ReferenceSolution reference_trajectory(const Model& model, const State& x0,
                                       std::span<const double> output_times, double tau_target,
                                       const ShuOsherForm<double>& method) {
  std::vector<double> offsets;
  offsets.reserve(output_times.size());
  for (double t : output_times) offsets.push_back(t - x0.t);
  const double tau = grid_step(offsets, tau_target);

  std::vector<std::size_t> index;
  std::size_t last = 0;
  for (double d : offsets) {
    const auto k = static_cast<std::size_t>(std::llround(d / tau));
    index.push_back(k);
    last = std::max(last, k);
  }
  const Trajectory traj = integrate(x0, tau, last, method, model);

  ReferenceSolution out;
  out.method = method.name;
  out.tau = tau;
  out.steps = last;
  out.times.assign(output_times.begin(), output_times.end());
  for (std::size_t k : index) out.states.push_back(traj.states[k]);
  return out;
}

}  // namespace seirssp
