#pragma once

#include "seirssp/errors.hpp"
#include "seirssp/model.hpp"
#include "seirssp/ssp.hpp"

#include <iosfwd>
#include <limits>
#include <string_view>

namespace seirssp {

/// Which argument of min{1/(mu+B), 1/(mu+sigma), 1/(mu+gamma), 1/(mu+delta)}
/// attains the minimum. Ties resolve to the earliest term.
enum class BindingTerm { Incidence, Sigma, Gamma, Delta, None };

std::string_view binding_term_name(BindingTerm term);

struct StepBound {
  double dt_star = std::numeric_limits<double>::infinity();
  BindingTerm binding = BindingTerm::None;
  /// Set when every denominator is zero and the bound is +inf.
  bool unbounded = false;
};

/// A priori explicit Euler positivity bound with B = sup f on [0, cap].
StepBound euler_step_bound(const ModelParams& p, double b_sup);

/// ssp_c · euler_step_bound.
double rk_step_bound(const ModelParams& p, double b_sup, const ShuOsherForm<double>& method);

/// N0 + K/mu for mu > 0. For mu = 0 the cap is unbounded and the step
/// populations follow the envelope N0 + n·(tau/C)·K.
struct PopulationCap {
  double n0 = 0.0;
  double cap = std::numeric_limits<double>::infinity();
  bool bounded = false;
  double growth_slope = 0.0;  // K when mu = 0

  /// Bound after n steps of effective size h = tau/C (cap when bounded).
  double after(std::size_t n, double h) const {
    if (bounded) return cap;
    return n0 + static_cast<double>(n) * h * growth_slope;
  }
};

PopulationCap population_cap(double n0, double k_sup, double mu);

struct BoundReport {
  std::string method;
  double dt_star = 0.0;
  double tau_method = 0.0;
  double pop_cap = 0.0;
  double b_sup = 0.0;
  double k_sup = 0.0;
  double ssp_c = 0.0;
  BindingTerm binding_term = BindingTerm::None;
  bool unbounded = false;
};

/// Full a priori bound: K = recruitment_sup over the horizon, cap from K, then
/// B = sup f on [0, cap] (on [0, n0 + horizon·K] when mu = 0).
BoundReport bound_report(const Model& model, double n0, double horizon,
                         const ShuOsherForm<double>& method);

void write_bound_report(std::ostream& os, const BoundReport& report);
void write_bound_csv_header(std::ostream& os);
void write_bound_csv_row(std::ostream& os, const BoundReport& report);

// ------------------------------------------------------ coefficient recurrences

template <typename Scalar>
struct ABCoefficients {
  VectorX<Scalar> a;  // A_1..A_{m+1}
  VectorX<Scalar> b;  // B_1..B_{m+1}
};

/// A_1 = 1, A_i = v_i + (1 - x)·sum_j alpha_ij·A_j;
/// B_1 = 0, B_i = 1 - v_i + (1 - x)·sum_j alpha_ij·B_j, with x = tau·mu/r.
/// Throws DomainError unless 0 <= x <= 1.
template <typename Scalar>
ABCoefficients<Scalar> ab_coefficients(const ShuOsherForm<Scalar>& method, Scalar tau, Scalar mu) {
  const Scalar x = tau * mu / method.r;
  if (!(x >= Scalar(0)) || x > Scalar(1)) {
    throw DomainError("ab_coefficients: tau·mu/C must lie in [0, 1]");
  }
  const Eigen::Index n = method.v.size();
  ABCoefficients<Scalar> out{VectorX<Scalar>::Zero(n), VectorX<Scalar>::Zero(n)};
  const Scalar damp = Scalar(1) - x;
  out.a[0] = Scalar(1);
  out.b[0] = Scalar(0);
  for (Eigen::Index i = 1; i < n; ++i) {
    Scalar sa(0);
    Scalar sb(0);
    for (Eigen::Index j = 0; j < i; ++j) {
      sa += method.alpha(i, j) * out.a[j];
      sb += method.alpha(i, j) * out.b[j];
    }
    out.a[i] = method.v[i] + damp * sa;
    out.b[i] = Scalar(1) - method.v[i] + damp * sb;
  }
  return out;
}

/// gamma_ij = alpha_ij + sum_{k=j+1}^{i-1} alpha_ik·gamma_kj (lower triangular).
template <typename Scalar>
MatrixX<Scalar> gamma_coefficients(const ShuOsherForm<Scalar>& method) {
  const Eigen::Index n = method.v.size();
  MatrixX<Scalar> g = MatrixX<Scalar>::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      Scalar acc = method.alpha(i, j);
      for (Eigen::Index k = j + 1; k < i; ++k) acc += method.alpha(i, k) * g(k, j);
      g(i, j) = acc;
    }
  }
  return g;
}

}  // namespace seirssp
