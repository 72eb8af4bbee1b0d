#pragma once

#include "seirssp/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace seirssp {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Coefficients below -kFeasibilityTol make a Shu-Osher form infeasible.
inline constexpr double kFeasibilityTol = 1e-12;

/// Explicit Runge-Kutta method (A, b, c) with m stages.
template <typename Scalar = double>
struct ButcherTableau {
  MatrixX<Scalar> a;
  VectorX<Scalar> b;
  VectorX<Scalar> c;

  /// Builds the tableau with c set to the row sums of a.
  static ButcherTableau from(MatrixX<Scalar> a, VectorX<Scalar> b) {
    ButcherTableau t;
    t.c = a.rowwise().sum();
    t.a = std::move(a);
    t.b = std::move(b);
    return t;
  }

  Eigen::Index stages() const { return b.size(); }

  /// Throws DomainError unless the tableau is square, strictly lower
  /// triangular, has weights summing to one and c equal to the row sums.
  void validate(Scalar tol = Scalar(1e-12)) const {
    const Eigen::Index m = stages();
    if (m == 0 || a.rows() != m || a.cols() != m || c.size() != m) {
      throw DomainError("butcher tableau: inconsistent dimensions");
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = i; j < m; ++j) {
        if (a(i, j) != Scalar(0)) throw DomainError("butcher tableau: not explicit");
      }
    }
    using std::abs;
    if (abs(b.sum() - Scalar(1)) > tol) throw DomainError("butcher tableau: weights do not sum to 1");
    if ((c - a.rowwise().sum()).cwiseAbs().maxCoeff() > tol) {
      throw DomainError("butcher tableau: abscissae differ from row sums");
    }
  }
};

/// Canonical Shu-Osher representation of an explicit method.
///
/// Stage i (0-based, i = 0..m) is
///   U_i = v_i·U^n + sum_{j<i} alpha_ij·(U_j + (tau/r)·F(t_n + c_j·tau, U_j)),
/// and U_m is the new step value. Stage 0 is always U^n (v_0 = 1).
template <typename Scalar = double>
struct ShuOsherForm {
  std::string name;
  MatrixX<Scalar> alpha;  // (m+1) x (m+1), strictly lower triangular
  VectorX<Scalar> v;      // m+1
  Scalar r = Scalar(0);   // parameter of the representation; stepping uses tau/r
  Scalar ssp_c = Scalar(0);
  VectorX<Scalar> c_stage;  // m+1 abscissae, last entry 1

  Eigen::Index stages() const { return v.size() - 1; }

  /// Smallest coefficient over alpha and v.
  Scalar min_coefficient() const {
    return std::min(alpha.minCoeff(), v.minCoeff());
  }

  bool feasible(Scalar tol = Scalar(kFeasibilityTol)) const { return min_coefficient() >= -tol; }

  /// max_i |v_i + sum_j alpha_ij - 1|.
  Scalar consistency_residual() const {
    return (v + alpha.rowwise().sum() - VectorX<Scalar>::Ones(v.size())).cwiseAbs().maxCoeff();
  }
};

template <typename Scalar>
struct ShuOsherConversion {
  ShuOsherForm<Scalar> form;
  bool feasible = false;
  Scalar most_negative = Scalar(0);  // min(0, smallest coefficient)
};

/// [[A, 0], [b^T, 0]].
template <typename Scalar>
MatrixX<Scalar> k_matrix(const ButcherTableau<Scalar>& t) {
  const Eigen::Index m = t.stages();
  MatrixX<Scalar> k = MatrixX<Scalar>::Zero(m + 1, m + 1);
  k.topLeftCorner(m, m) = t.a;
  k.block(m, 0, 1, m) = t.b.transpose();
  return k;
}

/// alpha = r·K·(I + r·K)^-1 and v = 1 - rowsum(alpha).
///
/// For explicit tableaus I + r·K is unit lower triangular, so the inverse is
/// applied by a triangular solve. Throws DomainError if r <= 0.
template <typename Scalar>
ShuOsherConversion<Scalar> shu_osher_from_butcher(const ButcherTableau<Scalar>& t, Scalar r) {
  if (!(r > Scalar(0))) throw DomainError("shu_osher_from_butcher: r must be positive");
  const MatrixX<Scalar> rk = r * k_matrix(t);
  const Eigen::Index n = rk.rows();
  const MatrixX<Scalar> m = MatrixX<Scalar>::Identity(n, n) + rk;
  // X·M = rK  <=>  M^T·X^T = (rK)^T, with M^T unit upper triangular.
  MatrixX<Scalar> alpha =
      m.transpose().template triangularView<Eigen::UnitUpper>().solve(rk.transpose()).transpose();
  alpha.template triangularView<Eigen::Upper>().setZero();

  // Round-off residue of exact zeros.
  const Scalar snap = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
  alpha = alpha.unaryExpr([snap](Scalar x) { return std::abs(x) < snap ? Scalar(0) : x; });

  ShuOsherConversion<Scalar> out;
  out.form.alpha = alpha;
  out.form.v = VectorX<Scalar>::Ones(n) - alpha.rowwise().sum();
  out.form.v = out.form.v.unaryExpr([snap](Scalar x) { return std::abs(x) < snap ? Scalar(0) : x; });
  out.form.r = r;
  out.form.ssp_c = r;
  out.form.c_stage.resize(n);
  out.form.c_stage.head(n - 1) = t.c;
  out.form.c_stage[n - 1] = Scalar(1);
  const Scalar low = out.form.min_coefficient();
  out.most_negative = std::min(low, Scalar(0));
  out.feasible = low >= -Scalar(kFeasibilityTol);
  return out;
}

/// Largest r with a non-negative Shu-Osher representation, to within tol.
///
/// Brackets [0, r_hi] by doubling r_hi until infeasible, then bisects. The
/// result is the feasible end of the final bracket. Returns 0 if no r > 0 is
/// feasible; results below 1e-3 must be feasible with zero tolerance. The interval assumption on the feasible set is spot-checked at
/// C + tol; a violation throws std::runtime_error.
template <typename Scalar>
Scalar ssp_coefficient(const ButcherTableau<Scalar>& t, Scalar tol) {
  if (!(tol > Scalar(0))) throw DomainError("ssp_coefficient: tol must be positive");
  auto feasible = [&t](Scalar r) { return shu_osher_from_butcher(t, r).feasible; };
  Scalar lo(0);
  Scalar hi(1);
  constexpr int kMaxDoublings = 40;
  int doublings = 0;
  while (feasible(hi)) {
    lo = hi;
    hi *= Scalar(2);
    if (++doublings > kMaxDoublings) return hi;
  }
  while (hi - lo > tol) {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  if (lo == Scalar(0)) return Scalar(0);
  // Near r = 0 the tolerance admits O(r^2) negative coefficients.
  if (lo < Scalar(1e-3) && shu_osher_from_butcher(t, lo).form.min_coefficient() < Scalar(0)) {
    return Scalar(0);
  }
  if (feasible(lo + tol)) {
    throw std::runtime_error("ssp_coefficient: feasible set is not an interval");
  }
  return lo;
}

/// One-step amplification factor R(z) = 1 + z·b^T·(I - zA)^-1·1 on u' = lambda·u.
template <typename Scalar>
Scalar butcher_amplification(const ButcherTableau<Scalar>& t, Scalar z) {
  const Eigen::Index m = t.stages();
  const MatrixX<Scalar> lhs = MatrixX<Scalar>::Identity(m, m) - z * t.a;
  const VectorX<Scalar> stages =
      lhs.template triangularView<Eigen::UnitLower>().solve(VectorX<Scalar>::Ones(m));
  return Scalar(1) + z * t.b.dot(stages);
}

/// The same factor obtained by running the Shu-Osher stages on u' = lambda·u.
template <typename Scalar>
Scalar shu_osher_amplification(const ShuOsherForm<Scalar>& form, Scalar z) {
  const Eigen::Index n = form.v.size();
  VectorX<Scalar> u(n);
  const Scalar euler = Scalar(1) + z / form.r;
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar acc = form.v[i];
    for (Eigen::Index j = 0; j < i; ++j) acc += form.alpha(i, j) * euler * u[j];
    u[i] = acc;
  }
  return u[n - 1];
}

// ----------------------------------------------------------------- builtins

inline const std::vector<std::string_view>& builtin_method_names() {
  static const std::vector<std::string_view> names = {"euler", "ssprk22", "ssprk33", "ssprk104"};
  return names;
}

template <typename Scalar = double>
ButcherTableau<Scalar> builtin_tableau(std::string_view name) {
  const Scalar one(1);
  if (name == "euler") {
    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(1, 1);
    VectorX<Scalar> b(1);
    b << one;
    return ButcherTableau<Scalar>::from(a, b);
  }
  if (name == "ssprk22") {
    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(2, 2);
    a(1, 0) = one;
    VectorX<Scalar> b(2);
    b << one / 2, one / 2;
    return ButcherTableau<Scalar>::from(a, b);
  }
  if (name == "ssprk33") {
    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(3, 3);
    a(1, 0) = one;
    a(2, 0) = one / 4;
    a(2, 1) = one / 4;
    VectorX<Scalar> b(3);
    b << one / 6, one / 6, 2 * one / 3;
    return ButcherTableau<Scalar>::from(a, b);
  }
  if (name == "ssprk104") {
    // Ten-stage, fourth-order method with SSP coefficient 6.
    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(10, 10);
    for (int i = 1; i < 10; ++i) {
      for (int j = 0; j < i; ++j) {
        if (i <= 4) {
          a(i, j) = one / 6;
        } else {
          a(i, j) = j < 5 ? one / 15 : one / 6;
        }
      }
    }
    VectorX<Scalar> b = VectorX<Scalar>::Constant(10, one / 10);
    return ButcherTableau<Scalar>::from(a, b);
  }
  throw LookupError("unknown method '" + std::string(name) + "'");
}

/// Known SSP coefficients of the builtin methods.
template <typename Scalar = double>
Scalar builtin_ssp_coefficient(std::string_view name) {
  if (name == "euler" || name == "ssprk22" || name == "ssprk33") return Scalar(1);
  if (name == "ssprk104") return Scalar(6);
  throw LookupError("unknown method '" + std::string(name) + "'");
}

/// Optimal (r = C) Shu-Osher form of a builtin method.
template <typename Scalar = double>
ShuOsherForm<Scalar> builtin_method(std::string_view name) {
  const ButcherTableau<Scalar> tableau = builtin_tableau<Scalar>(name);
  const Scalar c = builtin_ssp_coefficient<Scalar>(name);
  ShuOsherConversion<Scalar> conv = shu_osher_from_butcher(tableau, c);
  if (!conv.feasible) throw std::logic_error("builtin method has an infeasible optimal form");
  conv.form.name = std::string(name);
  conv.form.ssp_c = c;
  return conv.form;
}

/// SSPRK(10,4) written down directly in its low-storage convex form,
/// independent of the tableau conversion.
template <typename Scalar = double>
ShuOsherForm<Scalar> ssprk104_reference_form() {
  const Scalar one(1);
  ShuOsherForm<Scalar> form;
  form.name = "ssprk104";
  form.r = Scalar(6);
  form.ssp_c = Scalar(6);
  form.alpha = MatrixX<Scalar>::Zero(11, 11);
  form.v = VectorX<Scalar>::Zero(11);
  form.v[0] = one;
  for (int i = 1; i <= 4; ++i) form.alpha(i, i - 1) = one;
  form.v[5] = 3 * one / 5;
  form.alpha(5, 4) = 2 * one / 5;
  for (int i = 6; i <= 9; ++i) form.alpha(i, i - 1) = one;
  form.v[10] = one / 25;
  form.alpha(10, 4) = 9 * one / 25;
  form.alpha(10, 9) = 3 * one / 5;
  form.c_stage.resize(11);
  form.c_stage << 0, one / 6, 2 * one / 6, 3 * one / 6, 4 * one / 6, one / 3, one / 2, 2 * one / 3,
      5 * one / 6, one, one;
  return form;
}

/// Plain-text coefficient table.
template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const ShuOsherForm<Scalar>& form) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << "method " << (form.name.empty() ? "<unnamed>" : form.name) << "  stages " << form.stages()
     << "  r " << form.r << "  C " << form.ssp_c << '\n';
  os << std::setw(3) << "i" << std::setw(12) << "c_i" << std::setw(12) << "v_i" << "  alpha_i0..\n";
  os << std::fixed << std::setprecision(6);
  for (Eigen::Index i = 0; i < form.v.size(); ++i) {
    os << std::setw(3) << i << std::setw(12) << form.c_stage[i] << std::setw(12) << form.v[i] << ' ';
    for (Eigen::Index j = 0; j < i; ++j) os << std::setw(10) << form.alpha(i, j);
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
  return os;
}

}  // namespace seirssp
