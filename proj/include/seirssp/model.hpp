#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <string>
#include <string_view>

namespace seirssp {

/// Death, progression, recovery and relapse rates (all 1/time).
struct ModelParams {
  double mu = 0.0;
  double sigma = 0.0;
  double gamma = 0.0;
  double delta = 0.0;

  /// Throws DomainError unless all four rates are finite and non-negative.
  void validate() const;
};

/// (S, E, I, R) population counts.
using Compartments = Eigen::Vector4d;

enum Compartment : int { kS = 0, kE = 1, kI = 2, kR = 3 };

char compartment_name(int index);

struct State {
  double t = 0.0;
  Compartments y = Compartments::Zero();

  static State make(double s, double e, double i, double r, double t = 0.0) {
    State x;
    x.t = t;
    x.y << s, e, i, r;
    return x;
  }

  double s() const { return y[kS]; }
  double e() const { return y[kE]; }
  double i() const { return y[kI]; }
  double r() const { return y[kR]; }

  double total() const { return y.sum(); }
  bool admissible() const { return (y.array() >= 0.0).all(); }
  bool finite() const { return std::isfinite(t) && y.allFinite(); }
};

inline double total_population(const State& x) { return x.total(); }

/// Force of infection f in the incidence term f(I)·S.
///
/// Catalog entries satisfy f(0) = 0, f(x) >= 0 and f(x) <= alpha·x on x >= 0.
/// `media_raw` is the exception: it is the literal x-free reading
/// nu·exp(-eta·x), kept for comparison, and reports
/// satisfies_conditions() == false.
class IncidenceFunction {
public:
  enum class Kind { Linear, Holling, MediaEffect, MediaEffectRaw, Custom };

  /// f(x) = beta·x. beta = 0 gives the zero force of infection.
  static IncidenceFunction linear(double beta = 1.0);
  /// f(x) = c1·x / (1 + c2·x^k).
  static IncidenceFunction holling(double c1, double c2, double k);
  /// f(x) = nu·exp(-eta·x)·x.
  static IncidenceFunction media(double nu, double eta);
  /// g(x) = nu·exp(-eta·x); does not vanish at 0.
  static IncidenceFunction media_raw(double nu, double eta);
  /// User function with declared constant alpha. Validated on a grid over
  /// [0, validate_hi]; throws DomainError if any condition fails there.
  static IncidenceFunction custom(std::function<double(double)> f, double alpha,
                                  double validate_hi = 1000.0);

  double operator()(double x) const;

  Kind kind() const { return kind_; }
  std::string_view key() const;
  /// Constant of the linear growth bound |f(x)| <= alpha·|x| on x >= 0.
  double alpha() const { return alpha_; }
  bool satisfies_conditions() const { return kind_ != Kind::MediaEffectRaw; }

  // Raw parameters: (beta) | (c1, c2, k) | (nu, eta).
  double param(int index) const { return p_[index]; }

private:
  IncidenceFunction() = default;

  Kind kind_ = Kind::Linear;
  double p_[3] = {1.0, 0.0, 0.0};
  double alpha_ = 1.0;
  std::function<double(double)> custom_;
};

/// Recruitment rate Pi(t) with a declared upper bound K.
class RecruitmentFunction {
public:
  enum class Kind { ChoiceA, ChoiceB, ChoiceC, Constant, CounterexampleCosine, Custom };

  /// kappa·(2/pi·atan(t) + sin(t)/t), with sin(0)/0 := 1.
  static RecruitmentFunction choice_a(double kappa);
  /// kappa·(atan(t)/pi + 1/2).
  static RecruitmentFunction choice_b(double kappa);
  /// kappa·(1 - t·exp(-t)).
  static RecruitmentFunction choice_c(double kappa);
  static RecruitmentFunction constant(double p);
  /// 1 - cos(2·pi·t), bounded by 2.
  static RecruitmentFunction counterexample_cosine();
  /// User function with declared bound K, validated on [0, horizon].
  static RecruitmentFunction custom(std::function<double(double)> pi, double bound,
                                    double horizon = 1000.0);

  double operator()(double t) const;

  Kind kind() const { return kind_; }
  std::string_view key() const;
  double kappa() const { return kappa_; }
  double declared_bound() const { return bound_; }

private:
  RecruitmentFunction() = default;

  Kind kind_ = Kind::Constant;
  double kappa_ = 0.0;
  double bound_ = 0.0;
  std::function<double(double)> custom_;
};

/// Everything the right-hand side depends on besides (t, x).
struct Model {
  ModelParams params;
  IncidenceFunction incidence = IncidenceFunction::linear();
  RecruitmentFunction recruitment = RecruitmentFunction::constant(0.0);
};

/// SEIR right-hand side. Throws DomainError on non-finite input.
Compartments rhs(double t, const Compartments& x, const ModelParams& p,
                 const IncidenceFunction& f, const RecruitmentFunction& pi);

inline Compartments rhs(double t, const State& x, const Model& m) {
  return rhs(t, x.y, m.params, m.incidence, m.recruitment);
}

namespace detail {
// Unchecked evaluation used inside the steppers, where non-finite values are
// detected per step instead.
inline Compartments rhs_unchecked(double t, const Compartments& x, const Model& m) {
  const ModelParams& p = m.params;
  const double force = m.incidence(x[kI]) * x[kS];
  Compartments d;
  d[kS] = m.recruitment(t) - p.mu * x[kS] - force;
  d[kE] = force - (p.mu + p.sigma) * x[kE];
  d[kI] = p.sigma * x[kE] - (p.mu + p.gamma) * x[kI] + p.delta * x[kR];
  d[kR] = p.gamma * x[kI] - (p.mu + p.delta) * x[kR];
  return d;
}
}  // namespace detail

/// Upper bound of f over [0, hi]. Analytic for Linear and the media forms;
/// otherwise a two-level grid with a per-cell Lipschitz slack, so the result
/// never under-approximates the true supremum.
double sup_incidence(const IncidenceFunction& f, double hi);

/// Upper bound K of Pi over [0, horizon]: analytic where known, else a
/// 10^6-point grid maximum plus Lipschitz slack (capped by the declared bound).
double recruitment_sup(const RecruitmentFunction& pi, double horizon);

/// Parameters for every incidence catalog entry; each key reads its own.
struct IncidenceParams {
  double beta = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double k = 2.0;
  double nu = 0.0115;
  double eta = 0.001;
};

/// Catalog lookup by key: "linear", "holling", "media", "media-raw".
IncidenceFunction incidence_from_key(std::string_view key, const IncidenceParams& params = {});

/// Catalog lookup by key: "choiceA", "choiceB", "choiceC", "const", "cex-cos".
RecruitmentFunction recruitment_from_key(std::string_view key, double kappa);

}  // namespace seirssp
