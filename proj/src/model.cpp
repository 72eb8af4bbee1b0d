#include "seirssp/model.hpp"

#include "seirssp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace seirssp {

namespace {

void require_nonnegative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DomainError(std::string(name) + " must be finite and non-negative");
  }
}

// Per-cell upper bounds of f over [a, b] split into `cells` equal cells. A
// cell contributes (f_left + f_right)/2 + L·h/2, where L over-estimates the
// local slope as twice the largest neighbouring difference quotient.
std::vector<double> cell_bounds(const IncidenceFunction& f, double a, double b, int cells) {
  const double h = (b - a) / cells;
  std::vector<double> v(cells + 1);
  for (int k = 0; k <= cells; ++k) {
    v[k] = f(a + k * h);
  }
  std::vector<double> slope(cells);
  for (int k = 0; k < cells; ++k) {
    slope[k] = std::abs(v[k + 1] - v[k]) / h;
  }
  std::vector<double> bound(cells);
  for (int k = 0; k < cells; ++k) {
    double local = slope[k];
    if (k > 0) local = std::max(local, slope[k - 1]);
    if (k + 1 < cells) local = std::max(local, slope[k + 1]);
    bound[k] = 0.5 * (v[k] + v[k + 1]) + local * h;
  }
  return bound;
}

}  // namespace

char compartment_name(int index) {
  static constexpr char names[] = {'S', 'E', 'I', 'R'};
  return (index >= 0 && index < 4) ? names[index] : '?';
}

void ModelParams::validate() const {
  require_nonnegative(mu, "mu");
  require_nonnegative(sigma, "sigma");
  require_nonnegative(gamma, "gamma");
  require_nonnegative(delta, "delta");
}

// ---------------------------------------------------------------- incidence

IncidenceFunction IncidenceFunction::linear(double beta) {
  require_nonnegative(beta, "beta");
  IncidenceFunction f;
  f.kind_ = Kind::Linear;
  f.p_[0] = beta;
  f.alpha_ = beta;
  return f;
}

IncidenceFunction IncidenceFunction::holling(double c1, double c2, double k) {
  require_nonnegative(c1, "c1");
  require_nonnegative(c2, "c2");
  if (!std::isfinite(k) || k <= 0.0) throw DomainError("holling exponent k must be positive");
  IncidenceFunction f;
  f.kind_ = Kind::Holling;
  f.p_[0] = c1;
  f.p_[1] = c2;
  f.p_[2] = k;
  f.alpha_ = c1;
  return f;
}

IncidenceFunction IncidenceFunction::media(double nu, double eta) {
  require_nonnegative(nu, "nu");
  require_nonnegative(eta, "eta");
  IncidenceFunction f;
  f.kind_ = Kind::MediaEffect;
  f.p_[0] = nu;
  f.p_[1] = eta;
  f.alpha_ = nu;
  return f;
}

IncidenceFunction IncidenceFunction::media_raw(double nu, double eta) {
  IncidenceFunction f = media(nu, eta);
  f.kind_ = Kind::MediaEffectRaw;
  f.alpha_ = nu > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return f;
}

IncidenceFunction IncidenceFunction::custom(std::function<double(double)> fn, double alpha,
                                            double validate_hi) {
  if (!fn) throw DomainError("custom incidence needs a callable");
  require_nonnegative(alpha, "alpha");
  require_nonnegative(validate_hi, "validation bound");
  if (std::abs(fn(0.0)) > 1e-15) throw DomainError("custom incidence: f(0) != 0");
  constexpr int kSamples = 10000;
  for (int k = 1; k <= kSamples; ++k) {
    const double x = validate_hi * k / kSamples;
    const double y = fn(x);
    if (!std::isfinite(y) || y < 0.0) {
      throw DomainError("custom incidence: f(x) < 0 at x = " + std::to_string(x));
    }
    if (y > alpha * x * (1.0 + 1e-12)) {
      throw DomainError("custom incidence: f(x) > alpha·x at x = " + std::to_string(x));
    }
  }
  IncidenceFunction f;
  f.kind_ = Kind::Custom;
  f.alpha_ = alpha;
  f.custom_ = std::move(fn);
  return f;
}

double IncidenceFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::Linear:
      return p_[0] * x;
    case Kind::Holling:
      return p_[0] * x / (1.0 + p_[1] * std::pow(x, p_[2]));
    case Kind::MediaEffect:
      return p_[0] * std::exp(-p_[1] * x) * x;
    case Kind::MediaEffectRaw:
      return p_[0] * std::exp(-p_[1] * x);
    case Kind::Custom:
      return custom_(x);
  }
  return 0.0;
}

std::string_view IncidenceFunction::key() const {
  switch (kind_) {
    case Kind::Linear: return "linear";
    case Kind::Holling: return "holling";
    case Kind::MediaEffect: return "media";
    case Kind::MediaEffectRaw: return "media-raw";
    case Kind::Custom: return "custom";
  }
  return "custom";
}

double sup_incidence(const IncidenceFunction& f, double hi) {
  if (!std::isfinite(hi) || hi < 0.0) throw DomainError("sup_incidence: hi must be finite and >= 0");
  using Kind = IncidenceFunction::Kind;
  switch (f.kind()) {
    case Kind::Linear:
      return f.param(0) * hi;
    case Kind::MediaEffect: {
      // x·exp(-eta·x) increases up to 1/eta.
      const double eta = f.param(1);
      const double x = eta > 0.0 ? std::min(hi, 1.0 / eta) : hi;
      return f(x);
    }
    case Kind::MediaEffectRaw:
      return f(0.0);
    case Kind::Holling:
    case Kind::Custom:
      break;
  }
  if (hi == 0.0) return f(0.0);
  constexpr int kCells = 10000;
  constexpr int kFineCells = 3000;
  const double h = hi / kCells;
  const std::vector<double> coarse = cell_bounds(f, 0.0, hi, kCells);
  const int best = static_cast<int>(std::max_element(coarse.begin(), coarse.end()) - coarse.begin());
  // Re-grid the best cell and its neighbours; every other cell keeps its
  // coarse bound.
  const int first = std::max(0, best - 1);
  const int last = std::min(kCells - 1, best + 1);
  double result = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kCells; ++k) {
    if (k < first || k > last) result = std::max(result, coarse[k]);
  }
  const std::vector<double> fine = cell_bounds(f, first * h, (last + 1) * h, kFineCells);
  return std::max(result, *std::max_element(fine.begin(), fine.end()));
}

// -------------------------------------------------------------- recruitment

RecruitmentFunction RecruitmentFunction::choice_a(double kappa) {
  require_nonnegative(kappa, "kappa");
  RecruitmentFunction pi;
  pi.kind_ = Kind::ChoiceA;
  pi.kappa_ = kappa;
  pi.bound_ = 2.0 * kappa;
  return pi;
}

RecruitmentFunction RecruitmentFunction::choice_b(double kappa) {
  require_nonnegative(kappa, "kappa");
  RecruitmentFunction pi;
  pi.kind_ = Kind::ChoiceB;
  pi.kappa_ = kappa;
  pi.bound_ = kappa;
  return pi;
}

RecruitmentFunction RecruitmentFunction::choice_c(double kappa) {
  require_nonnegative(kappa, "kappa");
  RecruitmentFunction pi;
  pi.kind_ = Kind::ChoiceC;
  pi.kappa_ = kappa;
  pi.bound_ = kappa;
  return pi;
}

RecruitmentFunction RecruitmentFunction::constant(double p) {
  require_nonnegative(p, "recruitment constant");
  RecruitmentFunction pi;
  pi.kind_ = Kind::Constant;
  pi.kappa_ = p;
  pi.bound_ = p;
  return pi;
}

RecruitmentFunction RecruitmentFunction::counterexample_cosine() {
  RecruitmentFunction pi;
  pi.kind_ = Kind::CounterexampleCosine;
  pi.kappa_ = 1.0;
  pi.bound_ = 2.0;
  return pi;
}

RecruitmentFunction RecruitmentFunction::custom(std::function<double(double)> fn, double bound,
                                                double horizon) {
  if (!fn) throw DomainError("custom recruitment needs a callable");
  require_nonnegative(bound, "recruitment bound");
  if (!std::isfinite(horizon) || horizon <= 0.0) throw DomainError("horizon must be positive");
  constexpr int kSamples = 100000;
  for (int k = 0; k <= kSamples; ++k) {
    const double t = horizon * k / kSamples;
    const double v = fn(t);
    if (!std::isfinite(v) || v < 0.0 || v > bound) {
      throw DomainError("custom recruitment violates 0 <= Pi <= K at t = " + std::to_string(t));
    }
  }
  RecruitmentFunction pi;
  pi.kind_ = Kind::Custom;
  pi.bound_ = bound;
  pi.custom_ = std::move(fn);
  return pi;
}

double RecruitmentFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::ChoiceA: {
      const double sinc = t == 0.0 ? 1.0 : std::sin(t) / t;
      return kappa_ * (2.0 / std::numbers::pi * std::atan(t) + sinc);
    }
    case Kind::ChoiceB:
      return kappa_ * (std::atan(t) / std::numbers::pi + 0.5);
    case Kind::ChoiceC:
      return kappa_ * (1.0 - t * std::exp(-t));
    case Kind::Constant:
      return kappa_;
    case Kind::CounterexampleCosine:
      return 1.0 - std::cos(2.0 * std::numbers::pi * t);
    case Kind::Custom:
      return custom_(t);
  }
  return 0.0;
}

std::string_view RecruitmentFunction::key() const {
  switch (kind_) {
    case Kind::ChoiceA: return "choiceA";
    case Kind::ChoiceB: return "choiceB";
    case Kind::ChoiceC: return "choiceC";
    case Kind::Constant: return "const";
    case Kind::CounterexampleCosine: return "cex-cos";
    case Kind::Custom: return "custom";
  }
  return "custom";
}

double recruitment_sup(const RecruitmentFunction& pi, double horizon) {
  if (!std::isfinite(horizon) || horizon <= 0.0) throw DomainError("recruitment_sup: horizon must be positive");
  using Kind = RecruitmentFunction::Kind;
  switch (pi.kind()) {
    case Kind::ChoiceB:
    case Kind::ChoiceC:
    case Kind::Constant:
    case Kind::CounterexampleCosine:
      return pi.declared_bound();
    case Kind::ChoiceA:
    case Kind::Custom:
      break;
  }
  constexpr int kSamples = 1000000;
  const double h = horizon / kSamples;
  double prev = pi(0.0);
  double best = prev;
  double lipschitz = 0.0;
  for (int k = 1; k <= kSamples; ++k) {
    const double v = pi(k * h);
    best = std::max(best, v);
    lipschitz = std::max(lipschitz, std::abs(v - prev) / h);
    prev = v;
  }
  return std::min(best + lipschitz * h, pi.declared_bound());
}

// ------------------------------------------------------------------ catalog

IncidenceFunction incidence_from_key(std::string_view key, const IncidenceParams& p) {
  if (key == "linear") return IncidenceFunction::linear(p.beta);
  if (key == "holling") return IncidenceFunction::holling(p.c1, p.c2, p.k);
  if (key == "media") return IncidenceFunction::media(p.nu, p.eta);
  if (key == "media-raw") return IncidenceFunction::media_raw(p.nu, p.eta);
  throw LookupError("unknown incidence key '" + std::string(key) + "'");
}

RecruitmentFunction recruitment_from_key(std::string_view key, double kappa) {
  if (key == "choiceA") return RecruitmentFunction::choice_a(kappa);
  if (key == "choiceB") return RecruitmentFunction::choice_b(kappa);
  if (key == "choiceC") return RecruitmentFunction::choice_c(kappa);
  if (key == "const") return RecruitmentFunction::constant(kappa);
  if (key == "cex-cos") return RecruitmentFunction::counterexample_cosine();
  throw LookupError("unknown recruitment key '" + std::string(key) + "'");
}

Compartments rhs(double t, const Compartments& x, const ModelParams& p,
                 const IncidenceFunction& f, const RecruitmentFunction& pi) {
  if (!std::isfinite(t) || !x.allFinite()) throw DomainError("rhs: non-finite state");
  p.validate();
  const double force = f(x[kI]) * x[kS];
  Compartments d;
  d[kS] = pi(t) - p.mu * x[kS] - force;
  d[kE] = force - (p.mu + p.sigma) * x[kE];
  d[kI] = p.sigma * x[kE] - (p.mu + p.gamma) * x[kI] + p.delta * x[kR];
  d[kR] = p.gamma * x[kI] - (p.mu + p.delta) * x[kR];
  return d;
}

}  // namespace seirssp
