#include "seirssp/checks.hpp"

#include "seirssp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace seirssp {

CheckResult check_nonnegativity(const Trajectory& traj, bool include_stages) {
  CheckResult out;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    // Stages of step k are computed before states[k] is recorded.
    if (include_stages && k > 0 && k - 1 < traj.stage_minima.size()) {
      const StageMinimum& low = traj.stage_minima[k - 1];
      if (low.value < kNegativityThreshold) {
        out.pass = false;
        out.witness = Witness{k, low.compartment, low.value, true};
        return out;
      }
    }
    const Compartments& y = traj.states[k].y;
    for (int c = 0; c < 4; ++c) {
      if (!(y[c] >= kNegativityThreshold)) {
        out.pass = false;
        out.witness = Witness{k, c, y[c], false};
        return out;
      }
    }
  }
  return out;
}

CheckResult check_population_bound(const Trajectory& traj, double cap) {
  CheckResult out;
  const double limit = cap * (1.0 + 1e-10);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double n = traj.states[k].total();
    if (!(n <= limit)) {
      out.pass = false;
      out.witness = Witness{k, -1, n, false};
      return out;
    }
  }
  return out;
}

CheckResult check_population_bound(const Trajectory& traj, const PopulationCap& cap, double h) {
  if (cap.bounded) return check_population_bound(traj, cap.cap);
  CheckResult out;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double n = traj.states[k].total();
    if (!(n <= cap.after(k, h) * (1.0 + 1e-10))) {
      out.pass = false;
      out.witness = Witness{k, -1, n, false};
      return out;
    }
  }
  return out;
}

double check_limit(const Trajectory& traj, double p_target, double mu, std::size_t window) {
  if (!(mu > 0.0)) throw DomainError("check_limit: mu must be positive");
  if (window == 0 || window > traj.states.size()) {
    throw DomainError("check_limit: window must be in [1, number of states]");
  }
  const double target = p_target / mu;
  double residual = 0.0;
  for (std::size_t k = traj.states.size() - window; k < traj.states.size(); ++k) {
    residual = std::max(residual, std::abs(traj.states[k].total() - target));
  }
  return residual;
}

std::vector<double> detect_oscillation(const Trajectory& traj, std::size_t period) {
  if (period < 2) throw DomainError("detect_oscillation: period must be >= 2");
  if (traj.states.size() < 10 * period) {
    throw InsufficientDataError("detect_oscillation: need at least 10·period states");
  }
  std::vector<double> limits(period);
  for (std::size_t r = 0; r < period; ++r) {
    std::vector<double> samples;
    for (std::size_t k = r; k < traj.states.size(); k += period) {
      samples.push_back(traj.states[k].total());
    }
    const std::size_t tail = std::max<std::size_t>(1, samples.size() / 10);
    double sum = 0.0;
    for (std::size_t k = samples.size() - tail; k < samples.size(); ++k) sum += samples[k];
    limits[r] = sum / static_cast<double>(tail);
  }
  return limits;
}

PropertyVerdict evaluate_properties(const Trajectory& traj, const PopulationCap& cap, double h,
                                    double mu, double p_target, bool include_stages) {
  PropertyVerdict v;
  v.nonneg = check_nonnegativity(traj, include_stages);
  v.pop_bound = check_population_bound(traj, cap, h);
  v.pop_cap = cap.bounded ? cap.cap : cap.after(traj.steps(), h);
  if (mu > 0.0 && !traj.states.empty()) {
    const std::size_t window = std::max<std::size_t>(1, traj.states.size() / 10);
    v.limit_target = p_target / mu;
    v.limit_residual = check_limit(traj, p_target, mu, window);
  }
  if (traj.states.size() >= 20) v.oscillation = detect_oscillation(traj, 2);
  return v;
}

namespace {

void write_witness(std::ostream& os, const Witness& w) {
  os << "step " << w.step << ", ";
  if (w.compartment >= 0) {
    os << compartment_name(w.compartment);
  } else {
    os << 'N';
  }
  os << " = " << format_double(w.value);
  if (w.from_stage) os << " (stage)";
}

}  // namespace

void write_verdict_text(std::ostream& os, const PropertyVerdict& v) {
  os << "non-negativity:   " << (v.nonneg.pass ? "PASS" : "FAIL");
  if (v.nonneg.witness) {
    os << "  first violation at ";
    write_witness(os, *v.nonneg.witness);
  }
  os << '\n';
  os << "population bound: " << (v.pop_bound.pass ? "PASS" : "FAIL") << "  (cap "
     << format_double(v.pop_cap) << ")";
  if (v.pop_bound.witness) {
    os << "  exceeded at ";
    write_witness(os, *v.pop_bound.witness);
  }
  os << '\n';
  if (v.limit_residual) {
    os << "limit N -> P/mu:  target " << format_double(*v.limit_target) << ", tail residual "
       << format_double(*v.limit_residual) << '\n';
  }
  if (!v.oscillation.empty()) {
    os << "even/odd tail:    " << format_double(v.oscillation[0]) << " / "
       << format_double(v.oscillation[1]) << '\n';
  }
}

void write_verdict_csv_header(std::ostream& os) {
  os << "nonneg,nonneg_step,nonneg_compartment,nonneg_value,pop_bound,pop_cap,limit_target,"
        "limit_residual\n";
}

void write_verdict_csv_row(std::ostream& os, const PropertyVerdict& v) {
  os << (v.nonneg.pass ? "pass" : "fail") << ',';
  if (v.nonneg.witness) {
    os << v.nonneg.witness->step << ',' << compartment_name(v.nonneg.witness->compartment) << ','
       << format_double(v.nonneg.witness->value);
  } else {
    os << ",,";
  }
  os << ',' << (v.pop_bound.pass ? "pass" : "fail") << ',' << format_double(v.pop_cap) << ',';
  if (v.limit_residual) {
    os << format_double(*v.limit_target) << ',' << format_double(*v.limit_residual);
  } else {
    os << ',';
  }
  os << '\n';
}

PositivityProbe probe_positivity(const Model& model, const State& x0,
                                 const ShuOsherForm<double>& method, double t_f, double tau,
                                 bool include_stages) {
  if (!(tau > 0.0)) throw DomainError("probe_positivity: tau must be positive");
  PositivityProbe probe;
  probe.tau = tau;
  const auto steps = static_cast<std::size_t>(std::ceil(t_f / tau));
  try {
    const Trajectory traj = integrate(x0, tau, steps, method, model);
    const CheckResult check = check_nonnegativity(traj, include_stages);
    probe.pass = check.pass;
    probe.witness = check.witness;
  } catch (const OverflowError&) {
    probe.pass = false;
    probe.overflow = true;
  }
  return probe;
}

EmpiricalBound find_empirical_bound(const Model& model, const State& x0,
                                    const ShuOsherForm<double>& method, double t_f, double lo,
                                    double hi, double tol, bool include_stages) {
  if (!(lo > 0.0) || !(hi > lo) || !(tol > 0.0) || !(t_f > 0.0)) {
    throw DomainError("find_empirical_bound: need 0 < lo < hi, tol > 0, t_f > 0");
  }
  EmpiricalBound out;
  auto probe = [&](double tau) {
    ++out.evaluations;
    return probe_positivity(model, x0, method, t_f, tau, include_stages);
  };
  constexpr int kMaxExpansions = 60;
  int expansions = 0;
  while (!probe(lo).pass) {
    hi = lo;
    lo *= 0.5;
    if (++expansions > kMaxExpansions) throw DomainError("find_empirical_bound: no passing step size found");
  }
  expansions = 0;
  while (probe(hi).pass) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > kMaxExpansions) throw DomainError("find_empirical_bound: no failing step size found");
  }
  const double bracket_lo = lo;
  const double bracket_hi = hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (probe(mid).pass ? lo : hi) = mid;
  }
  out.lo = lo;
  out.hi = hi;
  out.tau_r = 0.5 * (lo + hi);

  constexpr int kScan = 16;
  std::vector<PositivityProbe> scan;
  for (int k = 1; k < kScan; ++k) {
    scan.push_back(probe(bracket_lo + (bracket_hi - bracket_lo) * k / kScan));
  }
  scan.push_back(probe(out.hi));
  std::sort(scan.begin(), scan.end(),
            [](const PositivityProbe& a, const PositivityProbe& b) { return a.tau < b.tau; });
  std::optional<PositivityProbe> lowest_fail;
  for (const PositivityProbe& p : scan) {
    if (!p.pass && !lowest_fail) {
      lowest_fail = p;
    } else if (p.pass && lowest_fail) {
      out.approximate = true;
      out.pass_above = p;
      out.fail_below = lowest_fail;
      break;
    }
  }
  return out;
}

}  // namespace seirssp
