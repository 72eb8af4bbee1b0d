#include "seirssp/bounds.hpp"

#include "seirssp/integrators.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace seirssp {

std::string_view binding_term_name(BindingTerm term) {
  switch (term) {
    case BindingTerm::Incidence: return "1/(mu+B)";
    case BindingTerm::Sigma: return "1/(mu+sigma)";
    case BindingTerm::Gamma: return "1/(mu+gamma)";
    case BindingTerm::Delta: return "1/(mu+delta)";
    case BindingTerm::None: return "none";
  }
  return "none";
}

StepBound euler_step_bound(const ModelParams& p, double b_sup) {
  p.validate();
  if (!std::isfinite(b_sup) || b_sup < 0.0) throw DomainError("euler_step_bound: B must be finite and >= 0");
  const double denominators[] = {p.mu + b_sup, p.mu + p.sigma, p.mu + p.gamma, p.mu + p.delta};
  constexpr BindingTerm terms[] = {BindingTerm::Incidence, BindingTerm::Sigma, BindingTerm::Gamma,
                                   BindingTerm::Delta};
  StepBound out;
  for (int k = 0; k < 4; ++k) {
    if (denominators[k] <= 0.0) continue;
    const double value = 1.0 / denominators[k];
    if (value < out.dt_star) {
      out.dt_star = value;
      out.binding = terms[k];
    }
  }
  out.unbounded = out.binding == BindingTerm::None;
  return out;
}

double rk_step_bound(const ModelParams& p, double b_sup, const ShuOsherForm<double>& method) {
  return method.ssp_c * euler_step_bound(p, b_sup).dt_star;
}

PopulationCap population_cap(double n0, double k_sup, double mu) {
  if (!(n0 >= 0.0) || !(k_sup >= 0.0) || !(mu >= 0.0)) {
    throw DomainError("population_cap: arguments must be non-negative");
  }
  PopulationCap out;
  out.n0 = n0;
  if (mu > 0.0) {
    out.bounded = true;
    out.cap = n0 + k_sup / mu;
  } else if (k_sup == 0.0) {
    out.bounded = true;
    out.cap = n0;
  } else {
    out.growth_slope = k_sup;
  }
  return out;
}

BoundReport bound_report(const Model& model, double n0, double horizon,
                         const ShuOsherForm<double>& method) {
  BoundReport out;
  out.method = method.name;
  out.ssp_c = method.ssp_c;
  out.k_sup = recruitment_sup(model.recruitment, horizon);
  const PopulationCap cap = population_cap(n0, out.k_sup, model.params.mu);
  out.pop_cap = cap.cap;
  const double b_range = cap.bounded ? cap.cap : n0 + horizon * out.k_sup;
  out.b_sup = sup_incidence(model.incidence, b_range);
  const StepBound step = euler_step_bound(model.params, out.b_sup);
  out.dt_star = step.dt_star;
  out.binding_term = step.binding;
  out.unbounded = step.unbounded;
  out.tau_method = method.ssp_c * step.dt_star;
  return out;
}

void write_bound_report(std::ostream& os, const BoundReport& r) {
  const auto flags = os.flags();
  os << std::left;
  os << std::setw(14) << "method" << r.method << '\n'
     << std::setw(14) << "dt_star" << format_double(r.dt_star) << '\n'
     << std::setw(14) << "ssp_c" << format_double(r.ssp_c) << '\n'
     << std::setw(14) << "tau_method" << format_double(r.tau_method) << '\n'
     << std::setw(14) << "pop_cap" << format_double(r.pop_cap) << '\n'
     << std::setw(14) << "b_sup" << format_double(r.b_sup) << '\n'
     << std::setw(14) << "k_sup" << format_double(r.k_sup) << '\n'
     << std::setw(14) << "binding" << binding_term_name(r.binding_term)
     << (r.unbounded ? "  (warning: no finite bound)" : "") << '\n';
  os.flags(flags);
}

void write_bound_csv_header(std::ostream& os) {
  os << "method,dt_star,ssp_c,tau_method,pop_cap,b_sup,k_sup,binding\n";
}

void write_bound_csv_row(std::ostream& os, const BoundReport& r) {
  os << r.method << ',' << format_double(r.dt_star) << ',' << format_double(r.ssp_c) << ','
     << format_double(r.tau_method) << ',' << format_double(r.pop_cap) << ','
     << format_double(r.b_sup) << ',' << format_double(r.k_sup) << ','
     << binding_term_name(r.binding_term) << '\n';
}

}  // namespace seirssp
