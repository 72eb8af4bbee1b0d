#include "seirssp/experiments.hpp"

#include "seirssp/bounds.hpp"
#include "seirssp/errors.hpp"
#include "seirssp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

namespace seirssp {

namespace {

std::size_t steps_for(double t_f, double tau) {
  return static_cast<std::size_t>(std::ceil(t_f / tau));
}

// lim Pi(t) as t -> inf; NaN when it does not exist.
double recruitment_limit(const RecruitmentFunction& pi) {
  using Kind = RecruitmentFunction::Kind;
  switch (pi.kind()) {
    case Kind::ChoiceA:
    case Kind::ChoiceB:
    case Kind::ChoiceC:
      return pi.kappa();
    case Kind::Constant:
      return pi(0.0);
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

// ------------------------------------------------------------ bounds table

std::vector<BoundsRow> bounds_table(const ExperimentConfig& config, bool include_stages) {
  const State x0 = config.initial_state();
  std::vector<std::future<BoundsRow>> jobs;
  for (const auto& pi : config.table_recruitments) {
    for (const auto& name : config.methods) {
      jobs.push_back(std::async(std::launch::async, [&config, &x0, pi, name, include_stages] {
        const Model model = config.model_with(pi);
        const ShuOsherForm<double> form = builtin_method(name);
        BoundsRow row;
        row.pi = pi;
        row.method = name;
        row.tau_t = bound_report(model, x0.total(), config.tf_table, form).tau_method;
        row.search = find_empirical_bound(model, x0, form, config.tf_table, row.tau_t,
                                          3.0 * row.tau_t, config.bisect_tol, include_stages);
        row.tau_r = row.search.tau_r;
        row.ratio = row.tau_r / row.tau_t;
        return row;
      }));
    }
  }
  std::vector<BoundsRow> rows;
  rows.reserve(jobs.size());
  for (auto& job : jobs) rows.push_back(job.get());
  return rows;
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundsRow>& rows) {
  os << "pi,method,tau_t,tau_r,ratio\n";
  for (const auto& r : rows) {
    os << r.pi << ',' << r.method << ',' << format_double(r.tau_t) << ','
       << format_double(r.tau_r) << ',' << format_double(r.ratio) << '\n';
  }
}

// ---------------------------------------------------------------- simulate

SimulationResult simulate(const ExperimentConfig& config, std::string_view method, double tau,
                          double t_f, bool include_stages) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("simulate: tau must be >= 0");
  if (!(t_f >= 0.0)) throw DomainError("simulate: t_f must be >= 0");
  const Model model = config.model();
  const ShuOsherForm<double> form = builtin_method(method);
  const State x0 = config.initial_state();
  const std::size_t n = tau == 0.0 ? 0 : steps_for(t_f, tau);

  SimulationResult out;
  out.trajectory = integrate(x0, tau, n, form, model);
  const double horizon = std::max(1.0, static_cast<double>(n) * tau);
  out.bound = bound_report(model, x0.total(), horizon, form);
  const PopulationCap cap = population_cap(x0.total(), out.bound.k_sup, model.params.mu);
  const double p_target = recruitment_limit(model.recruitment);
  const double mu = std::isfinite(p_target) ? model.params.mu : 0.0;
  out.verdict = evaluate_properties(out.trajectory, cap, tau / form.r, mu, p_target,
                                    include_stages);
  return out;
}

bool verdict_passes(const PropertyVerdict& verdict) {
  return verdict.nonneg.pass && verdict.pop_bound.pass;
}

// ------------------------------------------------------------- convergence

double fit_slope(const std::vector<double>& taus, const std::vector<double>& errors) {
  if (taus.size() != errors.size() || taus.size() < 2) {
    throw InsufficientDataError("fit_slope: need at least two (tau, error) pairs");
  }
  const auto n = static_cast<Eigen::Index>(taus.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(taus[k] > 0.0) || !(errors[k] > 0.0)) {
      throw DomainError("fit_slope: taus and errors must be positive");
    }
    design(k, 0) = std::log2(taus[k]);
    design(k, 1) = 1.0;
    rhs[k] = std::log2(errors[k]);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  return coef[0];
}

ConvergenceResult convergence_study(const ExperimentConfig& config,
                                    const std::vector<std::string>& methods, int levels,
                                    int fit_points) {
  if (levels < 1 || fit_points < 2 || fit_points > levels) {
    throw DomainError("convergence_study: need 2 <= fit_points <= levels");
  }
  const Model model = config.model_with(config.convergence_recruitment);
  const State x0 = config.initial_state();
  const double t_f = config.tf_convergence;
  const double dt = config.convergence_output_dt;

  std::vector<double> times;
  for (std::size_t k = 1;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t > t_f * (1.0 + 1e-12)) break;
    times.push_back(t);
  }
  if (times.empty()) throw DomainError("convergence_study: no output time within t_f");

  const ShuOsherForm<double> ref_form = builtin_method("ssprk104");
  const double ref_target =
      bound_report(model, x0.total(), t_f, ref_form).tau_method * std::ldexp(1.0, -10);
  const ReferenceSolution ref = reference_trajectory(model, x0, times, ref_target, ref_form);

  ConvergenceResult out;
  out.order = methods;
  out.reference_tau = ref.tau;

  std::vector<std::future<std::vector<ConvergencePoint>>> jobs;
  for (const auto& name : methods) {
    jobs.push_back(std::async(std::launch::async, [&, name] {
      const ShuOsherForm<double> form = builtin_method(name);
      const double tau_t = bound_report(model, x0.total(), t_f, form).tau_method;
      std::vector<ConvergencePoint> pts;
      for (int k = 1; k <= levels; ++k) {
        const double tau = grid_step(times, tau_t * std::ldexp(1.0, -k));
        const auto n = static_cast<std::size_t>(std::llround(times.back() / tau));
        const Trajectory traj = integrate(x0, tau, n, form, model);
        double err = 0.0;
        for (std::size_t j = 0; j < times.size(); ++j) {
          const auto idx = static_cast<std::size_t>(std::llround(times[j] / tau));
          err = std::max(err, (traj.states[idx].y - ref.states[j].y).lpNorm<Eigen::Infinity>());
        }
        pts.push_back({name, tau, err});
      }
      return pts;
    }));
  }
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const auto pts = jobs[m].get();
    std::vector<double> taus;
    std::vector<double> errs;
    for (std::size_t k = pts.size() - fit_points; k < pts.size(); ++k) {
      taus.push_back(pts[k].tau);
      errs.push_back(pts[k].error);
    }
    out.slopes[methods[m]] = fit_slope(taus, errs);
    out.points.insert(out.points.end(), pts.begin(), pts.end());
  }
  return out;
}

void write_convergence_csv(std::ostream& os, const ConvergenceResult& result) {
  os << "method,tau,error\n";
  for (const auto& p : result.points) {
    os << p.method << ',' << format_double(p.tau) << ',' << format_double(p.error) << '\n';
  }
}

void write_slopes_csv(std::ostream& os, const ConvergenceResult& result) {
  os << "method,slope\n";
  for (const auto& name : result.order) {
    os << name << ',' << format_double(result.slopes.at(name)) << '\n';
  }
}

// ---------------------------------------------------------- counterexample

CounterexampleReport counterexample(std::size_t steps, std::size_t tail) {
  if (tail == 0 || tail > steps) throw DomainError("counterexample: need 0 < tail <= steps");
  const Model model{ModelParams{1.0, 0.0, 0.0, 0.0}, IncidenceFunction::linear(0.0),
                    RecruitmentFunction::counterexample_cosine()};
  CounterexampleReport out;
  out.tail = tail;
  out.trajectory = integrate(State::make(2.0, 0.0, 0.0, 0.0), 0.5, steps,
                             builtin_method("euler"), model);
  const auto limits = detect_oscillation(out.trajectory, 2);
  out.even_limit = limits[0];
  out.odd_limit = limits[1];
  out.gap_inf = std::numeric_limits<double>::infinity();
  out.gap_sup = 0.0;
  const auto& st = out.trajectory.states;
  for (std::size_t k = st.size() - tail; k < st.size(); ++k) {
    const double gap = std::abs(st[k].total() - model.recruitment(st[k].t) / model.params.mu);
    out.gap_inf = std::min(out.gap_inf, gap);
    out.gap_sup = std::max(out.gap_sup, gap);
  }
  return out;
}

void write_counterexample_report(std::ostream& os, const CounterexampleReport& r) {
  os << "steps " << r.trajectory.steps() << '\n'
     << "even_limit " << format_double(r.even_limit) << '\n'
     << "odd_limit " << format_double(r.odd_limit) << '\n'
     << "gap_inf_last_" << r.tail << ' ' << format_double(r.gap_inf) << '\n'
     << "gap_sup_last_" << r.tail << ' ' << format_double(r.gap_sup) << '\n'
     << "converges " << (r.gap_inf > 0.0 ? "no" : "yes") << '\n';
}

// ------------------------------------------------------------- check suite

SweepResult guarantee_sweep(std::uint64_t seed, std::size_t configs, std::size_t steps,
                            bool include_stages) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_f(0, 2);
  std::uniform_int_distribution<int> pick_pi(0, 3);
  static const char* const kPi[] = {"choiceA", "choiceB", "choiceC", "const"};
  constexpr double kHorizon = 100.0;  // catalog sups are attained early or are declared

  SweepResult out;
  const ShuOsherForm<double> euler = builtin_method("euler");
  for (std::size_t c = 0; c < configs; ++c) {
    Model model;
    model.params = {unit(rng), unit(rng), unit(rng), unit(rng)};
    switch (pick_f(rng)) {
      case 0:
        model.incidence = IncidenceFunction::linear(unit(rng));
        break;
      case 1: {
        const double c1 = unit(rng);
        const double c2 = unit(rng);
        model.incidence = IncidenceFunction::holling(c1, c2, 1.0 + unit(rng));
        break;
      }
      default: {
        const double nu = unit(rng);
        model.incidence = IncidenceFunction::media(nu, unit(rng));
        break;
      }
    }
    const char* pi_key = kPi[pick_pi(rng)];
    model.recruitment = recruitment_from_key(pi_key, unit(rng));
    const State x0 = State::make(unit(rng), unit(rng), unit(rng), unit(rng));
    const BoundReport base = bound_report(model, x0.total(), kHorizon, euler);
    const PopulationCap cap = population_cap(x0.total(), base.k_sup, model.params.mu);
    const double u = 1.0 - unit(rng);  // (0, 1]

    for (auto name : builtin_method_names()) {
      const ShuOsherForm<double> form = builtin_method(name);
      const double tau = u * form.ssp_c * base.dt_star;
      const Trajectory traj = integrate(x0, tau, steps, form, model);
      ++out.runs;
      const CheckResult nonneg = check_nonnegativity(traj, include_stages);
      const CheckResult pop = check_population_bound(traj, cap, tau / form.ssp_c);
      for (const CheckResult* r : {&nonneg, &pop}) {
        if (!r->pass) {
          out.failures.push_back({c, std::string(name), std::string(model.incidence.key()),
                                  pi_key, tau, *r->witness});
        }
      }
    }
  }
  return out;
}

std::vector<SuiteLine> run_check_suite(const ExperimentConfig& config, std::uint64_t seed,
                                       bool include_stages) {
  std::vector<SuiteLine> lines;
  const auto add = [&](std::string name, bool pass, std::string detail) {
    lines.push_back({std::move(name), pass, std::move(detail)});
  };

  const SweepResult sweep = guarantee_sweep(seed, 200, 200, include_stages);
  add("guarantee-sweep", sweep.failures.empty(),
      std::to_string(sweep.failures.size()) + " failures in " + std::to_string(sweep.runs) +
          " runs");

  {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_identity = 0.0;
    double b_max = 0.0;
    bool in_range = true;
    for (auto name : builtin_method_names()) {
      const ShuOsherForm<double> form = builtin_method(name);
      for (int k = 0; k < 50; ++k) {
        const double mu = 1.0 - unit(rng);
        const double x = unit(rng);
        const auto ab = ab_coefficients(form, x * form.r / mu, mu);
        for (Eigen::Index i = 0; i < ab.a.size(); ++i) {
          worst_identity = std::max(worst_identity, std::abs(x * ab.b[i] - (1.0 - ab.a[i])));
          b_max = std::max(b_max, ab.b[i]);
          in_range = in_range && ab.a[i] >= -1e-15 && ab.a[i] <= 1.0 + 1e-15 &&
                     ab.b[i] >= -1e-15 && ab.b[i] <= 1.0 + 1e-15;
        }
      }
    }
    add("ab-identity", worst_identity <= 1e-12, "max residual " + format_double(worst_identity));
    add("ab-unit-range", in_range, "max B_i " + format_double(b_max));
  }

  {
    const CounterexampleReport cex = counterexample();
    const bool pass = std::abs(cex.even_limit - 4.0 / 3.0) <= 1e-8 &&
                      std::abs(cex.odd_limit - 2.0 / 3.0) <= 1e-8 && cex.gap_inf > 0.2;
    add("counterexample", pass,
        "even " + format_double(cex.even_limit) + " odd " + format_double(cex.odd_limit) +
            " gap_inf " + format_double(cex.gap_inf));
  }

  {
    const Model model = config.model();
    const State x0 = config.initial_state();
    double worst = 0.0;
    for (double t : {10.0, 100.0}) {
      const double exact = exact_population(x0.total(), model.params.mu, model.recruitment, t);
      const double tau = bound_report(model, x0.total(), t, builtin_method("ssprk104")).tau_method;
      const std::vector<double> times = {t};
      const auto ref = reference_trajectory(model, x0, times, tau * std::ldexp(1.0, -10),
                                            builtin_method("ssprk104"));
      worst = std::max(worst, std::abs(ref.states[0].total() - exact));
    }
    add("population-oracle", worst <= 1e-6, "max difference " + format_double(worst));
  }

  {
    const SimulationResult sim =
        simulate(config, "ssprk104", bound_report(config.model(), config.initial_state().total(),
                                                  config.tf_simulate, builtin_method("ssprk104"))
                                         .tau_method,
                 config.tf_simulate, include_stages);
    add("simulate-at-bound", verdict_passes(sim.verdict),
        "ssprk104 at tau_t over " + format_double(config.tf_simulate));
  }
  return lines;
}

}  // namespace seirssp
