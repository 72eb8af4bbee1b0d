#include "seirssp/bounds.hpp"
#include "seirssp/errors.hpp"
#include "seirssp/integrators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace seirssp;

namespace {

Model baseline_model(const RecruitmentFunction& pi) {
  return Model{ModelParams{0.05, 0.25, 0.1867, 0.011}, IncidenceFunction::media(0.0115, 0.001), pi};
}

const State kBaselineX0 = State::make(0.2, 0.6, 0.2, 0.0);

Model random_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Model m;
  m.params = {u(rng), u(rng), u(rng), u(rng)};
  m.incidence = IncidenceFunction::holling(u(rng), u(rng), 2);
  m.recruitment = RecruitmentFunction::choice_a(u(rng));
  return m;
}

}  // namespace

TEST(EulerStep, ZeroStepIsIdentity) {
  const Model m = baseline_model(RecruitmentFunction::choice_c(0.05));
  const State x = State::make(1, 1, 1, 1);
  const State y = euler_step(x, 0.0, m);
  EXPECT_EQ(y.y, x.y);
  EXPECT_EQ(y.t, x.t);
}

TEST(EulerStep, ConservesWithoutBirthsOrDeaths) {
  Model m{ModelParams{0, 0.3, 0.2, 0.1}, IncidenceFunction::linear(0.8), RecruitmentFunction::constant(0)};
  const State x = State::make(0.5, 0.2, 0.2, 0.1);
  EXPECT_NEAR(euler_step(x, 0.7, m).total(), x.total(), 1e-14 * x.total());
}

TEST(EulerStep, CounterexampleFirstStep) {
  const Model m{ModelParams{1, 0, 0, 0}, IncidenceFunction::linear(0.0),
                RecruitmentFunction::counterexample_cosine()};
  const State y = euler_step(State::make(2, 0, 0, 0), 0.5, m);
  EXPECT_NEAR(y.total(), 1.0, 1e-15);
  EXPECT_EQ(y.t, 0.5);
}

TEST(EulerStep, PopulationRecurrence) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 200; ++k) {
    const Model m = random_model(rng);
    const State x = State::make(u(rng), u(rng), u(rng), u(rng), 10 * u(rng));
    const double tau = u(rng);
    const double expect = (1 - tau * m.params.mu) * x.total() + tau * m.recruitment(x.t);
    EXPECT_LE(std::abs(euler_step(x, tau, m).total() - expect), 1e-12 * (1 + x.total()));
  }
}

TEST(SspStep, EulerReductionIsBitwise) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  const auto form = builtin_method("euler");
  for (int k = 0; k < 100; ++k) {
    const Model m = random_model(rng);
    const State x = State::make(u(rng), u(rng), u(rng), u(rng), u(rng));
    const double tau = 3 * u(rng);
    const State a = euler_step(x, tau, m);
    const State b = ssp_rk_step(x, tau, form, m);
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.t, b.t);
  }
}

TEST(SspStep, ConservationForAllBuiltins) {
  const Model m{ModelParams{0, 0.25, 0.19, 0.01}, IncidenceFunction::media(0.5, 0.01),
                RecruitmentFunction::constant(0)};
  for (auto name : builtin_method_names()) {
    const Trajectory tr = integrate(kBaselineX0, 0.5, 400, builtin_method(name), m);
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
      EXPECT_LE(std::abs(tr.states[k].total() - 1.0), (k + 1) * 1e-13) << name << " step " << k;
    }
  }
}

TEST(SspStep, StageRecruitmentExpansion) {
  // With only recruitment acting, N grows by (tau/C)·sum_j gamma_{m+1,j}·Pi(t + c_j·tau).
  const Model m{ModelParams{0, 0, 0, 0}, IncidenceFunction::linear(0.0),
                RecruitmentFunction::choice_b(0.3)};
  for (auto name : builtin_method_names()) {
    const auto form = builtin_method(name);
    const auto g = gamma_coefficients(form);
    const Eigen::Index last = form.stages();
    const double tau = 0.7;
    const Trajectory tr = integrate(State::make(1, 0.5, 0.25, 0.25), tau, 50, form, m);
    for (std::size_t n = 1; n < tr.states.size(); ++n) {
      const double t = tr.states[n - 1].t;
      double sum = 0;
      for (Eigen::Index j = 0; j < last; ++j) sum += g(last, j) * m.recruitment(t + form.c_stage[j] * tau);
      const double expect = tr.states[n - 1].total() + tau / form.ssp_c * sum;
      EXPECT_LE(std::abs(tr.states[n].total() - expect), 1e-12 * expect) << name << " step " << n;
    }
  }
}

TEST(SspStep, LinearProblemOrder) {
  // u' = -u in S only: compare with the exact exponential.
  const Model m{ModelParams{1, 0, 0, 0}, IncidenceFunction::linear(0.0), RecruitmentFunction::constant(0)};
  const int orders[] = {1, 2, 3, 4};
  int idx = 0;
  for (auto name : builtin_method_names()) {
    const auto form = builtin_method(name);
    const double e1 = std::abs(integrate(State::make(1, 0, 0, 0), 0.1, 10, form, m).states.back().s() - std::exp(-1.0));
    const double e2 = std::abs(integrate(State::make(1, 0, 0, 0), 0.05, 20, form, m).states.back().s() - std::exp(-1.0));
    EXPECT_NEAR(std::log2(e1 / e2), orders[idx++], 0.15) << name;
  }
}

TEST(Integrate, ZeroStepsGivesInitialState) {
  const Trajectory tr = integrate(kBaselineX0, 1.0, 0, builtin_method("ssprk22"), baseline_model(RecruitmentFunction::choice_c(0.05)));
  ASSERT_EQ(tr.states.size(), 1u);
  EXPECT_EQ(tr.states[0].y, kBaselineX0.y);
  EXPECT_EQ(tr.steps(), 0u);
}

TEST(Integrate, TimeGrid) {
  const Trajectory tr = integrate(kBaselineX0, 0.3, 1000, builtin_method("ssprk33"), baseline_model(RecruitmentFunction::choice_a(0.05)));
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    EXPECT_LE(std::abs(tr.states[k].t - 0.3 * k), 1e-9 * (1 + tr.states[k].t));
  }
}

TEST(Integrate, StageMinBelowStepMin) {
  const Trajectory tr = integrate(kBaselineX0, 4.8, 7, builtin_method("ssprk22"), baseline_model(RecruitmentFunction::choice_c(0.05)));
  double step_min = INFINITY;
  for (const auto& s : tr.states) step_min = std::min(step_min, s.y.minCoeff());
  EXPECT_LE(tr.stage_min, step_min);
  EXPECT_EQ(tr.stage_minima.size(), tr.steps());
}

TEST(Integrate, Ssprk22ThresholdPair) {
  const Model m = baseline_model(RecruitmentFunction::choice_c(0.05));
  const auto form = builtin_method("ssprk22");
  const Trajectory good = integrate(kBaselineX0, 3.3, static_cast<std::size_t>(std::ceil(30 / 3.3)), form, m);
  for (const auto& s : good.states) EXPECT_GE(s.y.minCoeff(), -1e-12);
  const Trajectory bad = integrate(kBaselineX0, 4.8, static_cast<std::size_t>(std::ceil(30 / 4.8)), form, m);
  bool negative_i = false;
  for (const auto& s : bad.states) negative_i = negative_i || s.i() < 0;
  EXPECT_TRUE(negative_i);
}

TEST(Integrate, Deterministic) {
  const Model m = baseline_model(RecruitmentFunction::choice_a(0.05));
  const auto form = builtin_method("ssprk104");
  const Trajectory a = integrate(kBaselineX0, 2.0, 500, form, m);
  const Trajectory b = integrate(kBaselineX0, 2.0, 500, form, m);
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) EXPECT_EQ(a.states[k].y, b.states[k].y);
}

TEST(Integrate, OverflowReportsStep) {
  const Model m{ModelParams{0, 0, 0, 0}, IncidenceFunction::linear(1.0), RecruitmentFunction::constant(0)};
  // S·I feeds E, which never drains: with huge tau the state blows up.
  try {
    integrate(State::make(1e200, 0, 1e200, 0), 1e200, 50, builtin_method("euler"), m);
    FAIL() << "expected overflow";
  } catch (const OverflowError& e) {
    EXPECT_GE(e.step(), 1u);
    EXPECT_LE(e.step(), 50u);
  }
}

TEST(Integrate, BadArguments) {
  const Model m = baseline_model(RecruitmentFunction::choice_a(0.05));
  EXPECT_THROW(integrate(kBaselineX0, -1.0, 3, builtin_method("euler"), m), DomainError);
  EXPECT_THROW(integrate(kBaselineX0, 0.0, 3, builtin_method("euler"), m), DomainError);
}

TEST(Csv, HeaderAndRoundTrip) {
  std::ostringstream os;
  write_trajectory_csv(os, {State::make(0.1, 0.2, 0.3, 1.0 / 3.0, 0.5)});
  const std::string out = os.str();
  EXPECT_EQ(out.substr(0, out.find('\n')), "t,S,E,I,R,N");
  EXPECT_NE(out.find("0.3333333333333333"), std::string::npos);
  EXPECT_EQ(std::stod(format_double(0.1 + 0.2)), 0.1 + 0.2);
}
