#include "seirssp/bounds.hpp"
#include "seirssp/checks.hpp"
#include "seirssp/errors.hpp"
#include "seirssp/reference.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace seirssp;

namespace {

Model baseline_model(const RecruitmentFunction& pi) {
  return Model{ModelParams{0.05, 0.25, 0.1867, 0.011}, IncidenceFunction::media(0.0115, 0.001), pi};
}

const State kBaselineX0 = State::make(0.2, 0.6, 0.2, 0.0);

// N' = Pi - mu·N by plain Euler on a fine grid.
double fine_euler_population(double n0, double mu, const RecruitmentFunction& pi, double t, long steps) {
  const double h = t / steps;
  double n = n0;
  for (long k = 0; k < steps; ++k) n += h * (pi(k * h) - mu * n);
  return n;
}

}  // namespace

TEST(ExactPopulation, NoRecruitment) {
  for (double t : {0.0, 1.0, 17.5, 300.0}) {
    EXPECT_NEAR(exact_population(2.0, 0.3, RecruitmentFunction::constant(0.0), t), 2 * std::exp(-0.3 * t), 1e-15);
  }
}

TEST(ExactPopulation, ConstantTendsToFixedPoint) {
  EXPECT_NEAR(exact_population(5.0, 0.05, RecruitmentFunction::constant(0.2), 2000.0), 4.0, 1e-10);
  EXPECT_EQ(exact_population(1.0, 0.0, RecruitmentFunction::constant(0.5), 4.0), 3.0);
}

TEST(ExactPopulation, ChoiceBAgainstFineEuler) {
  const auto pi = RecruitmentFunction::choice_b(0.05);
  const double q = exact_population(1.0, 0.05, pi, 1000.0);
  EXPECT_NEAR(q, fine_euler_population(1.0, 0.05, pi, 1000.0, 1000000), 1e-6);
}

TEST(ExactPopulation, ChoiceAAgainstFineEulerShortHorizon) {
  const auto pi = RecruitmentFunction::choice_a(0.05);
  EXPECT_NEAR(exact_population(1.0, 0.05, pi, 10.0), fine_euler_population(1.0, 0.05, pi, 10.0, 1000000), 1e-6);
}

TEST(ExactPopulation, Errors) {
  const auto pi = RecruitmentFunction::choice_b(0.05);
  EXPECT_THROW(exact_population(1.0, 0.05, pi, -1.0), DomainError);
  EXPECT_THROW(exact_population(1.0, 0.05, pi, 1.0, 0.0), DomainError);
  const auto jump = RecruitmentFunction::custom([](double t) { return t < 0.3 ? 0.0 : 1.0; }, 1.0, 10.0);
  try {
    exact_population(1.0, 0.05, jump, 1.0, 1e-13);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_GT(e.achieved(), 0.0);
  }
}

TEST(GridStep, ShrinksOntoOutputs) {
  const std::vector<double> offsets = {10, 20, 30};
  EXPECT_DOUBLE_EQ(grid_step(offsets, 3.0), 2.5);
  EXPECT_DOUBLE_EQ(grid_step(offsets, 20.0 / 1024), 20.0 / 1024);
  EXPECT_DOUBLE_EQ(grid_step(std::vector<double>{0.0}, 0.7), 0.7);
  EXPECT_THROW(grid_step(std::vector<double>{10, 15, 27}, 1.0), DomainError);
  EXPECT_THROW(grid_step(std::vector<double>{-1}, 1.0), DomainError);
}

TEST(ReferenceTrajectory, TimeZeroIsInitialState) {
  const std::vector<double> times = {0.0, 10.0};
  const auto ref = reference_trajectory(baseline_model(RecruitmentFunction::choice_a(0.05)), kBaselineX0, times, 0.1,
                                        builtin_method("ssprk104"));
  EXPECT_EQ(ref.states[0].y, kBaselineX0.y);
  EXPECT_EQ(ref.states[0].t, 0.0);
  EXPECT_EQ(ref.method, "ssprk104");
  EXPECT_EQ(ref.steps, 100u);
}

TEST(ReferenceTrajectory, AgreesWithQuadrature) {
  for (const auto& pi : {RecruitmentFunction::choice_a(0.05), RecruitmentFunction::choice_b(0.05),
                         RecruitmentFunction::choice_c(0.05)}) {
    const Model m = baseline_model(pi);
    const std::vector<double> times = {10, 100, 1000};
    const auto ref = reference_trajectory(m, kBaselineX0, times, 20.0 / 1024, builtin_method("ssprk104"));
    for (std::size_t k = 0; k < times.size(); ++k) {
      EXPECT_NEAR(ref.states[k].total(), exact_population(1.0, 0.05, pi, times[k]), 1e-6) << pi.key();
      EXPECT_NEAR(ref.states[k].t, times[k], 1e-9 * times[k]);
    }
  }
}

TEST(ReferenceTrajectory, GridIndependent) {
  const Model m = baseline_model(RecruitmentFunction::choice_a(0.05));
  std::vector<double> times;
  for (int k = 1; k <= 100; ++k) times.push_back(10.0 * k);
  const auto a = reference_trajectory(m, kBaselineX0, times, 20.0 / 1024, builtin_method("ssprk104"));
  const auto b = reference_trajectory(m, kBaselineX0, times, 10.0 / 1024, builtin_method("ssprk104"));
  double worst = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    worst = std::max(worst, (a.states[k].y - b.states[k].y).lpNorm<Eigen::Infinity>());
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(ReferenceTrajectory, NonNegative) {
  const Model m = baseline_model(RecruitmentFunction::choice_c(0.05));
  const auto form = builtin_method("ssprk104");
  const Trajectory tr = integrate(kBaselineX0, 20.0 / 1024, 51200, form, m);
  EXPECT_TRUE(check_nonnegativity(tr, true).pass);
}
