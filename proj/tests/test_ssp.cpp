#include "seirssp/ssp.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <random>
#include <sstream>

using namespace seirssp;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace {

ButcherTableau<> euler() { return builtin_tableau("euler"); }
ButcherTableau<> rk22() { return builtin_tableau("ssprk22"); }

}  // namespace

TEST(KMatrix, Euler) {
  Mat expected(2, 2);
  expected << 0, 0, 1, 0;
  EXPECT_EQ(k_matrix(euler()), expected);
}

TEST(KMatrix, Ssprk22) {
  Mat expected(3, 3);
  expected << 0, 0, 0, 1, 0, 0, 0.5, 0.5, 0;
  EXPECT_EQ(k_matrix(rk22()), expected);
}

TEST(KMatrix, Ssprk33) {
  Mat expected(4, 4);
  expected << 0, 0, 0, 0, 1, 0, 0, 0, 0.25, 0.25, 0, 0, 1.0 / 6, 1.0 / 6, 2.0 / 3, 0;
  EXPECT_LE((k_matrix(builtin_tableau("ssprk33")) - expected).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(Tableau, ValidateCatchesBadInput) {
  for (auto name : builtin_method_names()) EXPECT_NO_THROW(builtin_tableau(name).validate());
  Mat a(2, 2);
  a << 0, 1, 1, 0;
  EXPECT_THROW(ButcherTableau<>::from(a, Vec::Constant(2, 0.5)).validate(), DomainError);
  Mat ok(2, 2);
  ok << 0, 0, 1, 0;
  EXPECT_THROW(ButcherTableau<>::from(ok, Vec::Constant(2, 0.4)).validate(), DomainError);
}

TEST(ShuOsher, EulerAtOne) {
  const auto conv = shu_osher_from_butcher(euler(), 1.0);
  ASSERT_TRUE(conv.feasible);
  EXPECT_EQ(conv.form.v, Vec((Vec(2) << 1, 0).finished()));
  EXPECT_EQ(conv.form.alpha(1, 0), 1.0);
}

TEST(ShuOsher, Ssprk22AtOne) {
  const auto conv = shu_osher_from_butcher(rk22(), 1.0);
  ASSERT_TRUE(conv.feasible);
  const auto& f = conv.form;
  EXPECT_NEAR(f.v[0], 1, 1e-15);
  EXPECT_NEAR(f.v[1], 0, 1e-15);
  EXPECT_NEAR(f.v[2], 0.5, 1e-15);
  EXPECT_NEAR(f.alpha(1, 0), 1, 1e-15);
  EXPECT_NEAR(f.alpha(2, 0), 0, 1e-15);
  EXPECT_NEAR(f.alpha(2, 1), 0.5, 1e-15);
}

TEST(ShuOsher, Ssprk22InfeasibleAtThree) {
  const auto conv = shu_osher_from_butcher(rk22(), 3.0);
  EXPECT_FALSE(conv.feasible);
  EXPECT_LT(conv.most_negative, -1e-12);
  // By hand: alpha_21 = r, v_2 = 1 - r, alpha_31 = (r - r^2)/2, alpha_32 = r/2.
  EXPECT_NEAR(conv.form.v[1], -2.0, 1e-14);
  EXPECT_NEAR(conv.form.alpha(2, 0), -3.0, 1e-14);
  EXPECT_NEAR(conv.form.alpha(2, 1), 1.5, 1e-14);
  EXPECT_NEAR(conv.form.v[2], 2.5, 1e-14);
}

TEST(ShuOsher, NonPositiveRThrows) {
  EXPECT_THROW(shu_osher_from_butcher(euler(), 0.0), DomainError);
  EXPECT_THROW(shu_osher_from_butcher(euler(), -1.0), DomainError);
}

TEST(ShuOsher, BuiltinInvariants) {
  for (auto name : builtin_method_names()) {
    const auto f = builtin_method(name);
    EXPECT_LE(f.consistency_residual(), 1e-12) << name;
    EXPECT_GE(f.min_coefficient(), -1e-12) << name;
    EXPECT_EQ(f.v[0], 1.0) << name;
    EXPECT_EQ(f.c_stage[f.stages()], 1.0) << name;
    for (Eigen::Index i = 0; i <= f.stages(); ++i) {
      for (Eigen::Index j = i; j <= f.stages(); ++j) EXPECT_EQ(f.alpha(i, j), 0.0);
    }
  }
}

TEST(ShuOsher, BuiltinShapes) {
  EXPECT_EQ(builtin_method("euler").stages(), 1);
  EXPECT_EQ(builtin_method("ssprk22").stages(), 2);
  EXPECT_EQ(builtin_method("ssprk33").stages(), 3);
  EXPECT_EQ(builtin_method("ssprk104").stages(), 10);
  EXPECT_EQ(builtin_method("ssprk104").ssp_c, 6.0);
  EXPECT_THROW(builtin_method("rk4"), LookupError);
}

TEST(ShuOsher, Ssprk104MatchesLowStorageFixture) {
  const auto got = builtin_method("ssprk104");
  const auto ref = ssprk104_reference_form();
  EXPECT_LE((got.alpha - ref.alpha).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((got.v - ref.v).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((got.c_stage - ref.c_stage).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ShuOsher, AmplificationRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lam(-5.0, 1.0);
  std::uniform_real_distribution<double> tau(0.01, 2.0);
  for (auto name : builtin_method_names()) {
    const auto t = builtin_tableau(name);
    for (double r : {0.5, 1.0, builtin_ssp_coefficient(name)}) {
      const auto form = shu_osher_from_butcher(t, r).form;
      for (int k = 0; k < 100; ++k) {
        const double z = lam(rng) * tau(rng);
        const double bu = butcher_amplification(t, z);
        const double so = shu_osher_amplification(form, z);
        EXPECT_LE(std::abs(bu - so), 1e-12 * std::max(1.0, std::abs(bu))) << name << " z=" << z;
      }
    }
  }
}

TEST(ShuOsher, AmplificationMatchesTaylorPolynomial) {
  // Independent oracle: stability polynomials of the three classical methods.
  for (double z : {-1.7, -0.3, 0.2}) {
    EXPECT_NEAR(butcher_amplification(rk22(), z), 1 + z + z * z / 2, 1e-15);
    EXPECT_NEAR(butcher_amplification(builtin_tableau("ssprk33"), z),
                1 + z + z * z / 2 + z * z * z / 6, 1e-15);
  }
}

TEST(SspCoefficient, Builtins) {
  EXPECT_NEAR(ssp_coefficient(euler(), 1e-10), 1.0, 1e-4);
  EXPECT_NEAR(ssp_coefficient(rk22(), 1e-10), 1.0, 1e-4);
  EXPECT_NEAR(ssp_coefficient(builtin_tableau("ssprk33"), 1e-10), 1.0, 1e-4);
  EXPECT_NEAR(ssp_coefficient(builtin_tableau("ssprk104"), 1e-10), 6.0, 1e-4);
}

TEST(SspCoefficient, FeasibilityAroundC) {
  for (auto name : builtin_method_names()) {
    const auto t = builtin_tableau(name);
    const double c = builtin_ssp_coefficient(name);
    EXPECT_TRUE(shu_osher_from_butcher(t, 0.99 * c).feasible) << name;
    EXPECT_FALSE(shu_osher_from_butcher(t, 1.01 * c).feasible) << name;
  }
}

TEST(SspCoefficient, ClassicalRk4IsZero) {
  Mat a = Mat::Zero(4, 4);
  a(1, 0) = 0.5;
  a(2, 1) = 0.5;
  a(3, 2) = 1;
  Vec b(4);
  b << 1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6;
  EXPECT_EQ(ssp_coefficient(ButcherTableau<>::from(a, b), 1e-8), 0.0);
}

TEST(SspCoefficient, LongDoubleInstantiation) {
  const auto t = builtin_tableau<long double>("ssprk33");
  EXPECT_NEAR(static_cast<double>(ssp_coefficient<long double>(t, 1e-12L)), 1.0, 1e-8);
}

TEST(ShuOsher, PrintsTable) {
  std::ostringstream os;
  os << builtin_method("ssprk22");
  EXPECT_NE(os.str().find("ssprk22"), std::string::npos);
}
