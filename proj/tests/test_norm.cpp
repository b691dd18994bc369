#include "mms/norm.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mms;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST(Norm, DualOfP1IsMaxNorm) {
  const NormSpec n = NormSpec::taxicab(3);
  const Eigen::Vector3d w(0.5, -2.0, 1.0);
  EXPECT_DOUBLE_EQ(dual_norm(n, w), 2.0);
  EXPECT_DOUBLE_EQ(n.norm(w), 3.5);
}

TEST(Norm, DualOfMaxNormIsTaxicab) {
  const NormSpec n = NormSpec::max_norm(2);
  EXPECT_DOUBLE_EQ(dual_norm(n, Eigen::Vector2d(1.0, -3.0)), 4.0);
}

TEST(Norm, DualExponentOfL4) {
  const NormSpec n = NormSpec::p_norm(4.0, 2);
  EXPECT_NEAR(n.dual_exponent(), 4.0 / 3.0, 1e-15);
  // |(1,1)|_{4/3} = 2^{3/4}
  EXPECT_NEAR(dual_norm(n, Eigen::Vector2d(1.0, 1.0)), std::pow(2.0, 0.75), 1e-14);
}

TEST(Norm, SquarePolygonMatchesMaxNorm) {
  const NormSpec sq = NormSpec::polygonal({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
  const NormSpec mx = NormSpec::max_norm(2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    const Eigen::Vector2d v(g(rng), g(rng));
    EXPECT_NEAR(sq.norm(v), mx.norm(v), 1e-12);
    EXPECT_NEAR(dual_norm(sq, v), dual_norm(mx, v), 1e-12);
  }
}

TEST(Norm, ParseAndPrintRoundTrip) {
  for (const char* text : {"p:2", "p:1", "p:inf", "p:4"}) {
    const NormSpec n = NormSpec::parse(text, 2);
    EXPECT_EQ(NormSpec::parse(n.to_string(), 2).exponent(), n.exponent());
  }
  EXPECT_TRUE(std::isinf(NormSpec::parse("p:inf", 2).exponent()));
  EXPECT_THROW(NormSpec::parse("q:2", 2), std::invalid_argument);
  EXPECT_THROW(NormSpec::p_norm(0.5, 2), std::invalid_argument);
}

TEST(Norm, EuclideanGradientSetIsTheCovector) {
  const NormSpec n = NormSpec::euclidean(3);
  const Eigen::Vector3d w(0.3, -0.1, 2.0);
  const auto set = duality_map_inverse(n, w);
  ASSERT_EQ(set.vertices.size(), 1u);
  EXPECT_NEAR((set.vertices[0] - w).norm(), 0.0, 1e-15);
}

TEST(Norm, MaxNormTieGivesSegment) {
  // dg = (1, 0) in (R^2, l_inf): dual is l1 and the gradient set is {(1, t) : |t| <= 1}
  const NormSpec n = NormSpec::max_norm(2);
  const Eigen::Vector2d dg(1.0, 0.0), df(0.0, 1.0);
  EXPECT_DOUBLE_EQ(d_pm_via_gradient_set(n, df, dg, Side::plus), 1.0);
  EXPECT_DOUBLE_EQ(d_pm_via_gradient_set(n, df, dg, Side::minus), -1.0);
}

TEST(Norm, StrictlyConvexNormsHaveEqualSides) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double p : {1.5, 2.0, 3.0}) {
    const NormSpec n = NormSpec::p_norm(p, 3);
    for (int k = 0; k < 20; ++k) {
      const Eigen::Vector3d df(u(rng), u(rng), u(rng)), dg(u(rng), u(rng), u(rng));
      EXPECT_NEAR(d_pm_via_gradient_set(n, df, dg, Side::plus), d_pm_via_gradient_set(n, df, dg, Side::minus), 1e-12);
    }
  }
}

TEST(Norm, DifferenceQuotientsAgreeOnGenericSamples) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double p : {1.0, 2.0, kInf}) {
    const NormSpec n = NormSpec::p_norm(p, 2);
    for (int k = 0; k < 50; ++k) {
      const Eigen::Vector2d df(u(rng), u(rng)), dg(u(rng), u(rng));
      for (Side s : {Side::plus, Side::minus}) {
        const auto sweep = d_pm_via_difference_quotient(n, df, dg, s, default_eps_grid());
        EXPECT_NEAR(sweep.value, d_pm_via_gradient_set(n, df, dg, s), 1e-9);
        EXPECT_LE(sweep.monotonicity_defect, 1e-10);
      }
    }
  }
}

TEST(Norm, PlusDominatesMinus) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(-2, 2);
  for (double p : {1.0, kInf}) {
    const NormSpec n = NormSpec::p_norm(p, 3);
    for (int k = 0; k < 100; ++k) {
      const Eigen::Vector3d df(u(rng), u(rng), u(rng)), dg(u(rng), u(rng), u(rng));
      EXPECT_GE(d_pm_via_gradient_set(n, df, dg, Side::plus), d_pm_via_gradient_set(n, df, dg, Side::minus));
    }
  }
}

TEST(Norm, DecreasingEpsGridRequired) {
  const NormSpec n = NormSpec::euclidean(2);
  EXPECT_THROW(d_pm_via_difference_quotient(n, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Side::plus,
                                            std::vector<double>{0.1, 0.2}),
               std::invalid_argument);
}
