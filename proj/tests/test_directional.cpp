#include "mms/directional.hpp"
#include "mms/sobolev.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mms;

namespace {

ScalarField local_slope_squared_oracle(const FiniteMMS& s, const ScalarField& g) {
  ScalarField out = ScalarField::Zero(s.size());
  for (int x = 0; x < s.size(); ++x)
    for (int y = 0; y < s.size(); ++y) {
      const double d = s.distance(x, y);
      if (d > 0.0 && d <= s.h()) out[x] = std::max(out[x], std::abs(g[y] - g[x]) / d);
    }
  return out.cwiseAbs2();
}

}  // namespace

TEST(Directional, SingleActiveNeighbour) {
  // g increments (-1, 2) at the middle point: the right neighbour is active
  const FiniteMMS s = build_path_graph(3);
  const DirectionalField d = d_pm_exact(s, Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 1, 3));
  EXPECT_DOUBLE_EQ(d.dplus[1], 2.0);
  EXPECT_DOUBLE_EQ(d.dminus[1], 2.0);
}

TEST(Directional, TieSplitsTheSides) {
  // g increments (-1, 1): both neighbours active, one-sided derivatives are max / min of (-b0, b2)
  const FiniteMMS s = build_path_graph(3);
  const DirectionalField d = d_pm_exact(s, Eigen::Vector3d(1, 0, 1), Eigen::Vector3d(0, 1, 2));
  EXPECT_DOUBLE_EQ(d.dplus[1], 1.0);
  EXPECT_DOUBLE_EQ(d.dminus[1], -1.0);
}

TEST(Directional, SweepMatchesExact) {
  const FiniteMMS s = build_euclidean_grid({8, 8}, 1.0, NormSpec::max_norm(2));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> u(-3, 3);
  std::vector<double> eps;
  for (int k = 10; k <= 30; k += 2) eps.push_back(std::ldexp(1.0, -k));
  for (int trial = 0; trial < 5; ++trial) {
    ScalarField f(s.size()), g(s.size());
    for (int i = 0; i < s.size(); ++i) f[i] = u(rng), g[i] = u(rng);
    for (double p : {2.0, 3.0}) {
      const DirectionalField a = d_pm_exact(s, f, g, p), b = d_pm_sweep(s, f, g, p, eps);
      EXPECT_LE((a.dplus - b.dplus).cwiseAbs().maxCoeff(), 1e-6);
      EXPECT_LE((a.dminus - b.dminus).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(Directional, PlusDominatesMinus) {
  const FiniteMMS s = build_euclidean_grid({10, 10}, 0.1, NormSpec::taxicab(2));
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField f = random_field(s, rng), g = random_field(s, rng);
    const DirectionalField d = d_pm_exact(s, f, g);
    EXPECT_GE((d.dplus - d.dminus).minCoeff(), -1e-12);
  }
}

TEST(Directional, SelfDerivativeIsSquaredSlope) {
  const FiniteMMS s = build_euclidean_grid({10, 10}, 0.1, NormSpec::max_norm(2));
  std::mt19937_64 rng(9);
  const ScalarField g = random_field(s, rng);
  const DirectionalField d = d_pm_exact(s, g, g);
  const ScalarField slope = local_slope_squared_oracle(s, g);
  EXPECT_LE((d.dplus - slope).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((d.dminus - slope).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Directional, ChainRuleBothSides) {
  const FiniteMMS s = build_euclidean_grid({12, 12}, 0.1, NormSpec::max_norm(2));
  std::mt19937_64 rng(10);
  const ScalarField f = random_field(s, rng), g = random_field(s, rng);
  const PiecewiseAffine phi({-0.3, 0.4}, {-2.0, 0.5, 3.0}, 0.1);
  EXPECT_TRUE(chain_rule_check(s, f, g, phi, ChainSide::inner).pass());
  EXPECT_TRUE(chain_rule_check(s, f, g, phi, ChainSide::outer).pass());
}

TEST(Directional, LeibnizWithRemainder) {
  const FiniteMMS s = build_euclidean_grid({10, 10}, 0.1, NormSpec::p_norm(1.0, 2));
  std::mt19937_64 rng(11);
  const ScalarField f1 = random_field(s, rng), f2 = random_field(s, rng), g = random_field(s, rng);
  const LeibnizReport r = leibniz_check(s, f1, f2, g);
  EXPECT_TRUE(r.pass()) << r.min_slack;
  EXPECT_GE(r.min_slack, r.min_raw_slack - r.max_remainder - 1e-12);
}

TEST(Directional, LinearityOnEuclideanGrid) {
  const FiniteMMS s = build_euclidean_grid({10, 10}, 0.1);
  std::mt19937_64 rng(12);
  const ScalarField f1 = random_field(s, rng), f2 = random_field(s, rng), g = random_field(s, rng);
  EXPECT_TRUE(linearity_check(s, f1, f2, g, 0.7, -1.3).pass());
}

TEST(Directional, DispatchUsesGammaOnHilbertGrids) {
  const FiniteMMS s = build_euclidean_grid({6, 6}, 0.2);
  std::mt19937_64 rng(13);
  const ScalarField f = random_field(s, rng), g = random_field(s, rng);
  const DirectionalField d = d_pm(s, f, g);
  const ScalarField G = carre_du_champ(s, f, g);
  EXPECT_LE((d.dplus - G).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((d.dminus - G).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Directional, BadExponentThrows) {
  const FiniteMMS s = build_path_graph(3);
  EXPECT_ANY_THROW(d_pm_exact(s, Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), 0.5));
}
