#include "mms/fields.hpp"
#include "mms/heatflow.hpp"
#include "mms/sobolev.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mms;

TEST(HeatFlow, TwoNodeImplicitStep) {
  // (I + K) f+ = f with K = [[1,-1],[-1,1]] and f = (1, 0)
  const FiniteMMS s = build_path_graph(2);
  const ScalarField f = heat_step_p2(s, Eigen::Vector2d(1.0, 0.0), 1.0);
  EXPECT_NEAR(f[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(f[1], 1.0 / 3.0, 1e-15);
}

TEST(HeatFlow, MassConservedAndConstantsFixed) {
  const FiniteMMS s = build_euclidean_grid({10, 10}, 0.1);
  std::mt19937_64 rng(21);
  const ScalarField f = random_field(s, rng);
  const FlowTrajectory tr = heat_flow_p2(s, f, 1e-3, 20);
  ASSERT_EQ(tr.states.size(), 21u);
  for (const auto& u : tr.states) EXPECT_NEAR(u.dot(s.weights()), f.dot(s.weights()), 1e-12);
  for (std::size_t k = 1; k < tr.energies.size(); ++k) EXPECT_LE(tr.energies[k], tr.energies[k - 1] + 1e-15);
  const ScalarField c = ScalarField::Constant(s.size(), 2.5);
  EXPECT_LE((heat_step_p2(s, c, 0.1) - c).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(HeatFlow, NewtonAtPTwoMatchesLinearSolve) {
  const FiniteMMS s = build_euclidean_grid({15}, 1.0 / 14);
  std::mt19937_64 rng(22);
  const ScalarField f = random_field(s, rng);
  const FlowTrajectory a = heat_flow_p2(s, f, 1e-3, 5), b = heat_flow_p(s, f, 2.0, 1e-3, 5);
  for (int k = 0; k <= 5; ++k) EXPECT_LE((a.states[k] - b.states[k]).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(HeatFlow, PNotTwoStaysInRange) {
  const FiniteMMS s = build_euclidean_grid({15}, 1.0 / 14);
  std::mt19937_64 rng(23);
  const ScalarField f = random_field(s, rng);
  for (double p : {1.5, 3.0}) {
    const FlowTrajectory tr = heat_flow_p(s, f, p, 1e-3, 5);
    for (const auto& u : tr.states) {
      EXPECT_GE(u.minCoeff(), f.minCoeff() - 1e-9);
      EXPECT_LE(u.maxCoeff(), f.maxCoeff() + 1e-9);
      EXPECT_NEAR(u.dot(s.weights()), f.dot(s.weights()), 1e-9);
    }
  }
  EXPECT_ANY_THROW(heat_flow_p(s, f, 1.0, 1e-3, 1));
}

TEST(HeatFlow, SemigroupOnTwoPoints) {
  const FiniteMMS s = build_complete_graph(2);
  const HeatSemigroup H(s);
  for (double t : {0.1, 1.0, 3.0}) {
    const ScalarField u = H.apply(Eigen::Vector2d(1.0, 0.0), t);
    EXPECT_NEAR(u[0], 0.5 * (1.0 + std::exp(-2.0 * t)), 1e-14);
    EXPECT_NEAR(u[1], 0.5 * (1.0 - std::exp(-2.0 * t)), 1e-14);
  }
}

TEST(HeatFlow, SemigroupIdentities) {
  const FiniteMMS s = build_euclidean_grid({8, 8}, 0.125);
  const SemigroupReport r = semigroup_identities(s, {0.01, 0.05}, 3);
  EXPECT_LE(r.self_adjointness, 1e-10);
  EXPECT_LE(r.commutation, 1e-10);
  EXPECT_LE(r.semigroup_property, 1e-10);
}

TEST(HeatFlow, QuadraticEntropyDissipates) {
  const FiniteMMS s = build_euclidean_grid({20}, 0.05);
  std::mt19937_64 rng(24);
  const FlowTrajectory tr = heat_flow_p2(s, random_field(s, rng), 1e-3, 10);
  EXPECT_GE(entropy_dissipation_check(s, tr, EntropyFunction::quadratic()).min_step_slack, -1e-12);
}

TEST(HeatFlow, EntropyDerivatives) {
  const EntropyFunction u3 = EntropyFunction::power(3.0);
  for (double z : {0.5, 1.0, 2.0}) EXPECT_NEAR(u3.d2(z), std::pow(z, -2.0), 1e-14);
  const EntropyFunction b = EntropyFunction::boltzmann();
  EXPECT_NEAR(b.u(std::exp(1.0)), 0.0, 1e-14);
  EXPECT_NEAR(b.d1(2.0), std::log(2.0), 1e-14);
}

TEST(HeatFlow, ExtrapolationIsExactOnPolynomials) {
  const std::vector<double> x{0.4, 0.2, 0.1, 0.05};
  std::vector<double> y;
  for (double v : x) y.push_back(1.5 - 2.0 * v + 0.25 * v * v * v);
  EXPECT_NEAR(extrapolate_to_zero(x, y), 1.5, 1e-13);
}

TEST(HeatFlow, HeatVariantOfTheLaplacian) {
  const FiniteMMS s = build_cycle_graph(9);
  std::mt19937_64 rng(25);
  std::normal_distribution<double> n;
  ScalarField f(9), g(9);
  for (int i = 0; i < 9; ++i) f[i] = n(rng), g[i] = n(rng);
  const HeatVariantEstimate e = heat_laplacian_variant(s, g, f, {1e-3, 5e-4, 2.5e-4, 1.25e-4});
  EXPECT_NEAR(e.reference, -dirichlet_form(s, f, g), 1e-12);
  EXPECT_LE(e.relative_error, 1e-10);
}
