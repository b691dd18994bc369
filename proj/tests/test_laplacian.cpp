#include "mms/laplacian.hpp"
#include "mms/sobolev.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mms;

namespace {

ScalarField bump(const FiniteMMS& s, const Eigen::VectorXd& c, double r) {
  ScalarField f(s.size());
  for (int i = 0; i < s.size(); ++i) {
    const double q = (s.coords().row(i).transpose() - c).squaredNorm() / (r * r);
    f[i] = q < 1.0 ? std::pow(1.0 - q, 3) : 0.0;
  }
  return f;
}

}  // namespace

TEST(Laplacian, SecondDifferenceOfHalfSquare) {
  const FiniteMMS s = build_euclidean_grid({21}, 0.05);
  const ScalarField x = s.coords().col(0);
  const ScalarField Lg = graph_laplacian(s) * (0.5 * x.cwiseAbs2()).eval();
  for (int i = 1; i + 1 < s.size(); ++i) EXPECT_NEAR(Lg[i], 1.0, 1e-10);
}

TEST(Laplacian, IntervalCollapsesOnHilbertGrid) {
  const FiniteMMS s = build_euclidean_grid({20, 20}, 0.05);
  std::mt19937_64 rng(14);
  const ScalarField g = random_field(s, rng);
  const ScalarField f = bump(s, Eigen::Vector2d(0.45, 0.5), 0.3);
  ASSERT_TRUE(is_admissible_test(s, f));
  const LaplacianInterval I = laplacian_interval(s, g, f);
  EXPECT_NEAR(I.width(), 0.0, 1e-14);
  const ScalarField Lg = graph_laplacian(s) * g;
  EXPECT_NEAR(I.lower, m_inner(s, f, Lg), 1e-10 * (1.0 + std::abs(I.lower)));
}

TEST(Laplacian, MaxNormIntervalHasWidth) {
  const FiniteMMS s = build_euclidean_grid({20, 20}, 0.05, NormSpec::max_norm(2));
  const ScalarField g = s.coords().col(0);
  const ScalarField f = bump(s, Eigen::Vector2d(0.45, 0.5), 0.3);
  const LaplacianInterval I = laplacian_interval(s, g, f);
  EXPECT_GT(I.width(), 1e-3);
}

TEST(Laplacian, NonAdmissibleTestThrows) {
  const FiniteMMS s = build_euclidean_grid({10, 10}, 0.1);
  EXPECT_ANY_THROW(laplacian_interval(s, ScalarField::Zero(s.size()), ScalarField::Ones(s.size())));
}

TEST(Laplacian, CompleteGraphGamma2ClosedForm) {
  // K_2: Gamma(f,f) = 1/2 and Gamma_2(f) = 1 for f = (1, 0), so Gamma_2 = 2 Gamma
  const FiniteMMS s = build_complete_graph(2);
  const Eigen::Vector2d f(1.0, 0.0);
  const ScalarField G = gamma(s, f, f), G2 = gamma2(s, f);
  EXPECT_DOUBLE_EQ(G[0], 0.5);
  EXPECT_DOUBLE_EQ(G2[0], 1.0);
  EXPECT_DOUBLE_EQ(G2[1], 1.0);
  EXPECT_NEAR(bochner_diagnostic(s, f, 2.0).min_slack, 0.0, 1e-15);
  EXPECT_LT(bochner_diagnostic(s, f, 2.5).min_slack, 0.0);
}

TEST(Laplacian, Gamma2MatchesDenseOracleOnCycle) {
  const FiniteMMS s = build_cycle_graph(5);
  const Eigen::MatrixXd W = Eigen::MatrixXd(s.conductances());
  Eigen::MatrixXd L = W;
  L.diagonal() = -W.rowwise().sum();
  std::mt19937_64 rng(15);
  std::normal_distribution<double> n;
  ScalarField f(5);
  for (auto& v : f) v = n(rng);
  const ScalarField Gff = 0.5 * (L * f.cwiseAbs2() - 2.0 * f.cwiseProduct(L * f));
  const ScalarField Lf = L * f;
  const ScalarField Gflf = 0.5 * (L * f.cwiseProduct(Lf) - f.cwiseProduct(L * Lf) - Lf.cwiseProduct(Lf));
  const ScalarField G2 = 0.5 * (L * Gff) - Gflf;
  EXPECT_LE((gamma2(s, f) - G2).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((gamma(s, f, f) - carre_du_champ(s, f, f)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Laplacian, LeibnizAndChainRuleOfDiffusionOperator) {
  // Flat grid Laplacian is a diffusion operator only up to O(spacing^2): residuals shrink with the grid.
  std::vector<double> chain;
  for (int n : {21, 41}) {
    const FiniteMMS s = build_euclidean_grid({n}, 1.0 / (n - 1));
    const ScalarField x = s.coords().col(0);
    const ScalarField g = (3.0 * x).array().sin();
    const C11Map phi{[](double z) { return std::exp(z); }, [](double z) { return std::exp(z); },
                     [](double z) { return std::exp(z); }};
    chain.push_back(chain_rule_laplacian_check(s, g, phi).max_residual);
    const LeibnizLaplacianReport r = leibniz_laplacian_check(s, g, x.cwiseAbs2());
    EXPECT_LE(r.max_symmetry_residual, 1e-12);
  }
  EXPECT_LT(chain[1], 0.3 * chain[0]);
}

TEST(Laplacian, ChangeOfMeasure) {
  const FiniteMMS s = build_euclidean_grid({15, 15}, 0.1);
  std::mt19937_64 rng(16);
  const ScalarField g = random_field(s, rng), V = 0.3 * random_field(s, rng);
  const ChangeOfMeasureReport r = change_of_measure_check(s, g, V);
  EXPECT_LT(r.max_density_residual, 0.05 * (1.0 + (graph_laplacian(s) * g).cwiseAbs().maxCoeff()));
}

TEST(Laplacian, MembershipOfTheGraphLaplacian) {
  const FiniteMMS s = build_euclidean_grid({12, 12}, 0.1);
  std::mt19937_64 rng(17);
  const ScalarField g = random_field(s, rng);
  const SignedMeasure mu = (graph_laplacian(s) * g).cwiseProduct(s.weights());
  std::vector<ScalarField> basis;
  for (double cx : {0.4, 0.55, 0.7}) basis.push_back(bump(s, Eigen::Vector2d(cx, 0.55), 0.25));
  const MembershipReport r = membership_check(s, g, mu, basis);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.homogeneity);
}
