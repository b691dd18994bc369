#include "mms/space.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mms;

TEST(Space, GridSizesWeightsAndScale) {
  const FiniteMMS s = build_euclidean_grid({5, 4}, 0.25);
  EXPECT_EQ(s.size(), 20);
  EXPECT_DOUBLE_EQ(s.weight(0), 0.0625);
  EXPECT_DOUBLE_EQ(s.h(), 0.375);
  EXPECT_NEAR(s.distance(0, 19), std::hypot(1.0, 0.75), 1e-15);
  EXPECT_EQ(s.gradient_model(), GradientModel::carre_du_champ);
}

TEST(Space, NonEuclideanGridUsesSlope) {
  const FiniteMMS s = build_euclidean_grid({4, 4}, 1.0, NormSpec::max_norm(2));
  EXPECT_EQ(s.gradient_model(), GradientModel::metric_slope);
  EXPECT_DOUBLE_EQ(s.distance(0, 15), 3.0);
}

TEST(Space, NeighbourGraphIsSymmetric) {
  const FiniteMMS s = build_euclidean_grid({6, 6}, 1.0);
  const auto& g = s.neighbors();
  for (int i = 0; i < s.size(); ++i)
    for (int k = g.begin(i); k < g.end(i); ++k) {
      const int j = g.target(k);
      EXPECT_LE(g.dist(k), s.h());
      bool back = false;
      for (int l = g.begin(j); l < g.end(j); ++l) back |= g.target(l) == i;
      EXPECT_TRUE(back);
    }
  // h = 1.5: axis and diagonal neighbours
  EXPECT_EQ(g.degree(14), 8);
}

TEST(Space, SpherePoleToEquator) {
  const FiniteMMS s = build_sphere(2, 0.2);
  EXPECT_NEAR(s.total_mass(), 4.0 * std::numbers::pi, 1e-10);
  const int north = nearest_point(s, Eigen::Vector3d(0, 0, 1));
  const int equator = nearest_point(s, Eigen::Vector3d(1, 0, 0));
  const Eigen::VectorXd a = s.coords().row(north), b = s.coords().row(equator);
  EXPECT_NEAR(s.distance(north, equator), std::acos(std::clamp(a.dot(b), -1.0, 1.0)), 1e-12);
  EXPECT_NEAR(model_distance(s, Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0)), std::numbers::pi / 2, 1e-12);
}

TEST(Space, HyperbolicDistanceFromOrigin) {
  const FiniteMMS s = build_hyperbolic_disk(0.6, 0.05);
  for (double r : {0.1, 0.3, 0.55})
    EXPECT_NEAR(model_distance(s, Eigen::Vector2d(0, 0), Eigen::Vector2d(r, 0)), 2.0 * std::atanh(r), 1e-12);
  // conformal weights exceed the Euclidean cell area
  EXPECT_GT(s.total_mass(), std::numbers::pi * 0.36 * 0.9);
}

TEST(Space, ValidateDetectsTriangleViolation) {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 3, 1, 0, 1, 3, 1, 0;
  const FiniteMMS bad = from_distance_matrix(d, Eigen::Vector3d::Ones(), 1.5);
  const ValidationReport r = validate_metric(bad);
  EXPECT_FALSE(r.pass());
  EXPECT_NEAR(r.max_triangle_violation, 1.0, 1e-15);

  d(0, 2) = d(2, 0) = 2.0;
  EXPECT_TRUE(validate_metric(from_distance_matrix(d, Eigen::Vector3d::Ones(), 1.5)).pass());
}

TEST(Space, ValidateDetectsAsymmetry) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1.5, 0;
  EXPECT_FALSE(validate_metric(from_distance_matrix(d, Eigen::Vector2d::Ones(), 2.0)).pass());
}

TEST(Space, BadInputsThrow) {
  EXPECT_THROW(build_euclidean_grid({}, 1.0), Error);
  EXPECT_THROW(build_euclidean_grid({3}, -1.0), Error);
  EXPECT_THROW(build_hyperbolic_disk(1.2, 0.1), Error);
  EXPECT_THROW(from_distance_matrix(Eigen::MatrixXd::Zero(2, 2), Eigen::Vector3d::Ones(), 1.0), Error);
}

TEST(Space, GraphFamilies) {
  const FiniteMMS c = build_cycle_graph(6);
  EXPECT_DOUBLE_EQ(c.distance(0, 3), 3.0);
  EXPECT_DOUBLE_EQ(c.distance(0, 5), 1.0);
  const FiniteMMS k = build_complete_graph(5);
  for (int j = 1; j < 5; ++j) EXPECT_DOUBLE_EQ(k.distance(0, j), 1.0);
  const FiniteMMS p = build_path_graph(4);
  EXPECT_DOUBLE_EQ(p.distance(0, 3), 3.0);
  EXPECT_TRUE(validate_metric(c).pass());
}

TEST(Space, BallVolumeCountsOpenBall) {
  const FiniteMMS p = build_path_graph(7);
  EXPECT_DOUBLE_EQ(ball_volume(p, 3, 2.0), 3.0);
  EXPECT_DOUBLE_EQ(ball_volume(p, 3, 2.5), 5.0);
  EXPECT_DOUBLE_EQ(ball_volume(p, 0, 100.0), 7.0);
}

TEST(Space, WithMassesAndRestrict) {
  const FiniteMMS p = build_path_graph(3);
  const FiniteMMS w = with_masses(p, Eigen::Vector3d(0.0, std::log(2.0), 0.0));
  EXPECT_NEAR(w.weight(1), 0.5, 1e-15);
  const FiniteMMS r = restrict(p, {2, 0});
  EXPECT_EQ(r.size(), 2);
  EXPECT_DOUBLE_EQ(r.distance(0, 1), 2.0);
}

TEST(Space, InteriorExcludesBoundaryCollar) {
  const FiniteMMS s = build_euclidean_grid({7}, 1.0);
  EXPECT_FALSE(s.interior()[0]);
  EXPECT_FALSE(s.interior()[1]);
  EXPECT_TRUE(s.interior()[3]);
}
