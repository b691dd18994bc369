#pragma once

// Closed-form scalar fields on R^d with analytic gradients, used as data
// (g, f, densities) and as test functions. A SmoothField is a finite sum of
// terms; each term knows its value and gradient.

#include "mms/space.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

namespace mms {

/// 1/2 x^T A x + b.x + c
struct QuadraticTerm {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double c = 0.0;
};

/// a exp(-|x - center|^2 / (2 w^2))
struct GaussianTerm {
  Eigen::VectorXd center;
  double width = 1.0;
  double amplitude = 1.0;
};

/// a (1 - |x - center|^2 / R^2)^power on the ball, 0 outside (C^{power-1}).
struct CompactBumpTerm {
  Eigen::VectorXd center;
  double radius = 1.0;
  double amplitude = 1.0;
  int power = 3;
};

/// a cos(k.x + phase)
struct TrigTerm {
  Eigen::VectorXd k;
  double phase = 0.0;
  double amplitude = 1.0;
};

using FieldTerm = std::variant<QuadraticTerm, GaussianTerm, CompactBumpTerm, TrigTerm>;

class SmoothField {
 public:
  SmoothField() = default;
  explicit SmoothField(int dim) : dim_(dim) {}

  static SmoothField constant(int dim, double c);
  static SmoothField linear(const Eigen::VectorXd& b, double c = 0.0);
  static SmoothField quadratic(const Eigen::MatrixXd& A, const Eigen::VectorXd& b = {}, double c = 0.0);
  static SmoothField gaussian(const Eigen::VectorXd& center, double width, double amplitude = 1.0);
  static SmoothField bump(const Eigen::VectorXd& center, double radius, double amplitude = 1.0, int power = 3);
  static SmoothField trig(const Eigen::VectorXd& k, double phase, double amplitude = 1.0);

  SmoothField& add(FieldTerm term);
  SmoothField operator+(const SmoothField& other) const;
  SmoothField scaled(double s) const;

  int dim() const { return dim_; }
  const std::vector<FieldTerm>& terms() const { return terms_; }

  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Values at the embedding coordinates of every point of the space.
  ScalarField sample(const FiniteMMS& space) const;

 private:
  int dim_ = 0;
  std::vector<FieldTerm> terms_;
};

/// Low-frequency trigonometric combination with seeded coefficients; modes
/// have wave numbers up to max_frequency / scale in each direction.
SmoothField random_smooth_field(int dim, std::mt19937_64& rng, int modes = 4, double scale = 1.0,
                                double max_frequency = 2.0);

/// Field of point values where every value is a seeded smooth sample,
/// computed from coordinates when present and from a random distance profile otherwise.
ScalarField random_field(const FiniteMMS& space, std::mt19937_64& rng, int modes = 4);

/// Piecewise affine phi: R -> R given by breakpoints and slopes; slopes has
/// one more entry than breakpoints. phi(0) = offset on the piece containing 0
/// is arranged by continuity from phi(breakpoints[0]) = value_at_first.
class PiecewiseAffine {
 public:
  PiecewiseAffine(std::vector<double> breakpoints, std::vector<double> slopes, double value_at_first = 0.0);
  static PiecewiseAffine affine(double slope, double intercept);

  double operator()(double z) const;
  /// slope of the piece containing z (the right piece at a breakpoint)
  double derivative(double z) const;
  double lipschitz() const;
  const std::vector<double>& breakpoints() const { return breaks_; }

 private:
  std::vector<double> breaks_;
  std::vector<double> slopes_;
  std::vector<double> values_;  // phi at each breakpoint
  double intercept_ = 0.0;      // used when there are no breakpoints
};

ScalarField apply(const PiecewiseAffine& phi, const ScalarField& f);

}  // namespace mms
