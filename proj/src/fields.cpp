#include "mms/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mms {

namespace {

struct TermValue {
  const Eigen::Ref<const Eigen::VectorXd>& x;

  double operator()(const QuadraticTerm& t) const {
    double v = 0.5 * x.dot(t.A * x) + t.c;
    if (t.b.size()) v += t.b.dot(x);
    return v;
  }
  double operator()(const GaussianTerm& t) const {
    return t.amplitude * std::exp(-(x - t.center).squaredNorm() / (2.0 * t.width * t.width));
  }
  double operator()(const CompactBumpTerm& t) const {
    const double s = 1.0 - (x - t.center).squaredNorm() / (t.radius * t.radius);
    return s > 0.0 ? t.amplitude * std::pow(s, t.power) : 0.0;
  }
  double operator()(const TrigTerm& t) const { return t.amplitude * std::cos(t.k.dot(x) + t.phase); }
};

struct TermGradient {
  const Eigen::Ref<const Eigen::VectorXd>& x;

  Eigen::VectorXd operator()(const QuadraticTerm& t) const {
    Eigen::VectorXd g = t.A * x;
    if (t.b.size()) g += t.b;
    return g;
  }
  Eigen::VectorXd operator()(const GaussianTerm& t) const {
    const double w2 = t.width * t.width;
    return -(x - t.center) / w2 * (t.amplitude * std::exp(-(x - t.center).squaredNorm() / (2.0 * w2)));
  }
  Eigen::VectorXd operator()(const CompactBumpTerm& t) const {
    const double r2 = t.radius * t.radius;
    const double s = 1.0 - (x - t.center).squaredNorm() / r2;
    if (s <= 0.0) return Eigen::VectorXd::Zero(x.size());
    return (x - t.center) * (-2.0 * t.power * t.amplitude * std::pow(s, t.power - 1) / r2);
  }
  Eigen::VectorXd operator()(const TrigTerm& t) const {
    return t.k * (-t.amplitude * std::sin(t.k.dot(x) + t.phase));
  }
};

}  // namespace

SmoothField SmoothField::constant(int dim, double c) {
  SmoothField f(dim);
  f.add(QuadraticTerm{Eigen::MatrixXd::Zero(dim, dim), Eigen::VectorXd::Zero(dim), c});
  return f;
}

SmoothField SmoothField::linear(const Eigen::VectorXd& b, double c) {
  const int d = static_cast<int>(b.size());
  SmoothField f(d);
  f.add(QuadraticTerm{Eigen::MatrixXd::Zero(d, d), b, c});
  return f;
}

SmoothField SmoothField::quadratic(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double c) {
  const int d = static_cast<int>(A.rows());
  SmoothField f(d);
  f.add(QuadraticTerm{A, b.size() ? b : Eigen::VectorXd::Zero(d), c});
  return f;
}

SmoothField SmoothField::gaussian(const Eigen::VectorXd& center, double width, double amplitude) {
  SmoothField f(static_cast<int>(center.size()));
  f.add(GaussianTerm{center, width, amplitude});
  return f;
}

SmoothField SmoothField::bump(const Eigen::VectorXd& center, double radius, double amplitude, int power) {
  SmoothField f(static_cast<int>(center.size()));
  f.add(CompactBumpTerm{center, radius, amplitude, power});
  return f;
}

SmoothField SmoothField::trig(const Eigen::VectorXd& k, double phase, double amplitude) {
  SmoothField f(static_cast<int>(k.size()));
  f.add(TrigTerm{k, phase, amplitude});
  return f;
}

SmoothField& SmoothField::add(FieldTerm term) {
  terms_.push_back(std::move(term));
  return *this;
}

SmoothField SmoothField::operator+(const SmoothField& other) const {
  SmoothField out = *this;
  if (out.dim_ == 0) out.dim_ = other.dim_;
  for (const auto& t : other.terms_) out.terms_.push_back(t);
  return out;
}

SmoothField SmoothField::scaled(double s) const {
  SmoothField out = *this;
  for (auto& t : out.terms_) {
    std::visit(
        [s](auto& term) {
          using T = std::decay_t<decltype(term)>;
          if constexpr (std::is_same_v<T, QuadraticTerm>) {
            term.A *= s;
            term.b *= s;
            term.c *= s;
          } else {
            term.amplitude *= s;
          }
        },
        t);
  }
  return out;
}

double SmoothField::value(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double v = 0.0;
  for (const auto& t : terms_) v += std::visit(TermValue{x}, t);
  return v;
}

Eigen::VectorXd SmoothField::gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  for (const auto& t : terms_) g += std::visit(TermGradient{x}, t);
  return g;
}

ScalarField SmoothField::sample(const FiniteMMS& space) const {
  const Eigen::MatrixXd& c = space.coords();
  ScalarField out(space.size());
  for (int i = 0; i < space.size(); ++i) out[i] = value(c.row(i).transpose());
  return out;
}

SmoothField random_smooth_field(int dim, std::mt19937_64& rng, int modes, double scale, double max_frequency) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  SmoothField f(dim);
  for (int m = 0; m < modes; ++m) {
    Eigen::VectorXd k(dim);
    for (int a = 0; a < dim; ++a) k[a] = max_frequency * unit(rng) / scale;
    f.add(TrigTerm{k, angle(rng), unit(rng)});
  }
  // a generic linear part keeps the field away from symmetric tie configurations
  Eigen::VectorXd b(dim);
  for (int a = 0; a < dim; ++a) b[a] = 0.5 * unit(rng) / scale;
  f.add(QuadraticTerm{Eigen::MatrixXd::Zero(dim, dim), b, 0.0});
  return f;
}

ScalarField random_field(const FiniteMMS& space, std::mt19937_64& rng, int modes) {
  if (space.has_coords()) {
    const Eigen::MatrixXd& c = space.coords();
    const double extent = (c.colwise().maxCoeff() - c.colwise().minCoeff()).maxCoeff();
    return random_smooth_field(space.dim(), rng, modes, std::max(extent, 1e-12) / 2.0).sample(space);
  }
  // coordinate-free spaces: smooth profiles of distances to random anchors
  std::uniform_int_distribution<int> pick(0, space.size() - 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  ScalarField f = ScalarField::Zero(space.size());
  for (int m = 0; m < modes; ++m) {
    const Eigen::VectorXd row = space.distance_row(pick(rng));
    const double a = unit(rng), w = 1.0 + unit(rng) * 0.5, ph = unit(rng) * 3.0;
    f += (a * (w * row.array() + ph).cos()).matrix();
  }
  return f;
}

PiecewiseAffine::PiecewiseAffine(std::vector<double> breakpoints, std::vector<double> slopes, double value_at_first)
    : breaks_(std::move(breakpoints)), slopes_(std::move(slopes)) {
  if (slopes_.size() != breaks_.size() + 1) throw Error("piecewise affine map needs one more slope than breakpoints");
  if (!std::is_sorted(breaks_.begin(), breaks_.end())) throw Error("breakpoints must be increasing");
  values_.resize(breaks_.size());
  if (!breaks_.empty()) {
    values_[0] = value_at_first;
    for (std::size_t k = 1; k < breaks_.size(); ++k)
      values_[k] = values_[k - 1] + slopes_[k] * (breaks_[k] - breaks_[k - 1]);
  } else {
    intercept_ = value_at_first;
  }
}

PiecewiseAffine PiecewiseAffine::affine(double slope, double intercept) { return PiecewiseAffine({}, {slope}, intercept); }

double PiecewiseAffine::operator()(double z) const {
  if (breaks_.empty()) return intercept_ + slopes_[0] * z;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), z);
  const std::size_t piece = static_cast<std::size_t>(it - breaks_.begin());
  if (piece == 0) return values_[0] + slopes_[0] * (z - breaks_[0]);
  return values_[piece - 1] + slopes_[piece] * (z - breaks_[piece - 1]);
}

double PiecewiseAffine::derivative(double z) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), z);
  return slopes_[static_cast<std::size_t>(it - breaks_.begin())];
}

double PiecewiseAffine::lipschitz() const {
  double l = 0.0;
  for (double s : slopes_) l = std::max(l, std::abs(s));
  return l;
}

ScalarField apply(const PiecewiseAffine& phi, const ScalarField& f) {
  ScalarField out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) out[i] = phi(f[i]);
  return out;
}

}  // namespace mms
