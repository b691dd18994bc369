#pragma once

// Calculus on a flat normed space (R^d, ||.||): dual norms, the multivalued
// inverse duality map and the one-sided derivatives D^{+/-} f(grad g) taken
// two independent ways (extremes over the gradient set, and difference
// quotients of the squared dual norm).
//
// Everything below is templated on the scalar type of the covectors so the
// same code runs in double, long double or an extended-precision type.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mms {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Side { plus, minus };

inline constexpr double kNormTieTolerance = 1e-12;

class NormSpec {
 public:
  enum class Kind { p_norm, polygonal };

  NormSpec() = default;

  /// p-norm on R^dim, exponent in [1, inf]; pass +infinity for the max norm.
  static NormSpec p_norm(double exponent, int dim);
  static NormSpec euclidean(int dim) { return p_norm(2.0, dim); }
  static NormSpec max_norm(int dim) { return p_norm(std::numeric_limits<double>::infinity(), dim); }
  static NormSpec taxicab(int dim) { return p_norm(1.0, dim); }

  /// Planar norm whose unit ball is the convex polygon with the given
  /// vertices, listed counter-clockwise. The list must be closed under v -> -v.
  static NormSpec polygonal(std::vector<Eigen::Vector2d> vertices);

  /// Parses "p:2", "p:inf", "poly:(1,0);(0,1);(-1,0);(0,-1)".
  static NormSpec parse(std::string_view text, int dim);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double exponent() const { return exponent_; }
  /// Hoelder conjugate of the exponent (p-norms only).
  double dual_exponent() const;
  const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }
  /// Facet normals n_k with <n_k, v> = 1 on facet k (polygonal only).
  const std::vector<Eigen::Vector2d>& facet_normals() const { return facets_; }

  bool is_euclidean() const { return kind_ == Kind::p_norm && exponent_ == 2.0; }
  bool is_strictly_convex() const {
    return kind_ == Kind::p_norm && exponent_ > 1.0 && std::isfinite(exponent_);
  }
  /// Constant c with |v|_2 <= c ||v|| for all v.
  double euclidean_bound() const;

  template <typename Derived>
  typename Derived::Scalar norm(const Eigen::MatrixBase<Derived>& v) const;

 private:
  Kind kind_ = Kind::p_norm;
  int dim_ = 0;
  double exponent_ = 2.0;
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<Eigen::Vector2d> facets_;
};

namespace detail {

template <typename Scalar>
Scalar p_sum_norm(const VectorX<Scalar>& v, double exponent) {
  using std::abs;
  using std::pow;
  if (std::isinf(exponent)) return v.size() == 0 ? Scalar(0) : v.cwiseAbs().maxCoeff();
  if (exponent == 1.0) return v.cwiseAbs().sum();
  if (exponent == 2.0) return v.norm();
  const Scalar scale = v.cwiseAbs().maxCoeff();
  if (scale == Scalar(0)) return Scalar(0);
  Scalar sum(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += pow(abs(v[i]) / scale, Scalar(exponent));
  return scale * pow(sum, Scalar(1.0 / exponent));
}

// |a + b| - |a| without cancellation when b does not flip the sign of a.
template <typename Scalar>
Scalar abs_increment(Scalar a, Scalar b) {
  using std::abs;
  if (a > Scalar(0) && a + b >= Scalar(0)) return b;
  if (a < Scalar(0) && a + b <= Scalar(0)) return -b;
  return abs(a + b) - abs(a);
}

// |a + b|^q - |a|^q, accurate relative to the result for small b.
template <typename Scalar>
Scalar pow_increment(Scalar a, Scalar b, Scalar q) {
  using std::abs;
  using std::expm1;
  using std::log1p;
  using std::pow;
  if (a != Scalar(0)) {
    const Scalar ratio = b / a;
    if (ratio > Scalar(-1)) return pow(abs(a), q) * expm1(q * log1p(ratio));
  }
  return pow(abs(a + b), q) - pow(abs(a), q);
}

}  // namespace detail

template <typename Derived>
typename Derived::Scalar NormSpec::norm(const Eigen::MatrixBase<Derived>& v) const {
  using Scalar = typename Derived::Scalar;
  const VectorX<Scalar> x = v;
  if (kind_ == Kind::p_norm) return detail::p_sum_norm<Scalar>(x, exponent_);
  Scalar best(0);
  for (const auto& n : facets_) best = std::max<Scalar>(best, Scalar(n.x()) * x[0] + Scalar(n.y()) * x[1]);
  return best;
}

/// Dual norm ||w||_* = sup_{||v|| <= 1} w(v).
template <typename Derived>
typename Derived::Scalar dual_norm(const NormSpec& norm, const Eigen::MatrixBase<Derived>& omega) {
  using Scalar = typename Derived::Scalar;
  const VectorX<Scalar> w = omega;
  if (norm.kind() == NormSpec::Kind::p_norm) return detail::p_sum_norm<Scalar>(w, norm.dual_exponent());
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  for (const auto& v : norm.vertices()) best = std::max<Scalar>(best, Scalar(v.x()) * w[0] + Scalar(v.y()) * w[1]);
  return best;
}

/// Dual^{-1}(w) as the vertex list of a convex set. One vertex when the set
/// is a single vector (always the case for strictly convex norms).
template <typename Scalar>
struct GradientSet {
  std::vector<VectorX<Scalar>> vertices;
  bool single_valued() const { return vertices.size() == 1; }
};

template <typename Derived>
GradientSet<typename Derived::Scalar> duality_map_inverse(const NormSpec& norm,
                                                          const Eigen::MatrixBase<Derived>& omega) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::pow;
  const VectorX<Scalar> w = omega;
  const Eigen::Index d = w.size();
  GradientSet<Scalar> out;
  const Scalar dn = dual_norm(norm, w);
  if (dn == Scalar(0)) {
    out.vertices.push_back(VectorX<Scalar>::Zero(d));
    return out;
  }
  const Scalar tie = Scalar(kNormTieTolerance) * dn;

  if (norm.kind() == NormSpec::Kind::polygonal) {
    for (const auto& v : norm.vertices()) {
      const Scalar value = Scalar(v.x()) * w[0] + Scalar(v.y()) * w[1];
      if (value >= dn - tie) out.vertices.push_back(dn * v.cast<Scalar>());
    }
    return out;
  }

  const double p = norm.exponent();
  if (p == 1.0) {
    // dual is the max norm: face spanned by the extremal coordinates
    for (Eigen::Index i = 0; i < d; ++i) {
      if (abs(w[i]) >= dn - tie) {
        VectorX<Scalar> v = VectorX<Scalar>::Zero(d);
        v[i] = w[i] > Scalar(0) ? dn : -dn;
        out.vertices.push_back(v);
      }
    }
    return out;
  }
  if (std::isinf(p)) {
    // dual is the taxicab norm: free sign on vanishing coordinates
    std::vector<Eigen::Index> free;
    VectorX<Scalar> base(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (abs(w[i]) <= tie) {
        free.push_back(i);
        base[i] = Scalar(0);
      } else {
        base[i] = w[i] > Scalar(0) ? dn : -dn;
      }
    }
    const std::size_t combos = std::size_t{1} << free.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      VectorX<Scalar> v = base;
      for (std::size_t k = 0; k < free.size(); ++k) v[free[k]] = (mask >> k) & 1u ? dn : -dn;
      out.vertices.push_back(v);
    }
    return out;
  }
  if (p == 2.0) {
    out.vertices.push_back(w);
    return out;
  }
  const Scalar q(norm.dual_exponent());
  VectorX<Scalar> v(d);
  const Scalar lead = pow(dn, Scalar(2) - q);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Scalar mag = lead * pow(abs(w[i]), q - Scalar(1));
    v[i] = w[i] < Scalar(0) ? -mag : mag;
  }
  out.vertices.push_back(v);
  return out;
}

/// D^{+/-} f(grad g) = max/min over v in grad g of Df(v).
template <typename DerivedF, typename DerivedG>
typename DerivedF::Scalar d_pm_via_gradient_set(const NormSpec& norm, const Eigen::MatrixBase<DerivedF>& df,
                                                const Eigen::MatrixBase<DerivedG>& dg, Side side) {
  using Scalar = typename DerivedF::Scalar;
  const auto set = duality_map_inverse(norm, dg);
  Scalar best = side == Side::plus ? -std::numeric_limits<Scalar>::infinity()
                                   : std::numeric_limits<Scalar>::infinity();
  for (const auto& v : set.vertices) {
    const Scalar value = df.dot(v);
    best = side == Side::plus ? std::max<Scalar>(best, value) : std::min<Scalar>(best, value);
  }
  return best;
}

/// ||w + eps*eta||_* - ||w||_*, accurate relative to its own size.
template <typename Scalar>
Scalar dual_norm_increment(const NormSpec& norm, const VectorX<Scalar>& w, const VectorX<Scalar>& eta, Scalar eps) {
  using std::expm1;
  using std::log1p;
  using std::pow;
  const Eigen::Index d = w.size();
  const Scalar base = dual_norm(norm, w);
  if (norm.kind() == NormSpec::Kind::polygonal) {
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (const auto& v : norm.vertices()) {
      const Scalar wv = Scalar(v.x()) * w[0] + Scalar(v.y()) * w[1];
      const Scalar ev = Scalar(v.x()) * eta[0] + Scalar(v.y()) * eta[1];
      best = std::max<Scalar>(best, Scalar((wv - base) + eps * ev));
    }
    return best;
  }
  const double q = norm.dual_exponent();
  if (std::isinf(q)) {
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < d; ++i) {
      using std::abs;
      best = std::max<Scalar>(best, Scalar(detail::abs_increment<Scalar>(w[i], Scalar(eps * eta[i])) + (abs(w[i]) - base)));
    }
    return best;
  }
  if (q == 1.0) {
    Scalar sum(0);
    for (Eigen::Index i = 0; i < d; ++i) sum += detail::abs_increment<Scalar>(w[i], Scalar(eps * eta[i]));
    return sum;
  }
  if (q == 2.0) {
    const VectorX<Scalar> moved = w + eps * eta;
    const Scalar denom = moved.norm() + base;
    if (denom == Scalar(0)) return Scalar(0);
    return (Scalar(2) * eps * w.dot(eta) + eps * eps * eta.squaredNorm()) / denom;
  }
  Scalar sum(0), delta(0);
  const Scalar qs(q);
  for (Eigen::Index i = 0; i < d; ++i) {
    using std::abs;
    sum += pow(abs(w[i]), qs);
    delta += detail::pow_increment<Scalar>(w[i], Scalar(eps * eta[i]), qs);
  }
  if (sum == Scalar(0)) return pow(delta, Scalar(1) / qs);
  return base * expm1(log1p(delta / sum) / qs);
}

template <typename Scalar>
struct QuotientSweep {
  Scalar value;              // inf (plus) or sup (minus) of the quotients over the grid
  Scalar last_step_change;   // |q(eps_K) - q(eps_{K-1})|, the convergence indicator
  Scalar monotonicity_defect;  // largest violation of the convexity ordering
  std::vector<Scalar> quotients;
};

/// Default eps grid {2^-k}, k = 1..40.
std::vector<double> default_eps_grid();

/// D^{+/-} f(grad g) through the difference quotients of ||Dg + eps Df||_*^2 / 2.
/// Throws std::runtime_error when the sequence breaks monotonicity by more
/// than 1e-10 (relative to the quotient scale), which indicates a dual norm bug.
template <typename DerivedF, typename DerivedG>
QuotientSweep<typename DerivedF::Scalar> d_pm_via_difference_quotient(const NormSpec& norm,
                                                                      const Eigen::MatrixBase<DerivedF>& df,
                                                                      const Eigen::MatrixBase<DerivedG>& dg,
                                                                      Side side,
                                                                      const std::vector<double>& eps_grid) {
  using Scalar = typename DerivedF::Scalar;
  using std::abs;
  if (eps_grid.empty()) throw std::invalid_argument("eps grid must be nonempty");
  const VectorX<Scalar> w = dg;
  const VectorX<Scalar> eta = df;
  const Scalar base = dual_norm(norm, w);
  const Scalar scale = std::max<Scalar>(Scalar(1), dual_norm(norm, eta) * std::max<Scalar>(base, Scalar(1)));
  QuotientSweep<Scalar> out{Scalar(0), Scalar(0), Scalar(0), {}};
  out.quotients.reserve(eps_grid.size());
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    if (!(eps_grid[k] > 0.0)) throw std::invalid_argument("eps grid entries must be positive");
    if (k > 0 && !(eps_grid[k] < eps_grid[k - 1])) throw std::invalid_argument("eps grid must be decreasing");
    const Scalar eps(eps_grid[k]);
    const Scalar signed_eps = side == Side::plus ? eps : -eps;
    const Scalar dn = dual_norm_increment<Scalar>(norm, w, eta, signed_eps);
    // ||w+eps eta||^2 - ||w||^2 = dn (2 ||w|| + dn)
    const Scalar q = dn * (Scalar(2) * base + dn) / (Scalar(2) * signed_eps);
    if (k > 0) {
      const Scalar prev = out.quotients.back();
      // convexity: plus quotients decrease as eps shrinks, minus quotients increase
      const Scalar defect = side == Side::plus ? q - prev : prev - q;
      out.monotonicity_defect = std::max(out.monotonicity_defect, defect);
    }
    out.quotients.push_back(q);
  }
  if (out.monotonicity_defect > Scalar(1e-10) * scale)
    throw std::runtime_error("difference quotients are not monotone: dual norm evaluation is inconsistent");
  out.value = side == Side::plus ? *std::min_element(out.quotients.begin(), out.quotients.end())
                                 : *std::max_element(out.quotients.begin(), out.quotients.end());
  if (out.quotients.size() > 1)
    out.last_step_change = abs(out.quotients.back() - out.quotients[out.quotients.size() - 2]);
  return out;
}

}  // namespace mms
