#include "mms/norm.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mms {

NormSpec NormSpec::p_norm(double exponent, int dim) {
  if (!(exponent >= 1.0)) throw std::invalid_argument("p-norm exponent must lie in [1, inf]");
  if (dim < 1) throw std::invalid_argument("norm dimension must be positive");
  NormSpec n;
  n.kind_ = Kind::p_norm;
  n.exponent_ = exponent;
  n.dim_ = dim;
  return n;
}

NormSpec NormSpec::polygonal(std::vector<Eigen::Vector2d> vertices) {
  const std::size_t k = vertices.size();
  if (k < 4 || k % 2 != 0) throw std::invalid_argument("polygonal norm needs an even number (>= 4) of vertices");
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Vector2d& v = vertices[i];
    bool has_opposite = false;
    for (const auto& w : vertices) has_opposite = has_opposite || (v + w).norm() <= 1e-12 * (1.0 + v.norm());
    if (!has_opposite) throw std::invalid_argument("polygonal norm vertices must be closed under v -> -v");
  }
  NormSpec n;
  n.kind_ = Kind::polygonal;
  n.dim_ = 2;
  n.exponent_ = 0.0;
  n.facets_.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Vector2d& a = vertices[i];
    const Eigen::Vector2d& b = vertices[(i + 1) % k];
    const double cross = a.x() * b.y() - a.y() * b.x();
    if (!(cross > 1e-14)) throw std::invalid_argument("polygonal norm vertices must be strictly convex and counter-clockwise");
    // solve <n, a> = <n, b> = 1
    n.facets_.emplace_back((b.y() - a.y()) / cross, (a.x() - b.x()) / cross);
  }
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Vector2d& prev = vertices[(i + k - 1) % k];
    const Eigen::Vector2d& cur = vertices[i];
    const Eigen::Vector2d& next = vertices[(i + 1) % k];
    const double turn = (cur - prev).x() * (next - cur).y() - (cur - prev).y() * (next - cur).x();
    if (!(turn > 0.0)) throw std::invalid_argument("polygonal norm vertices must be strictly convex and counter-clockwise");
  }
  n.vertices_ = std::move(vertices);
  return n;
}

double NormSpec::dual_exponent() const {
  if (kind_ != Kind::p_norm) throw std::logic_error("dual exponent requested for a polygonal norm");
  if (std::isinf(exponent_)) return 1.0;
  if (exponent_ == 1.0) return std::numeric_limits<double>::infinity();
  return exponent_ / (exponent_ - 1.0);
}

double NormSpec::euclidean_bound() const {
  if (kind_ == Kind::polygonal) {
    double r = 0.0;
    for (const auto& v : vertices_) r = std::max(r, v.norm());
    return r;
  }
  // |v|_2 <= d^{max(0, 1/2 - 1/p)} |v|_p
  const double inv_p = std::isinf(exponent_) ? 0.0 : 1.0 / exponent_;
  return std::pow(static_cast<double>(dim_), std::max(0.0, 0.5 - inv_p));
}

namespace {

std::string format_double(double x) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string NormSpec::to_string() const {
  if (kind_ == Kind::p_norm) return "p:" + format_double(exponent_);
  std::string out = "poly:";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) out += ';';
    out += '(' + format_double(vertices_[i].x()) + ',' + format_double(vertices_[i].y()) + ')';
  }
  return out;
}

NormSpec NormSpec::parse(std::string_view text, int dim) {
  auto fail = [&] { return std::invalid_argument("cannot parse norm spec '" + std::string(text) + "'"); };
  if (text.rfind("p:", 0) == 0) {
    const std::string value(text.substr(2));
    if (value == "inf" || value == "infinity") return max_norm(dim);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(value, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != value.size()) throw fail();
    return p_norm(p, dim);
  }
  if (text.rfind("poly:", 0) == 0) {
    if (dim != 2) throw std::invalid_argument("polygonal norms are planar");
    std::vector<Eigen::Vector2d> vertices;
    std::string body(text.substr(5));
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ';')) {
      double x = 0.0, y = 0.0;
      char tail = 0;
      if (std::sscanf(item.c_str(), " (%lf ,%lf )%c", &x, &y, &tail) < 2) throw fail();
      vertices.emplace_back(x, y);
    }
    return polygonal(std::move(vertices));
  }
  throw fail();
}

std::vector<double> default_eps_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 40; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

}  // namespace mms
