#include "mms/directional.hpp"

#include "mms/norm.hpp"
#include "mms/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mms {

namespace {

void check_inputs(const FiniteMMS& space, const ScalarField& f, const ScalarField& g) {
  if (f.size() != space.size() || g.size() != space.size()) throw Error("field length does not match the space");
}

void check_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error("exponent p must lie in (1, inf)");
}

struct PointDerivative {
  double slope = 0.0;
  double plus = 0.0;
  double minus = 0.0;
};

// One-sided derivatives at x. b_of(y) returns the increment f(y) - f(x).
template <typename Increment>
PointDerivative point_derivative(const NeighborhoodGraph& graph, const ScalarField& g, int x, Increment b_of) {
  PointDerivative out;
  double S = 0.0;
  for (int k = graph.begin(x); k < graph.end(x); ++k) S = std::max(S, std::abs(g[graph.target(k)] - g[x]) / graph.dist(k));
  out.slope = S;
  if (S <= kSlopeFloor) return out;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (int k = graph.begin(x); k < graph.end(x); ++k) {
    const int y = graph.target(k);
    const double a = g[y] - g[x];
    if (std::abs(a) / graph.dist(k) < S * (1.0 - kActiveSetTolerance)) continue;
    const double v = (a > 0.0 ? 1.0 : -1.0) * b_of(y) / graph.dist(k);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  out.plus = S * hi;
  out.minus = S * lo;
  return out;
}

}  // namespace

DirectionalField d_pm_exact(const FiniteMMS& space, const ScalarField& f, const ScalarField& g, double p) {
  check_inputs(space, f, g);
  check_exponent(p);
  const NeighborhoodGraph& graph = space.neighbors();
  DirectionalField out{ScalarField::Zero(space.size()), ScalarField::Zero(space.size())};
  for (int x = 0; x < space.size(); ++x) {
    const auto d = point_derivative(graph, g, x, [&](int y) { return f[y] - f[x]; });
    out.dplus[x] = d.plus;
    out.dminus[x] = d.minus;
  }
  return out;
}

DirectionalField d_pm_sweep(const FiniteMMS& space, const ScalarField& f, const ScalarField& g, double p,
                            const std::vector<double>& eps_grid) {
  check_inputs(space, f, g);
  check_exponent(p);
  if (eps_grid.empty()) throw Error("eps grid must be nonempty");
  for (std::size_t k = 0; k < eps_grid.size(); ++k)
    if (!(eps_grid[k] > 0.0) || (k > 0 && !(eps_grid[k] < eps_grid[k - 1])))
      throw Error("eps grid must be positive and decreasing");
  const NeighborhoodGraph& graph = space.neighbors();
  DirectionalField out{ScalarField::Zero(space.size()), ScalarField::Zero(space.size())};
  std::vector<double> gap, a, b, d;
  for (int x = 0; x < space.size(); ++x) {
    double S = 0.0;
    for (int k = graph.begin(x); k < graph.end(x); ++k) S = std::max(S, std::abs(g[graph.target(k)] - g[x]) / graph.dist(k));
    if (S <= kSlopeFloor) continue;
    gap.clear();
    a.clear();
    b.clear();
    d.clear();
    double fscale = 0.0;
    for (int k = graph.begin(x); k < graph.end(x); ++k) {
      const int y = graph.target(k);
      a.push_back(g[y] - g[x]);
      b.push_back(f[y] - f[x]);
      d.push_back(graph.dist(k));
      double gp = std::abs(a.back()) / d.back() - S;
      // members of the documented tie class sit exactly on the maximum
      if (gp >= -S * kActiveSetTolerance) gp = 0.0;
      gap.push_back(gp);
      fscale = std::max(fscale, std::abs(b.back()) / d.back());
    }
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;
      double prev = 0.0, best = 0.0, defect = 0.0;
      for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        const double eps = sign * eps_grid[e];
        // slope(g + eps f)(x) - slope(g)(x)
        double delta = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < a.size(); ++i)
          delta = std::max(delta, gap[i] + detail::abs_increment(a[i], eps * b[i]) / d[i]);
        const double q = S * S * std::expm1(p * std::log1p(delta / S)) / (p * eps);
        if (e == 0) {
          best = q;
        } else {
          defect = std::max(defect, side == 0 ? q - prev : prev - q);
          best = side == 0 ? std::min(best, q) : std::max(best, q);
        }
        prev = q;
      }
      if (defect > 1e-10 * std::max(1.0, S * fscale))
        throw Error("slope quotients are not monotone in eps: slope evaluation is inconsistent");
      (side == 0 ? out.dplus : out.dminus)[x] = best;
    }
  }
  return out;
}

DirectionalField d_pm(const FiniteMMS& space, const ScalarField& f, const ScalarField& g, double p) {
  if (space.gradient_model() == GradientModel::carre_du_champ) {
    check_exponent(p);
    ScalarField gamma = carre_du_champ(space, f, g);
    return {gamma, gamma};
  }
  return d_pm_exact(space, f, g, p);
}

ChainRuleReport chain_rule_check(const FiniteMMS& space, const ScalarField& f, const ScalarField& g,
                                 const PiecewiseAffine& phi, ChainSide side) {
  check_inputs(space, f, g);
  const NeighborhoodGraph& graph = space.neighbors();
  const ScalarField& carrier = side == ChainSide::inner ? f : g;
  const ScalarField composed = apply(phi, carrier);
  const DirectionalField base = d_pm_exact(space, f, g);
  const DirectionalField lhs =
      side == ChainSide::inner ? d_pm_exact(space, composed, g) : d_pm_exact(space, f, composed);
  ChainRuleReport r;
  for (int x = 0; x < space.size(); ++x) {
    double lo = carrier[x], hi = carrier[x];
    for (int k = graph.begin(x); k < graph.end(x); ++k) {
      lo = std::min(lo, carrier[graph.target(k)]);
      hi = std::max(hi, carrier[graph.target(k)]);
    }
    bool collision = false;
    for (double bp : phi.breakpoints()) collision = collision || (bp >= lo - 1e-9 && bp <= hi + 1e-9);
    if (collision) {
      ++r.excluded;
      continue;
    }
    const double slope = phi.derivative(carrier[x]);
    const double rp = slope * (slope >= 0.0 ? base.dplus[x] : base.dminus[x]);
    const double rm = slope * (slope >= 0.0 ? base.dminus[x] : base.dplus[x]);
    r.max_residual = std::max({r.max_residual, std::abs(lhs.dplus[x] - rp), std::abs(lhs.dminus[x] - rm)});
    ++r.checked;
  }
  return r;
}

LeibnizReport leibniz_check(const FiniteMMS& space, const ScalarField& f1, const ScalarField& f2,
                            const ScalarField& g) {
  check_inputs(space, f1, g);
  check_inputs(space, f2, g);
  const NeighborhoodGraph& graph = space.neighbors();
  const ScalarField prod = f1.cwiseProduct(f2);
  const DirectionalField dprod = d_pm_exact(space, prod, g);
  const DirectionalField d1 = d_pm_exact(space, f1, g);
  const DirectionalField d2 = d_pm_exact(space, f2, g);
  LeibnizReport r;
  r.plus_raw_slack = ScalarField::Zero(space.size());
  r.minus_raw_slack = ScalarField::Zero(space.size());
  r.min_slack = std::numeric_limits<double>::infinity();
  r.min_raw_slack = std::numeric_limits<double>::infinity();
  for (int x = 0; x < space.size(); ++x) {
    const auto rem = point_derivative(graph, g, x, [&](int y) { return (f1[y] - f1[x]) * (f2[y] - f2[x]); });
    // f D^{s} h with s = sign f: f * D+ h when f >= 0, f * D- h otherwise
    const double up = f1[x] * (f1[x] >= 0.0 ? d2.dplus[x] : d2.dminus[x]) +
                      f2[x] * (f2[x] >= 0.0 ? d1.dplus[x] : d1.dminus[x]);
    const double down = f1[x] * (f1[x] >= 0.0 ? d2.dminus[x] : d2.dplus[x]) +
                        f2[x] * (f2[x] >= 0.0 ? d1.dminus[x] : d1.dplus[x]);
    const double raw_plus = up - dprod.dplus[x];
    const double raw_minus = dprod.dminus[x] - down;
    r.plus_raw_slack[x] = raw_plus;
    r.minus_raw_slack[x] = raw_minus;
    const double scale = 1e-12 * (1.0 + std::abs(dprod.dplus[x]) + std::abs(up) + std::abs(down));
    r.min_raw_slack = std::min({r.min_raw_slack, raw_plus, raw_minus});
    r.min_slack = std::min({r.min_slack, raw_plus + rem.plus + scale, raw_minus - rem.minus + scale});
    r.max_remainder = std::max({r.max_remainder, std::abs(rem.plus), std::abs(rem.minus)});
  }
  return r;
}

StrictConvexityProbe strict_convexity_probe(const FiniteMMS& space, int sample_count, std::uint64_t seed,
                                            bool f_equals_g) {
  if (sample_count < 1) throw Error("sample count must be at least 1");
  std::mt19937_64 rng(seed);
  StrictConvexityProbe out;
  out.seed = seed;
  out.samples = sample_count;
  const double total = space.total_mass();
  for (int s = 0; s < sample_count; ++s) {
    ScalarField g;
    if (s % 2 == 1 && space.has_coords()) {
      std::uniform_int_distribution<int> axis(0, space.dim() - 1);
      const int k = axis(rng);
      const Eigen::MatrixXd& c = space.coords();
      const SmoothField psi = random_smooth_field(1, rng, 3, std::max(1e-12, c.col(k).maxCoeff() - c.col(k).minCoeff()));
      g.resize(space.size());
      for (int i = 0; i < space.size(); ++i) g[i] = psi.value(Eigen::VectorXd::Constant(1, c(i, k)));
    } else {
      g = random_field(space, rng);
    }
    const ScalarField f = f_equals_g ? g : random_field(space, rng);
    const DirectionalField d = d_pm_exact(space, f, g);
    double mass = 0.0;
    for (int x = 0; x < space.size(); ++x)
      if (d.dplus[x] - d.dminus[x] > 1e-9) mass += space.weight(x);
    out.fraction += mass / total;
  }
  out.fraction /= sample_count;
  return out;
}

LinearityReport linearity_check(const FiniteMMS& space, const ScalarField& f1, const ScalarField& f2,
                                const ScalarField& g, double alpha, double beta) {
  const ScalarField combo = alpha * f1 + beta * f2;
  const DirectionalField d1 = d_pm_exact(space, f1, g);
  const DirectionalField d2 = d_pm_exact(space, f2, g);
  const DirectionalField dc = d_pm_exact(space, combo, g);
  LinearityReport r;
  for (int x = 0; x < space.size(); ++x) {
    const bool single = d1.dplus[x] - d1.dminus[x] <= 1e-9 && d2.dplus[x] - d2.dminus[x] <= 1e-9 &&
                        dc.dplus[x] - dc.dminus[x] <= 1e-9;
    if (single) {
      ++r.admissible;
      r.max_residual = std::max(r.max_residual, std::abs(dc.dplus[x] - alpha * d1.dplus[x] - beta * d2.dplus[x]));
    } else {
      const double a = alpha * (alpha >= 0.0 ? d1.dplus[x] : d1.dminus[x]);
      const double b = beta * (beta >= 0.0 ? d2.dplus[x] : d2.dminus[x]);
      const double scale = 1e-12 * (1.0 + std::abs(a) + std::abs(b));
      r.max_convexity_violation = std::max(r.max_convexity_violation, dc.dplus[x] - a - b - scale);
    }
  }
  return r;
}

}  // namespace mms
