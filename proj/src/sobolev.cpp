#include "mms/sobolev.hpp"

#include <cmath>

namespace mms {

namespace {

void check_field(const FiniteMMS& space, const ScalarField& f) {
  if (f.size() != space.size()) throw Error("field length does not match the space");
}

}  // namespace

ScalarField local_slope(const FiniteMMS& space, const ScalarField& f, SlopeVariant variant) {
  check_field(space, f);
  const NeighborhoodGraph& g = space.neighbors();
  ScalarField out = ScalarField::Zero(space.size());
  for (int x = 0; x < space.size(); ++x) {
    double best = 0.0;
    for (int k = g.begin(x); k < g.end(x); ++k) {
      const double inc = f[g.target(k)] - f[x];
      double v = 0.0;
      switch (variant) {
        case SlopeVariant::full:
          v = std::abs(inc);
          break;
        case SlopeVariant::ascending:
          v = std::max(inc, 0.0);
          break;
        case SlopeVariant::descending:
          v = std::max(-inc, 0.0);
          break;
      }
      best = std::max(best, v / g.dist(k));
    }
    out[x] = best;
  }
  return out;
}

UpperGradientResult upper_gradient_check(const FiniteMMS& space, const ScalarField& f, const ScalarField& G,
                                         const std::vector<int>& path) {
  check_field(space, f);
  check_field(space, G);
  UpperGradientResult r;
  if (path.size() < 2) return r;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const int a = path[k], b = path[k + 1];
    if (a < 0 || b < 0 || a >= space.size() || b >= space.size()) throw Error("path index out of range");
    const double d = space.distance(a, b);
    if (d > space.h()) throw Error("path has a gap larger than h");
    r.integral += std::max(G[a], G[b]) * d;
  }
  r.increment = std::abs(f[path.back()] - f[path.front()]);
  r.residual = r.increment - r.integral;
  r.holds = r.residual <= 1e-12;
  return r;
}

double cheeger_energy(const FiniteMMS& space, const ScalarField& f, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error("Cheeger energy exponent must lie in (1, inf)");
  const ScalarField s = local_slope(space, f);
  return s.array().pow(p).matrix().dot(space.weights()) / p;
}

ScalarField carre_du_champ(const FiniteMMS& space, const ScalarField& f, const ScalarField& g) {
  check_field(space, f);
  check_field(space, g);
  const SparseMatrix& w = space.conductances();
  ScalarField out = ScalarField::Zero(space.size());
  for (int k = 0; k < w.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(w, k); it; ++it) {
      const int x = static_cast<int>(it.row()), y = static_cast<int>(it.col());
      out[x] += it.value() * (f[y] - f[x]) * (g[y] - g[x]);
    }
  return out.cwiseQuotient(2.0 * space.weights());
}

double cheeger_energy_form(const FiniteMMS& space, const ScalarField& f, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error("Cheeger energy exponent must lie in (1, inf)");
  const ScalarField G = carre_du_champ(space, f, f);
  return G.array().max(0.0).pow(0.5 * p).matrix().dot(space.weights()) / p;
}

double dirichlet_form(const FiniteMMS& space, const ScalarField& f, const ScalarField& g) {
  check_field(space, f);
  check_field(space, g);
  const SparseMatrix& w = space.conductances();
  double e = 0.0;
  for (int k = 0; k < w.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(w, k); it; ++it)
      if (it.row() < it.col()) e += it.value() * (f[it.row()] - f[it.col()]) * (g[it.row()] - g[it.col()]);
  return e;
}

SlopeEqualityReport slope_equality_report(const FiniteMMS& space, const ScalarField& f) {
  const ScalarField full = local_slope(space, f, SlopeVariant::full);
  const ScalarField asc = local_slope(space, f, SlopeVariant::ascending);
  const ScalarField desc = local_slope(space, f, SlopeVariant::descending);
  SlopeEqualityReport r;
  for (int x = 0; x < space.size(); ++x) {
    if (!space.interior()[x]) continue;
    const double ad = std::abs(asc[x] - desc[x]);
    const double gap = std::abs(full[x] - std::max(asc[x], desc[x]));
    r.max_asc_desc = std::max(r.max_asc_desc, ad);
    r.max_full_gap = std::max(r.max_full_gap, gap);
    r.mean_asc_desc += ad;
    r.mean_full_gap += gap;
    ++r.points;
    if (ad > 1e-12 * (1.0 + full[x])) r.discrepant.push_back(x);
  }
  if (r.points) {
    r.mean_asc_desc /= r.points;
    r.mean_full_gap /= r.points;
  }
  return r;
}

}  // namespace mms
