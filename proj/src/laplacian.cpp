#include "mms/laplacian.hpp"

#include "mms/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mms {

bool is_admissible_test(const FiniteMMS& space, const ScalarField& f) {
  if (f.size() != space.size()) throw Error("field length does not match the space");
  const auto& interior = space.interior();
  for (int x = 0; x < space.size(); ++x)
    if (!interior[x] && f[x] != 0.0) return false;
  return true;
}

LaplacianInterval laplacian_interval(const FiniteMMS& space, const ScalarField& g, const ScalarField& f, double p) {
  if (!is_admissible_test(space, f)) throw Error("test function support reaches within h of the boundary");
  const DirectionalField d = d_pm(space, f, g, p);
  return {-d.dplus.dot(space.weights()), -d.dminus.dot(space.weights())};
}

SparseMatrix graph_laplacian(const FiniteMMS& space) {
  const SparseMatrix& w = space.conductances();
  const int n = space.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(w.nonZeros() + n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < w.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(w, k); it; ++it) {
      if (it.row() == it.col()) continue;
      trip.emplace_back(it.row(), it.col(), it.value() / space.weight(static_cast<int>(it.row())));
      diag[it.row()] += it.value();
    }
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, -diag[i] / space.weight(i));
  SparseMatrix L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

double m_inner(const FiniteMMS& space, const ScalarField& f, const ScalarField& h) {
  return f.cwiseProduct(h).dot(space.weights());
}

MembershipReport membership_check(const FiniteMMS& space, const ScalarField& g, const SignedMeasure& mu,
                                  const std::vector<ScalarField>& test_basis, double p) {
  MembershipReport r;
  r.worst_slack = std::numeric_limits<double>::infinity();
  constexpr double tol = 1e-9;
  for (const ScalarField& f : test_basis) {
    const LaplacianInterval iv = laplacian_interval(space, g, f, p);
    const double pairing = f.dot(mu);
    const double slack = std::min(pairing - iv.lower, iv.upper - pairing);
    r.worst_slack = std::min(r.worst_slack, slack);
    if (slack < -tol) r.pass = false;
    for (double lambda : {2.0, 0.5}) {
      const LaplacianInterval scaled = laplacian_interval(space, lambda * g, f, p);
      const double sp = lambda * pairing;
      if (sp < scaled.lower - tol * (1.0 + lambda) || sp > scaled.upper + tol * (1.0 + lambda))
        r.homogeneity = false;
    }
    ++r.tested;
  }
  if (test_basis.empty()) r.worst_slack = 0.0;
  return r;
}

ScalarField gamma(const FiniteMMS& space, const ScalarField& f, const ScalarField& g) {
  const SparseMatrix L = graph_laplacian(space);
  const ScalarField fg = f.cwiseProduct(g);
  return 0.5 * (L * fg - f.cwiseProduct(L * g) - g.cwiseProduct(L * f));
}

ScalarField gamma2(const FiniteMMS& space, const ScalarField& f) {
  const SparseMatrix L = graph_laplacian(space);
  const ScalarField Lf = L * f;
  const ScalarField gff = gamma(space, f, f);
  return 0.5 * (L * gff) - gamma(space, f, Lf);
}

ResidualReport chain_rule_laplacian_check(const FiniteMMS& space, const ScalarField& g, const C11Map& phi) {
  const SparseMatrix L = graph_laplacian(space);
  const int n = space.size();
  ScalarField pg(n), d1(n), d2(n);
  for (int i = 0; i < n; ++i) {
    pg[i] = phi.value(g[i]);
    d1[i] = phi.d1(g[i]);
    d2[i] = phi.d2(g[i]);
  }
  const ScalarField lhs = L * pg;
  const ScalarField rhs = d1.cwiseProduct(L * g) + d2.cwiseProduct(carre_du_champ(space, g, g));
  ResidualReport r;
  for (int i = 0; i < n; ++i) {
    if (!space.interior()[i]) continue;
    const double res = std::abs(lhs[i] - rhs[i]);
    if (res > r.max_residual || r.argmax < 0) {
      r.max_residual = std::max(r.max_residual, res);
      r.argmax = i;
    }
    ++r.points;
  }
  return r;
}

LeibnizLaplacianReport leibniz_laplacian_check(const FiniteMMS& space, const ScalarField& g1, const ScalarField& g2) {
  const SparseMatrix L = graph_laplacian(space);
  const ScalarField G12 = carre_du_champ(space, g1, g2);
  const ScalarField G21 = carre_du_champ(space, g2, g1);
  const ScalarField res = L * g1.cwiseProduct(g2) - g1.cwiseProduct(L * g2) - g2.cwiseProduct(L * g1) - 2.0 * G12;
  LeibnizLaplacianReport r;
  for (int i = 0; i < space.size(); ++i) {
    if (!space.interior()[i]) continue;
    r.max_residual = std::max(r.max_residual, std::abs(res[i]));
    r.max_symmetry_residual = std::max(r.max_symmetry_residual, std::abs(G12[i] - G21[i]));
  }
  return r;
}

BochnerReport bochner_diagnostic(const FiniteMMS& space, const ScalarField& f, double K) {
  const ScalarField g2 = gamma2(space, f);
  const ScalarField g1 = gamma(space, f, f);
  BochnerReport r;
  r.min_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < space.size(); ++i) {
    // Gamma_2 at x involves the two-step neighbourhood, so stay clear of the boundary
    if (!space.interior()[i]) continue;
    bool clear = true;
    for (int k = space.neighbors().begin(i); k < space.neighbors().end(i); ++k)
      clear = clear && space.interior()[space.neighbors().target(k)];
    if (!clear) continue;
    const double s = g2[i] - K * g1[i];
    if (s < r.min_slack) {
      r.min_slack = s;
      r.argmin = i;
    }
  }
  return r;
}

ChangeOfMeasureReport change_of_measure_check(const FiniteMMS& space, const ScalarField& g, const ScalarField& V,
                                              const std::vector<ScalarField>& tests) {
  const FiniteMMS weighted = with_masses(space, V);
  const ScalarField Lg_new = graph_laplacian(weighted) * g;
  const ScalarField predicted = graph_laplacian(space) * g - carre_du_champ(space, V, g);
  ChangeOfMeasureReport r;
  for (int i = 0; i < space.size(); ++i)
    if (space.interior()[i]) r.max_density_residual = std::max(r.max_density_residual, std::abs(Lg_new[i] - predicted[i]));
  for (const ScalarField& f : tests) {
    const double a = m_inner(weighted, f, Lg_new);
    const double b = m_inner(weighted, f, predicted);
    r.max_pairing_residual = std::max(r.max_pairing_residual, std::abs(a - b));
  }
  return r;
}

LocalityStabilityReport locality_and_stability_checks(const FiniteMMS& space, const ScalarField& g,
                                                      const ScalarField& f,
                                                      const std::vector<std::vector<int>>& partition,
                                                      const std::vector<ScalarField>& g_sequence) {
  LocalityStabilityReport r;
  const DirectionalField whole = d_pm(space, f, g);
  const NeighborhoodGraph& graph = space.neighbors();
  for (const auto& part : partition) {
    std::vector<int> position(space.size(), -1);
    for (std::size_t k = 0; k < part.size(); ++k) position[part[k]] = static_cast<int>(k);
    const FiniteMMS sub = restrict(space, part);
    ScalarField fs(part.size()), gs(part.size());
    for (std::size_t k = 0; k < part.size(); ++k) {
      fs[k] = f[part[k]];
      gs[k] = g[part[k]];
    }
    const DirectionalField local = d_pm(sub, fs, gs);
    for (std::size_t k = 0; k < part.size(); ++k) {
      const int x = part[k];
      bool inside = true;
      for (int e = graph.begin(x); e < graph.end(x); ++e) inside = inside && position[graph.target(e)] >= 0;
      if (space.has_conductances()) {
        const SparseMatrix& w = space.conductances();
        for (SparseMatrix::InnerIterator it(w, x); it; ++it) inside = inside && position[it.row()] >= 0;
      }
      if (!inside) continue;
      r.max_overlap_discrepancy = std::max({r.max_overlap_discrepancy, std::abs(local.dplus[k] - whole.dplus[x]),
                                            std::abs(local.dminus[k] - whole.dminus[x])});
      ++r.compared_points;
    }
  }
  const LaplacianInterval base = laplacian_interval(space, g, f);
  for (const ScalarField& gn : g_sequence) {
    const LaplacianInterval iv = laplacian_interval(space, gn, f);
    r.drift.push_back(std::max(std::abs(iv.lower - base.lower), std::abs(iv.upper - base.upper)));
  }
  return r;
}

}  // namespace mms
