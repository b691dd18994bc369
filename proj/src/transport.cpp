#include "mms/transport.hpp"

#include "mms/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mms {

Eigen::MatrixXd Coupling::dense(int n) const {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : entries) P(e.i, e.j) += e.mass;
  return P;
}

Eigen::VectorXd Coupling::first_marginal(int n) const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  for (const auto& e : entries) m[e.i] += e.mass;
  return m;
}

Eigen::VectorXd Coupling::second_marginal(int n) const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  for (const auto& e : entries) m[e.j] += e.mass;
  return m;
}

TransportSolution solve_transport(const Eigen::MatrixXd& C, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(a.size()), n = static_cast<int>(b.size());
  if (C.rows() != m || C.cols() != n) throw Error("cost matrix shape does not match the marginals");
  if (m == 0 || n == 0) throw Error("transport problem with empty marginal");
  if ((a.array() < 0.0).any() || (b.array() < 0.0).any()) throw Error("negative transport mass");
  const double total = a.sum();
  if (std::abs(total - b.sum()) > 1e-10 * std::max(1.0, total)) throw Error("transport marginals carry different mass");
  const double tol = 1e-15 * std::max(1.0, total);

  Eigen::VectorXd supply = a, demand = b;
  // node potentials: sources 0..m-1, sinks m..m+n-1; reduced cost of i->j is C_ij + P_i - P_j
  Eigen::VectorXd P = Eigen::VectorXd::Zero(m + n);
  for (int j = 0; j < n; ++j) P[m + j] = C.col(j).minCoeff();
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(m, n);
  std::vector<std::vector<int>> active(n);  // sources with positive flow into sink j

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(m + n);
  std::vector<int> pred(m + n);
  std::vector<char> done(m + n);
  const int max_rounds = 50 * (m + n) + 1000;
  for (int round = 0;; ++round) {
    if (round > max_rounds) throw Error("transport solver did not terminate");
    bool any = false;
    for (int i = 0; i < m; ++i) any = any || supply[i] > tol;
    if (!any) break;
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (int i = 0; i < m; ++i)
      if (supply[i] > tol) dist[i] = 0.0;
    int target = -1;
    double D = 0.0;
    while (true) {
      int u = -1;
      double best = inf;
      for (int k = 0; k < m + n; ++k)
        if (!done[k] && dist[k] < best) {
          best = dist[k];
          u = k;
        }
      if (u < 0) break;
      done[u] = 1;
      if (u >= m && demand[u - m] > tol) {
        target = u;
        D = best;
        break;
      }
      if (u < m) {
        for (int j = 0; j < n; ++j) {
          const double rc = std::max(0.0, C(u, j) + P[u] - P[m + j]);
          if (best + rc < dist[m + j]) {
            dist[m + j] = best + rc;
            pred[m + j] = u;
          }
        }
      } else {
        const int j = u - m;
        for (int i : active[j]) {
          const double rc = std::max(0.0, -C(i, j) + P[u] - P[i]);
          if (best + rc < dist[i]) {
            dist[i] = best + rc;
            pred[i] = u;
          }
        }
      }
    }
    if (target < 0) {
      // every sink is saturated: what is left over is rounding in the marginal sums
      if (supply.sum() <= 1e-12 * std::max(1.0, total)) break;
      throw Error("transport solver found no augmenting path");
    }
    for (int k = 0; k < m + n; ++k) P[k] += std::min(dist[k], D);
    // bottleneck along the path back to a source
    double amount = demand[target - m];
    int node = target;
    while (pred[node] >= 0) {
      const int prev = pred[node];
      if (prev >= m) amount = std::min(amount, flow(node, prev - m));  // backward arc sink -> source
      node = prev;
    }
    amount = std::min(amount, supply[node]);
    const int source = node;
    node = target;
    while (pred[node] >= 0) {
      const int prev = pred[node];
      if (prev < m) {
        const int j = node - m;
        if (flow(prev, j) <= 0.0) active[j].push_back(prev);
        flow(prev, j) += amount;
      } else {
        const int j = prev - m;
        flow(node, j) -= amount;
        if (flow(node, j) <= tol) {
          flow(node, j) = 0.0;
          auto& list = active[j];
          list.erase(std::remove(list.begin(), list.end(), node), list.end());
        }
      }
      node = prev;
    }
    supply[source] -= amount;
    demand[target - m] -= amount;
  }

  TransportSolution s;
  s.u = -P.head(m);
  s.v = P.tail(n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      if (flow(i, j) > 0.0) {
        s.flow.push_back({i, j, flow(i, j)});
        s.primal += C(i, j) * flow(i, j);
      }
      s.dual_infeasibility = std::max(s.dual_infeasibility, s.u[i] + s.v[j] - C(i, j));
    }
  s.dual = s.u.dot(a) + s.v.dot(b);
  s.gap = s.primal - s.dual;
  s.marginal_error = std::max((flow.rowwise().sum() - a).cwiseAbs().maxCoeff(),
                              (flow.colwise().sum().transpose() - b).cwiseAbs().maxCoeff());
  return s;
}

namespace {

void check_probability(const FiniteMMS& space, const ProbabilityVector& mu) {
  if (mu.size() != space.size()) throw Error("probability vector length does not match the space");
  if ((mu.array() < 0.0).any()) throw Error("probability vector has negative mass");
  if (std::abs(mu.sum() - 1.0) > 1e-10) throw Error("probability vector does not sum to 1");
}

std::vector<int> support(const ProbabilityVector& mu) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) s.push_back(static_cast<int>(i));
  return s;
}

struct SupportProblem {
  std::vector<int> rows, cols;
  TransportSolution solution;
};

SupportProblem solve_on_supports(const FiniteMMS& space, const ProbabilityVector& mu, const ProbabilityVector& nu,
                                 double exponent, double factor) {
  SupportProblem sp;
  sp.rows = support(mu);
  sp.cols = support(nu);
  const int m = static_cast<int>(sp.rows.size()), n = static_cast<int>(sp.cols.size());
  Eigen::MatrixXd C(m, n);
  Eigen::VectorXd a(m), b(n);
  for (int r = 0; r < m; ++r) {
    a[r] = mu[sp.rows[r]];
    for (int c = 0; c < n; ++c) C(r, c) = factor * std::pow(space.distance(sp.rows[r], sp.cols[c]), exponent);
  }
  for (int c = 0; c < n; ++c) b[c] = nu[sp.cols[c]];
  sp.solution = solve_transport(C, a, b);
  return sp;
}

Coupling to_coupling(const SupportProblem& sp) {
  Coupling c;
  for (const auto& e : sp.solution.flow) c.entries.push_back({sp.rows[e.i], sp.cols[e.j], e.mass});
  std::sort(c.entries.begin(), c.entries.end(),
            [](const CouplingEntry& x, const CouplingEntry& y) { return x.i != y.i ? x.i < y.i : x.j < y.j; });
  return c;
}

}  // namespace

WassersteinResult wq_distance(const FiniteMMS& space, const ProbabilityVector& mu, const ProbabilityVector& nu,
                              double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw Error("transport exponent q must be finite and >= 1");
  check_probability(space, mu);
  check_probability(space, nu);
  const SupportProblem sp = solve_on_supports(space, mu, nu, q, 1.0);
  WassersteinResult r;
  r.cost = std::max(0.0, sp.solution.primal);
  r.value = std::pow(r.cost, 1.0 / q);
  r.coupling = to_coupling(sp);
  r.gap = sp.solution.gap;
  r.marginal_error = sp.solution.marginal_error;
  return r;
}

namespace {

// integral over [0, L] of |a + (b - a) u / L|^q
double linear_power_integral(double a, double b, double L, double q) {
  if (L <= 0.0) return 0.0;
  if (a * b < 0.0) {
    const double r = L * std::abs(a) / (std::abs(a) + std::abs(b));
    return linear_power_integral(a, 0.0, r, q) + linear_power_integral(0.0, b, L - r, q);
  }
  const double A = std::abs(a), B = std::abs(b);
  if (std::abs(B - A) <= 1e-14 * std::max(A, B)) return L * std::pow(0.5 * (A + B), q);
  return L * (std::pow(B, q + 1.0) - std::pow(A, q + 1.0)) / ((q + 1.0) * (B - A));
}

}  // namespace

double wq_cells_1d(const FiniteMMS& space, const ProbabilityVector& mu, const ProbabilityVector& nu, double q) {
  const auto& grid = space.grid();
  const auto* cm = std::get_if<CoordinateMetric>(&space.metric());
  if (!grid || grid->dims.size() != 1 || !cm || cm->kind != CoordinateMetric::Kind::normed)
    throw Error("cell histograms need a one-dimensional grid");
  check_probability(space, mu);
  check_probability(space, nu);
  const int n = space.size();
  const double s = grid->spacing;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  const Eigen::MatrixXd& X = space.coords();
  std::sort(order.begin(), order.end(), [&](int a, int b) { return X(a, 0) < X(b, 0); });
  // quantile of a histogram at level u inside cell k: left edge + s (u - below) / mass
  struct Cursor {
    const ProbabilityVector& w;
    int k = -1;
    double below = 0.0;
  };
  Cursor A{mu}, B{nu};
  auto advance = [&](Cursor& c) {
    if (c.k >= 0) c.below += c.w[order[c.k]];
    do ++c.k;
    while (c.k < n && !(c.w[order[c.k]] > 0.0));
  };
  auto quantile = [&](const Cursor& c, double u) {
    const int i = order[std::min(c.k, n - 1)];
    const double frac = std::clamp((u - c.below) / c.w[i], 0.0, 1.0);
    return X(i, 0) - 0.5 * s + s * frac;
  };
  advance(A);
  advance(B);
  double u = 0.0, total = 0.0;
  const double scale = std::max(mu.sum(), nu.sum());
  while (A.k < n && B.k < n) {
    const double ua = A.below + mu[order[A.k]], ub = B.below + nu[order[B.k]];
    const double next = std::min(ua, ub);
    if (next > u) {
      total += linear_power_integral(quantile(A, u) - quantile(B, u), quantile(A, next) - quantile(B, next), next - u, q);
      u = next;
    }
    if (ua <= next) advance(A);
    if (ub <= next) advance(B);
    if (u >= scale) break;
  }
  return total;
}

ScalarField c_transform(const FiniteMMS& space, const ScalarField& phi) {
  if (phi.size() != space.size()) throw Error("potential length does not match the space");
  const int n = space.size();
  std::vector<int> finite;
  for (int x = 0; x < n; ++x) {
    if (std::isnan(phi[x]) || phi[x] == std::numeric_limits<double>::infinity())
      throw Error("potential must be finite or -inf");
    if (std::isfinite(phi[x])) finite.push_back(x);
  }
  if (finite.empty()) throw Error("potential is -inf everywhere");
  ScalarField out(n);
  for (int y = 0; y < n; ++y) {
    const Eigen::VectorXd row = space.distance_row(y);
    double best = std::numeric_limits<double>::infinity();
    for (int x : finite) best = std::min(best, 0.5 * row[x] * row[x] - phi[x]);
    out[y] = best;
  }
  return out;
}

std::vector<int> c_superdifferential(const FiniteMMS& space, const ScalarField& phi, int x) {
  const ScalarField phic = c_transform(space, phi);
  const ScalarField phicc = c_transform(space, phic);
  for (int z = 0; z < space.size(); ++z)
    if (std::isfinite(phi[z]) && std::abs(phicc[z] - phi[z]) > 1e-10) throw Error("potential is not c-concave");
  std::vector<int> out;
  const Eigen::VectorXd row = space.distance_row(x);
  for (int y = 0; y < space.size(); ++y)
    if (std::abs(phi[x] + phic[y] - 0.5 * row[y] * row[y]) <= 1e-9) out.push_back(y);
  return out;
}

KantorovichPotential kantorovich_potential(const FiniteMMS& space, const ProbabilityVector& mu,
                                           const ProbabilityVector& nu) {
  check_probability(space, mu);
  check_probability(space, nu);
  const SupportProblem sp = solve_on_supports(space, mu, nu, 2.0, 0.5);
  if (sp.solution.gap > 1e-9 || sp.solution.marginal_error > 1e-10)
    throw Error("transport solve not certified: gap " + std::to_string(sp.solution.gap) + ", marginal error " +
                std::to_string(sp.solution.marginal_error));
  // psi = v on supp nu, -inf elsewhere; phi = psi^c is c-concave on the whole space
  ScalarField psi = ScalarField::Constant(space.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < sp.cols.size(); ++c) psi[sp.cols[c]] = sp.solution.v[static_cast<Eigen::Index>(c)];
  KantorovichPotential k;
  k.phi = c_transform(space, psi);
  k.phic = c_transform(space, k.phi);
  k.coupling = to_coupling(sp);
  k.primal = sp.solution.primal;
  k.dual = k.phi.dot(mu) + k.phic.dot(nu);
  k.gap = k.primal - k.dual;
  if (std::abs(k.gap) > 1e-9) throw Error("Kantorovich potential misses the duality identity by " + std::to_string(k.gap));
  return k;
}

namespace {

Eigen::VectorXd lexicographic_midpoint(const Eigen::VectorXd& a) {
  // smallest unit vector (lexicographic order) orthogonal to a
  const int d = static_cast<int>(a.size());
  for (int axis = 0; axis < d; ++axis) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[axis] = 1.0;
    Eigen::VectorXd w = e - a.dot(e) * a;
    if (w.norm() > 1e-9) return -w.normalized();
  }
  return Eigen::VectorXd::Zero(d);
}

Eigen::VectorXd to_hyperboloid(const Eigen::VectorXd& p) {
  const double r2 = p.squaredNorm();
  Eigen::VectorXd X(p.size() + 1);
  X[0] = (1.0 + r2) / (1.0 - r2);
  X.tail(p.size()) = 2.0 * p / (1.0 - r2);
  return X;
}

Eigen::VectorXd from_hyperboloid(const Eigen::VectorXd& X) {
  return X.tail(X.size() - 1) / (1.0 + X[0]);
}

}  // namespace

Eigen::VectorXd geodesic_point(const FiniteMMS& space, const Eigen::VectorXd& a, const Eigen::VectorXd& b, double t,
                               bool* cut_locus) {
  if (cut_locus) *cut_locus = false;
  const auto* cm = std::get_if<CoordinateMetric>(&space.metric());
  if (!cm) throw Error("geodesics need a model space with coordinates");
  switch (cm->kind) {
    case CoordinateMetric::Kind::normed:
      return (1.0 - t) * a + t * b;
    case CoordinateMetric::Kind::sphere: {
      const double w = model_distance(space, a, b);
      if (w < 1e-15) return a;
      if (std::numbers::pi - w < 1e-9) {
        if (cut_locus) *cut_locus = true;
        const Eigen::VectorXd mid = lexicographic_midpoint(a);
        return std::cos(t * std::numbers::pi) * a + std::sin(t * std::numbers::pi) * mid;
      }
      const Eigen::VectorXd p = (std::sin((1.0 - t) * w) * a + std::sin(t * w) * b) / std::sin(w);
      return p.normalized();
    }
    case CoordinateMetric::Kind::hyperbolic: {
      const Eigen::VectorXd X = to_hyperboloid(a), Y = to_hyperboloid(b);
      const double D = model_distance(space, a, b);
      if (D < 1e-15) return a;
      const Eigen::VectorXd Z = (std::sinh((1.0 - t) * D) * X + std::sinh(t * D) * Y) / std::sinh(D);
      return from_hyperboloid(Z);
    }
  }
  return a;
}

double geodesic_jacobian(const FiniteMMS& space, const Eigen::VectorXd& p, const Eigen::VectorXd& target, double t) {
  const auto* cm = std::get_if<CoordinateMetric>(&space.metric());
  if (!cm) throw Error("geodesics need a model space with coordinates");
  const bool sphere = cm->kind == CoordinateMetric::Kind::sphere;
  const bool hyperbolic = cm->kind == CoordinateMetric::Kind::hyperbolic;
  const int n = static_cast<int>(p.size());
  // tangent basis at p
  Eigen::MatrixXd basis;
  if (sphere) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - p * p.transpose() / p.squaredNorm();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeFullU);
    basis = svd.matrixU().leftCols(n - 1);
  } else {
    basis = Eigen::MatrixXd::Identity(n, n);
  }
  const int d = static_cast<int>(basis.cols());
  const double eps = 1e-6;
  auto project = [&](Eigen::VectorXd y) -> Eigen::VectorXd { return sphere ? Eigen::VectorXd(y.normalized()) : y; };
  auto conformal = [&](const Eigen::VectorXd& y) {
    if (!hyperbolic) return 1.0;
    const double lam = 2.0 / (1.0 - y.squaredNorm());
    return lam * lam;
  };
  Eigen::MatrixXd src(n, d), img(n, d);
  for (int a = 0; a < d; ++a) {
    const Eigen::VectorXd lo = project(p - eps * basis.col(a)), hi = project(p + eps * basis.col(a));
    src.col(a) = (hi - lo) / (2.0 * eps);
    img.col(a) = (geodesic_point(space, hi, target, t) - geodesic_point(space, lo, target, t)) / (2.0 * eps);
  }
  const double g0 = conformal(p), g1 = conformal(geodesic_point(space, p, target, t));
  const double num = (g1 * img.transpose() * img).determinant();
  const double den = (g0 * src.transpose() * src).determinant();
  return std::sqrt(std::max(num, 0.0) / den);
}

int locate_cell(const FiniteMMS& space, const Eigen::VectorXd& loc) {
  const auto& grid = space.grid();
  const ModelKind kind = space.model().kind;
  if (!grid) return nearest_point(space, loc);
  if (kind == ModelKind::sphere) {
    const int L = grid->longitudes;
    const double dl = 2.0 * std::numbers::pi / L;
    double lam = std::atan2(loc[1], loc[0]);
    if (lam < 0.0) lam += 2.0 * std::numbers::pi;
    const int j = static_cast<int>(std::llround(lam / dl)) % L;
    if (loc.size() == 2) return j;
    const double dt = grid->spacing;
    const int R = grid->rings + 1;
    const double th = std::atan2(loc.head<2>().norm(), loc[2]);
    if (th < 0.5 * dt) return 0;
    if (th > std::numbers::pi - 0.5 * dt) return space.size() - 1;
    const int ring = std::clamp(static_cast<int>(std::llround(th / dt)), 1, R - 1);
    return 1 + (ring - 1) * L + j;
  }
  const int d = static_cast<int>(grid->dims.size());
  long site = 0;
  for (int a = 0; a < d; ++a) {
    const long idx = std::clamp<long>(std::lround((loc[a] - grid->origin[a]) / grid->spacing), 0, grid->dims[a] - 1);
    site = site * grid->dims[a] + idx;
  }
  const int p = grid->site_to_point.empty() ? static_cast<int>(site) : grid->site_to_point[site];
  return p >= 0 ? p : nearest_point(space, loc);
}

std::vector<CellSample> cell_samples(const FiniteMMS& space, int i, int k) {
  const auto& grid = space.grid();
  std::vector<CellSample> out;
  if (k <= 1 || !grid || !space.has_coords()) {
    out.push_back({space.has_coords() ? Eigen::VectorXd(space.coords().row(i).transpose()) : Eigen::VectorXd(), 1.0});
    return out;
  }
  const Eigen::VectorXd x = space.coords().row(i).transpose();
  const ModelKind kind = space.model().kind;
  auto offset = [k](int a) { return (a + 0.5) / k - 0.5; };
  if (kind == ModelKind::sphere) {
    const double dl = 2.0 * std::numbers::pi / grid->longitudes;
    if (x.size() == 2) {
      const double lam0 = std::atan2(x[1], x[0]);
      for (int a = 0; a < k; ++a) {
        const double lam = lam0 + offset(a) * dl;
        out.push_back({Eigen::Vector2d(std::cos(lam), std::sin(lam)), 1.0 / k});
      }
      return out;
    }
    const double dt = grid->spacing;
    const double th0 = std::atan2(x.head<2>().norm(), x[2]);
    const double lam0 = std::atan2(x[1], x[0]);
    const bool north = i == 0, south = i == space.size() - 1;
    double total = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        double th, lam;
        if (north || south) {
          const double r = (a + 0.5) / k * 0.5 * dt;
          th = north ? r : std::numbers::pi - r;
          lam = (b + 0.5) / k * 2.0 * std::numbers::pi;
        } else {
          th = th0 + offset(a) * dt;
          lam = lam0 + offset(b) * dl;
        }
        const double w = std::sin(th);
        out.push_back({Eigen::Vector3d(std::sin(th) * std::cos(lam), std::sin(th) * std::sin(lam), std::cos(th)), w});
        total += w;
      }
    for (auto& s : out) s.fraction /= total;
    return out;
  }
  const int d = static_cast<int>(x.size());
  int count = 1;
  for (int a = 0; a < d; ++a) count *= k;
  double total = 0.0;
  for (int c = 0; c < count; ++c) {
    Eigen::VectorXd p = x;
    int code = c;
    for (int a = 0; a < d; ++a) {
      p[a] += offset(code % k) * grid->spacing;
      code /= k;
    }
    double w = 1.0;
    if (kind == ModelKind::hyperbolic) {
      const double lam = 2.0 / (1.0 - p.squaredNorm());
      w = lam * lam;
    }
    out.push_back({p, w});
    total += w;
  }
  for (auto& s : out) s.fraction /= total;
  return out;
}

Interpolation interpolate_coupling(const FiniteMMS& space, const Coupling& coupling, const std::vector<double>& times,
                                   int subsamples) {
  Interpolation out;
  out.times = times;
  const int n = space.size();
  for (double t : times) {
    if (t < 0.0 || t > 1.0) throw Error("interpolation times must lie in [0, 1]");
    ProbabilityVector mu = ProbabilityVector::Zero(n);
    int cut = 0;
    for (const auto& e : coupling.entries) {
      if (t == 0.0) {
        mu[e.i] += e.mass;
        continue;
      }
      if (t == 1.0) {
        mu[e.j] += e.mass;
        continue;
      }
      const auto xs = cell_samples(space, e.i, subsamples);
      const auto ys = cell_samples(space, e.j, subsamples);
      bool flagged = false;
      for (std::size_t s = 0; s < xs.size(); ++s) {
        bool c = false;
        const Eigen::VectorXd& yb = ys[std::min(s, ys.size() - 1)].position;
        const Eigen::VectorXd p = geodesic_point(space, xs[s].position, yb, t, &c);
        flagged = flagged || c;
        mu[locate_cell(space, p)] += e.mass * xs[s].fraction;
      }
      if (flagged) ++cut;
    }
    out.cut_locus_pairs = std::max(out.cut_locus_pairs, cut);
    out.measures.push_back(mu);
  }
  return out;
}

Interpolation displacement_interpolation(const FiniteMMS& space, const ProbabilityVector& mu,
                                         const ProbabilityVector& nu, const std::vector<double>& times,
                                         int subsamples) {
  if (space.model().kind == ModelKind::none) throw Error("displacement interpolation needs a model space");
  const WassersteinResult w = wq_distance(space, mu, nu, 2.0);
  return interpolate_coupling(space, w.coupling, times, subsamples);
}

Interpolation contraction_interpolation(const FiniteMMS& space, const ProbabilityVector& mu, int x0,
                                        const std::vector<double>& times, int subsamples) {
  check_probability(space, mu);
  if (x0 < 0 || x0 >= space.size()) throw Error("contraction target out of range");
  Interpolation out;
  out.times = times;
  const Eigen::VectorXd target = space.coords().row(x0).transpose();
  for (double t : times) {
    if (t < 0.0 || t > 1.0) throw Error("interpolation times must lie in [0, 1]");
    ProbabilityVector nu = ProbabilityVector::Zero(space.size());
    int cut = 0;
    for (int x = 0; x < space.size(); ++x) {
      if (!(mu[x] > 0.0)) continue;
      if (t == 0.0 || t == 1.0) {
        nu[t == 0.0 ? x : x0] += mu[x];
        continue;
      }
      bool flagged = false;
      for (const CellSample& s : cell_samples(space, x, subsamples)) {
        bool c = false;
        nu[locate_cell(space, geodesic_point(space, s.position, target, t, &c))] += mu[x] * s.fraction;
        flagged = flagged || c;
      }
      if (flagged) ++cut;
    }
    out.cut_locus_pairs = std::max(out.cut_locus_pairs, cut);
    out.measures.push_back(nu);
  }
  return out;
}

BrenierReport metric_brenier_check(const FiniteMMS& space, const ProbabilityVector& mu, const ProbabilityVector& nu) {
  const KantorovichPotential k = kantorovich_potential(space, mu, nu);
  const ScalarField asc = local_slope(space, k.phi, SlopeVariant::ascending);
  BrenierReport r;
  double num = 0.0, den = 0.0;
  for (const auto& e : k.coupling.entries) {
    const double d = space.distance(e.i, e.j);
    num += e.mass * (asc[e.i] - d) * (asc[e.i] - d);
    den += e.mass * d * d;
  }
  r.w2 = std::sqrt(den);
  r.relative_residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  for (int x = 0; x < space.size(); ++x) {
    if (!(mu[x] > 0.0)) continue;
    const Eigen::VectorXd row = space.distance_row(x);
    double reach = 0.0;
    for (int y = 0; y < space.size(); ++y)
      if (std::abs(k.phi[x] + k.phic[y] - 0.5 * row[y] * row[y]) <= 1e-9) reach = std::max(reach, row[y]);
    r.max_inequality_violation = std::max(r.max_inequality_violation, asc[x] - reach);
  }
  return r;
}

}  // namespace mms
