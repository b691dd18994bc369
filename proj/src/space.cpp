#include "mms/space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

namespace mms {

namespace {

double coordinate_distance(const CoordinateMetric& m, const Eigen::Ref<const Eigen::VectorXd>& a,
                           const Eigen::Ref<const Eigen::VectorXd>& b) {
  switch (m.kind) {
    case CoordinateMetric::Kind::normed:
      if (m.norm.is_euclidean()) return (a - b).norm();
      return m.norm.norm(a - b);
    case CoordinateMetric::Kind::sphere: {
      const double dot = a.dot(b);
      double cross = 0.0;
      if (a.size() == 2) {
        cross = std::abs(a[0] * b[1] - a[1] * b[0]);
      } else {
        cross = a.head<3>().cross(b.head<3>()).norm();
      }
      return std::atan2(cross, dot);
    }
    case CoordinateMetric::Kind::hyperbolic: {
      const double num = (a - b).norm();
      if (num == 0.0) return 0.0;
      const double den = std::sqrt((1.0 - a.squaredNorm()) * (1.0 - b.squaredNorm()));
      return 2.0 * std::asinh(num / den);
    }
  }
  return 0.0;
}

// Euclidean radius in the embedding that contains every point within metric distance h.
double embedding_radius(const CoordinateMetric& m, double h) {
  switch (m.kind) {
    case CoordinateMetric::Kind::normed:
      return h * m.norm.euclidean_bound();
    case CoordinateMetric::Kind::sphere:
      return h;
    case CoordinateMetric::Kind::hyperbolic:
      return 0.5 * h;
  }
  return h;
}

struct CellHash {
  std::size_t operator()(const std::array<long long, 3>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (long long v : k) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

std::string ModelTag::to_string() const {
  char buf[96];
  switch (kind) {
    case ModelKind::none:
      return "none";
    case ModelKind::euclidean:
      return "euclidean";
    case ModelKind::sphere:
      std::snprintf(buf, sizeof buf, "sphere(K=%g,N=%g)", K, N);
      return buf;
    case ModelKind::hyperbolic:
      std::snprintf(buf, sizeof buf, "hyperbolic(K=%g,N=%g)", K, N);
      return buf;
    case ModelKind::normed:
      return "normed(" + norm.to_string() + ")";
  }
  return "none";
}

NeighborhoodGraph::NeighborhoodGraph(int n, std::vector<Edge> edges) {
  std::vector<int> count(n + 1, 0);
  for (const auto& e : edges) {
    ++count[e.i + 1];
    ++count[e.j + 1];
  }
  offsets_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + count[i + 1];
  targets_.resize(offsets_[n]);
  dists_.resize(offsets_[n]);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges) {
    targets_[fill[e.i]] = e.j;
    dists_[fill[e.i]++] = e.d;
    targets_[fill[e.j]] = e.i;
    dists_[fill[e.j]++] = e.d;
  }
  std::vector<std::pair<int, double>> row;
  for (int i = 0; i < n; ++i) {
    row.clear();
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) row.emplace_back(targets_[k], dists_[k]);
    std::sort(row.begin(), row.end());
    for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      targets_[k] = row[k - offsets_[i]].first;
      dists_[k] = row[k - offsets_[i]].second;
    }
  }
}

std::vector<Edge> NeighborhoodGraph::edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < size(); ++i)
    for (int k = begin(i); k < end(i); ++k)
      if (targets_[k] > i) out.push_back({i, targets_[k], dists_[k]});
  return out;
}

FiniteMMS::FiniteMMS(Metric metric, Eigen::VectorXd weights, double h, Options options)
    : metric_(std::move(metric)), weights_(std::move(weights)), h_(h), options_(std::move(options)) {
  const int n = static_cast<int>(weights_.size());
  if (n == 0) throw Error("a metric measure space needs at least one point");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error("neighbourhood scale h must be positive");
  if (const auto* dense = std::get_if<DenseMetric>(&metric_)) {
    if (dense->d.rows() != n || dense->d.cols() != n) throw Error("distance matrix size does not match the weights");
  } else {
    const auto& cm = std::get<CoordinateMetric>(metric_);
    if (cm.coords.rows() != n) throw Error("coordinate count does not match the weights");
    if (cm.kind == CoordinateMetric::Kind::normed && cm.norm.dim() != cm.coords.cols())
      throw Error("norm dimension does not match the coordinates");
  }
  if (!options_.boundary.empty() && static_cast<int>(options_.boundary.size()) != n)
    throw Error("boundary flags do not match the point count");
  if (options_.conductances.nonZeros() > 0 && (options_.conductances.rows() != n || options_.conductances.cols() != n))
    throw Error("conductance matrix size does not match the point count");
  if (options_.gradient_model) {
    gradient_model_ = *options_.gradient_model;
  } else {
    const ModelKind k = options_.model.kind;
    const bool hilbert = k == ModelKind::euclidean || k == ModelKind::sphere || k == ModelKind::hyperbolic;
    gradient_model_ = hilbert && has_conductances() ? GradientModel::carre_du_champ : GradientModel::metric_slope;
  }
  if (gradient_model_ == GradientModel::carre_du_champ && !has_conductances())
    throw Error("the carre du champ gradient model needs conductances");
  build_neighbors();
  interior_.assign(n, 1);
  if (!options_.boundary.empty()) {
    for (int i = 0; i < n; ++i) {
      if (!options_.boundary[i]) continue;
      interior_[i] = 0;
      for (int k = graph_.begin(i); k < graph_.end(i); ++k) interior_[graph_.target(k)] = 0;
    }
  }
}

void FiniteMMS::build_neighbors() {
  const int n = size();
  std::vector<Edge> edges;
  const auto* cm = std::get_if<CoordinateMetric>(&metric_);
  if (!cm || cm->coords.cols() > 3) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = distance(i, j);
        if (d > 0.0 && d <= h_) edges.push_back({i, j, d});
      }
    graph_ = NeighborhoodGraph(n, std::move(edges));
    return;
  }
  const int D = static_cast<int>(cm->coords.cols());
  const double cell = embedding_radius(*cm, h_) * (1.0 + 1e-12);
  auto key_of = [&](int i) {
    std::array<long long, 3> key{0, 0, 0};
    for (int a = 0; a < D; ++a) key[a] = static_cast<long long>(std::floor(cm->coords(i, a) / cell));
    return key;
  };
  std::unordered_map<std::array<long long, 3>, std::vector<int>, CellHash> buckets;
  buckets.reserve(n);
  for (int i = 0; i < n; ++i) buckets[key_of(i)].push_back(i);
  const int span = D == 1 ? 3 : (D == 2 ? 9 : 27);
  for (int i = 0; i < n; ++i) {
    const auto key = key_of(i);
    for (int s = 0; s < span; ++s) {
      std::array<long long, 3> probe = key;
      int code = s;
      for (int a = 0; a < D; ++a) {
        probe[a] += code % 3 - 1;
        code /= 3;
      }
      const auto it = buckets.find(probe);
      if (it == buckets.end()) continue;
      for (int j : it->second) {
        if (j <= i) continue;
        const double d = distance(i, j);
        if (d > 0.0 && d <= h_) edges.push_back({i, j, d});
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  graph_ = NeighborhoodGraph(n, std::move(edges));
}

double FiniteMMS::distance(int i, int j) const {
  if (const auto* dense = std::get_if<DenseMetric>(&metric_)) return dense->d(i, j);
  const auto& cm = std::get<CoordinateMetric>(metric_);
  if (i == j) return 0.0;
  return coordinate_distance(cm, cm.coords.row(i).transpose(), cm.coords.row(j).transpose());
}

Eigen::VectorXd FiniteMMS::distance_row(int i) const {
  if (const auto* dense = std::get_if<DenseMetric>(&metric_)) return dense->d.row(i).transpose();
  const auto& cm = std::get<CoordinateMetric>(metric_);
  if (cm.kind == CoordinateMetric::Kind::normed && cm.norm.is_euclidean())
    return (cm.coords.rowwise() - cm.coords.row(i)).rowwise().norm();
  Eigen::VectorXd row(size());
  for (int j = 0; j < size(); ++j) row[j] = distance(i, j);
  return row;
}

Eigen::MatrixXd FiniteMMS::distance_matrix() const {
  if (const auto* dense = std::get_if<DenseMetric>(&metric_)) return dense->d;
  const int n = size();
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = distance(i, j);
  }
  return d;
}

const Eigen::MatrixXd& FiniteMMS::coords() const {
  const auto* cm = std::get_if<CoordinateMetric>(&metric_);
  if (!cm) throw Error("space has no embedding coordinates");
  return cm->coords;
}

int FiniteMMS::dim() const {
  const auto* cm = std::get_if<CoordinateMetric>(&metric_);
  return cm ? static_cast<int>(cm->coords.cols()) : 0;
}

const SparseMatrix& FiniteMMS::conductances() const {
  if (!has_conductances()) throw Error("space carries no Dirichlet form (no conductances)");
  return options_.conductances;
}

ValidationReport validate_metric(const FiniteMMS& space, int exact_limit, std::size_t samples, unsigned seed) {
  ValidationReport r;
  const int n = space.size();
  constexpr double tol = 1e-12;
  r.min_weight = space.weights().minCoeff();
  if (!(r.min_weight > 0.0)) r.failures.push_back("nonpositive mass");
  for (int i = 0; i < n; ++i)
    if (space.neighbors().degree(i) == 0) ++r.isolated_points;

  if (n <= exact_limit) {
    const Eigen::MatrixXd d = space.distance_matrix();
    r.max_diagonal = d.diagonal().cwiseAbs().maxCoeff();
    r.max_asymmetry = (d - d.transpose()).cwiseAbs().maxCoeff();
    for (int k = 0; k < n; ++k) {
      // d(i,j) - d(i,k) - d(k,j) for all i, j at once
      const Eigen::MatrixXd slack = d - (d.col(k).replicate(1, n) + d.row(k).replicate(n, 1));
      r.max_triangle_violation = std::max(r.max_triangle_violation, slack.maxCoeff());
    }
  } else {
    r.sampled = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < n; ++i) r.max_diagonal = std::max(r.max_diagonal, std::abs(space.distance(i, i)));
    for (std::size_t s = 0; s < samples; ++s) {
      const int i = pick(rng), j = pick(rng), k = pick(rng);
      const double dij = space.distance(i, j);
      r.max_asymmetry = std::max(r.max_asymmetry, std::abs(dij - space.distance(j, i)));
      r.max_triangle_violation =
          std::max(r.max_triangle_violation, dij - space.distance(i, k) - space.distance(k, j));
    }
  }
  if (r.max_diagonal > tol) r.failures.push_back("nonzero diagonal");
  if (r.max_asymmetry > tol) r.failures.push_back("asymmetric distance");
  if (r.max_triangle_violation > tol) r.failures.push_back("triangle inequality violated");
  const Eigen::MatrixXd* dense = nullptr;
  if (const auto* dm = std::get_if<DenseMetric>(&space.metric())) dense = &dm->d;
  if (dense && (dense->array() < -tol).any()) r.failures.push_back("negative distance");
  return r;
}

FiniteMMS from_distance_matrix(const Eigen::MatrixXd& dist, const Eigen::VectorXd& weights, double h) {
  return FiniteMMS(DenseMetric{dist}, weights, h);
}

FiniteMMS build_euclidean_grid(const std::vector<int>& dims, double spacing, const NormSpec& norm_in,
                               std::optional<double> h, std::optional<Eigen::VectorXd> origin) {
  if (dims.empty()) throw Error("grid dimensions must be nonempty");
  if (!(spacing > 0.0)) throw Error("grid spacing must be positive");
  const int d = static_cast<int>(dims.size());
  double total = 1.0;
  for (int k : dims) {
    if (k < 1) throw Error("grid dimensions must be positive");
    total *= k;
  }
  if (total > 1e7) throw Error("grid exceeds 10^7 points");
  const NormSpec norm = norm_in.dim() == 0 ? NormSpec::euclidean(d) : norm_in;
  if (norm.dim() != d) throw Error("norm dimension does not match the grid");
  const Eigen::VectorXd o = origin ? *origin : Eigen::VectorXd::Zero(d);
  if (o.size() != d) throw Error("grid origin dimension mismatch");

  const int n = static_cast<int>(total);
  std::vector<int> stride(d, 1);
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * dims[a + 1];

  CoordinateMetric cm{CoordinateMetric::Kind::normed, Eigen::MatrixXd(n, d), norm};
  std::vector<char> boundary(n, 0);
  std::vector<Eigen::Triplet<double>> trip;
  const double axis_w = std::pow(spacing, d - 2);
  for (int i = 0; i < n; ++i) {
    int rest = i;
    for (int a = 0; a < d; ++a) {
      const int idx = rest / stride[a];
      rest %= stride[a];
      cm.coords(i, a) = o[a] + idx * spacing;
      if (dims[a] > 1 && (idx == 0 || idx == dims[a] - 1)) boundary[i] = 1;
      if (idx + 1 < dims[a]) {
        trip.emplace_back(i, i + stride[a], axis_w);
        trip.emplace_back(i + stride[a], i, axis_w);
      }
    }
  }
  FiniteMMS::Options opt;
  opt.model.kind = norm.is_euclidean() ? ModelKind::euclidean : ModelKind::normed;
  opt.model.K = 0.0;
  opt.model.N = d;
  opt.model.norm = norm;
  GridSpec grid;
  grid.dims = dims;
  grid.spacing = spacing;
  grid.origin = o;
  grid.site_to_point.resize(n);
  for (int i = 0; i < n; ++i) grid.site_to_point[i] = i;
  opt.grid = std::move(grid);
  opt.conductances.resize(n, n);
  opt.conductances.setFromTriplets(trip.begin(), trip.end());
  opt.boundary = std::move(boundary);
  const Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, std::pow(spacing, d));
  return FiniteMMS(std::move(cm), weights, h ? *h : 1.5 * spacing, std::move(opt));
}

FiniteMMS build_centered_grid(int dim, double half_width, double spacing, const NormSpec& norm) {
  const int m = static_cast<int>(std::llround(half_width / spacing));
  return build_euclidean_grid(std::vector<int>(dim, 2 * m + 1), spacing, norm, std::nullopt,
                              Eigen::VectorXd::Constant(dim, -m * spacing));
}

FiniteMMS build_sphere(int N, double mesh) {
  using std::numbers::pi;
  if (N < 1 || N > 2) throw Error("build_sphere supports N = 1 and N = 2 only");
  if (!(mesh > 0.0)) throw Error("sphere mesh must be positive");
  FiniteMMS::Options opt;
  opt.model.kind = ModelKind::sphere;
  opt.model.N = N;
  opt.model.K = N - 1;
  std::vector<Eigen::Triplet<double>> trip;
  auto link = [&](int a, int b, double w) {
    trip.emplace_back(a, b, w);
    trip.emplace_back(b, a, w);
  };
  if (N == 1) {
    const int L = std::max(3, static_cast<int>(std::llround(2.0 * pi / mesh)));
    const double dl = 2.0 * pi / L;
    CoordinateMetric cm{CoordinateMetric::Kind::sphere, Eigen::MatrixXd(L, 2), {}};
    for (int j = 0; j < L; ++j) {
      cm.coords(j, 0) = std::cos(j * dl);
      cm.coords(j, 1) = std::sin(j * dl);
      link(j, (j + 1) % L, 1.0 / dl);
    }
    opt.conductances.resize(L, L);
    opt.conductances.setFromTriplets(trip.begin(), trip.end());
    GridSpec grid;
    grid.dims = {L};
    grid.spacing = dl;
    grid.longitudes = L;
    opt.grid = std::move(grid);
    return FiniteMMS(std::move(cm), Eigen::VectorXd::Constant(L, dl), 1.5 * dl, std::move(opt));
  }
  const int R = std::max(2, static_cast<int>(std::llround(pi / mesh)));
  const int L = std::max(3, static_cast<int>(std::llround(2.0 * pi / mesh)));
  const double dt = pi / R;
  const double dl = 2.0 * pi / L;
  const int n = 2 + (R - 1) * L;
  const int south = n - 1;
  auto id = [&](int ring, int j) { return 1 + (ring - 1) * L + ((j % L) + L) % L; };

  CoordinateMetric cm{CoordinateMetric::Kind::sphere, Eigen::MatrixXd(n, 3), {}};
  Eigen::VectorXd w(n);
  cm.coords.row(0) << 0.0, 0.0, 1.0;
  cm.coords.row(south) << 0.0, 0.0, -1.0;
  const double cap = 2.0 * pi * (1.0 - std::cos(0.5 * dt));
  w[0] = w[south] = cap;
  for (int i = 1; i < R; ++i) {
    const double th = i * dt;
    const double area = dl * (std::cos(th - 0.5 * dt) - std::cos(th + 0.5 * dt));
    for (int j = 0; j < L; ++j) {
      const int p = id(i, j);
      const double lam = j * dl;
      cm.coords.row(p) << std::sin(th) * std::cos(lam), std::sin(th) * std::sin(lam), std::cos(th);
      w[p] = area;
      link(p, id(i, j + 1), dt / (std::sin(th) * dl));
      if (i + 1 < R) link(p, id(i + 1, j), std::sin(th + 0.5 * dt) * dl / dt);
    }
  }
  for (int j = 0; j < L; ++j) {
    link(0, id(1, j), std::sin(0.5 * dt) * dl / dt);
    link(south, id(R - 1, j), std::sin(0.5 * dt) * dl / dt);
  }
  opt.conductances.resize(n, n);
  opt.conductances.setFromTriplets(trip.begin(), trip.end());
  GridSpec grid;
  grid.dims = {R - 1, L};
  grid.spacing = dt;
  grid.rings = R - 1;
  grid.longitudes = L;
  opt.grid = std::move(grid);
  return FiniteMMS(std::move(cm), w, 1.5 * std::max(dt, dl), std::move(opt));
}

FiniteMMS build_hyperbolic_disk(double radius, double spacing) {
  if (!(radius > 0.0 && radius < 1.0)) throw Error("Poincare disk radius must lie in (0, 1)");
  if (!(spacing > 0.0 && spacing < radius)) throw Error("hyperbolic grid spacing must lie in (0, radius)");
  const int m = static_cast<int>(std::floor(radius / spacing + 1e-9));
  const int side = 2 * m + 1;
  std::vector<int> site(side * side, -1);
  std::vector<Eigen::Vector2d> pts;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) {
      const Eigen::Vector2d x((a - m) * spacing, (b - m) * spacing);
      if (x.norm() <= radius + 1e-12) {
        site[a * side + b] = static_cast<int>(pts.size());
        pts.push_back(x);
      }
    }
  const int n = static_cast<int>(pts.size());
  CoordinateMetric cm{CoordinateMetric::Kind::hyperbolic, Eigen::MatrixXd(n, 2), {}};
  Eigen::VectorXd w(n);
  std::vector<char> boundary(n, 0);
  std::vector<Eigen::Triplet<double>> trip;
  double lambda_max = 0.0;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) {
      const int p = site[a * side + b];
      if (p < 0) continue;
      cm.coords.row(p) = pts[p].transpose();
      const double lam = 2.0 / (1.0 - pts[p].squaredNorm());
      lambda_max = std::max(lambda_max, lam);
      w[p] = lam * lam * spacing * spacing;
      const int nbrs[4][2] = {{a + 1, b}, {a - 1, b}, {a, b + 1}, {a, b - 1}};
      for (const auto& q : nbrs) {
        const int s = (q[0] >= 0 && q[0] < side && q[1] >= 0 && q[1] < side) ? site[q[0] * side + q[1]] : -1;
        if (s < 0) {
          boundary[p] = 1;
        } else if (s > p) {
          trip.emplace_back(p, s, 1.0);
          trip.emplace_back(s, p, 1.0);
        }
      }
    }
  FiniteMMS::Options opt;
  opt.model.kind = ModelKind::hyperbolic;
  opt.model.K = -1.0;
  opt.model.N = 2.0;
  opt.conductances.resize(n, n);
  opt.conductances.setFromTriplets(trip.begin(), trip.end());
  opt.boundary = std::move(boundary);
  GridSpec grid;
  grid.dims = {side, side};
  grid.spacing = spacing;
  grid.origin = Eigen::Vector2d(-m * spacing, -m * spacing);
  grid.site_to_point = std::move(site);
  opt.grid = std::move(grid);
  return FiniteMMS(std::move(cm), w, 1.5 * spacing * lambda_max, std::move(opt));
}

namespace {

FiniteMMS unit_graph(int n, const std::vector<std::pair<int, int>>& links, std::vector<char> boundary) {
  // graph distances by breadth-first search from every vertex
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : links) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
  for (int s = 0; s < n; ++s) {
    std::vector<int> queue{s};
    d(s, s) = 0.0;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int v : adj[queue[q]])
        if (std::isinf(d(s, v))) {
          d(s, v) = d(s, queue[q]) + 1.0;
          queue.push_back(v);
        }
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (auto [a, b] : links) {
    trip.emplace_back(a, b, 1.0);
    trip.emplace_back(b, a, 1.0);
  }
  FiniteMMS::Options opt;
  opt.conductances.resize(n, n);
  opt.conductances.setFromTriplets(trip.begin(), trip.end());
  opt.boundary = std::move(boundary);
  return FiniteMMS(DenseMetric{d}, Eigen::VectorXd::Ones(n), 1.0, std::move(opt));
}

}  // namespace

FiniteMMS build_cycle_graph(int n) {
  if (n < 3) throw Error("cycle graph needs at least 3 vertices");
  std::vector<std::pair<int, int>> links;
  for (int i = 0; i < n; ++i) links.emplace_back(i, (i + 1) % n);
  return unit_graph(n, links, {});
}

FiniteMMS build_complete_graph(int n) {
  if (n < 2) throw Error("complete graph needs at least 2 vertices");
  std::vector<std::pair<int, int>> links;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) links.emplace_back(i, j);
  return unit_graph(n, links, {});
}

FiniteMMS build_path_graph(int n) {
  if (n < 2) throw Error("path graph needs at least 2 vertices");
  std::vector<std::pair<int, int>> links;
  for (int i = 0; i + 1 < n; ++i) links.emplace_back(i, i + 1);
  std::vector<char> boundary(n, 0);
  boundary.front() = boundary.back() = 1;
  return unit_graph(n, links, std::move(boundary));
}

FiniteMMS with_masses(const FiniteMMS& space, const Eigen::VectorXd& V) {
  if (V.size() != space.size()) throw Error("potential size does not match the space");
  FiniteMMS::Options opt;
  opt.model = space.model();
  opt.grid = space.grid();
  opt.boundary = space.boundary();
  opt.gradient_model = space.gradient_model();
  if (space.has_conductances()) {
    SparseMatrix w = space.conductances();
    for (int k = 0; k < w.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(w, k); it; ++it)
        it.valueRef() *= std::exp(-0.5 * (V[it.row()] + V[it.col()]));
    opt.conductances = std::move(w);
  }
  const Eigen::VectorXd weights = space.weights().cwiseProduct((-V).array().exp().matrix());
  return FiniteMMS(space.metric(), weights, space.h(), std::move(opt));
}

FiniteMMS restrict(const FiniteMMS& space, const std::vector<int>& indices) {
  const int m = static_cast<int>(indices.size());
  std::vector<int> position(space.size(), -1);
  for (int k = 0; k < m; ++k) {
    if (indices[k] < 0 || indices[k] >= space.size()) throw Error("restriction index out of range");
    position[indices[k]] = k;
  }
  Metric metric;
  if (const auto* dense = std::get_if<DenseMetric>(&space.metric())) {
    Eigen::MatrixXd d(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) d(a, b) = dense->d(indices[a], indices[b]);
    metric = DenseMetric{d};
  } else {
    CoordinateMetric cm = std::get<CoordinateMetric>(space.metric());
    Eigen::MatrixXd c(m, cm.coords.cols());
    for (int a = 0; a < m; ++a) c.row(a) = cm.coords.row(indices[a]);
    cm.coords = std::move(c);
    metric = std::move(cm);
  }
  Eigen::VectorXd w(m);
  for (int a = 0; a < m; ++a) w[a] = space.weight(indices[a]);
  FiniteMMS::Options opt;
  opt.model = space.model();
  opt.gradient_model = space.gradient_model();
  if (!space.boundary().empty()) {
    opt.boundary.resize(m);
    for (int a = 0; a < m; ++a) opt.boundary[a] = space.boundary()[indices[a]];
  }
  if (space.has_conductances()) {
    std::vector<Eigen::Triplet<double>> trip;
    const SparseMatrix& c = space.conductances();
    for (int k = 0; k < c.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(c, k); it; ++it) {
        const int a = position[it.row()], b = position[it.col()];
        if (a >= 0 && b >= 0) trip.emplace_back(a, b, it.value());
      }
    opt.conductances.resize(m, m);
    opt.conductances.setFromTriplets(trip.begin(), trip.end());
    if (opt.conductances.nonZeros() == 0) opt.gradient_model = GradientModel::metric_slope;
  }
  return FiniteMMS(std::move(metric), w, space.h(), std::move(opt));
}

double ball_volume(const FiniteMMS& space, int x, double r) {
  if (r < 0.0) throw Error("ball radius must be nonnegative");
  if (x < 0 || x >= space.size()) throw Error("ball centre out of range");
  double total = 0.0;
  for (int y = 0; y < space.size(); ++y)
    if (space.distance(x, y) < r) total += space.weight(y);
  return total;
}

double model_distance(const FiniteMMS& space, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto* cm = std::get_if<CoordinateMetric>(&space.metric());
  if (!cm) throw Error("model distance needs embedding coordinates");
  return coordinate_distance(*cm, a, b);
}

int nearest_point(const FiniteMMS& space, const Eigen::VectorXd& location) {
  const auto* cm = std::get_if<CoordinateMetric>(&space.metric());
  if (!cm) throw Error("nearest point search needs embedding coordinates");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < space.size(); ++i) {
    const double d = coordinate_distance(*cm, cm->coords.row(i).transpose(), location);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace mms
