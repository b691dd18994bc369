#pragma once

// Finite metric measure spaces (X, d, m) carried together with a
// neighbourhood scale h. Distances are evaluated lazily from the stored
// representation (dense matrix, or coordinates plus a model metric), so
// fine grids never materialise an n x n matrix.

#include "mms/norm.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mms {

using ScalarField = Eigen::VectorXd;
using SignedMeasure = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { none, euclidean, sphere, hyperbolic, normed };

struct ModelTag {
  ModelKind kind = ModelKind::none;
  double K = 0.0;
  double N = 0.0;
  NormSpec norm;  // meaningful for euclidean and normed

  std::string to_string() const;
};

/// Which notion of |Df| the differential objects use on this space.
/// carre_du_champ: the space carries a Dirichlet form consistent with a
/// Hilbertian continuum (Euclidean grids, sphere, hyperbolic disk);
/// metric_slope: the scale-h slope, valid on every space.
enum class GradientModel { metric_slope, carre_du_champ };

/// Chart data for spaces that discretise a model space on a regular
/// coordinate lattice. Euclidean and hyperbolic grids use Cartesian
/// coordinates (Poincare coordinates for the disk); the sphere uses
/// colatitude rings, see build_sphere.
struct GridSpec {
  std::vector<int> dims;
  double spacing = 0.0;
  Eigen::VectorXd origin;
  /// lattice index -> point index, -1 where the lattice site is not in the space
  std::vector<int> site_to_point;
  /// sphere only: number of rings strictly between the poles and longitudes per ring
  int rings = 0;
  int longitudes = 0;
};

struct DenseMetric {
  Eigen::MatrixXd d;
};

/// Distances computed from stored coordinates (rows of coords).
struct CoordinateMetric {
  enum class Kind { normed, sphere, hyperbolic };
  Kind kind = Kind::normed;
  Eigen::MatrixXd coords;
  NormSpec norm;
};

using Metric = std::variant<DenseMetric, CoordinateMetric>;

struct Edge {
  int i;
  int j;
  double d;
};

/// Symmetric neighbour structure {(i,j) : 0 < d(i,j) <= h} in CSR form,
/// each adjacency list sorted by target index.
class NeighborhoodGraph {
 public:
  NeighborhoodGraph() = default;
  NeighborhoodGraph(int n, std::vector<Edge> edges);

  int size() const { return static_cast<int>(offsets_.size()) - 1; }
  int degree(int i) const { return offsets_[i + 1] - offsets_[i]; }
  int begin(int i) const { return offsets_[i]; }
  int end(int i) const { return offsets_[i + 1]; }
  int target(int k) const { return targets_[k]; }
  double dist(int k) const { return dists_[k]; }
  std::size_t arc_count() const { return targets_.size(); }
  /// Undirected edges with i < j, ordered by (i, j).
  std::vector<Edge> edges() const;

 private:
  std::vector<int> offsets_{0};
  std::vector<int> targets_;
  std::vector<double> dists_;
};

class FiniteMMS {
 public:
  struct Options {
    ModelTag model;
    std::optional<GridSpec> grid;
    /// symmetric conductances w(x,y) >= 0 of the Dirichlet form; empty if none
    SparseMatrix conductances;
    std::vector<char> boundary;
    std::optional<GradientModel> gradient_model;
  };

  FiniteMMS(Metric metric, Eigen::VectorXd weights, double h, Options options = {});

  int size() const { return static_cast<int>(weights_.size()); }
  double h() const { return h_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight(int i) const { return weights_[i]; }
  double total_mass() const { return weights_.sum(); }

  double distance(int i, int j) const;
  Eigen::VectorXd distance_row(int i) const;
  Eigen::MatrixXd distance_matrix() const;

  const Metric& metric() const { return metric_; }
  bool has_coords() const { return std::holds_alternative<CoordinateMetric>(metric_); }
  /// n x dim embedding coordinates; throws for dense spaces without coordinates.
  const Eigen::MatrixXd& coords() const;
  int dim() const;

  const ModelTag& model() const { return options_.model; }
  const std::optional<GridSpec>& grid() const { return options_.grid; }
  const NeighborhoodGraph& neighbors() const { return graph_; }

  bool has_conductances() const { return options_.conductances.nonZeros() > 0; }
  const SparseMatrix& conductances() const;
  GradientModel gradient_model() const { return gradient_model_; }

  bool is_boundary(int i) const { return !options_.boundary.empty() && options_.boundary[i] != 0; }
  const std::vector<char>& boundary() const { return options_.boundary; }
  /// Points at distance > h from every boundary point.
  const std::vector<char>& interior() const { return interior_; }

 private:
  void build_neighbors();

  Metric metric_;
  Eigen::VectorXd weights_;
  double h_;
  Options options_;
  GradientModel gradient_model_ = GradientModel::metric_slope;
  NeighborhoodGraph graph_;
  std::vector<char> interior_;
};

struct ValidationReport {
  double max_triangle_violation = 0.0;
  double max_asymmetry = 0.0;
  double max_diagonal = 0.0;
  double min_weight = 0.0;
  int isolated_points = 0;
  bool sampled = false;  // triangle inequality checked on sampled triples only
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

/// Exact O(n^3) check up to exact_limit points, seeded sampled triples beyond.
ValidationReport validate_metric(const FiniteMMS& space, int exact_limit = 1500,
                                 std::size_t samples = 2000000, unsigned seed = 0);

FiniteMMS from_distance_matrix(const Eigen::MatrixXd& dist, const Eigen::VectorXd& weights, double h);

/// Regular lattice with the given norm; weights spacing^d, h = 1.5 spacing
/// unless given, axis conductances spacing^(d-2). Origin at the lattice
/// corner unless given.
FiniteMMS build_euclidean_grid(const std::vector<int>& dims, double spacing,
                               const NormSpec& norm = {}, std::optional<double> h = std::nullopt,
                               std::optional<Eigen::VectorXd> origin = std::nullopt);

/// Lattice centred at the origin covering [-half_width, half_width]^d.
FiniteMMS build_centered_grid(int dim, double half_width, double spacing, const NormSpec& norm = {});

/// Unit round sphere S^N (N = 1 circle, N = 2 sphere) with geodesic distance.
/// N = 2 uses colatitude rings theta_i = i * dtheta, dtheta = pi / round(pi/mesh),
/// round(2 pi/mesh) longitudes per ring, and one point at each pole. Weights
/// are exact cell areas (total 4 pi); conductances are the finite-volume ones.
FiniteMMS build_sphere(int N, double mesh);

/// Poincare disk model of H^2 (K = -1), lattice of the given Euclidean spacing
/// in Poincare coordinates, restricted to |x| <= radius < 1.
FiniteMMS build_hyperbolic_disk(double radius, double spacing);

/// Cycle C_n and complete graph K_n with unit conductances, masses and graph distance.
FiniteMMS build_cycle_graph(int n);
FiniteMMS build_complete_graph(int n);
/// Path graph with unit spacing, masses and conductances.
FiniteMMS build_path_graph(int n);

/// Same metric, masses multiplied by exp(-V); conductances multiplied by exp(-(V(x)+V(y))/2).
FiniteMMS with_masses(const FiniteMMS& space, const Eigen::VectorXd& V);

/// Sub-space on the given point indices (kept in the given order).
FiniteMMS restrict(const FiniteMMS& space, const std::vector<int>& indices);

/// m(B_r(x)) for the open ball.
double ball_volume(const FiniteMMS& space, int x, double r);

/// Nearest point to an embedding-space location (brute force over coordinates).
int nearest_point(const FiniteMMS& space, const Eigen::VectorXd& location);

/// Model-space distance between two embedding locations (requires coordinates).
double model_distance(const FiniteMMS& space, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace mms
