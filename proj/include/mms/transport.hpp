#pragma once

#include "mms/space.hpp"

#include <vector>

namespace mms {

using ProbabilityVector = Eigen::VectorXd;

struct CouplingEntry {
  int i;
  int j;
  double mass;
};

/// Sparse transport plan between point indices, ordered by (i, j).
struct Coupling {
  std::vector<CouplingEntry> entries;
  Eigen::MatrixXd dense(int n) const;
  Eigen::VectorXd first_marginal(int n) const;
  Eigen::VectorXd second_marginal(int n) const;
};

/// Exact solution of the transportation problem min <C, P> with row sums a and
/// column sums b (successive shortest paths with Dijkstra and node potentials).
struct TransportSolution {
  std::vector<CouplingEntry> flow;  // indices into a and b
  Eigen::VectorXd u;                // row potentials
  Eigen::VectorXd v;                // column potentials, u_i + v_j <= C_ij
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;                 // primal - dual
  double dual_infeasibility = 0.0;  // max(u_i + v_j - C_ij, 0)
  double marginal_error = 0.0;
};

TransportSolution solve_transport(const Eigen::MatrixXd& cost, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct WassersteinResult {
  double value = 0.0;  // W_q
  double cost = 0.0;   // W_q^q
  Coupling coupling;
  double gap = 0.0;
  double marginal_error = 0.0;
};

/// Throws when the masses differ by more than 1e-10 or an input is not a probability vector.
WassersteinResult wq_distance(const FiniteMMS& space, const ProbabilityVector& mu, const ProbabilityVector& nu,
                              double q);

/// W_q^q between the cell histograms of mu and nu on a one-dimensional grid:
/// each point's mass is spread uniformly over its cell and the distance is
/// computed from the piecewise linear quantile functions.
double wq_cells_1d(const FiniteMMS& space, const ProbabilityVector& mu, const ProbabilityVector& nu, double q);

/// phi^c(y) = min_x d(x,y)^2/2 - phi(x). Entries of phi equal to -inf are skipped.
ScalarField c_transform(const FiniteMMS& space, const ScalarField& phi);

/// {y : phi(x) + phi^c(y) = d(x,y)^2/2 within 1e-9}; throws unless phi^{cc} = phi within 1e-10.
std::vector<int> c_superdifferential(const FiniteMMS& space, const ScalarField& phi, int x);

struct KantorovichPotential {
  ScalarField phi;
  ScalarField phic;
  Coupling coupling;     // optimal plan for the cost d^2/2
  double primal = 0.0;   // W_2^2 / 2
  double dual = 0.0;     // sum phi mu + sum phi^c nu
  double gap = 0.0;
};

KantorovichPotential kantorovich_potential(const FiniteMMS& space, const ProbabilityVector& mu,
                                           const ProbabilityVector& nu);

/// Point on the model-space geodesic from a to b (embedding coordinates). On
/// the sphere, antipodal pairs follow the great circle through the
/// lexicographically smallest midpoint; *cut_locus is set when that happens.
Eigen::VectorXd geodesic_point(const FiniteMMS& space, const Eigen::VectorXd& a, const Eigen::VectorXd& b, double t,
                               bool* cut_locus = nullptr);

/// Volume distortion m(T(B_r(p))) / m(B_r(p)) as r -> 0 of the map
/// T(y) = geodesic_point(y, target, t), from central differences of T.
double geodesic_jacobian(const FiniteMMS& space, const Eigen::VectorXd& p, const Eigen::VectorXd& target, double t);

/// Index of the grid cell containing an embedding location (nearest point for spaces without a chart).
int locate_cell(const FiniteMMS& space, const Eigen::VectorXd& location);

struct CellSample {
  Eigen::VectorXd position;
  double fraction;
};

/// k^d sub-cell centres of the cell of point i with fractions proportional to
/// the area element; k = 1 returns the point itself.
std::vector<CellSample> cell_samples(const FiniteMMS& space, int i, int k);

struct Interpolation {
  std::vector<double> times;
  std::vector<ProbabilityVector> measures;
  int cut_locus_pairs = 0;
};

/// Pushes each coupled pair (x, y, m) to gamma_t(x, y) and bins into cells.
/// subsamples > 1 splits every pair into subsamples^d sub-particles with
/// matching sub-cell offsets at both ends.
Interpolation interpolate_coupling(const FiniteMMS& space, const Coupling& coupling, const std::vector<double>& times,
                                   int subsamples = 1);

/// W_2-optimal coupling between mu and nu followed by interpolate_coupling.
Interpolation displacement_interpolation(const FiniteMMS& space, const ProbabilityVector& mu,
                                         const ProbabilityVector& nu, const std::vector<double>& times,
                                         int subsamples = 1);

/// Interpolation from mu to the Dirac mass at x0: every sub-particle of the
/// cell of x moves along the geodesic to the point x0 itself.
Interpolation contraction_interpolation(const FiniteMMS& space, const ProbabilityVector& mu, int x0,
                                        const std::vector<double>& times, int subsamples = 1);

struct BrenierReport {
  double relative_residual = 0.0;  // L2(pi) distance of |D+ phi|(x) and d(x,y), relative to W_2
  double max_inequality_violation = 0.0;  // max_x |D+ phi|(x) - max_{y in d^c phi(x)} d(x,y)
  double w2 = 0.0;
};

BrenierReport metric_brenier_check(const FiniteMMS& space, const ProbabilityVector& mu, const ProbabilityVector& nu);

}  // namespace mms
