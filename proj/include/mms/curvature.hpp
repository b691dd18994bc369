#pragma once

#include "mms/space.hpp"
#include "mms/transport.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mms {

struct DistortionParams {
  double K = 0.0;
  double N = 2.0;
  double t = 0.0;
  double theta = 0.0;
};

/// tau^{(t)}_{K,N}(theta); +inf when K theta^2 >= (N-1) pi^2.
double tau(double K, double N, double t, double theta);
inline double tau(const DistortionParams& p) { return tau(p.K, p.N, p.t, p.theta); }
/// sigma^{(t)}_{K,N}(theta) = sin(t theta sqrt(K/N)) / sin(theta sqrt(K/N)); +inf when K theta^2 >= N pi^2.
/// For K < 0 the hyperbolic branch uses sqrt(-K/N).
double sigma(double K, double N, double t, double theta);
inline double sigma(const DistortionParams& p) { return sigma(p.K, p.N, p.t, p.theta); }

/// Largest relative gap between tau_{K,N} and t^{1/N} sigma_{K,N-1}^{1-1/N} over the grids (finite regime only).
double tau_sigma_relation_check(double K, double N, const std::vector<double>& t_grid,
                                const std::vector<double>& theta_grid);

/// (1/N)(1 + (N-1) a cot a) with a = theta sqrt(K/(N-1)); coth branch for K < 0; 1 for K = 0.
double tau_tilde(double K, double N, double theta);
/// a cot a with a = theta sqrt(K/N); coth branch for K < 0; 1 for K = 0.
double sigma_tilde(double K, double N, double theta);

/// u_N(z) = -z^{1-1/N}
double u_N(double z, double N);
/// p_N(z) = z^{1-1/N} / N
double pressure(double z, double N);
/// sum_x u_N(mu(x)/m(x)) m(x)
double internal_energy(const FiniteMMS& space, const ProbabilityVector& mu, double N);

struct CDSeries {
  double N_prime = 0.0;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> slack;           // rhs - lhs
  std::vector<double> relative_slack;  // slack / |lhs|
};

struct CDReport {
  std::vector<double> times;
  std::vector<CDSeries> series;
  double min_relative_slack = 0.0;  // over interior times
  double max_endpoint_slack = 0.0;  // |slack| / |U| at t in {0, 1}
  double tolerance = 0.0;
  int cut_locus_pairs = 0;
  bool pass = false;
};

/// CD(K, N') inequality along the displacement interpolation for N' in n_primes.
/// Pass iff relative slack >= -tolerance at interior times and endpoint slack <= 1e-12.
CDReport cd_check(const FiniteMMS& space, const ProbabilityVector& mu, const ProbabilityVector& nu, double K,
                  double N, const std::vector<double>& times, const std::vector<double>& n_primes,
                  int subsamples = 1, double tolerance = 0.02);

/// MCP(K, N): interpolation toward the Dirac mass at x0. Dirac endpoints have U_N = 0;
/// times above 0.9 are reported but excluded from the pass rule.
CDReport mcp_variant(const FiniteMMS& space, const ProbabilityVector& mu, int x0, double K, double N,
                     const std::vector<double>& times, int subsamples = 1, double tolerance = 0.02);

struct BishopGromovReport {
  std::vector<double> radii;
  std::vector<double> measured;  // m(B_r) / m(B_R)
  std::vector<double> model;
  std::vector<double> slack;     // measured - model
  double min_relative_slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Model ratio of the volume integrals of sin (K > 0), r^N (K = 0) or sinh (K < 0).
double bishop_gromov_model_ratio(double K, double N, double r, double R);

BishopGromovReport bishop_gromov_check(const FiniteMMS& space, int x, const std::vector<double>& radii, double R,
                                       double K, double N, double tolerance = 0.03);

struct DistanceLaplacianReport {
  std::vector<double> d;
  std::vector<double> discrete;  // (L d)(x)
  std::vector<double> bound;     // (N tau~(d) - 1) / d
  double max_relative_deviation = 0.0;  // max |L d - bound| / bound
  double max_relative_excess = 0.0;     // max (L d - bound) / bound
  double max_abs_deviation = 0.0;
};

/// Pointwise comparison of the graph Laplacian of d(., x0) with the bound on
/// interior points with dmin <= d <= dmax.
DistanceLaplacianReport distance_laplacian_profile(const FiniteMMS& space, int x0, double K, double N, double dmin,
                                                   double dmax);

struct ComparisonReport {
  std::string model;
  double K = 0.0, N = 0.0, spacing = 0.0, h = 0.0;
  double lower = 0.0;      // (a) -sum D+(p_N(rho))(grad phi) m
  double transport = 0.0;  // (b) derivative of U_N along the contraction at t = 0
  double upper = 0.0;      // (c) sum rho^{1-1/N} tau~(d) m
  double tolerance = 0.0;  // 2% of |upper|
  std::vector<double> times;
  std::vector<double> energies;         // U_N(mu_t) through the Jacobian of the contraction map
  std::vector<double> binned_energies;  // U_N of the cell-binned measures
  double binned_transport = 0.0;        // slope of the binned fit, reported only
  // Delta(d^2/2) <= N tau~(d) m and Delta d <= (N tau~(d) - 1)/d m tested on bumps
  double distq_max_relative_excess = 0.0;
  double dist_max_relative_excess = 0.0;
  int bumps = 0;
  bool chain_pass = false;
};

struct ComparisonOptions {
  std::vector<double> times{0.0, 0.05, 0.1, 0.15, 0.2};
  int subsamples = 12;
  int fit_degree = 3;
  double relative_tolerance = 0.02;
  std::vector<ScalarField> bumps;  // nonnegative admissible tests for the distance bounds
};

/// phi = d(., x0)^2 / 2, rho0 a density (normalized internally to a probability).
ComparisonReport laplacian_comparison_experiment(const FiniteMMS& space, int x0, double K, double N,
                                                 const ScalarField& rho0, const ComparisonOptions& options = {});

/// c (1 - d(x, centre)^2 / r^2)^2 on the ball of radius r, zero elsewhere.
ScalarField bump_density(const FiniteMMS& space, int centre, double r);

struct BusemannReport {
  std::vector<double> t_list;
  std::vector<ScalarField> bt;
  ScalarField b;
  double monotonicity_min_slack = 0.0;  // min over t_k < t_{k+1}, x of b_{t_k} - b_{t_{k+1}}
  double max_slope = 0.0;               // max h-slope of b
  double desc_slope_deviation = 0.0;    // max over interior |desc slope - 1|
  double stabilization = 0.0;           // |b_{t_max} - b_{t_max/2}|_inf
  double linear_deviation = 0.0;        // |b - (-<x, e>) - const|_inf
  double cc_residual = 0.0;             // |b^{cc} - b|_inf on the grid
  double max_upper_endpoint = 0.0;      // over the bumps, upper endpoint / |f|_inf
  bool pass = false;
};

/// Busemann function of the ray origin + t e on a Euclidean grid. b^c is taken
/// over the grid lattice extended by `pad` points on every side.
BusemannReport busemann(const FiniteMMS& space, const Eigen::VectorXd& origin, const Eigen::VectorXd& direction,
                        const std::vector<double>& t_list, const std::vector<ScalarField>& bumps, int pad = 10);

}  // namespace mms
