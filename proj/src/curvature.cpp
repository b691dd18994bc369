#include "mms/curvature.hpp"

#include "mms/laplacian.hpp"
#include "mms/sobolev.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mms {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_params(double N, double t, double theta, double n_min) {
  if (!(N > n_min)) throw Error("dimension parameter out of range");
  if (!(t >= 0.0 && t <= 1.0)) throw Error("interpolation time must lie in [0, 1]");
  if (!(theta >= 0.0)) throw Error("distance must be nonnegative");
}

// a cot a and a coth a, with series near 0
double a_cot_a(double a) {
  if (std::abs(a) < 1e-4) return 1.0 - a * a / 3.0 - a * a * a * a / 45.0;
  return a / std::tan(a);
}

double a_coth_a(double a) {
  if (std::abs(a) < 1e-4) return 1.0 + a * a / 3.0 - a * a * a * a / 45.0;
  return a / std::tanh(a);
}

double sine_ratio(double K, double scale_dim, double t, double theta) {
  if (K > 0.0) {
    const double a = theta * std::sqrt(K / scale_dim);
    return std::sin(t * a) / std::sin(a);
  }
  const double a = theta * std::sqrt(-K / scale_dim);
  return std::sinh(t * a) / std::sinh(a);
}

}  // namespace

double tau(double K, double N, double t, double theta) {
  check_params(N, t, theta, 1.0);
  const double k = K * theta * theta;
  if (k >= (N - 1.0) * std::numbers::pi * std::numbers::pi) return kInf;
  if (k == 0.0) return t;
  if (t == 0.0) return 0.0;
  return std::pow(t, 1.0 / N) * std::pow(sine_ratio(K, N - 1.0, t, theta), 1.0 - 1.0 / N);
}

double sigma(double K, double N, double t, double theta) {
  check_params(N, t, theta, 0.0);
  const double k = K * theta * theta;
  if (k >= N * std::numbers::pi * std::numbers::pi) return kInf;
  if (k == 0.0) return t;
  if (t == 0.0) return 0.0;
  return sine_ratio(K, N, t, theta);
}

double tau_sigma_relation_check(double K, double N, const std::vector<double>& t_grid,
                                const std::vector<double>& theta_grid) {
  double worst = 0.0;
  for (double t : t_grid)
    for (double theta : theta_grid) {
      const double a = tau(K, N, t, theta);
      if (!std::isfinite(a)) continue;
      const double b = std::pow(t, 1.0 / N) * std::pow(sigma(K, N - 1.0, t, theta), 1.0 - 1.0 / N);
      const double scale = std::max(std::abs(a), std::numeric_limits<double>::min());
      worst = std::max(worst, std::abs(a - b) / scale);
    }
  return worst;
}

double tau_tilde(double K, double N, double theta) {
  check_params(N, 0.0, theta, 1.0);
  if (K == 0.0) return 1.0;
  if (K > 0.0) {
    if (K * theta * theta >= (N - 1.0) * std::numbers::pi * std::numbers::pi)
      throw Error("tau~ is undefined at or beyond the diameter bound");
    return (1.0 + (N - 1.0) * a_cot_a(theta * std::sqrt(K / (N - 1.0)))) / N;
  }
  return (1.0 + (N - 1.0) * a_coth_a(theta * std::sqrt(-K / (N - 1.0)))) / N;
}

double sigma_tilde(double K, double N, double theta) {
  check_params(N, 0.0, theta, 0.0);
  if (K == 0.0) return 1.0;
  if (K > 0.0) {
    if (K * theta * theta >= N * std::numbers::pi * std::numbers::pi)
      throw Error("sigma~ is undefined at or beyond the diameter bound");
    return a_cot_a(theta * std::sqrt(K / N));
  }
  return a_coth_a(theta * std::sqrt(-K / N));
}

double u_N(double z, double N) { return z <= 0.0 ? 0.0 : -std::pow(z, 1.0 - 1.0 / N); }

double pressure(double z, double N) { return z <= 0.0 ? 0.0 : std::pow(z, 1.0 - 1.0 / N) / N; }

double internal_energy(const FiniteMMS& space, const ProbabilityVector& mu, double N) {
  if (mu.size() != space.size()) throw Error("measure length does not match the space");
  double s = 0.0;
  for (int x = 0; x < space.size(); ++x)
    if (mu[x] > 0.0) s += u_N(mu[x] / space.weight(x), N) * space.weight(x);
  return s;
}

namespace {

void finish_report(CDReport& r, double exclude_above) {
  r.min_relative_slack = kInf;
  r.max_endpoint_slack = 0.0;
  for (const CDSeries& s : r.series)
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      const double t = r.times[k];
      if (t == 0.0 || t == 1.0) {
        const double scale = std::max(std::abs(s.lhs[k]), std::abs(s.rhs[k]));
        r.max_endpoint_slack = std::max(r.max_endpoint_slack, scale > 0.0 ? std::abs(s.slack[k]) / scale : 0.0);
      } else if (t <= exclude_above) {
        r.min_relative_slack = std::min(r.min_relative_slack, s.relative_slack[k]);
      }
    }
  if (r.min_relative_slack == kInf) r.min_relative_slack = 0.0;
  r.pass = r.min_relative_slack >= -r.tolerance && r.max_endpoint_slack <= 1e-12;
}

}  // namespace

CDReport cd_check(const FiniteMMS& space, const ProbabilityVector& mu, const ProbabilityVector& nu, double K,
                  double N, const std::vector<double>& times, const std::vector<double>& n_primes, int subsamples,
                  double tolerance) {
  for (double np : n_primes)
    if (np < N) throw Error("CD check needs N' >= N");
  const WassersteinResult w = wq_distance(space, mu, nu, 2.0);
  const Interpolation interp = interpolate_coupling(space, w.coupling, times, subsamples);
  CDReport r;
  r.times = times;
  r.tolerance = tolerance;
  r.cut_locus_pairs = interp.cut_locus_pairs;
  for (double np : n_primes) {
    CDSeries s;
    s.N_prime = np;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double t = times[k];
      double rhs = 0.0;
      for (const auto& e : w.coupling.entries) {
        const double d = space.distance(e.i, e.j);
        const double rho = mu[e.i] / space.weight(e.i), eta = nu[e.j] / space.weight(e.j);
        const double a = tau(K, np, 1.0 - t, d), b = tau(K, np, t, d);
        rhs -= e.mass * ((a == 0.0 ? 0.0 : a * std::pow(rho, -1.0 / np)) + (b == 0.0 ? 0.0 : b * std::pow(eta, -1.0 / np)));
      }
      const double lhs = internal_energy(space, interp.measures[k], np);
      s.lhs.push_back(lhs);
      s.rhs.push_back(rhs);
      s.slack.push_back(rhs - lhs);
      s.relative_slack.push_back((rhs - lhs) / std::max(std::abs(lhs), std::numeric_limits<double>::min()));
    }
    r.series.push_back(std::move(s));
  }
  finish_report(r, 1.0);
  return r;
}

CDReport mcp_variant(const FiniteMMS& space, const ProbabilityVector& mu, int x0, double K, double N,
                     const std::vector<double>& times, int subsamples, double tolerance) {
  const Interpolation interp = contraction_interpolation(space, mu, x0, times, subsamples);
  const Eigen::VectorXd d = space.distance_row(x0);
  CDReport r;
  r.times = times;
  r.tolerance = tolerance;
  r.cut_locus_pairs = interp.cut_locus_pairs;
  CDSeries s;
  s.N_prime = N;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    double rhs = 0.0;
    for (int x = 0; x < space.size(); ++x) {
      if (!(mu[x] > 0.0)) continue;
      const double a = tau(K, N, 1.0 - t, d[x]);
      if (a != 0.0) rhs -= a * std::pow(mu[x] / space.weight(x), -1.0 / N) * mu[x];
    }
    // the Dirac endpoint carries no absolutely continuous part
    const double lhs = t == 1.0 ? 0.0 : internal_energy(space, interp.measures[k], N);
    s.lhs.push_back(lhs);
    s.rhs.push_back(rhs);
    s.slack.push_back(rhs - lhs);
    s.relative_slack.push_back((rhs - lhs) / std::max(std::abs(lhs), std::numeric_limits<double>::min()));
  }
  r.series.push_back(std::move(s));
  finish_report(r, 0.9);
  return r;
}

double bishop_gromov_model_ratio(double K, double N, double r, double R) {
  if (!(N > 1.0)) throw Error("Bishop-Gromov needs N > 1");
  if (!(r > 0.0 && r <= R)) throw Error("radii must satisfy 0 < r <= R");
  if (K == 0.0) return std::pow(r / R, N);
  const double k = std::sqrt(std::abs(K) / (N - 1.0));
  if (K > 0.0 && R > std::numbers::pi / k) throw Error("R exceeds the diameter bound");
  auto density = [&](double s) { return std::pow(K > 0.0 ? std::sin(k * s) : std::sinh(k * s), N - 1.0); };
  using boost::math::quadrature::gauss_kronrod;
  const double num = gauss_kronrod<double, 61>::integrate(density, 0.0, r, 15, 1e-14);
  const double den = gauss_kronrod<double, 61>::integrate(density, 0.0, R, 15, 1e-14);
  return num / den;
}

BishopGromovReport bishop_gromov_check(const FiniteMMS& space, int x, const std::vector<double>& radii, double R,
                                       double K, double N, double tolerance) {
  BishopGromovReport r;
  r.tolerance = tolerance;
  r.min_relative_slack = kInf;
  const double big = ball_volume(space, x, R);
  if (!(big > 0.0)) throw Error("ball of radius R has no mass");
  for (double rad : radii) {
    const double model = bishop_gromov_model_ratio(K, N, rad, R);
    const double measured = ball_volume(space, x, rad) / big;
    r.radii.push_back(rad);
    r.measured.push_back(measured);
    r.model.push_back(model);
    r.slack.push_back(measured - model);
    r.min_relative_slack = std::min(r.min_relative_slack, (measured - model) / model);
  }
  if (radii.empty()) r.min_relative_slack = 0.0;
  r.pass = r.min_relative_slack >= -tolerance;
  return r;
}

DistanceLaplacianReport distance_laplacian_profile(const FiniteMMS& space, int x0, double K, double N, double dmin,
                                                   double dmax) {
  const ScalarField d = space.distance_row(x0);
  const ScalarField Ld = graph_laplacian(space) * d;
  DistanceLaplacianReport r;
  r.max_relative_excess = -kInf;
  for (int i = 0; i < space.size(); ++i) {
    if (!space.interior()[i] || d[i] < dmin || d[i] > dmax) continue;
    const double bound = (N * tau_tilde(K, N, d[i]) - 1.0) / d[i];
    r.d.push_back(d[i]);
    r.discrete.push_back(Ld[i]);
    r.bound.push_back(bound);
    r.max_relative_deviation = std::max(r.max_relative_deviation, std::abs(Ld[i] - bound) / std::abs(bound));
    r.max_relative_excess = std::max(r.max_relative_excess, (Ld[i] - bound) / std::abs(bound));
    r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(Ld[i] - bound));
  }
  if (r.d.empty()) throw Error("no interior points in the requested annulus");
  return r;
}

ScalarField bump_density(const FiniteMMS& space, int centre, double r) {
  const ScalarField d = space.distance_row(centre);
  ScalarField out = ScalarField::Zero(space.size());
  for (int i = 0; i < space.size(); ++i)
    if (d[i] < r) {
      const double s = 1.0 - d[i] * d[i] / (r * r);
      out[i] = s * s;
    }
  return out;
}

namespace {

// least-squares polynomial fit, returns coefficients c_0..c_degree
Eigen::VectorXd polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  Eigen::MatrixXd A(x.size(), degree + 1);
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k, p *= x[i]) A(i, k) = p;
    b[i] = y[i];
  }
  return A.colPivHouseholderQr().solve(b);
}

}  // namespace

ComparisonReport laplacian_comparison_experiment(const FiniteMMS& space, int x0, double K, double N,
                                                 const ScalarField& rho0, const ComparisonOptions& opt) {
  if (rho0.size() != space.size()) throw Error("density length does not match the space");
  if ((rho0.array() < 0.0).any()) throw Error("density must be nonnegative");
  if (rho0[x0] != 0.0) throw Error("density must vanish at x0");
  if (!is_admissible_test(space, rho0)) throw Error("density support reaches the boundary");
  if (static_cast<int>(opt.times.size()) <= opt.fit_degree) throw Error("too few times for the polynomial fit");
  ComparisonReport r;
  r.model = space.model().to_string();
  r.K = K;
  r.N = N;
  r.h = space.h();
  r.spacing = space.grid() ? space.grid()->spacing : 0.0;

  ProbabilityVector mu = rho0.cwiseProduct(space.weights());
  mu /= mu.sum();
  const ScalarField rho = mu.cwiseQuotient(space.weights());
  const ScalarField d = space.distance_row(x0);
  const ScalarField phi = 0.5 * d.cwiseAbs2();

  ScalarField pn(space.size());
  for (int i = 0; i < space.size(); ++i) pn[i] = pressure(rho[i], N);
  r.lower = laplacian_interval(space, phi, pn).lower;

  const Interpolation interp = contraction_interpolation(space, mu, x0, opt.times, opt.subsamples);
  r.times = opt.times;
  for (const auto& m : interp.measures) r.binned_energies.push_back(internal_energy(space, m, N));
  r.binned_transport = polyfit(r.times, r.binned_energies, opt.fit_degree)[1];

  // the sub-cell of mass mu(x) f and measure m(x) f is carried onto measure m(x) f J
  const Eigen::VectorXd target = space.coords().row(x0).transpose();
  for (double t : opt.times) {
    double U = 0.0;
    for (int x = 0; x < space.size(); ++x) {
      if (!(rho[x] > 0.0)) continue;
      for (const CellSample& s : cell_samples(space, x, opt.subsamples)) {
        const double J = t == 0.0 ? 1.0 : geodesic_jacobian(space, s.position, target, t);
        U += space.weight(x) * s.fraction * J * u_N(rho[x] / J, N);
      }
    }
    r.energies.push_back(U);
  }
  r.transport = polyfit(r.times, r.energies, opt.fit_degree)[1];

  for (int i = 0; i < space.size(); ++i)
    if (rho[i] > 0.0) r.upper += std::pow(rho[i], 1.0 - 1.0 / N) * tau_tilde(K, N, d[i]) * space.weight(i);
  r.tolerance = opt.relative_tolerance * std::abs(r.upper);
  r.chain_pass = r.lower <= r.transport + r.tolerance && r.transport <= r.upper + r.tolerance;

  r.distq_max_relative_excess = -kInf;
  r.dist_max_relative_excess = -kInf;
  for (const ScalarField& f : opt.bumps) {
    if ((f.array() < 0.0).any()) throw Error("bump tests must be nonnegative");
    double bq = 0.0, bd = 0.0;
    for (int i = 0; i < space.size(); ++i) {
      if (f[i] == 0.0) continue;
      const double nt = N * tau_tilde(K, N, d[i]);
      bq += f[i] * nt * space.weight(i);
      bd += f[i] * (nt - 1.0) / d[i] * space.weight(i);
    }
    const double uq = laplacian_interval(space, phi, f).upper;
    const double ud = laplacian_interval(space, d, f).upper;
    r.distq_max_relative_excess = std::max(r.distq_max_relative_excess, (uq - bq) / std::abs(bq));
    r.dist_max_relative_excess = std::max(r.dist_max_relative_excess, (ud - bd) / std::abs(bd));
    ++r.bumps;
  }
  if (r.bumps == 0) r.distq_max_relative_excess = r.dist_max_relative_excess = 0.0;
  return r;
}

BusemannReport busemann(const FiniteMMS& space, const Eigen::VectorXd& origin, const Eigen::VectorXd& direction,
                        const std::vector<double>& t_list, const std::vector<ScalarField>& bumps, int pad) {
  const auto* cm = std::get_if<CoordinateMetric>(&space.metric());
  if (!cm || cm->kind != CoordinateMetric::Kind::normed || !cm->norm.is_euclidean() || !space.grid())
    throw Error("Busemann functions are computed on Euclidean grids");
  if (t_list.empty()) throw Error("empty t list");
  for (std::size_t k = 1; k < t_list.size(); ++k)
    if (!(t_list[k] > t_list[k - 1])) throw Error("t list must be increasing");
  const Eigen::MatrixXd& X = space.coords();
  const int n = space.size();
  const Eigen::VectorXd e = direction.normalized();
  auto bt = [&](double t) {
    ScalarField out(n);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd x = X.row(i).transpose() - origin;
      // d(x, te) - t written without cancellation
      out[i] = (x.squaredNorm() - 2.0 * t * x.dot(e)) / ((x - t * e).norm() + t);
    }
    return out;
  };
  BusemannReport r;
  r.t_list = t_list;
  for (double t : t_list) r.bt.push_back(bt(t));
  r.monotonicity_min_slack = kInf;
  for (std::size_t k = 0; k + 1 < r.bt.size(); ++k)
    r.monotonicity_min_slack = std::min(r.monotonicity_min_slack, (r.bt[k] - r.bt[k + 1]).minCoeff());
  if (r.bt.size() < 2) r.monotonicity_min_slack = 0.0;
  r.b = r.bt.back();
  r.stabilization = (r.b - bt(0.5 * t_list.back())).cwiseAbs().maxCoeff();
  if (r.stabilization > 1e-8)
    throw Error("b_t has not stabilized: |b_tmax - b_tmax/2| = " + std::to_string(r.stabilization));

  r.max_slope = local_slope(space, r.b).maxCoeff();
  const ScalarField desc = local_slope(space, r.b, SlopeVariant::descending);
  for (int i = 0; i < n; ++i)
    if (space.interior()[i]) r.desc_slope_deviation = std::max(r.desc_slope_deviation, std::abs(desc[i] - 1.0));
  ScalarField lin(n);
  for (int i = 0; i < n; ++i) lin[i] = r.b[i] + (X.row(i).transpose() - origin).dot(e);
  r.linear_deviation = 0.5 * (lin.maxCoeff() - lin.minCoeff());

  // b^c on the padded lattice, then b^cc back on the grid
  const GridSpec& g = *space.grid();
  const int dim = static_cast<int>(g.dims.size());
  std::vector<int> pdims(dim);
  long count = 1;
  for (int a = 0; a < dim; ++a) {
    pdims[a] = g.dims[a] + 2 * pad;
    count *= pdims[a];
  }
  Eigen::MatrixXd Y(count, dim);
  for (long s = 0; s < count; ++s) {
    long code = s;
    for (int a = dim - 1; a >= 0; --a) {
      Y(s, a) = g.origin[a] + (static_cast<double>(code % pdims[a]) - pad) * g.spacing;
      code /= pdims[a];
    }
  }
  Eigen::VectorXd bc(count);
  for (long s = 0; s < count; ++s)
    bc[s] = (0.5 * (X.rowwise() - Y.row(s)).rowwise().squaredNorm() - r.b).minCoeff();
  for (int i = 0; i < n; ++i) {
    const double bcc = (0.5 * (Y.rowwise() - X.row(i)).rowwise().squaredNorm() - bc).minCoeff();
    r.cc_residual = std::max(r.cc_residual, std::abs(bcc - r.b[i]));
  }

  r.max_upper_endpoint = -kInf;
  for (const ScalarField& f : bumps) {
    if ((f.array() < 0.0).any()) throw Error("bump tests must be nonnegative");
    const double norm = std::max(f.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    r.max_upper_endpoint = std::max(r.max_upper_endpoint, laplacian_interval(space, r.b, f).upper / norm);
  }
  if (bumps.empty()) r.max_upper_endpoint = 0.0;
  r.pass = r.monotonicity_min_slack >= -1e-12 && r.max_slope <= 1.0 + 1e-9 && r.desc_slope_deviation <= 1e-9 &&
           r.linear_deviation <= 1e-8 && r.cc_residual <= 1e-6 && r.max_upper_endpoint <= 1e-8;
  return r;
}

}  // namespace mms
