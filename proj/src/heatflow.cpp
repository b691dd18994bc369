#include "mms/heatflow.hpp"

#include "mms/fields.hpp"
#include "mms/laplacian.hpp"
#include "mms/sobolev.hpp"
#include "mms/transport.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mms {

EntropyFunction EntropyFunction::renyi(double N) {
  if (!(N > 1.0)) throw Error("u_N needs N > 1");
  const double a = 1.0 - 1.0 / N;
  return {"u_N", [a](double z) { return -std::pow(z, a); }, [a](double z) { return -a * std::pow(z, a - 1.0); },
          [a](double z) { return a * (1.0 - a) * std::pow(z, a - 2.0); }};
}

EntropyFunction EntropyFunction::power(double q) {
  if (q == 2.0)
    return {"u_2", [](double z) { return z * std::log(z) - z; }, [](double z) { return std::log(z); },
            [](double z) { return 1.0 / z; }};
  if (q == 3.0)
    return {"u_3", [](double z) { return z - std::log(z); }, [](double z) { return 1.0 - 1.0 / z; },
            [](double z) { return 1.0 / (z * z); }};
  const double c = (3.0 - q) * (2.0 - q);
  return {"u_q", [q, c](double z) { return (std::pow(z, 3.0 - q) - (3.0 - q) * z) / c; },
          [q](double z) { return (std::pow(z, 2.0 - q) - 1.0) / (2.0 - q); },
          [q](double z) { return std::pow(z, 1.0 - q); }};
}

EntropyFunction EntropyFunction::quadratic() {
  return {"z^2/2", [](double z) { return 0.5 * z * z; }, [](double z) { return z; }, [](double) { return 1.0; }};
}

EntropyFunction EntropyFunction::affine(double a, double b) {
  return {"affine", [a, b](double z) { return a * z + b; }, [a](double) { return a; }, [](double) { return 0.0; }};
}

namespace {

void require_form(const FiniteMMS& space) {
  if (!space.has_conductances()) throw Error("heat flow needs a space with a Dirichlet form (conductances)");
}

// K = D - W
SparseMatrix stiffness(const FiniteMMS& space) {
  const SparseMatrix& w = space.conductances();
  const int n = space.size();
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < w.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(w, k); it; ++it) {
      if (it.row() == it.col()) continue;
      trip.emplace_back(it.row(), it.col(), -it.value());
      diag[it.row()] += it.value();
    }
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, diag[i]);
  SparseMatrix K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SparseMatrix diagonal(const Eigen::VectorXd& d) {
  SparseMatrix D(d.size(), d.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index i = 0; i < d.size(); ++i) trip.emplace_back(i, i, d[i]);
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

ScalarField implicit_step(const SparseMatrix& A, const Eigen::SimplicialLDLT<SparseMatrix>& solver,
                          const Eigen::VectorXd& m, const ScalarField& f) {
  const Eigen::VectorXd rhs = m.cwiseProduct(f);
  ScalarField out = solver.solve(rhs);
  if (solver.info() != Eigen::Success) throw Error("implicit Euler solve failed");
  const double res = (A * out - rhs).cwiseAbs().maxCoeff() / std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
  if (res > 1e-10) throw Error("implicit Euler solve residual " + std::to_string(res) + " exceeds 1e-10");
  return out;
}

}  // namespace

ScalarField heat_step_p2(const FiniteMMS& space, const ScalarField& f, double tau) {
  require_form(space);
  if (!(tau > 0.0)) throw Error("time step must be positive");
  if (f.size() != space.size()) throw Error("field length does not match the space");
  const SparseMatrix A = diagonal(space.weights()) + tau * stiffness(space);
  Eigen::SimplicialLDLT<SparseMatrix> solver(A);
  if (solver.info() != Eigen::Success) throw Error("implicit Euler factorization failed");
  return implicit_step(A, solver, space.weights(), f);
}

FlowTrajectory heat_flow_p2(const FiniteMMS& space, const ScalarField& f, double tau, int steps) {
  require_form(space);
  if (!(tau > 0.0)) throw Error("time step must be positive");
  if (f.size() != space.size()) throw Error("field length does not match the space");
  const SparseMatrix A = diagonal(space.weights()) + tau * stiffness(space);
  Eigen::SimplicialLDLT<SparseMatrix> solver(A);
  if (solver.info() != Eigen::Success) throw Error("implicit Euler factorization failed");
  FlowTrajectory tr;
  tr.p = 2.0;
  tr.stepper = Stepper::implicit_p2;
  tr.times.push_back(0.0);
  tr.states.push_back(f);
  tr.energies.push_back(cheeger_energy_form(space, f, 2.0));
  for (int k = 0; k < steps; ++k) {
    tr.states.push_back(implicit_step(A, solver, space.weights(), tr.states.back()));
    tr.times.push_back((k + 1) * tau);
    tr.energies.push_back(cheeger_energy_form(space, tr.states.back(), 2.0));
    tr.iterations.push_back(1);
  }
  return tr;
}

namespace {

struct Star {
  std::vector<int> nodes;  // nodes[0] = centre
  std::vector<double> w;   // w[k] for nodes[k], k >= 1
};

class ProximalProblem {
 public:
  ProximalProblem(const FiniteMMS& space, double p, double tau)
      : m_(space.weights()), p_(p), tau_(tau), delta_(p < 2.0 ? 1e-12 : 0.0) {
    const SparseMatrix& w = space.conductances();
    stars_.resize(space.size());
    for (int x = 0; x < space.size(); ++x) {
      stars_[x].nodes.push_back(x);
      stars_[x].w.push_back(0.0);
      for (SparseMatrix::InnerIterator it(w, x); it; ++it) {
        if (it.row() == x || it.value() == 0.0) continue;
        stars_[x].nodes.push_back(static_cast<int>(it.row()));
        stars_[x].w.push_back(it.value());
      }
    }
  }

  double gamma(const ScalarField& u, int x) const {
    const Star& s = stars_[x];
    double a = 0.0;
    for (std::size_t k = 1; k < s.nodes.size(); ++k) {
      const double d = u[s.nodes[k]] - u[x];
      a += s.w[k] * d * d;
    }
    return a / (2.0 * m_[x]);
  }

  double energy(const ScalarField& u, const ScalarField& f) const {
    double c = 0.0;
    for (int x = 0; x < static_cast<int>(stars_.size()); ++x) c += m_[x] * std::pow(gamma(u, x) + delta_, 0.5 * p_);
    return c / p_ + 0.5 / tau_ * (u - f).cwiseAbs2().dot(m_);
  }

  void derivatives(const ScalarField& u, const ScalarField& f, Eigen::VectorXd& grad, SparseMatrix& hess) const {
    const int n = static_cast<int>(stars_.size());
    grad = m_.cwiseProduct(u - f) / tau_;
    std::vector<Eigen::Triplet<double>> trip;
    for (int x = 0; x < n; ++x) trip.emplace_back(x, x, m_[x] / tau_);
    std::vector<double> qu;
    for (int x = 0; x < n; ++x) {
      const Star& s = stars_[x];
      const std::size_t deg = s.nodes.size();
      if (deg < 2) continue;
      const double g = gamma(u, x) + delta_;
      if (g == 0.0 && p_ > 2.0) continue;  // increments vanish and so does every term
      const double c1 = std::pow(g, 0.5 * p_ - 1.0);
      qu.assign(deg, 0.0);
      for (std::size_t k = 1; k < deg; ++k) {
        const double d = s.w[k] * (u[s.nodes[k]] - u[x]);
        qu[k] = d;
        qu[0] -= d;
      }
      for (std::size_t k = 0; k < deg; ++k) grad[s.nodes[k]] += 0.5 * c1 * qu[k];
      // 0.5 c1 Q_x
      double wsum = 0.0;
      for (std::size_t k = 1; k < deg; ++k) {
        wsum += s.w[k];
        trip.emplace_back(s.nodes[k], s.nodes[k], 0.5 * c1 * s.w[k]);
        trip.emplace_back(x, s.nodes[k], -0.5 * c1 * s.w[k]);
        trip.emplace_back(s.nodes[k], x, -0.5 * c1 * s.w[k]);
      }
      trip.emplace_back(x, x, 0.5 * c1 * wsum);
      if (p_ != 2.0 && g > 0.0) {
        const double c2 = 0.5 * (0.5 * p_ - 1.0) * std::pow(g, 0.5 * p_ - 2.0) / m_[x];
        for (std::size_t a = 0; a < deg; ++a)
          for (std::size_t b = 0; b < deg; ++b) trip.emplace_back(s.nodes[a], s.nodes[b], c2 * qu[a] * qu[b]);
      }
    }
    hess.resize(n, n);
    hess.setFromTriplets(trip.begin(), trip.end());
  }

  const Eigen::VectorXd& m() const { return m_; }

 private:
  Eigen::VectorXd m_;
  double p_, tau_, delta_;
  std::vector<Star> stars_;
};

}  // namespace

FlowTrajectory heat_flow_p(const FiniteMMS& space, const ScalarField& f, double p, double tau, int steps) {
  require_form(space);
  if (!(p > 1.0) || !std::isfinite(p)) throw Error("exponent p must lie in (1, inf)");
  if (!(tau > 0.0)) throw Error("time step must be positive");
  if (f.size() != space.size()) throw Error("field length does not match the space");
  const ProximalProblem problem(space, p, tau);
  FlowTrajectory tr;
  tr.p = p;
  tr.stepper = Stepper::proximal_p;
  tr.times.push_back(0.0);
  tr.states.push_back(f);
  tr.energies.push_back(cheeger_energy_form(space, f, p));
  Eigen::VectorXd grad;
  SparseMatrix hess;
  Eigen::SimplicialLDLT<SparseMatrix> solver;
  constexpr int max_iterations = 200;
  for (int k = 0; k < steps; ++k) {
    const ScalarField& prev = tr.states.back();
    ScalarField u = prev;
    int it = 0;
    for (;; ++it) {
      problem.derivatives(u, prev, grad, hess);
      if (grad.cwiseQuotient(problem.m()).cwiseAbs().maxCoeff() <= 1e-8) break;
      if (it >= max_iterations) throw Error("proximal step stalled after " + std::to_string(it) + " Newton iterations");
      if (it == 0) solver.analyzePattern(hess);
      solver.factorize(hess);
      if (solver.info() != Eigen::Success) throw Error("Newton system factorization failed");
      const Eigen::VectorXd dir = -solver.solve(grad);
      const double j0 = problem.energy(u, prev);
      const double slope = grad.dot(dir);
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        const ScalarField trial = u + alpha * dir;
        if (problem.energy(trial, prev) <= j0 + 1e-4 * alpha * slope + 1e-14 * std::abs(j0)) {
          u = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) throw Error("proximal step line search failed");
    }
    tr.states.push_back(u);
    tr.times.push_back((k + 1) * tau);
    tr.energies.push_back(cheeger_energy_form(space, u, p));
    tr.iterations.push_back(it);
  }
  return tr;
}

namespace {

double integral_u(const FiniteMMS& space, const ScalarField& f, const EntropyFunction& u) {
  double s = 0.0;
  for (int i = 0; i < space.size(); ++i) s += u.u(f[i]) * space.weight(i);
  return s;
}

double dissipation(const FiniteMMS& space, const ScalarField& f, const EntropyFunction& u, double p) {
  const ScalarField G = carre_du_champ(space, f, f);
  double s = 0.0;
  for (int i = 0; i < space.size(); ++i) {
    const double d2 = u.d2(f[i]);
    if (d2 == 0.0) continue;
    s += d2 * std::pow(std::max(G[i], 0.0), 0.5 * p) * space.weight(i);
  }
  return -s;
}

}  // namespace

DissipationReport entropy_dissipation_check(const FiniteMMS& space, const FlowTrajectory& tr, const EntropyFunction& u) {
  if (tr.states.empty()) throw Error("empty trajectory");
  const double c = tr.states.front().minCoeff(), C = tr.states.front().maxCoeff();
  const bool needs_positive = u.name != "z^2/2" && u.name != "affine";
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const double lo = tr.states[k].minCoeff(), hi = tr.states[k].maxCoeff();
    const double tol = 1e-12 * std::max(1.0, std::max(std::abs(c), std::abs(C)));
    if (lo < c - tol || hi > C + tol)
      throw Error("state " + std::to_string(k) + " leaves [" + std::to_string(c) + ", " + std::to_string(C) + "]");
    if (needs_positive && !(lo > 0.0)) throw Error("state " + std::to_string(k) + " is not positive");
  }
  DissipationReport r;
  r.min_step_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < tr.states.size(); ++k) {
    const double tau = tr.times[k + 1] - tr.times[k];
    const double lhs = (integral_u(space, tr.states[k + 1], u) - integral_u(space, tr.states[k], u)) / tau;
    const double rhs = dissipation(space, tr.states[k + 1], u, tr.p);
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    r.residuals.push_back(std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
    r.min_step_slack = std::min(r.min_step_slack, rhs - lhs);
  }
  if (r.lhs.empty()) r.min_step_slack = 0.0;
  return r;
}

double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw Error("extrapolation needs matching nonempty samples");
  std::vector<double> p = y;
  const std::size_t n = x.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i)
      p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
  return p[0];
}

ExtrapolatedDissipation extrapolated_dissipation(const FiniteMMS& space, const ScalarField& f, double tau0,
                                                 const EntropyFunction& u) {
  ExtrapolatedDissipation r;
  std::vector<double> taus;
  const double base = integral_u(space, f, u);
  for (double tau : {tau0, tau0 / 2.0, tau0 / 4.0}) {
    const ScalarField f1 = heat_step_p2(space, f, tau);
    taus.push_back(tau);
    r.quotients.push_back((integral_u(space, f1, u) - base) / tau);
  }
  r.limit = extrapolate_to_zero(taus, r.quotients);
  r.reference = dissipation(space, f, u, 2.0);
  r.relative_residual = std::abs(r.limit - r.reference) / std::max(std::abs(r.reference), 1e-300);
  return r;
}

SpeedReport wasserstein_speed_check(const FiniteMMS& space, const FlowTrajectory& tr, int window) {
  if (window < 1) throw Error("window must be at least 1");
  const double p = tr.p, q = p / (p - 1.0);
  const double total = space.total_mass();
  const int count = static_cast<int>(tr.states.size());
  std::vector<ProbabilityVector> mu(count);
  std::vector<double> integrand(count);
  for (int k = 0; k < count; ++k) {
    const ScalarField& f = tr.states[k];
    if (!(f.minCoeff() > 0.0)) throw Error("speed check needs positive states");
    const double mass = f.dot(space.weights()) / total;
    if (p != 2.0 && std::abs(mass - 1.0) > 1e-9) throw Error("states must be probability densities with respect to m~");
    const ScalarField density = f / mass;
    mu[k] = density.cwiseProduct(space.weights()) / total;
    mu[k] /= mu[k].sum();
    const ScalarField G = carre_du_champ(space, density, density);
    double s = 0.0;
    for (int i = 0; i < space.size(); ++i)
      s += std::pow(std::max(G[i], 0.0), 0.5 * p) * std::pow(density[i], 1.0 - q) * space.weight(i);
    integrand[k] = s / total;
  }
  SpeedReport r;
  const auto* cm = std::get_if<CoordinateMetric>(&space.metric());
  const bool cells = space.grid() && space.grid()->dims.size() == 1 && cm && cm->kind == CoordinateMetric::Kind::normed;
  r.min_relative_slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k + window < count; ++k) {
    const double span = tr.times[k + window] - tr.times[k];
    double integral = 0.0;
    for (int j = k; j < k + window; ++j) integral += 0.5 * (integrand[j] + integrand[j + 1]) * (tr.times[j + 1] - tr.times[j]);
    const double rhs = std::pow(span, q - 1.0) * integral;
    const double lhs = cells ? wq_cells_1d(space, mu[k], mu[k + window], q)
                             : wq_distance(space, mu[k], mu[k + window], q).cost;
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    const double s = rhs > 0.0 ? (rhs - lhs) / rhs : (lhs <= 1e-300 ? 0.0 : -1.0);
    r.slack.push_back(s);
    r.min_relative_slack = std::min(r.min_relative_slack, s);
  }
  if (r.slack.empty()) r.min_relative_slack = 0.0;
  return r;
}

HeatSemigroup::HeatSemigroup(const FiniteMMS& space) {
  require_form(space);
  sqrt_m_ = space.weights().cwiseSqrt();
  const Eigen::MatrixXd K = Eigen::MatrixXd(stiffness(space));
  const Eigen::VectorXd inv = sqrt_m_.cwiseInverse();
  const Eigen::MatrixXd S = -(inv.asDiagonal() * K * inv.asDiagonal());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (S + S.transpose()));
  if (eig.info() != Eigen::Success) throw Error("generator eigendecomposition failed");
  lambda_ = eig.eigenvalues().cwiseMin(0.0);
  V_ = eig.eigenvectors();
}

ScalarField HeatSemigroup::apply(const ScalarField& f, double t) const {
  const Eigen::VectorXd c = V_.transpose() * sqrt_m_.cwiseProduct(f);
  const Eigen::VectorXd e = (t * lambda_).array().exp();
  return (V_ * e.cwiseProduct(c)).cwiseQuotient(sqrt_m_);
}

ScalarField HeatSemigroup::increment(const ScalarField& f, double t) const {
  const Eigen::VectorXd c = V_.transpose() * sqrt_m_.cwiseProduct(f);
  Eigen::VectorXd e(lambda_.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = std::expm1(t * lambda_[i]);
  return (V_ * e.cwiseProduct(c)).cwiseQuotient(sqrt_m_);
}

SignedMeasure HeatSemigroup::apply_measure(const SignedMeasure& mu, double t) const {
  const Eigen::VectorXd m = sqrt_m_.cwiseAbs2();
  return apply(mu.cwiseQuotient(m), t).cwiseProduct(m);
}

Eigen::MatrixXd HeatSemigroup::matrix(double t) const {
  const Eigen::VectorXd e = (t * lambda_).array().exp();
  return sqrt_m_.cwiseInverse().asDiagonal() * (V_ * e.asDiagonal() * V_.transpose()) * sqrt_m_.asDiagonal();
}

SemigroupReport semigroup_identities(const FiniteMMS& space, const std::vector<double>& t_list, std::uint64_t seed) {
  const HeatSemigroup H(space);
  const SparseMatrix L = graph_laplacian(space);
  std::mt19937_64 rng(seed);
  const ScalarField f = random_field(space, rng);
  const ScalarField g = random_field(space, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SignedMeasure mu(space.size());
  for (int i = 0; i < space.size(); ++i) mu[i] = unif(rng) - 0.3;
  SemigroupReport r;
  const double fscale = std::max(f.cwiseAbs().maxCoeff(), 1e-300);
  const double lg_scale = std::max((L * g).cwiseAbs().maxCoeff(), 1.0);
  for (double t : t_list) {
    if (t < 0.0) throw Error("semigroup times must be nonnegative");
    const ScalarField Hf = t == 0.0 ? f : H.apply(f, t);
    const SignedMeasure Hmu = t == 0.0 ? mu : H.apply_measure(mu, t);
    r.self_adjointness = std::max(r.self_adjointness, std::abs(f.dot(Hmu) - Hf.dot(mu)) / (fscale * mu.cwiseAbs().sum()));
    const ScalarField Hg = t == 0.0 ? g : H.apply(g, t);
    const ScalarField HLg = t == 0.0 ? ScalarField(L * g) : H.apply(L * g, t);
    r.commutation = std::max(r.commutation, (L * Hg - HLg).cwiseAbs().maxCoeff() / lg_scale);
    for (double s : t_list) {
      const ScalarField lhs = H.apply(H.apply(f, t), s);
      r.semigroup_property = std::max(r.semigroup_property, (lhs - H.apply(f, s + t)).cwiseAbs().maxCoeff() / fscale);
    }
    const ScalarField half = H.apply(H.apply(f, 0.5 * t), 0.5 * t);
    r.doubling_check = std::max(r.doubling_check, (half - Hf).cwiseAbs().maxCoeff() / fscale);
    if (t > 0.0) {
      const double lip = local_slope(space, Hf).maxCoeff();
      r.lipschitz_ratio.push_back(lip / (fscale / std::sqrt(2.0 * t)));
    } else {
      r.lipschitz_ratio.push_back(0.0);
    }
    const ScalarField be = H.apply(carre_du_champ(space, f, f), t) - carre_du_champ(space, Hf, Hf);
    r.be_min_slack.push_back(be.minCoeff());
  }
  if (r.doubling_check > 1e-9)
    throw Error("matrix exponential accuracy check failed: " + std::to_string(r.doubling_check));
  return r;
}

HeatVariantEstimate heat_laplacian_variant(const FiniteMMS& space, const ScalarField& g, const ScalarField& f,
                                           const std::vector<double>& t_grid) {
  const HeatSemigroup H(space);
  HeatVariantEstimate r;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    if (!(t > 0.0) || (k > 0 && !(t < t_grid[k - 1]))) throw Error("t grid must be positive and decreasing");
    r.times.push_back(t);
    r.values.push_back(m_inner(space, f, H.increment(g, t)) / t);
  }
  r.limit = extrapolate_to_zero(r.times, r.values);
  r.reference = m_inner(space, f, graph_laplacian(space) * g);
  const double scale = std::max(std::abs(r.reference), 1e-300);
  r.relative_error = std::abs(r.limit - r.reference) / scale;
  return r;
}

}  // namespace mms
