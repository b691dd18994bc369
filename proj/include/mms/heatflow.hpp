#pragma once

#include "mms/space.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mms {

enum class Stepper { implicit_p2, proximal_p };

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<ScalarField> states;
  double p = 2.0;
  Stepper stepper = Stepper::implicit_p2;
  std::vector<double> energies;   // Cheeger energy of each state
  std::vector<int> iterations;    // Newton iterations per step (proximal_p)
};

/// Convex u on (0, inf) with closed-form derivatives.
struct EntropyFunction {
  std::string name;
  std::function<double(double)> u;
  std::function<double(double)> d1;
  std::function<double(double)> d2;

  /// u_N(z) = -z^{1-1/N}
  static EntropyFunction renyi(double N);
  /// u_q(z) with u_q'' = z^{1-q}; u_2 = z log z - z, u_3 = z - log z
  static EntropyFunction power(double q);
  static EntropyFunction boltzmann() { return power(2.0); }
  static EntropyFunction quadratic();
  static EntropyFunction affine(double a, double b);
};

/// One implicit Euler step (M + tau K) f+ = M f with K = D - W.
/// Throws when the solve residual exceeds 1e-10 relative.
ScalarField heat_step_p2(const FiniteMMS& space, const ScalarField& f, double tau);

FlowTrajectory heat_flow_p2(const FiniteMMS& space, const ScalarField& f, double tau, int steps);

/// Proximal steps for C_p(u) = (1/p) sum Gamma(u)^{p/2} m: each step minimizes
/// C_p(u) + (1/(2 tau)) sum (u - f)^2 m by damped Newton until the L2(m)
/// gradient has sup norm <= 1e-8. For p < 2 the energy is evaluated with
/// Gamma + 1e-12 to keep the Hessian finite.
FlowTrajectory heat_flow_p(const FiniteMMS& space, const ScalarField& f, double p, double tau, int steps);

struct DissipationReport {
  std::vector<double> lhs;        // (int u(f_{k+1}) - int u(f_k)) / tau
  std::vector<double> rhs;        // -int u''(f_{k+1}) Gamma(f_{k+1})^{p/2} m
  std::vector<double> residuals;  // |lhs - rhs| / max(|rhs|, 1e-300)
  double min_step_slack = 0.0;    // min over steps of rhs - lhs (>= 0 for p = 2, u = z^2/2)
};

/// Throws when a state leaves [min f_0, max f_0] (up to 1e-12) or leaves (0, inf) for entropies needing it.
DissipationReport entropy_dissipation_check(const FiniteMMS& space, const FlowTrajectory& trajectory,
                                            const EntropyFunction& u);

struct ExtrapolatedDissipation {
  std::vector<double> quotients;  // one-step quotients at tau0, tau0/2, tau0/4
  double limit = 0.0;             // Richardson extrapolation to tau -> 0
  double reference = 0.0;         // -int u''(f) Gamma(f) m at t = 0
  double relative_residual = 0.0;
};

/// p = 2 one-step energy quotients extrapolated to tau -> 0 and compared with the
/// dissipation at t = 0.
ExtrapolatedDissipation extrapolated_dissipation(const FiniteMMS& space, const ScalarField& f, double tau0,
                                                 const EntropyFunction& u);

struct SpeedReport {
  std::vector<double> lhs;    // W_q(mu_k, mu_{k+w})^q
  std::vector<double> rhs;    // (w tau)^{q-1} * trapezoid integral of int Gamma^{p/2} / f^{q-1} dm~
  std::vector<double> slack;  // (rhs - lhs) / rhs
  double min_relative_slack = 0.0;
};

/// States are normalized to probability densities with respect to m~ = m / m(X);
/// q = p / (p - 1). window = 1 gives the per-step comparison. On one-dimensional
/// grids the left side is the distance between cell histograms (wq_cells_1d);
/// elsewhere it is the discrete transport cost, which on a lattice is bounded
/// below by the mass moved times spacing^q and needs a wider window.
SpeedReport wasserstein_speed_check(const FiniteMMS& space, const FlowTrajectory& trajectory, int window = 1);

/// H_t = exp(tL) through the eigendecomposition of the m-symmetric generator.
class HeatSemigroup {
 public:
  explicit HeatSemigroup(const FiniteMMS& space);

  ScalarField apply(const ScalarField& f, double t) const;
  /// (H_t f - f) computed with expm1 for small t
  ScalarField increment(const ScalarField& f, double t) const;
  /// Action on measures through densities: (H_t (mu / m)) m.
  SignedMeasure apply_measure(const SignedMeasure& mu, double t) const;
  Eigen::MatrixXd matrix(double t) const;
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }

 private:
  Eigen::VectorXd sqrt_m_;
  Eigen::VectorXd lambda_;  // eigenvalues of the symmetrized generator (<= 0)
  Eigen::MatrixXd V_;
};

struct SemigroupReport {
  double self_adjointness = 0.0;
  double commutation = 0.0;
  double semigroup_property = 0.0;
  double doubling_check = 0.0;          // |H_t - H_{t/2}^2|
  std::vector<double> lipschitz_ratio;  // Lip(H_t f) / (|f|_inf / sqrt(2t)), per t
  std::vector<double> be_min_slack;     // min_x H_t Gamma(f) - Gamma(H_t f), per t
};

/// Random fields drawn from seed. Throws when the doubling check exceeds 1e-9.
SemigroupReport semigroup_identities(const FiniteMMS& space, const std::vector<double>& t_list, std::uint64_t seed);

struct HeatVariantEstimate {
  std::vector<double> times;
  std::vector<double> values;  // int f (H_t g - g) / t dm
  double limit = 0.0;          // Richardson extrapolation to t -> 0
  double reference = 0.0;      // <f, Lg>_m
  double relative_error = 0.0;
};

/// t_grid decreasing; Neville extrapolation of the values to t = 0.
HeatVariantEstimate heat_laplacian_variant(const FiniteMMS& space, const ScalarField& g, const ScalarField& f,
                                           const std::vector<double>& t_grid);

/// Neville extrapolation of samples (x_k, y_k) to x = 0.
double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mms
