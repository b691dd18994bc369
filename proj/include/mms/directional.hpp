#pragma once

// One-sided derivatives D^{+/-} f(grad g) on a finite space. With the scale-h
// slope, eps -> slope(g + eps f)(x) = max_i |a_i + eps b_i| / d_i is a
// maximum of finitely many convex piecewise-affine functions, so its
// one-sided derivatives at 0 come from the active set of the maximum.

#include "mms/fields.hpp"
#include "mms/space.hpp"

#include <cstdint>
#include <vector>

namespace mms {

inline constexpr double kActiveSetTolerance = 1e-12;
inline constexpr double kSlopeFloor = 1e-12;

struct DirectionalField {
  ScalarField dplus;
  ScalarField dminus;
};

/// Exact D^{+/-} f(grad g) with the scale-h slope. The value is independent of p
/// (p only enters through the product D^{+/-} slope(g)^{p-2}); p is validated.
DirectionalField d_pm_exact(const FiniteMMS& space, const ScalarField& f, const ScalarField& g, double p = 2.0);

/// Same quantity from the quotients (slope(g+eps f)^p - slope(g)^p) / (p eps slope(g)^{p-2})
/// over a decreasing eps grid; throws when the quotients break monotonicity by more than 1e-10.
DirectionalField d_pm_sweep(const FiniteMMS& space, const ScalarField& f, const ScalarField& g, double p,
                            const std::vector<double>& eps_grid);

/// D^{+/-} f(grad g) with the gradient notion of the space: Gamma(f,g) on
/// spaces with a Hilbertian Dirichlet form, the exact scale-h value otherwise.
DirectionalField d_pm(const FiniteMMS& space, const ScalarField& f, const ScalarField& g, double p = 2.0);

enum class ChainSide { inner, outer };

struct ChainRuleReport {
  double max_residual = 0.0;
  int checked = 0;
  int excluded = 0;  // points where a breakpoint of phi meets the local value range
  bool pass() const { return max_residual <= 1e-10; }
};

/// inner: D(phi o f)(grad g) = phi'(f) D^{+/- sign phi'(f)} f(grad g);
/// outer: D f(grad(phi o g)) = phi'(g) D^{+/- sign phi'(g)} f(grad g).
ChainRuleReport chain_rule_check(const FiniteMMS& space, const ScalarField& f, const ScalarField& g,
                                 const PiecewiseAffine& phi, ChainSide side);

struct LeibnizReport {
  /// slack of D+(f1 f2) <= f1 D^{s1} f2 + f2 D^{s2} f1 + R+ and of the mirrored
  /// D- inequality with R-, where R+/- = S max/min over the active set of
  /// sign(a_i) (f1(y_i)-f1(x)) (f2(y_i)-f2(x)) / d_i (the increment product).
  double min_slack = 0.0;
  /// the same slacks without the increment-product term
  double min_raw_slack = 0.0;
  double max_remainder = 0.0;
  ScalarField plus_raw_slack;
  ScalarField minus_raw_slack;
  bool pass() const { return min_slack >= -1e-10; }
};

LeibnizReport leibniz_check(const FiniteMMS& space, const ScalarField& f1, const ScalarField& f2,
                            const ScalarField& g);

struct StrictConvexityProbe {
  double fraction = 0.0;  // mean over samples of the m-fraction with dplus - dminus > 1e-9
  int samples = 0;
  std::uint64_t seed = 0;
};

/// Random (f, g) pairs: half of the g samples are axis profiles psi(x_k), which
/// realise the tie configurations of polyhedral norms.
StrictConvexityProbe strict_convexity_probe(const FiniteMMS& space, int sample_count, std::uint64_t seed,
                                            bool f_equals_g = false);

struct LinearityReport {
  double max_residual = 0.0;   // at points where all three fields are single valued
  int admissible = 0;
  double max_convexity_violation = 0.0;  // D+(a f1 + b f2) - D+(a f1) - D+(b f2) elsewhere, should be <= 0
  bool pass() const { return max_residual <= 1e-9 && max_convexity_violation <= 1e-10; }
};

LinearityReport linearity_check(const FiniteMMS& space, const ScalarField& f1, const ScalarField& f2,
                                const ScalarField& g, double alpha, double beta);

}  // namespace mms
