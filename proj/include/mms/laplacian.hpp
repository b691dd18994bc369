#pragma once

#include "mms/directional.hpp"
#include "mms/space.hpp"

#include <functional>
#include <vector>

namespace mms {

struct LaplacianInterval {
  double lower = 0.0;  // -sum D+ f(grad g) m
  double upper = 0.0;  // -sum D- f(grad g) m
  double width() const { return upper - lower; }
};

/// True when f vanishes on every point within distance h of the boundary.
bool is_admissible_test(const FiniteMMS& space, const ScalarField& f);

/// Integration-by-parts interval for Delta g tested against f, using the
/// gradient notion of the space (see d_pm). Throws when f is not admissible.
LaplacianInterval laplacian_interval(const FiniteMMS& space, const ScalarField& g, const ScalarField& f,
                                     double p = 2.0);

/// (Lg)(x) = (1/m(x)) sum_y w(x,y) (g(y) - g(x)).
SparseMatrix graph_laplacian(const FiniteMMS& space);

/// <f, h>_m = sum_x f(x) h(x) m(x)
double m_inner(const FiniteMMS& space, const ScalarField& f, const ScalarField& h);

struct MembershipReport {
  bool pass = true;
  double worst_slack = 0.0;
  bool homogeneity = true;
  int tested = 0;
};

/// Checks lower(f) - 1e-9 <= <f, mu> <= upper(f) + 1e-9 for every basis
/// function, and the same for (lambda mu, lambda g) with lambda in {2, 1/2}.
MembershipReport membership_check(const FiniteMMS& space, const ScalarField& g, const SignedMeasure& mu,
                                  const std::vector<ScalarField>& test_basis, double p = 2.0);

/// phi with closed-form first and second derivatives.
struct C11Map {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

struct ResidualReport {
  double max_residual = 0.0;
  int points = 0;
  int argmax = -1;
};

/// max over interior points of |L(phi o g) - phi'(g) Lg - phi''(g) Gamma(g,g)|.
ResidualReport chain_rule_laplacian_check(const FiniteMMS& space, const ScalarField& g, const C11Map& phi);

struct LeibnizLaplacianReport {
  double max_residual = 0.0;           // L(g1 g2) - g1 Lg2 - g2 Lg1 - 2 Gamma(g1,g2)
  double max_symmetry_residual = 0.0;  // Gamma(g1,g2) - Gamma(g2,g1)
};

/// Gamma from the edge formula (carre_du_champ), checked against the operator identity.
LeibnizLaplacianReport leibniz_laplacian_check(const FiniteMMS& space, const ScalarField& g1, const ScalarField& g2);

/// Gamma(f,g) = (L(fg) - f Lg - g Lf) / 2
ScalarField gamma(const FiniteMMS& space, const ScalarField& f, const ScalarField& g);
/// Gamma_2(f) = (L Gamma(f,f) - 2 Gamma(f, Lf)) / 2
ScalarField gamma2(const FiniteMMS& space, const ScalarField& f);

struct BochnerReport {
  double min_slack = 0.0;  // min over points of Gamma_2(f) - K Gamma(f,f)
  int argmin = -1;
};

/// Interior points only when the space has a boundary.
BochnerReport bochner_diagnostic(const FiniteMMS& space, const ScalarField& f, double K);

struct ChangeOfMeasureReport {
  double max_density_residual = 0.0;  // |L'g - (Lg - Gamma(V,g))| over interior points
  double max_pairing_residual = 0.0;  // over the supplied test functions
};

/// Weighted space m' = e^{-V} m; compares its Laplacian with e^{-V}(Lg - Gamma(V,g)) m.
ChangeOfMeasureReport change_of_measure_check(const FiniteMMS& space, const ScalarField& g, const ScalarField& V,
                                              const std::vector<ScalarField>& tests = {});

struct LocalityStabilityReport {
  double max_overlap_discrepancy = 0.0;
  int compared_points = 0;
  std::vector<double> drift;  // max endpoint distance between intervals of g_n and g
};

/// (a) D+/- fields computed on each part (restricted space) agree with the
/// whole-space fields at points whose h-ball lies inside the part;
/// (b) interval endpoints for g_sequence[n] against f compared with those of g.
LocalityStabilityReport locality_and_stability_checks(const FiniteMMS& space, const ScalarField& g,
                                                      const ScalarField& f,
                                                      const std::vector<std::vector<int>>& partition,
                                                      const std::vector<ScalarField>& g_sequence);

}  // namespace mms
