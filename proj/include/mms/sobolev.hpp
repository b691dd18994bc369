#pragma once

#include "mms/space.hpp"

#include <vector>

namespace mms {

enum class SlopeVariant { full, ascending, descending };

/// max over neighbours y (0 < d <= h) of |f(y)-f(x)|/d, or of the positive
/// (ascending) / negative (descending) part of the increment; 0 without neighbours.
ScalarField local_slope(const FiniteMMS& space, const ScalarField& f, SlopeVariant variant = SlopeVariant::full);

struct UpperGradientResult {
  bool holds = true;
  double increment = 0.0;  // |f(end) - f(start)|
  double integral = 0.0;   // sum over edges of max(G(a), G(b)) d(a, b)
  double residual = 0.0;   // increment - integral (<= 1e-12 when it holds)
};

/// Discrete upper-gradient inequality along a path of consecutive neighbours.
UpperGradientResult upper_gradient_check(const FiniteMMS& space, const ScalarField& f, const ScalarField& G,
                                         const std::vector<int>& path);

/// (1/p) sum_x slope(x)^p m(x) with the scale-h slope.
double cheeger_energy(const FiniteMMS& space, const ScalarField& f, double p);

/// Carre du champ of the edge Dirichlet form,
/// Gamma(f,g)(x) = (1/(2 m(x))) sum_y w(x,y) (f(y)-f(x)) (g(y)-g(x)).
ScalarField carre_du_champ(const FiniteMMS& space, const ScalarField& f, const ScalarField& g);

/// (1/p) sum_x Gamma(f,f)(x)^{p/2} m(x): the Cheeger energy of the Dirichlet-form gradient.
double cheeger_energy_form(const FiniteMMS& space, const ScalarField& f, double p);

/// E(f,g) = sum over unordered edges of w (f(a)-f(b)) (g(a)-g(b)), so that
/// E(f,g) = -<f, Lg>_m = sum_x Gamma(f,g)(x) m(x).
double dirichlet_form(const FiniteMMS& space, const ScalarField& f, const ScalarField& g);

struct SlopeEqualityReport {
  double max_asc_desc = 0.0;
  double mean_asc_desc = 0.0;
  double max_full_gap = 0.0;
  double mean_full_gap = 0.0;
  int points = 0;
  std::vector<int> discrepant;  // interior points with |asc - desc| > 1e-12 (1 + slope)
};

SlopeEqualityReport slope_equality_report(const FiniteMMS& space, const ScalarField& f);

}  // namespace mms
