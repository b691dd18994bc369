#pragma once

// Independent reference computations used by the unit tests and the
// acceptance suite. Nothing here calls the library routine it checks.

#include <Eigen/Dense>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

/// Minimum of <C, P> over the vertices of the transportation polytope,
/// enumerating every spanning tree of the complete bipartite graph.
inline double transport_by_enumeration(const Eigen::MatrixXd& C, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(a.size()), n = static_cast<int>(b.size());
  const int need = m + n - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> chosen;
  std::vector<int> parent(m + n);
  for (int k = 0; k < m + n; ++k) parent[k] = k;

  auto evaluate = [&]() {
    // leaf elimination on the tree
    std::vector<double> rest(m + n);
    for (int i = 0; i < m; ++i) rest[i] = a[i];
    for (int j = 0; j < n; ++j) rest[m + j] = b[j];
    std::vector<int> degree(m + n, 0);
    std::vector<char> alive(chosen.size(), 1);
    for (int c : chosen) {
      ++degree[c / n];
      ++degree[m + c % n];
    }
    double cost = 0.0;
    for (int round = 0; round < need; ++round) {
      int leaf = -1;
      for (int v = 0; v < m + n && leaf < 0; ++v)
        if (degree[v] == 1) leaf = v;
      if (leaf < 0) return;
      for (std::size_t e = 0; e < chosen.size(); ++e) {
        if (!alive[e]) continue;
        const int i = chosen[e] / n, j = m + chosen[e] % n;
        if (i != leaf && j != leaf) continue;
        const int other = i == leaf ? j : i;
        const double x = rest[leaf];
        if (x < -1e-12) return;
        cost += x * C(i, j - m);
        rest[leaf] = 0.0;
        rest[other] -= x;
        alive[e] = 0;
        --degree[i];
        --degree[j];
        break;
      }
    }
    best = std::min(best, cost);
  };

  auto find = [](std::vector<int>& p, int x) {
    while (p[x] != x) x = p[x];
    return x;
  };
  auto rec = [&](auto&& self, int cell, std::vector<int> p) -> void {
    if (static_cast<int>(chosen.size()) == need) {
      evaluate();
      return;
    }
    if (cell == m * n || m * n - cell < need - static_cast<int>(chosen.size())) return;
    const int ra = find(p, cell / n), rb = find(p, m + cell % n);
    if (ra != rb) {
      std::vector<int> q = p;
      q[ra] = rb;
      chosen.push_back(cell);
      self(self, cell + 1, q);
      chosen.pop_back();
    }
    self(self, cell + 1, p);
  };
  rec(rec, 0, parent);
  return best;
}

using HP = boost::multiprecision::cpp_dec_float_50;
// 113-bit binary floating point, enough for the distortion coefficient oracles
using Quad = boost::multiprecision::cpp_bin_float_quad;

/// tau^{(t)}_{K,N}(theta) in 113-bit arithmetic (finite regime only).
inline double tau_hp(double K_, double N_, double t_, double theta_) {
  const Quad K(K_), N(N_), t(t_), th(theta_);
  if (K * th * th == 0) return t_;
  if (t == 0) return 0.0;
  Quad ratio;
  if (K > 0) {
    const Quad a = th * sqrt(K / (N - 1));
    ratio = sin(t * a) / sin(a);
  } else {
    const Quad a = th * sqrt(-K / (N - 1));
    ratio = sinh(t * a) / sinh(a);
  }
  return static_cast<double>(pow(t, 1 / N) * pow(ratio, 1 - 1 / N));
}

inline double sigma_hp(double K_, double N_, double t_, double theta_) {
  const Quad K(K_), N(N_), t(t_), th(theta_);
  if (K * th * th == 0) return t_;
  if (t == 0) return 0.0;
  if (K > 0) {
    const Quad a = th * sqrt(K / N);
    return static_cast<double>(sin(t * a) / sin(a));
  }
  const Quad a = th * sqrt(-K / N);
  return static_cast<double>(sinh(t * a) / sinh(a));
}

/// d/ds tau^{(s)} at s = 1 evaluated symbolically: (1/N)(1 + (N-1) a cot a).
inline double tau_tilde_hp(double K_, double N_, double theta_) {
  const Quad K(K_), N(N_), th(theta_);
  if (K == 0 || th == 0) return 1.0;
  Quad acot;
  if (K > 0) {
    const Quad a = th * sqrt(K / (N - 1));
    acot = a * cos(a) / sin(a);
  } else {
    const Quad a = th * sqrt(-K / (N - 1));
    acot = a * cosh(a) / sinh(a);
  }
  return static_cast<double>((1 + (N - 1) * acot) / N);
}

inline double sigma_tilde_hp(double K_, double N_, double theta_) {
  const Quad K(K_), N(N_), th(theta_);
  if (K == 0 || th == 0) return 1.0;
  if (K > 0) {
    const Quad a = th * sqrt(K / N);
    return static_cast<double>(a * cos(a) / sin(a));
  }
  const Quad a = th * sqrt(-K / N);
  return static_cast<double>(a * cosh(a) / sinh(a));
}

/// Dense generator, carre du champ and Gamma_2 from an adjacency matrix with unit masses.
struct DenseGamma {
  Eigen::MatrixXd L;
  explicit DenseGamma(const Eigen::MatrixXd& W) : L(W) {
    L.diagonal() = -W.rowwise().sum();
  }
  Eigen::VectorXd gamma(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
    return 0.5 * (L * f.cwiseProduct(g) - f.cwiseProduct(L * g) - g.cwiseProduct(L * f));
  }
  Eigen::VectorXd gamma2(const Eigen::VectorXd& f) const {
    return 0.5 * (L * gamma(f, f)) - gamma(f, L * f);
  }
};

}  // namespace oracle
