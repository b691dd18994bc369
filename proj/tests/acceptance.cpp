// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include "mms/curvature.hpp"
#include "mms/directional.hpp"
#include "mms/fields.hpp"
#include "mms/heatflow.hpp"
#include "mms/laplacian.hpp"
#include "mms/norm.hpp"
#include "mms/sobolev.hpp"
#include "mms/space.hpp"
#include "mms/transport.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mms;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

ProbabilityVector normalized(const ScalarField& w) { return w / w.sum(); }

// 1 ---------------------------------------------------------------------------
Outcome normed_duality_oracle() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::uniform_int_distribution<int> small(-2, 2);
  const std::vector<double> exps{1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()};
  // quotients converge like eps^{q-1} when a dual component vanishes, so the
  // sweep runs in 50-digit arithmetic down to eps = 2^-128
  using HP = oracle::HP;
  std::vector<double> eps;
  for (int k = 8; k <= 128; k += 8) eps.push_back(std::ldexp(1.0, -k));
  double worst = 0.0;
  int samples = 0;
  for (int s = 0; s < 1000; ++s) {
    const double p = exps[s % 4];
    const int dim = 2 + (s / 4) % 2;
    const NormSpec norm = NormSpec::p_norm(p, dim);
    Eigen::VectorXd df(dim), dg(dim);
    // every third sample has integer entries so that ties among |components| occur
    for (int i = 0; i < dim; ++i) {
      df[i] = unif(rng);
      dg[i] = s % 3 == 0 ? small(rng) : unif(rng);
    }
    if (dg.cwiseAbs().maxCoeff() == 0.0) dg[0] = 1.0;
    for (Side side : {Side::plus, Side::minus}) {
      const double a = d_pm_via_gradient_set(norm, df, dg, side);
      const HP b = d_pm_via_difference_quotient(norm, df.cast<HP>(), dg.cast<HP>(), side, eps).value;
      worst = std::max(worst, std::abs(a - static_cast<double>(b)));
    }
    ++samples;
  }
  return {worst <= 1e-9, std::to_string(samples) + " samples, max |gradient set - difference quotient| = " + fmt(worst) +
                             " (<= 1e-9)"};
}

// 2 ---------------------------------------------------------------------------
Outcome multivalued_width() {
  const double s = 0.02, R = 4.0;
  const FiniteMMS space = build_centered_grid(2, R + 0.2, s, NormSpec::max_norm(2));
  const ScalarField g = space.coords().col(0);
  const ScalarField f = SmoothField::bump(Eigen::Vector2d(0.0, 0.0), R).sample(space);
  const LaplacianInterval iv = laplacian_interval(space, g, f);
  // 2 int |d_2 (1 - r^2/R^2)^3| = 128 R / 35 in closed form
  const double expected = 128.0 * R / 35.0;
  const double rel = std::abs(iv.width() - expected) / expected;
  return {rel <= 0.03, "width " + fmt(iv.width()) + " vs 128R/35 = " + fmt(expected) + ", relative error " + fmt(rel) +
                           " (<= 0.03)"};
}

// 3 ---------------------------------------------------------------------------
Outcome hilbert_collapse() {
  const int n = 31;
  const double s = 1.0 / (n - 1);
  const FiniteMMS space = build_euclidean_grid({n, n}, s);
  std::mt19937_64 rng(303);
  double worst_interval = 0.0, worst_heat = 0.0;
  const SparseMatrix L = graph_laplacian(space);
  std::vector<double> t_grid;
  for (int k = 0; k < 6; ++k) t_grid.push_back(2e-5 / std::pow(2.0, k));
  for (int trial = 0; trial < 3; ++trial) {
    const ScalarField g = random_smooth_field(2, rng, 4, 1.0).sample(space);
    std::uniform_real_distribution<double> centre(0.35, 0.65);
    const ScalarField f =
        SmoothField::bump(Eigen::Vector2d(centre(rng), centre(rng)), 0.25, 1.0, 4).sample(space);
    const double ref = m_inner(space, f, L * g);
    const LaplacianInterval iv = laplacian_interval(space, g, f);
    worst_interval = std::max({worst_interval, std::abs(iv.lower - ref), std::abs(iv.upper - ref)});
    const HeatVariantEstimate h = heat_laplacian_variant(space, g, f, t_grid);
    worst_heat = std::max(worst_heat, std::abs(h.limit - iv.upper) / std::abs(iv.upper));
  }
  return {worst_interval <= 1e-9 && worst_heat <= 1e-6,
          "interval endpoints vs <f,Lg>_m: " + fmt(worst_interval) + " (<= 1e-9); heat variant relative: " +
              fmt(worst_heat) + " (<= 1e-6)"};
}

// 4 ---------------------------------------------------------------------------
Outcome calculus_rules() {
  std::mt19937_64 rng(404);
  std::vector<FiniteMMS> spaces;
  spaces.push_back(build_centered_grid(2, 0.5, 0.05, NormSpec::euclidean(2)));
  spaces.push_back(build_centered_grid(2, 0.5, 0.05, NormSpec::max_norm(2)));
  spaces.push_back(build_centered_grid(2, 0.5, 0.05, NormSpec::taxicab(2)));
  spaces.push_back(build_centered_grid(2, 0.5, 0.05, NormSpec::p_norm(4.0, 2)));
  spaces.push_back(build_cycle_graph(24));
  double chain = 0.0, leib = std::numeric_limits<double>::infinity();
  int checked = 0, excluded = 0;
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  for (int c = 0; c < 200; ++c) {
    const FiniteMMS& space = spaces[c % spaces.size()];
    const ScalarField f = random_field(space, rng);
    const ScalarField g = random_field(space, rng);
    const ScalarField f2 = random_field(space, rng);
    std::vector<double> breaks{unif(rng), unif(rng)};
    std::sort(breaks.begin(), breaks.end());
    const PiecewiseAffine phi(breaks, {unif(rng), unif(rng), unif(rng)}, unif(rng));
    for (ChainSide side : {ChainSide::inner, ChainSide::outer}) {
      const ChainRuleReport r = chain_rule_check(space, f, g, phi, side);
      chain = std::max(chain, r.max_residual);
      checked += r.checked;
      excluded += r.excluded;
    }
    leib = std::min(leib, leibniz_check(space, f, f2, g).min_slack);
  }
  return {chain <= 1e-10 && leib >= -1e-10 && checked > 0,
          "200 cases: chain residual " + fmt(chain) + " (<= 1e-10) over " + std::to_string(checked) +
              " points (" + std::to_string(excluded) + " at breakpoints); Leibniz min slack " + fmt(leib) +
              " (>= -1e-10)"};
}

// 5 ---------------------------------------------------------------------------
Outcome distortion_coefficients() {
  std::vector<double> Ks, Ns, ts, thetas;
  for (int i = 0; i < 10; ++i) {
    Ks.push_back(-2.0 + 4.0 * i / 9.0);
    Ns.push_back(1.25 + 0.75 * i);
    ts.push_back(0.05 + 0.1 * i);
    thetas.push_back(0.02 + 0.3 * i);
  }
  double coeff = 0.0, fd = 0.0, relation = 0.0;
  int points = 0, fd_points = 0;
  const double h = 1e-6;
  for (double K : Ks)
    for (double N : Ns) {
      relation = std::max(relation, tau_sigma_relation_check(K, N, ts, thetas));
      for (double t : ts)
        for (double th : thetas) {
          const double pi2 = std::numbers::pi * std::numbers::pi;
          if (K * th * th >= 0.8 * (N - 1.0) * pi2) continue;
          ++points;
          auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1.0); };
          coeff = std::max(coeff, rel(tau(K, N, t, th), oracle::tau_hp(K, N, t, th)));
          coeff = std::max(coeff, rel(sigma(K, N, t, th), oracle::sigma_hp(K, N, t, th)));
          if (t == ts.front()) {
            coeff = std::max(coeff, rel(tau_tilde(K, N, th), oracle::tau_tilde_hp(K, N, th)));
            coeff = std::max(coeff, rel(sigma_tilde(K, N, th), oracle::sigma_tilde_hp(K, N, th)));
            const double fd_tau = (tau(K, N, 1.0, th) - tau(K, N, 1.0 - h, th)) / h;
            const double fd_sigma = (sigma(K, N, 1.0, th) - sigma(K, N, 1.0 - h, th)) / h;
            fd = std::max({fd, rel(tau_tilde(K, N, th), fd_tau), rel(sigma_tilde(K, N, th), fd_sigma)});
            ++fd_points;
          }
        }
    }
  const bool pass = coeff <= 1e-5 && fd <= 1e-5 && relation <= 1e-12;
  return {pass, std::to_string(points) + " grid points: high-precision " + fmt(coeff) + ", finite difference " + fmt(fd) +
                    " over " + std::to_string(fd_points) + " (<= 1e-5, relative to max(|x|,1)); tau-sigma " +
                    fmt(relation) + " (<= 1e-12)"};
}

// 6 ---------------------------------------------------------------------------
Outcome comparison_sharpness() {
  const FiniteMMS euc = build_centered_grid(2, 1.0, 0.02);
  const int o = nearest_point(euc, Eigen::Vector2d::Zero());
  const auto re = distance_laplacian_profile(euc, o, 0.0, 2.0, 0.3, 0.8);

  const FiniteMMS sph = build_sphere(2, 0.02);
  const auto rs = distance_laplacian_profile(sph, 0, 1.0, 2.0, 0.3, 0.8);

  const FiniteMMS hyp1 = build_hyperbolic_disk(0.5, 0.02);
  const FiniteMMS hyp2 = build_hyperbolic_disk(0.5, 0.01);
  const auto rh1 = distance_laplacian_profile(hyp1, nearest_point(hyp1, Eigen::Vector2d::Zero()), -1.0, 2.0, 0.3, 0.8);
  const auto rh2 = distance_laplacian_profile(hyp2, nearest_point(hyp2, Eigen::Vector2d::Zero()), -1.0, 2.0, 0.3, 0.8);
  const double order = std::log2(rh1.max_abs_deviation / rh2.max_abs_deviation);
  const bool pass = re.max_relative_deviation <= 0.05 && rs.max_relative_deviation <= 0.05 &&
                    rh1.max_relative_excess <= 0.05 && rh2.max_relative_excess <= 0.05 && order >= 0.8;
  return {pass, "euclidean " + fmt(re.max_relative_deviation) + ", sphere " + fmt(rs.max_relative_deviation) +
                    " (<= 0.05); hyperbolic excess " + fmt(rh1.max_relative_excess) + " / " +
                    fmt(rh2.max_relative_excess) + " (<= 0.05), order " + fmt(order) + " (>= 0.8)"};
}

// 7 ---------------------------------------------------------------------------
Outcome comparison_chain() {
  std::ostringstream out;
  bool pass = true;
  auto run = [&](const std::string& name, const FiniteMMS& space, int x0, int centre, double r, double K) {
    ComparisonOptions opt;
    const ScalarField rho = bump_density(space, centre, r);
    const ComparisonReport c = laplacian_comparison_experiment(space, x0, K, 2.0, rho, opt);
    pass = pass && c.chain_pass;
    out << name << " (a) " << fmt(c.lower) << " (b) " << fmt(c.transport) << " (c) " << fmt(c.upper) << "; ";
  };
  const FiniteMMS euc = build_centered_grid(2, 1.0, 0.02);
  run("euclidean", euc, nearest_point(euc, Eigen::Vector2d::Zero()), nearest_point(euc, Eigen::Vector2d(0.5, 0.1)),
      0.25, 0.0);
  const FiniteMMS sph = build_sphere(2, 0.02);
  const double th = 0.8;
  run("sphere", sph, 0, nearest_point(sph, Eigen::Vector3d(std::sin(th), 0.0, std::cos(th))), 0.25, 1.0);
  const FiniteMMS hyp = build_hyperbolic_disk(0.5, 0.02);
  run("hyperbolic", hyp, nearest_point(hyp, Eigen::Vector2d::Zero()), nearest_point(hyp, Eigen::Vector2d(0.24, 0.0)),
      0.2, -1.0);
  out << "tol 2% of |(c)|";
  return {pass, out.str()};
}

// 8 ---------------------------------------------------------------------------
Outcome transport_exactness() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 5);
  double worst_cost = 0.0, worst_gap = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const int n = size(rng);
    Eigen::MatrixXd pts(n, 2);
    for (int i = 0; i < n; ++i) pts.row(i) << unif(rng), unif(rng);
    Eigen::MatrixXd D(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) D(i, j) = (pts.row(i) - pts.row(j)).norm();
    const FiniteMMS space = from_distance_matrix(D, Eigen::VectorXd::Ones(n), 1.0);
    ScalarField a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = unif(rng) < 0.3 ? 0.0 : unif(rng);
      b[i] = unif(rng) < 0.3 ? 0.0 : unif(rng);
    }
    if (a.sum() == 0.0) a[0] = 1.0;
    if (b.sum() == 0.0) b[n - 1] = 1.0;
    const ProbabilityVector mu = normalized(a), nu = normalized(b);
    const double q = inst % 2 == 0 ? 2.0 : 1.0;
    const WassersteinResult w = wq_distance(space, mu, nu, q);
    std::vector<int> I, J;
    for (int i = 0; i < n; ++i) {
      if (mu[i] > 0.0) I.push_back(i);
      if (nu[i] > 0.0) J.push_back(i);
    }
    Eigen::MatrixXd C(I.size(), J.size());
    Eigen::VectorXd ma(I.size()), mb(J.size());
    for (std::size_t r = 0; r < I.size(); ++r) {
      ma[r] = mu[I[r]];
      for (std::size_t c = 0; c < J.size(); ++c) C(r, c) = std::pow(D(I[r], J[c]), q);
    }
    for (std::size_t c = 0; c < J.size(); ++c) mb[c] = nu[J[c]];
    const double exact = oracle::transport_by_enumeration(C, ma, mb);
    worst_cost = std::max(worst_cost, std::abs(w.cost - exact));
    worst_gap = std::max(worst_gap, std::abs(w.gap));
  }
  // Kantorovich identity on larger random spaces
  double worst_dual = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const int n = 30;
    Eigen::MatrixXd pts(n, 2);
    for (int i = 0; i < n; ++i) pts.row(i) << unif(rng), unif(rng);
    Eigen::MatrixXd D(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) D(i, j) = (pts.row(i) - pts.row(j)).norm();
    const FiniteMMS space = from_distance_matrix(D, Eigen::VectorXd::Ones(n), 0.3);
    ScalarField a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = i < n / 2 ? unif(rng) : 0.0;
      b[i] = unif(rng);
    }
    const ProbabilityVector mu = normalized(a), nu = normalized(b);
    const KantorovichPotential k = kantorovich_potential(space, mu, nu);
    const double half_w2 = 0.5 * wq_distance(space, mu, nu, 2.0).cost;
    worst_dual = std::max(worst_dual, std::abs(half_w2 - (k.phi.dot(mu) + k.phic.dot(nu))));
  }
  // metric Brenier on the 1-D translation
  const FiniteMMS line = build_centered_grid(1, 1.0, 0.02);
  const Eigen::MatrixXd& x = line.coords();
  ScalarField a = ScalarField::Zero(line.size()), b = ScalarField::Zero(line.size());
  for (int i = 0; i < line.size(); ++i) {
    if (x(i, 0) >= -0.6 && x(i, 0) <= -0.2) a[i] = 1.0;
    if (x(i, 0) >= -0.3 && x(i, 0) <= 0.1) b[i] = 1.0;
  }
  const BrenierReport br = metric_brenier_check(line, normalized(a), normalized(b));
  const bool pass = worst_cost <= 1e-9 && worst_gap <= 1e-9 && worst_dual <= 1e-9 && br.relative_residual <= 0.05;
  return {pass, "enumeration |cost| " + fmt(worst_cost) + ", gap " + fmt(worst_gap) + " (<= 1e-9); Kantorovich " +
                    fmt(worst_dual) + " (<= 1e-9); Brenier residual " + fmt(br.relative_residual) + " (<= 0.05)"};
}

// 9 ---------------------------------------------------------------------------
Outcome cd_flat() {
  const double s = 0.02;
  const FiniteMMS space = build_centered_grid(2, 1.0, s);
  const std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
  std::ostringstream out;
  bool pass = true;
  auto run = [&](const std::string& name, const ScalarField& a, const ScalarField& b, int k) {
    const CDReport r = cd_check(space, normalized(a.cwiseProduct(space.weights())),
                                normalized(b.cwiseProduct(space.weights())), 0.0, 2.0, times, {2.0, 3.0, 4.0}, k);
    pass = pass && r.pass;
    out << name << " min slack " << fmt(r.min_relative_slack) << ", endpoints " << fmt(r.max_endpoint_slack) << "; ";
  };
  const int c1 = nearest_point(space, Eigen::Vector2d(-0.4, -0.2));
  const int c2 = nearest_point(space, Eigen::Vector2d(-0.4 + 20 * 4 * s / 2, 0.2));
  run("translation", bump_density(space, c1, 0.2), bump_density(space, c2, 0.2), 1);
  const int c3 = nearest_point(space, Eigen::Vector2d(0.4, -0.1));
  run("dilation", bump_density(space, c1, 0.15), bump_density(space, c3, 0.25), 8);
  out << "(>= -0.02 of |U_N|, endpoints <= 1e-12)";
  return {pass, out.str()};
}

// 10 --------------------------------------------------------------------------
Outcome heat_flow() {
  const FiniteMMS line = build_centered_grid(1, 1.0, 0.02);
  const Eigen::MatrixXd& x = line.coords();
  ScalarField f0(line.size());
  for (int i = 0; i < line.size(); ++i) f0[i] = 0.05 + std::exp(-x(i, 0) * x(i, 0) / (2.0 * 0.15 * 0.15));
  const double tau0 = 1e-3;
  const FlowTrajectory tr = heat_flow_p2(line, f0, tau0, 400);
  double mass = 0.0, maxp = 0.0;
  const double m0 = f0.dot(line.weights());
  for (const auto& st : tr.states) {
    mass = std::max(mass, std::abs(st.dot(line.weights()) - m0) / m0);
    maxp = std::max({maxp, f0.minCoeff() - st.minCoeff(), st.maxCoeff() - f0.maxCoeff()});
  }
  const ExtrapolatedDissipation ed = extrapolated_dissipation(line, f0, 1e-5, EntropyFunction::quadratic());
  const DissipationReport dr = entropy_dissipation_check(line, tr, EntropyFunction::quadratic());
  const SpeedReport sp = wasserstein_speed_check(line, tr, 1);

  const FiniteMMS grid = build_euclidean_grid({20, 20}, 0.05);
  const SemigroupReport sg = semigroup_identities(grid, {0.0, 1e-3, 1e-2, 0.1}, 1010);
  const double semi = std::max({sg.self_adjointness, sg.commutation, sg.semigroup_property});
  const bool pass = mass <= 1e-12 && maxp <= 0.0 && ed.relative_residual <= 1e-6 && dr.min_step_slack >= -1e-12 &&
                    sp.min_relative_slack >= -0.02 && semi <= 1e-9;
  return {pass, "mass drift " + fmt(mass) + ", max-principle excess " + fmt(maxp) + ", dissipation " +
                    fmt(ed.relative_residual) + " (<= 1e-6), step energy slack " + fmt(dr.min_step_slack) +
                    ", speed slack " + fmt(sp.min_relative_slack) + " (>= -0.02), semigroup " + fmt(semi) +
                    " (<= 1e-9)"};
}

// 11 --------------------------------------------------------------------------
Outcome busemann_function() {
  const FiniteMMS space = build_centered_grid(2, 5.0, 0.1);
  std::vector<double> ts;
  for (int k = 1; k <= 12; ++k) ts.push_back(std::pow(10.0, k));
  std::vector<ScalarField> bumps;
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> centre(-3.0, 3.0);
  for (int k = 0; k < 10; ++k)
    bumps.push_back(SmoothField::bump(Eigen::Vector2d(centre(rng), centre(rng)), 1.0).sample(space));
  const BusemannReport r = busemann(space, Eigen::Vector2d::Zero(), Eigen::Vector2d(1.0, 0.0), ts, bumps);
  const bool pass = r.linear_deviation <= 1e-8 && r.cc_residual <= 1e-6 && r.max_upper_endpoint <= 1e-8 && r.pass;
  return {pass, "|b + x1 - c| " + fmt(r.linear_deviation) + " (<= 1e-8), |b^cc - b| " + fmt(r.cc_residual) +
                    " (<= 1e-6), max upper endpoint " + fmt(r.max_upper_endpoint) + " (<= 1e-8), monotone " +
                    fmt(r.monotonicity_min_slack) + ", slope " + fmt(r.max_slope)};
}

// 12 --------------------------------------------------------------------------
Outcome gamma2_brute_force() {
  std::mt19937_64 rng(1212);
  std::uniform_int_distribution<int> ints(-1000, 1000);
  std::uniform_real_distribution<double> reals(-1.0, 1.0);
  const FiniteMMS k2 = build_complete_graph(2), c4 = build_cycle_graph(4);
  Eigen::MatrixXd W4 = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) W4(i, (i + 1) % 4) = W4((i + 1) % 4, i) = 1.0;
  const oracle::DenseGamma dense(W4);
  double min_k2 = std::numeric_limits<double>::infinity(), min_c4 = min_k2, mismatch = 0.0;
  for (int s = 0; s < 100; ++s) {
    const bool exact = s % 2 == 0;
    auto draw = [&] { return exact ? static_cast<double>(ints(rng)) : reals(rng); };
    Eigen::VectorXd f2(2), f4(4);
    for (int i = 0; i < 2; ++i) f2[i] = draw();
    for (int i = 0; i < 4; ++i) f4[i] = draw();
    const ScalarField g2 = gamma2(k2, f2);
    const ScalarField g4 = gamma2(c4, f4);
    min_k2 = std::min(min_k2, g2.minCoeff());
    min_c4 = std::min(min_c4, g4.minCoeff());
    // K_2 closed form (f1 - f2)^2 and dense C_4 reference
    const double d = f2[0] - f2[1];
    mismatch = std::max({mismatch, (g2.array() - d * d).abs().maxCoeff(), (g4 - dense.gamma2(f4)).cwiseAbs().maxCoeff()});
  }
  const bool pass = min_k2 >= 0.0 && min_c4 >= 0.0 && mismatch <= 1e-9;
  return {pass, "100 fields: min Gamma_2 on K_2 " + fmt(min_k2) + ", on C_4 " + fmt(min_c4) + " (>= 0); reference mismatch " +
                    fmt(mismatch)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "normed duality oracle", 5, normed_duality_oracle},
      {2, "multivalued Laplacian width", 10, multivalued_width},
      {3, "Hilbert collapse", 10, hilbert_collapse},
      {4, "calculus rules", 20, calculus_rules},
      {5, "distortion coefficients", 2, distortion_coefficients},
      {6, "Laplacian comparison sharpness", 60, comparison_sharpness},
      {7, "comparison pipeline chain", 120, comparison_chain},
      {8, "transport exactness", 30, transport_exactness},
      {9, "CD(0,N) flat check", 60, cd_flat},
      {10, "heat flow", 60, heat_flow},
      {11, "Busemann function", 30, busemann_function},
      {12, "Gamma_2 brute force", 2, gamma2_brute_force},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d %s  %s: %s [%.2f s, limit %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, c.limit, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
