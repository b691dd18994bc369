#include "mms/experiments.hpp"

#include "mms/curvature.hpp"
#include "mms/directional.hpp"
#include "mms/fields.hpp"
#include "mms/heatflow.hpp"
#include "mms/laplacian.hpp"
#include "mms/norm.hpp"
#include "mms/sobolev.hpp"
#include "mms/space.hpp"
#include "mms/space_io.hpp"
#include "mms/transport.hpp"

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace mms::experiments {

// ---------------------------------------------------------------- config

namespace {

Config parse_items(const std::vector<CLI::ConfigItem>& items) {
  Config c;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string key;
    for (const auto& p : item.parents) key += p + ".";
    key += item.name;
    std::string value;
    for (std::size_t k = 0; k < item.inputs.size(); ++k) value += (k ? " " : "") + item.inputs[k];
    c.set(key, value);
  }
  return c;
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
  std::istringstream in(text);
  try {
    CLI::ConfigINI ini;
    return parse_items(ini.from_config(in));
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& s = it->second;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("value of " + key + " is not a number: " + s);
  return v;
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& s = it->second;
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("value of " + key + " is not an integer: " + s);
  return v;
}

std::optional<std::uint64_t> Config::seed() const {
  std::string text = get("params.seed", "");
  if (text.empty()) {
    const char* env = std::getenv("MMS_SEED");
    if (!env || !*env) return std::nullopt;
    text = env;
  }
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) throw ConfigError("seed is not an unsigned integer: " + text);
  return v;
}

std::uint64_t Config::require_seed() const {
  const auto s = seed();
  if (!s) throw ConfigError("this experiment is randomized: set params.seed, --seed or MMS_SEED");
  return *s;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool ExperimentResult::pass() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

// ---------------------------------------------------------------- helpers

namespace {

Assertion at_most(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

Assertion at_least(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value >= threshold, value, threshold, std::move(detail)};
}

ProbabilityVector to_probability(const FiniteMMS& space, const ScalarField& density) {
  ProbabilityVector mu = density.cwiseProduct(space.weights());
  return mu / mu.sum();
}

struct ModelSpace {
  std::string model;
  FiniteMMS space;
  double K = 0.0;
  int origin = 0;
};

// point at model distance r from the origin along the first axis
Eigen::VectorXd along_axis(const ModelSpace& m, double r) {
  if (m.model == "sphere") return Eigen::Vector3d(std::sin(r), 0.0, std::cos(r));
  Eigen::VectorXd p = Eigen::VectorXd::Zero(m.space.coords().cols());
  p[0] = m.model == "hyperbolic" ? std::tanh(0.5 * r) : r;
  return p;
}

ModelSpace model_space(const Config& c, const std::string& fallback) {
  const std::string model = c.get("space.model", fallback);
  const double spacing = c.get_double("space.spacing", 0.02);
  auto build = [&]() -> ModelSpace {
    if (model == "euclidean" || model == "normed") {
      const NormSpec norm = NormSpec::parse(c.get("space.norm", "p:2"), c.get_int("space.dim", 2));
      FiniteMMS space = build_centered_grid(norm.dim(), c.get_double("space.half_width", 1.0), spacing, norm);
      const int o = nearest_point(space, Eigen::VectorXd::Zero(norm.dim()));
      return {model, std::move(space), 0.0, o};
    }
    if (model == "sphere") return {model, build_sphere(2, spacing), 1.0, 0};
    if (model == "hyperbolic") {
      FiniteMMS space = build_hyperbolic_disk(c.get_double("space.radius", 0.5), spacing);
      const int o = nearest_point(space, Eigen::Vector2d::Zero());
      return {model, std::move(space), -1.0, o};
    }
    throw ConfigError("unknown space.model: " + model + " (euclidean, normed, sphere, hyperbolic)");
  };
  ModelSpace m = build();
  m.K = c.get_double("params.K", m.K);
  return m;
}

// ---------------------------------------------------------------- experiments

ExperimentResult comparison(const Config& c) {
  ExperimentResult r;
  const ModelSpace m = model_space(c, "euclidean");
  const double N = c.get_double("params.N", 2.0);
  const double tol = c.get_double("params.tolerance", 0.02);
  const double centre_r = c.get_double("params.centre", m.model == "sphere" ? 0.8 : 0.5);
  const double radius = c.get_double("params.radius", m.model == "hyperbolic" ? 0.2 : 0.25);
  const int centre = nearest_point(m.space, along_axis(m, centre_r));
  ComparisonOptions opt;
  opt.relative_tolerance = tol;
  opt.subsamples = c.get_int("params.subsamples", opt.subsamples);
  for (double frac : {0.6, 1.0, 1.4}) {
    const int x = nearest_point(m.space, along_axis(m, centre_r * frac));
    opt.bumps.push_back(bump_density(m.space, x, 0.5 * radius));
  }
  const ComparisonReport rep = laplacian_comparison_experiment(m.space, m.origin, m.K, N, bump_density(m.space, centre, radius), opt);
  r.assertions.push_back(at_most("lower_below_transport", rep.lower - rep.transport, rep.tolerance));
  r.assertions.push_back(at_most("transport_below_upper", rep.transport - rep.upper, rep.tolerance));
  r.assertions.push_back(at_most("distance_squared_bound_excess", rep.distq_max_relative_excess, tol));
  r.assertions.push_back(at_most("distance_bound_excess", rep.dist_max_relative_excess, tol));
  r.details = {{"model", rep.model}, {"K", rep.K}, {"N", rep.N}, {"spacing", rep.spacing}, {"h", rep.h},
               {"lower", rep.lower}, {"transport", rep.transport}, {"upper", rep.upper},
               {"binned_transport", rep.binned_transport}, {"bumps", rep.bumps}};
  r.plots.push_back({"energy", "t", "U_N(mu_t)", rep.times, rep.energies});
  r.plots.push_back({"binned_energy", "t", "U_N(mu_t)", rep.times, rep.binned_energies});
  return r;
}

ExperimentResult cd_check_experiment(const Config& c) {
  ExperimentResult r;
  const double s = c.get_double("space.spacing", 0.02);
  const FiniteMMS space = build_centered_grid(2, 1.0, s);
  const double N = c.get_double("params.N", 2.0);
  const double tol = c.get_double("params.tolerance", 0.02);
  const std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
  const int c1 = nearest_point(space, Eigen::Vector2d(-0.4, -0.2));
  const int c2 = nearest_point(space, Eigen::Vector2d(-0.4 + 40 * s, -0.2 + 20 * s));
  const int c3 = nearest_point(space, Eigen::Vector2d(0.4, -0.1));
  struct Case {
    std::string name;
    ScalarField a, b;
    int k;
  };
  const std::vector<Case> cases{{"translation", bump_density(space, c1, 0.2), bump_density(space, c2, 0.2), 1},
                                {"dilation", bump_density(space, c1, 0.15), bump_density(space, c3, 0.25), 8}};
  for (const Case& cs : cases) {
    const CDReport rep = cd_check(space, to_probability(space, cs.a), to_probability(space, cs.b), 0.0, N, times,
                                  {N, N + 1.0, 2.0 * N}, cs.k, tol);
    r.assertions.push_back(at_least(cs.name + "_min_relative_slack", rep.min_relative_slack, -tol));
    r.assertions.push_back(at_most(cs.name + "_endpoint_slack", rep.max_endpoint_slack, 1e-12));
    for (const CDSeries& ser : rep.series) {
      std::ostringstream name;
      name << cs.name << "_slack_N" << ser.N_prime;
      r.plots.push_back({name.str(), "t", "relative slack", rep.times, ser.relative_slack});
    }
    r.details[cs.name] = {{"min_relative_slack", rep.min_relative_slack},
                          {"max_endpoint_slack", rep.max_endpoint_slack},
                          {"cut_locus_pairs", rep.cut_locus_pairs}};
  }
  return r;
}

ExperimentResult mcp(const Config& c) {
  ExperimentResult r;
  const ModelSpace m = model_space(c, "euclidean");
  const double N = c.get_double("params.N", 2.0);
  const double tol = c.get_double("params.tolerance", 0.02);
  const int centre = nearest_point(m.space, along_axis(m, c.get_double("params.centre", 0.5)));
  const ScalarField rho = bump_density(m.space, centre, c.get_double("params.radius", 0.25));
  const std::vector<double> times{0.0, 0.2, 0.4, 0.6, 0.8};
  const CDReport rep = mcp_variant(m.space, to_probability(m.space, rho), m.origin, m.K, N, times,
                                   c.get_int("params.subsamples", 4), tol);
  r.assertions.push_back(at_least("min_relative_slack", rep.min_relative_slack, -tol));
  r.assertions.push_back({"mcp", rep.pass, rep.min_relative_slack, -tol, ""});
  for (const CDSeries& ser : rep.series) r.plots.push_back({"slack", "t", "relative slack", rep.times, ser.relative_slack});
  r.details = {{"model", m.model}, {"K", m.K}, {"N", N}, {"min_relative_slack", rep.min_relative_slack}};
  return r;
}

ExperimentResult bishop_gromov(const Config& c) {
  ExperimentResult r;
  Config local = c;
  if (!local.has("space.spacing")) local.set("space.spacing", "0.01");
  const ModelSpace m = model_space(local, "sphere");
  const double N = c.get_double("params.N", 2.0);
  const double tol = c.get_double("params.tolerance", 0.03);
  const double R = c.get_double("params.R", 0.9);
  // lattice point counts in small balls are off by O((spacing/r)^{4/3})
  std::vector<double> radii;
  for (double frac : {0.4, 0.55, 0.7, 0.85, 1.0}) radii.push_back(R * frac);
  const BishopGromovReport rep = bishop_gromov_check(m.space, m.origin, radii, R, m.K, N, tol);
  r.assertions.push_back(at_least("min_relative_slack", rep.min_relative_slack, -tol));
  r.plots.push_back({"measured", "r", "m(B_r)/m(B_R)", rep.radii, rep.measured});
  r.plots.push_back({"model", "r", "model ratio", rep.radii, rep.model});
  r.details = {{"model", m.model}, {"K", m.K}, {"N", N}, {"R", R}};
  return r;
}

ExperimentResult heatflow(const Config& c) {
  ExperimentResult r;
  const double s = c.get_double("space.spacing", 0.02);
  const FiniteMMS line = build_centered_grid(1, 1.0, s);
  const double tau = c.get_double("params.tau", 1e-3);
  const int steps = c.get_int("params.steps", 400);
  const double p = c.get_double("params.p", 2.0);
  const Eigen::MatrixXd& x = line.coords();
  ScalarField f0(line.size());
  for (int i = 0; i < line.size(); ++i) f0[i] = 0.05 + std::exp(-x(i, 0) * x(i, 0) / (2.0 * 0.15 * 0.15));
  f0 /= f0.dot(line.weights()) / line.total_mass();
  const FlowTrajectory tr = p == 2.0 ? heat_flow_p2(line, f0, tau, steps) : heat_flow_p(line, f0, p, tau, steps);
  const double m0 = f0.dot(line.weights());
  double drift = 0.0, excess = 0.0;
  std::vector<double> entropy;
  for (const ScalarField& f : tr.states) {
    drift = std::max(drift, std::abs(f.dot(line.weights()) - m0) / m0);
    excess = std::max({excess, f0.minCoeff() - f.minCoeff(), f.maxCoeff() - f0.maxCoeff()});
    entropy.push_back(m_inner(line, f, f) / 2.0);
  }
  r.assertions.push_back(at_most("mass_drift", drift, 1e-12));
  r.assertions.push_back(at_most("maximum_principle_excess", excess, 0.0));
  if (p == 2.0) {
    const ExtrapolatedDissipation ed = extrapolated_dissipation(line, f0, c.get_double("params.tau0", 1e-5), EntropyFunction::quadratic());
    r.assertions.push_back(at_most("extrapolated_dissipation", ed.relative_residual, 1e-6));
    const DissipationReport dr = entropy_dissipation_check(line, tr, EntropyFunction::quadratic());
    r.assertions.push_back(at_least("step_energy_slack", dr.min_step_slack, -1e-12));
  }
  const SpeedReport sp = wasserstein_speed_check(line, tr, c.get_int("params.window", 1));
  r.assertions.push_back(at_least("speed_relative_slack", sp.min_relative_slack, -0.02));
  r.plots.push_back({"quadratic_energy", "t", "int f^2/2", tr.times, entropy});
  std::vector<double> k(sp.slack.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = tr.times[i];
  r.plots.push_back({"speed_slack", "t", "relative slack", k, sp.slack});
  r.details = {{"p", p}, {"tau", tau}, {"steps", steps}, {"mass_drift", drift}, {"speed_min_slack", sp.min_relative_slack}};
  return r;
}

ExperimentResult brenier(const Config& c) {
  ExperimentResult r;
  const FiniteMMS line = build_centered_grid(1, 1.0, c.get_double("space.spacing", 0.02));
  const double shift = c.get_double("params.shift", 0.3);
  const Eigen::MatrixXd& x = line.coords();
  ScalarField a = ScalarField::Zero(line.size()), b = ScalarField::Zero(line.size());
  for (int i = 0; i < line.size(); ++i) {
    if (x(i, 0) >= -0.6 && x(i, 0) <= -0.2) a[i] = 1.0;
    if (x(i, 0) >= -0.6 + shift && x(i, 0) <= -0.2 + shift) b[i] = 1.0;
  }
  const ProbabilityVector mu = to_probability(line, a), nu = to_probability(line, b);
  const BrenierReport br = metric_brenier_check(line, mu, nu);
  const KantorovichPotential k = kantorovich_potential(line, mu, nu);
  r.assertions.push_back(at_most("brenier_relative_residual", br.relative_residual, 0.05));
  r.assertions.push_back(at_most("duality_gap", std::abs(k.gap), 1e-9));
  r.assertions.push_back(at_most("w2_vs_shift", std::abs(br.w2 - shift), 0.03 * shift));
  std::vector<double> xs(x.col(0).data(), x.col(0).data() + x.rows());
  std::vector<double> phi(line.size());
  for (int i = 0; i < line.size(); ++i) phi[i] = std::isfinite(k.phi[i]) ? k.phi[i] : std::nan("");
  r.plots.push_back({"potential", "x", "phi", xs, phi});
  r.details = {{"w2", br.w2}, {"relative_residual", br.relative_residual}, {"gap", k.gap}};
  return r;
}

ExperimentResult busemann_experiment(const Config& c) {
  ExperimentResult r;
  const FiniteMMS space = build_centered_grid(2, c.get_double("space.half_width", 5.0), c.get_double("space.spacing", 0.1));
  std::vector<double> ts;
  for (int k = 1; k <= 12; ++k) ts.push_back(std::pow(10.0, k));
  std::vector<ScalarField> bumps;
  const double hw = c.get_double("space.half_width", 5.0);
  for (double cx : {-0.5, 0.0, 0.5})
    for (double cy : {-0.5, 0.5})
      bumps.push_back(SmoothField::bump(Eigen::Vector2d(cx * hw, cy * hw), 0.2 * hw).sample(space));
  const BusemannReport rep = busemann(space, Eigen::Vector2d::Zero(), Eigen::Vector2d(1.0, 0.0), ts, bumps);
  r.assertions.push_back(at_most("linear_deviation", rep.linear_deviation, 1e-8));
  r.assertions.push_back(at_most("cc_residual", rep.cc_residual, 1e-6));
  r.assertions.push_back(at_most("max_upper_endpoint", rep.max_upper_endpoint, 1e-8));
  r.assertions.push_back(at_least("monotonicity_min_slack", rep.monotonicity_min_slack, -1e-12));
  r.assertions.push_back(at_most("max_slope", rep.max_slope, 1.0 + 1e-12));
  std::vector<double> tl(rep.t_list), sup;
  for (const ScalarField& b : rep.bt) sup.push_back((b - rep.b).cwiseAbs().maxCoeff());
  r.plots.push_back({"convergence", "t", "|b_t - b|_inf", tl, sup});
  r.details = {{"stabilization", rep.stabilization}, {"desc_slope_deviation", rep.desc_slope_deviation}};
  return r;
}

ExperimentResult bochner(const Config& c) {
  ExperimentResult r;
  std::mt19937_64 rng(c.require_seed());
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int samples = c.get_int("params.samples", 100);
  double k2 = std::numeric_limits<double>::infinity(), c4 = k2;
  const FiniteMMS g2 = build_complete_graph(2), g4 = build_cycle_graph(4);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd f2(2), f4(4);
    for (int i = 0; i < 2; ++i) f2[i] = unif(rng);
    for (int i = 0; i < 4; ++i) f4[i] = unif(rng);
    k2 = std::min(k2, bochner_diagnostic(g2, f2, 0.0).min_slack);
    c4 = std::min(c4, bochner_diagnostic(g4, f4, 0.0).min_slack);
  }
  r.assertions.push_back(at_least("complete_graph_2_min_gamma2", k2, 0.0));
  r.assertions.push_back(at_least("cycle_graph_4_min_gamma2", c4, 0.0));
  // grid value is reported only
  const FiniteMMS grid = build_euclidean_grid({20, 20}, 0.05);
  const ScalarField f = random_field(grid, rng);
  const BochnerReport gb = bochner_diagnostic(grid, f, 0.0);
  r.details = {{"samples", samples}, {"grid_min_slack", gb.min_slack}, {"grid_argmin", gb.argmin}};
  return r;
}

ExperimentResult normed_oracle(const Config& c) {
  using HP = boost::multiprecision::cpp_dec_float_50;
  ExperimentResult r;
  std::mt19937_64 rng(c.require_seed());
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::uniform_int_distribution<int> small(-2, 2);
  const int samples = c.get_int("params.samples", 1000);
  const std::vector<double> exps{1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()};
  std::vector<double> eps;
  for (int k = 8; k <= 128; k += 8) eps.push_back(std::ldexp(1.0, -k));
  std::vector<double> per_norm(exps.size(), 0.0);
  for (int s = 0; s < samples; ++s) {
    const std::size_t which = s % exps.size();
    const int dim = 2 + (s / 4) % 2;
    const NormSpec norm = NormSpec::p_norm(exps[which], dim);
    Eigen::VectorXd df(dim), dg(dim);
    for (int i = 0; i < dim; ++i) {
      df[i] = unif(rng);
      dg[i] = s % 3 == 0 ? small(rng) : unif(rng);
    }
    if (dg.cwiseAbs().maxCoeff() == 0.0) dg[0] = 1.0;
    for (Side side : {Side::plus, Side::minus}) {
      const double a = d_pm_via_gradient_set(norm, df, dg, side);
      const HP b = d_pm_via_difference_quotient(norm, df.cast<HP>(), dg.cast<HP>(), side, eps).value;
      per_norm[which] = std::max(per_norm[which], std::abs(a - static_cast<double>(b)));
    }
  }
  const char* names[] = {"l1", "l2", "l4", "linf"};
  for (std::size_t k = 0; k < exps.size(); ++k) {
    r.assertions.push_back(at_most(std::string(names[k]) + "_max_difference", per_norm[k], 1e-9));
    r.details[names[k]] = per_norm[k];
  }
  r.details["samples"] = samples;
  return r;
}

ExperimentResult selftest(const Config&) {
  ExperimentResult r;
  const FiniteMMS grid = build_centered_grid(2, 0.5, 0.05);
  const ScalarField one = ScalarField::Ones(grid.size());
  r.assertions.push_back(at_most("constant_slope", local_slope(grid, one).cwiseAbs().maxCoeff(), 0.0));
  r.assertions.push_back(at_most("constant_heat_step", (heat_step_p2(grid, one, 0.1) - one).cwiseAbs().maxCoeff(), 1e-12));
  r.assertions.push_back(at_most("constant_generator", (graph_laplacian(grid) * one).cwiseAbs().maxCoeff(), 1e-12));
  const ScalarField f = SmoothField::bump(Eigen::Vector2d::Zero(), 0.3).sample(grid);
  const LaplacianInterval iv = laplacian_interval(grid, one, f);
  r.assertions.push_back(at_most("laplacian_of_constant", std::max(std::abs(iv.lower), std::abs(iv.upper)), 1e-12));
  r.assertions.push_back(at_most("tau_flat", std::abs(tau(0.0, 3.0, 0.3, 1.0) - 0.3), 1e-15));
  r.assertions.push_back(at_most("sigma_flat", std::abs(sigma(0.0, 3.0, 0.3, 1.0) - 0.3), 1e-15));
  r.assertions.push_back(at_most("tau_tilde_flat", std::abs(tau_tilde(0.0, 3.0, 1.0) - 1.0), 1e-15));
  const ProbabilityVector mu = to_probability(grid, f);
  r.assertions.push_back(at_most("self_distance", wq_distance(grid, mu, mu, 2.0).cost, 1e-15));
  const ScalarField g = SmoothField::linear(Eigen::Vector2d(1.0, -0.5)).sample(grid);
  const DirectionalField zero = d_pm_exact(grid, ScalarField::Zero(grid.size()), g);
  r.assertions.push_back(at_most("directional_of_zero",
                                 std::max(zero.dplus.cwiseAbs().maxCoeff(), zero.dminus.cwiseAbs().maxCoeff()), 0.0));
  const FiniteMMS k2 = build_complete_graph(2);
  const ScalarField step = heat_step_p2(k2, Eigen::Vector2d(1.0, 0.0), 1.0);
  r.assertions.push_back(at_most("two_node_heat_step", (step - Eigen::Vector2d(2.0 / 3.0, 1.0 / 3.0)).cwiseAbs().maxCoeff(), 1e-15));
  return r;
}

}  // namespace

const std::map<std::string, ExperimentInfo>& registry() {
  static const std::map<std::string, ExperimentInfo> r{
      {"bishop-gromov", {"ball volume ratios against the model ratio", false, bishop_gromov}},
      {"bochner", {"Gamma_2 >= 0 on K_2 and C_4, grid value reported", true, bochner}},
      {"brenier", {"metric Brenier identity for a 1-D translation", false, brenier}},
      {"busemann", {"Busemann function of a ray on a Euclidean grid", false, busemann_experiment}},
      {"cd-check", {"CD(0,N') along flat displacement interpolations", false, cd_check_experiment}},
      {"comparison", {"Laplacian comparison chain (a) <= (b) <= (c) and distance bounds", false, comparison}},
      {"heatflow", {"gradient flow of the Cheeger energy on a 1-D grid", false, heatflow}},
      {"mcp", {"measure contraction toward a point", false, mcp}},
      {"normed-oracle", {"gradient set against difference quotients on flat normed spaces", true, normed_oracle}},
      {"selftest", {"trivial identities across modules", false, selftest}},
  };
  return r;
}

std::vector<std::string> list_experiments() {
  std::vector<std::string> out;
  for (const auto& [name, info] : registry()) out.push_back(name);
  return out;
}

ExperimentResult run_experiment(const std::string& name, const Config& config) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown experiment: " + name);
  if (it->second.randomized) config.require_seed();
  ExperimentResult r;
  try {
    r = it->second.run(config);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  r.experiment = name;
  return r;
}

nlohmann::ordered_json report_json(const Config& config, const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["tool"] = "mms";
  j["version"] = MMS_VERSION;
  j["experiment"] = result.experiment;
  j["config_hash"] = config.hash();
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.values()) cfg[k] = v;
  j["config"] = cfg;
  const auto seed = config.seed();
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["pass"] = result.pass();
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& a : result.assertions)
    list.push_back({{"name", a.name}, {"pass", a.pass}, {"value", a.value}, {"threshold", a.threshold}, {"detail", a.detail}});
  j["assertions"] = list;
  j["details"] = result.details;
  nlohmann::ordered_json plots = nlohmann::ordered_json::array();
  for (const auto& p : result.plots) plots.push_back("plotdata/" + p.name + ".dat");
  j["plots"] = plots;
  return j;
}

void write_artifacts(const std::string& dir, const Config& config, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "plotdata");
  {
    std::ofstream out(fs::path(dir) / "report.json");
    out << report_json(config, result).dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(dir) / "residuals.csv");
    out << "assertion,value,threshold,pass\n";
    for (const auto& a : result.assertions)
      out << a.name << "," << format_double(a.value) << "," << format_double(a.threshold) << "," << (a.pass ? 1 : 0) << "\n";
  }
  for (const auto& p : result.plots) {
    std::ofstream out(fs::path(dir) / "plotdata" / (p.name + ".dat"));
    out << "# " << p.x_label << " " << p.y_label << "\n";
    for (std::size_t i = 0; i < p.x.size() && i < p.y.size(); ++i)
      out << format_double(p.x[i]) << " " << format_double(p.y[i]) << "\n";
  }
  if (!fs::exists(dir)) throw Error("could not write artifacts to " + dir);
}

}  // namespace mms::experiments
