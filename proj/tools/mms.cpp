// mms: build spaces, check metrics and run experiment suites.
// Exit codes: 0 success, 1 assertion failure, 2 usage or configuration error.

#include "mms/experiments.hpp"
#include "mms/space.hpp"
#include "mms/space_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <sstream>

namespace ex = mms::experiments;

namespace {

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || v < 2) throw ex::ConfigError("grid must look like 64x64 with sizes >= 2: " + text);
    dims.push_back(v);
  }
  if (dims.empty()) throw ex::ConfigError("empty grid argument");
  return dims;
}

struct RunOptions {
  std::vector<std::string> names;
  std::string config_file;
  std::string out = "mms-out";
  int jobs = 1;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;  // config key -> value given on the command line
};

int run(const RunOptions& o) {
  ex::Config config = o.config_file.empty() ? ex::Config() : ex::Config::from_file(o.config_file);
  for (const auto& [k, v] : o.flags) config.set(k, v);
  for (const std::string& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ex::ConfigError("--set expects key=value: " + s);
    config.set(s.substr(0, eq), s.substr(eq + 1));
  }
  const std::string out_root = config.get("output.dir", o.out);
  for (const std::string& n : o.names)
    if (!ex::registry().count(n)) throw ex::ConfigError("unknown experiment: " + n + " (see mms list)");

  struct Outcome {
    std::string name;
    bool pass = false;
    int passed = 0, total = 0;
    std::string dir;
    std::string error;
    bool config_error = false;
  };
  auto job = [&](const std::string& name) {
    Outcome res{name};
    res.dir = o.names.size() == 1 ? out_root : (std::filesystem::path(out_root) / name).string();
    try {
      const ex::ExperimentResult r = ex::run_experiment(name, config);
      ex::write_artifacts(res.dir, config, r);
      res.pass = r.pass();
      res.total = static_cast<int>(r.assertions.size());
      res.passed = static_cast<int>(std::count_if(r.assertions.begin(), r.assertions.end(), [](auto& a) { return a.pass; }));
    } catch (const ex::ConfigError& e) {
      res.error = e.what();
      res.config_error = true;
    } catch (const std::exception& e) {
      res.error = e.what();
    }
    return res;
  };

  std::vector<Outcome> outcomes;
  const std::size_t width = static_cast<std::size_t>(std::max(1, o.jobs));
  for (std::size_t start = 0; start < o.names.size(); start += width) {
    std::vector<std::future<Outcome>> batch;
    for (std::size_t k = start; k < std::min(o.names.size(), start + width); ++k)
      batch.push_back(std::async(std::launch::async, job, o.names[k]));
    for (auto& f : batch) outcomes.push_back(f.get());
  }

  int code = 0;
  for (const Outcome& res : outcomes) {
    if (!res.error.empty()) {
      std::cerr << "mms: " << res.name << ": " << res.error << "\n";
      code = std::max(code, res.config_error ? 2 : 1);
      continue;
    }
    std::printf("%s: %s (%d/%d assertions) -> %s\n", res.name.c_str(), res.pass ? "PASS" : "FAIL", res.passed, res.total,
                res.dir.c_str());
    if (!res.pass) code = std::max(code, 1);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calculus, Laplacians and curvature checks on finite metric measure spaces"};
  app.set_version_flag("--version", std::string(MMS_VERSION));
  app.require_subcommand(1);

  // list
  auto* list = app.add_subcommand("list", "List experiments in alphabetical order");

  // run
  RunOptions ro;
  auto* runc = app.add_subcommand("run", "Run one or more experiments");
  runc->add_option("experiment", ro.names, "Experiment names")->required();
  runc->add_option("--config", ro.config_file, "Config file (key = value with [sections])");
  runc->add_option("--out", ro.out, "Output directory")->capture_default_str();
  runc->add_option("--jobs", ro.jobs, "Experiments run in parallel")->check(CLI::PositiveNumber);
  runc->add_option("--set", ro.sets, "Override any config key: section.key=value");
  const std::vector<std::pair<std::string, std::string>> shortcuts{
      {"--model", "space.model"}, {"--spacing", "space.spacing"}, {"--norm", "space.norm"},
      {"--K", "params.K"},        {"--N", "params.N"},             {"--p", "params.p"},
      {"--q", "params.q"},        {"--tau", "params.tau"},         {"--steps", "params.steps"},
      {"--seed", "params.seed"},  {"--tolerance", "params.tolerance"}};
  std::map<std::string, std::string> shortcut_values;
  for (const auto& [flag, key] : shortcuts)
    runc->add_option(flag, shortcut_values[key], "Sets " + key);

  // space build
  auto* space = app.add_subcommand("space", "Space files");
  space->require_subcommand(1);
  auto* build = space->add_subcommand("build", "Build a space and write it to a file");
  std::string grid, out_file, norm = "p:2";
  double spacing = 0.0, sphere_mesh = 0.0, disk_radius = 0.0;
  int cycle = 0;
  build->add_option("--grid", grid, "Euclidean lattice, e.g. 64x64");
  build->add_option("--spacing", spacing, "Lattice spacing (default 1/(n-1) for the largest side)");
  build->add_option("--norm", norm, "Norm of the lattice: p:2, p:1, p:inf, poly:(x,y);...")->capture_default_str();
  build->add_option("--sphere", sphere_mesh, "Round 2-sphere with this mesh size");
  build->add_option("--hyperbolic", disk_radius, "Poincare disk of this coordinate radius (uses --spacing)");
  build->add_option("--cycle", cycle, "Cycle graph with this many vertices");
  build->add_option("--out", out_file, "Output file")->required();

  // check metric
  auto* check = app.add_subcommand("check", "Validate a space file");
  check->require_subcommand(1);
  auto* metric = check->add_subcommand("metric", "Check metric axioms and weights");
  std::string check_file;
  metric->add_option("file", check_file, "Space file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& [name, info] : ex::registry()) std::printf("%-14s %s\n", name.c_str(), info.summary.c_str());
      return 0;
    }
    if (runc->parsed()) {
      for (const auto& [flag, key] : shortcuts)
        if (runc->count(flag) > 0) ro.flags[key] = shortcut_values[key];
      return run(ro);
    }
    if (build->parsed()) {
      const int chosen = !grid.empty() + (sphere_mesh > 0.0) + (disk_radius > 0.0) + (cycle > 0);
      if (chosen != 1) throw ex::ConfigError("choose exactly one of --grid, --sphere, --hyperbolic, --cycle");
      std::optional<mms::FiniteMMS> s;
      if (!grid.empty()) {
        const std::vector<int> dims = parse_grid(grid);
        const double h = spacing > 0.0 ? spacing : 1.0 / (*std::max_element(dims.begin(), dims.end()) - 1);
        s = mms::build_euclidean_grid(dims, h, mms::NormSpec::parse(norm, static_cast<int>(dims.size())));
      } else if (sphere_mesh > 0.0) {
        s = mms::build_sphere(2, sphere_mesh);
      } else if (disk_radius > 0.0) {
        s = mms::build_hyperbolic_disk(disk_radius, spacing > 0.0 ? spacing : 0.02);
      } else {
        s = mms::build_cycle_graph(cycle);
      }
      mms::save_space(out_file, *s, s->size() <= 2000);
      std::printf("wrote %d points to %s\n", s->size(), out_file.c_str());
      return 0;
    }
    if (metric->parsed()) {
      const mms::FiniteMMS s = mms::load_space(check_file);
      const mms::ValidationReport r = mms::validate_metric(s);
      std::printf("points %d, triangle violation %g%s, asymmetry %g, diagonal %g, min weight %g, isolated %d\n", s.size(),
                  r.max_triangle_violation, r.sampled ? " (sampled)" : "", r.max_asymmetry, r.max_diagonal, r.min_weight,
                  r.isolated_points);
      for (const auto& f : r.failures) std::fprintf(stderr, "mms: %s\n", f.c_str());
      return r.pass() ? 0 : 1;
    }
  } catch (const ex::ConfigError& e) {
    std::cerr << "mms: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mms: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mms: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
