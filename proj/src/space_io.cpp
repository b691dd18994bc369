#include "mms/space_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mms {

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view token) {
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw Error("malformed number '" + std::string(token) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string metric_kind(const FiniteMMS& s) {
  if (std::holds_alternative<DenseMetric>(s.metric())) return "dense";
  switch (std::get<CoordinateMetric>(s.metric()).kind) {
    case CoordinateMetric::Kind::normed:
      return "normed";
    case CoordinateMetric::Kind::sphere:
      return "sphere";
    case CoordinateMetric::Kind::hyperbolic:
      return "hyperbolic";
  }
  return "dense";
}

std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::euclidean:
      return "euclidean";
    case ModelKind::sphere:
      return "sphere";
    case ModelKind::hyperbolic:
      return "hyperbolic";
    case ModelKind::normed:
      return "normed";
    case ModelKind::none:
      break;
  }
  return "none";
}

ModelKind parse_model(const std::string& s) {
  if (s == "euclidean") return ModelKind::euclidean;
  if (s == "sphere") return ModelKind::sphere;
  if (s == "hyperbolic") return ModelKind::hyperbolic;
  if (s == "normed") return ModelKind::normed;
  if (s == "none") return ModelKind::none;
  throw Error("unknown model '" + s + "'");
}

}  // namespace

void write_space(std::ostream& out, const FiniteMMS& space, bool include_dist) {
  const int n = space.size();
  out << "[space]\n";
  out << "n = " << n << "\n";
  out << "h = " << format_double(space.h()) << "\n";
  out << "metric = " << metric_kind(space) << "\n";
  out << "model = " << model_name(space.model().kind) << "\n";
  out << "K = " << format_double(space.model().K) << "\n";
  out << "N = " << format_double(space.model().N) << "\n";
  out << "gradient = " << (space.gradient_model() == GradientModel::carre_du_champ ? "carre_du_champ" : "metric_slope")
      << "\n";
  if (space.has_coords()) {
    const auto& cm = std::get<CoordinateMetric>(space.metric());
    out << "dim = " << cm.coords.cols() << "\n";
    if (cm.kind == CoordinateMetric::Kind::normed) out << "norm = " << cm.norm.to_string() << "\n";
    out << "\n[points]\n";
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < cm.coords.cols(); ++a) out << (a ? " " : "") << format_double(cm.coords(i, a));
      out << "\n";
    }
  }
  out << "\n[weights]\n";
  for (int i = 0; i < n; ++i) out << format_double(space.weight(i)) << "\n";
  const bool dense = std::holds_alternative<DenseMetric>(space.metric());
  if (dense || include_dist) {
    out << "\n[dist]\n";
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd row = space.distance_row(i);
      for (int j = 0; j < n; ++j) out << (j ? " " : "") << format_double(row[j]);
      out << "\n";
    }
  }
  if (space.has_conductances()) {
    out << "\n[edges]\n";
    const SparseMatrix& w = space.conductances();
    for (int k = 0; k < w.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(w, k); it; ++it)
        if (it.row() < it.col()) out << it.row() << " " << it.col() << " " << format_double(it.value()) << "\n";
  }
  if (!space.boundary().empty()) {
    out << "\n[boundary]\n";
    for (int i = 0; i < n; ++i)
      if (space.boundary()[i]) out << i << "\n";
  }
}

FiniteMMS read_space(std::istream& in) {
  std::map<std::string, std::string> header;
  std::vector<std::vector<double>> points, dist;
  std::vector<double> weights;
  std::vector<Eigen::Triplet<double>> edges;
  std::vector<int> boundary;
  std::string section, line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto tokens = split(line);
    if (tokens.empty()) continue;
    if (tokens[0].front() == '[') {
      section = std::string(tokens[0]);
      continue;
    }
    try {
      if (section == "[space]") {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("expected key = value");
        const auto key = split(std::string_view(line).substr(0, eq));
        const auto val = split(std::string_view(line).substr(eq + 1));
        if (key.size() != 1 || val.size() != 1) throw Error("expected key = value");
        header[std::string(key[0])] = std::string(val[0]);
      } else if (section == "[points]" || section == "[dist]") {
        std::vector<double> row;
        for (auto t : tokens) row.push_back(parse_double(t));
        (section == "[points]" ? points : dist).push_back(std::move(row));
      } else if (section == "[weights]") {
        if (tokens.size() != 1) throw Error("one weight per line expected");
        weights.push_back(parse_double(tokens[0]));
      } else if (section == "[edges]") {
        if (tokens.size() != 3) throw Error("edge lines are 'i j w'");
        const int i = static_cast<int>(parse_double(tokens[0]));
        const int j = static_cast<int>(parse_double(tokens[1]));
        const double w = parse_double(tokens[2]);
        edges.emplace_back(i, j, w);
        edges.emplace_back(j, i, w);
      } else if (section == "[boundary]") {
        for (auto t : tokens) boundary.push_back(static_cast<int>(parse_double(t)));
      } else {
        throw Error("content outside a known section");
      }
    } catch (const Error& e) {
      throw Error("space file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) throw Error("space file lacks '" + key + "' in [space]");
    return it->second;
  };
  const int n = std::stoi(need("n"));
  const double h = parse_double(need("h"));
  const std::string kind = need("metric");
  if (static_cast<int>(weights.size()) != n) throw Error("space file: weight count differs from n");
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = weights[i];

  FiniteMMS::Options opt;
  opt.model.kind = header.count("model") ? parse_model(header["model"]) : ModelKind::none;
  if (header.count("K")) opt.model.K = parse_double(header["K"]);
  if (header.count("N")) opt.model.N = parse_double(header["N"]);
  if (header.count("gradient"))
    opt.gradient_model = header["gradient"] == "carre_du_champ" ? GradientModel::carre_du_champ : GradientModel::metric_slope;
  if (!edges.empty()) {
    opt.conductances.resize(n, n);
    opt.conductances.setFromTriplets(edges.begin(), edges.end());
  }
  if (!boundary.empty()) {
    opt.boundary.assign(n, 0);
    for (int b : boundary) {
      if (b < 0 || b >= n) throw Error("space file: boundary index out of range");
      opt.boundary[b] = 1;
    }
  }

  Metric metric;
  if (kind == "dense") {
    if (static_cast<int>(dist.size()) != n) throw Error("space file: [dist] needs n rows");
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(dist[i].size()) != n) throw Error("space file: [dist] rows need n entries");
      for (int j = 0; j < n; ++j) d(i, j) = dist[i][j];
    }
    metric = DenseMetric{d};
  } else {
    const int dim = std::stoi(need("dim"));
    if (static_cast<int>(points.size()) != n) throw Error("space file: [points] needs n rows");
    CoordinateMetric cm;
    cm.coords.resize(n, dim);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(points[i].size()) != dim) throw Error("space file: point rows need dim entries");
      for (int a = 0; a < dim; ++a) cm.coords(i, a) = points[i][a];
    }
    if (kind == "normed") {
      cm.kind = CoordinateMetric::Kind::normed;
      cm.norm = NormSpec::parse(need("norm"), dim);
      opt.model.norm = cm.norm;
    } else if (kind == "sphere") {
      cm.kind = CoordinateMetric::Kind::sphere;
    } else if (kind == "hyperbolic") {
      cm.kind = CoordinateMetric::Kind::hyperbolic;
    } else {
      throw Error("space file: unknown metric kind '" + kind + "'");
    }
    metric = std::move(cm);
  }
  return FiniteMMS(std::move(metric), w, h, std::move(opt));
}

void save_space(const std::string& path, const FiniteMMS& space, bool include_dist) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_space(out, space, include_dist);
  if (!out) throw Error("write to '" + path + "' failed");
}

FiniteMMS load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_space(in);
}

void write_field(std::ostream& out, const Eigen::VectorXd& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) out << format_double(values[i]) << "\n";
}

Eigen::VectorXd read_field(std::istream& in) {
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    const auto tokens = split(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 1) throw Error("field files hold one value per line");
    v.push_back(parse_double(tokens[0]));
  }
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void write_coo(std::ostream& out, const SparseMatrix& op) {
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(op, k); it; ++it)
      out << it.row() << " " << it.col() << " " << format_double(it.value()) << "\n";
}

}  // namespace mms
