#include "innerlab/io.hpp"

#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace innerlab {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

double number_field(const json& obj, const char* key, const char* what) {
  if (!obj.is_object()) throw ParseError(std::string(what) + " entries must be objects");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string(what) + " entry lacks \"" + key + "\"");
  if (!it->is_number()) throw ParseError(std::string(what) + " field \"" + key + "\" must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + " field \"" + key + "\" must be finite");
  return v;
}

int int_field(const json& obj, const char* key, const char* what, int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) throw ParseError(std::string(what) + " field \"" + key + "\" must be an integer");
  return it->get<int>();
}

const json& array_field(const json& doc, const char* key) {
  static const json empty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) return empty;
  if (!it->is_array()) throw ParseError(std::string("\"") + key + "\" must be an array");
  return *it;
}

std::vector<Zero> parse_points(const json& arr, const char* what) {
  std::vector<Zero> out;
  for (const auto& e : arr) {
    const double re = number_field(e, "re", what);
    const double im = number_field(e, "im", what);
    const int mult = int_field(e, "mult", what, 1);
    if (mult < 1) throw ParseError(std::string(what) + " multiplicity must be >= 1");
    out.push_back({Complex(re, im), mult});
  }
  return out;
}

json points_json(const std::vector<Zero>& pts) {
  json arr = json::array();
  for (const auto& z : pts)
    arr.push_back({{"re", z.point.real()}, {"im", z.point.imag()}, {"mult", z.mult}});
  return arr;
}

template <class F>
auto rethrow_domain(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

CircleMeasure parse_measure(const std::string& json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw ParseError("measure description must be a JSON object");
  std::vector<Atom> atoms;
  for (const auto& a : array_field(doc, "atoms")) {
    const double angle = number_field(a, "angle", "atom");
    const double mass = number_field(a, "mass", "atom");
    if (mass < 0.0) throw ParseError("atom mass must be non-negative");
    atoms.push_back({angle, mass});
  }
  std::vector<CantorPart> parts;
  for (const auto& c : array_field(doc, "cantor")) {
    const double start = number_field(c, "arc_start", "cantor");
    const double length = number_field(c, "arc_length", "cantor");
    const double ratio = number_field(c, "gap_ratio", "cantor");
    const double mass = number_field(c, "mass", "cantor");
    const int depth = int_field(c, "depth", "cantor", CircleMeasure::kDefaultCantorDepth);
    if (mass < 0.0) throw ParseError("cantor mass must be non-negative");
    parts.push_back(rethrow_domain([&] { return CantorPart{Interval(start, length), ratio, depth, mass}; }));
  }
  return rethrow_domain([&] { return CircleMeasure(std::move(atoms), std::move(parts)); });
}

BlaschkeProduct parse_blaschke(const std::string& json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw ParseError("Blaschke description must be a JSON object");
  double angle = 0.0;
  if (doc.contains("rotation_angle")) angle = number_field(doc, "rotation_angle", "Blaschke");
  auto zeros = parse_points(array_field(doc, "zeros"), "zero");
  return rethrow_domain([&] { return BlaschkeProduct(std::move(zeros), std::polar(1.0, angle)); });
}

CriticalSet parse_critical_set(const std::string& json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw ParseError("critical set description must be a JSON object");
  const char* key = doc.contains("points") ? "points" : "zeros";
  auto pts = parse_points(array_field(doc, key), "critical point");
  return rethrow_domain([&] { return CriticalSet::make(std::move(pts)); });
}

std::string measure_to_json(const CircleMeasure& mu) {
  json doc;
  doc["atoms"] = json::array();
  for (const auto& a : mu.atoms()) doc["atoms"].push_back({{"angle", a.angle}, {"mass", a.mass}});
  doc["cantor"] = json::array();
  for (const auto& c : mu.cantor_parts())
    doc["cantor"].push_back({{"arc_start", c.base.start},
                             {"arc_length", c.base.length},
                             {"gap_ratio", c.gap_ratio},
                             {"depth", c.depth},
                             {"mass", c.mass}});
  return doc.dump(2) + "\n";
}

std::string blaschke_to_json(const BlaschkeProduct& b) {
  json doc;
  doc["rotation_angle"] = std::arg(b.rotation());
  doc["zeros"] = points_json(b.zeros());
  return doc.dump(2) + "\n";
}

std::string critical_set_to_json(const CriticalSet& c) {
  json doc;
  doc["points"] = points_json(c.points);
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

namespace {

template <class T, class F>
T load_with_context(const std::filesystem::path& path, F&& parse) {
  const std::string text = read_text_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace

CircleMeasure load_measure(const std::filesystem::path& path) {
  return load_with_context<CircleMeasure>(path, parse_measure);
}

BlaschkeProduct load_blaschke(const std::filesystem::path& path) {
  return load_with_context<BlaschkeProduct>(path, parse_blaschke);
}

CriticalSet load_critical_set(const std::filesystem::path& path) {
  return load_with_context<CriticalSet>(path, parse_critical_set);
}

std::string grid_to_csv(const MetricGrid& g) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "outer_radius,radial_count,angular_count\n";
  out << g.outer_radius() << ',' << g.radial_count() << ',' << g.angular_count() << '\n';
  out << "r,theta,u\n";
  for (int i = 0; i <= g.radial_count(); ++i)
    for (int k = 0; k < g.angular_count(); ++k)
      out << g.r_node(i) << ',' << g.theta(k) << ',' << g.u(i, k) << '\n';
  return out.str();
}

MetricGrid grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&]() {
    if (!std::getline(in, line)) throw ParseError("grid dump ended early");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  if (next_line() != "outer_radius,radial_count,angular_count")
    throw ParseError("grid dump header must be outer_radius,radial_count,angular_count");
  double r_outer = 0.0;
  int n = 0;
  int m = 0;
  {
    std::istringstream h(next_line());
    char c1 = 0;
    char c2 = 0;
    if (!(h >> r_outer >> c1 >> n >> c2 >> m) || c1 != ',' || c2 != ',')
      throw ParseError("grid dump dimensions line is malformed");
  }
  if (!(r_outer > 0.0 && r_outer < 1.0) || n < 2 || m < 1)
    throw ParseError("grid dump dimensions out of range");
  if (next_line() != "r,theta,u") throw ParseError("grid dump lacks the r,theta,u column header");
  const MetricGrid shape(r_outer, n, m);
  Eigen::MatrixXd w(n + 1, m);
  for (int i = 0; i <= n; ++i) {
    for (int k = 0; k < m; ++k) {
      std::istringstream row(next_line());
      double r = 0.0;
      double th = 0.0;
      double u = 0.0;
      char c1 = 0;
      char c2 = 0;
      if (!(row >> r >> c1 >> th >> c2 >> u) || c1 != ',' || c2 != ',')
        throw ParseError("grid dump row " + std::to_string(i * m + k) + " is malformed");
      if (std::abs(r - shape.r_node(i)) > 1e-9 || std::abs(th - shape.theta(k)) > 1e-9)
        throw ParseError("grid dump row " + std::to_string(i * m + k) + " is off the grid");
      w(i, k) = u - log_poincare(shape.point(i, k));
    }
  }
  return MetricGrid::from_relative(r_outer, std::move(w));
}

}  // namespace innerlab
