#include "innerlab/report.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "innerlab/common.hpp"
#include "innerlab/io.hpp"

namespace innerlab {

using ojson = nlohmann::ordered_json;

void Table::add_row(std::vector<TableValue> row) {
  if (row.size() != columns.size())
    throw Error("table '" + name + "' row has " + std::to_string(row.size()) + " cells, expected " +
                std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

void Report::set_config(std::vector<std::pair<std::string, std::string>> config) {
  config_ = std::move(config);
  provenance_.config_hash = config_hash(config_);
}

bool Report::check(std::string id, double measured, std::string comparison, double tolerance,
                   std::string detail) {
  bool pass = false;
  if (comparison == "<=") {
    pass = measured <= tolerance;
  } else if (comparison == "<") {
    pass = measured < tolerance;
  } else if (comparison == ">=") {
    pass = measured >= tolerance;
  } else if (comparison == ">") {
    pass = measured > tolerance;
  } else {
    throw Error("unknown comparison '" + comparison + "'");
  }
  checks_.push_back({std::move(id), measured, tolerance, std::move(comparison), pass,
                     std::move(detail)});
  return pass;
}

void Report::add_check(Check c) { checks_.push_back(std::move(c)); }

Table& Report::table(const std::string& name, std::vector<std::string> columns) {
  tables_.push_back(Table{name, std::move(columns), {}});
  return tables_.back();
}

bool Report::all_pass() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

std::string config_hash(const std::vector<std::pair<std::string, std::string>>& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : config) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

ojson number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

ojson value_json(const TableValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) return number_json(*d);
  return std::get<std::string>(v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string value_csv(const TableValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  return csv_escape(std::get<std::string>(v));
}

}  // namespace

std::string to_json(const Report& r) {
  ojson doc;
  doc["schema"] = kReportSchema;
  doc["command"] = r.command();
  ojson cfg = ojson::object();
  for (const auto& [k, v] : r.config()) cfg[k] = v;
  doc["config"] = cfg;
  ojson checks = ojson::array();
  for (const auto& c : r.checks()) {
    ojson e;
    e["id"] = c.id;
    e["pass"] = c.pass;
    e["measured"] = number_json(c.measured);
    e["comparison"] = c.comparison;
    e["tolerance"] = number_json(c.tolerance);
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(e);
  }
  doc["checks"] = checks;
  doc["all_pass"] = r.all_pass();
  ojson tables = ojson::array();
  for (const auto& t : r.tables()) {
    ojson e;
    e["name"] = t.name;
    e["columns"] = t.columns;
    ojson rows = ojson::array();
    for (const auto& row : t.rows) {
      ojson jr = ojson::array();
      for (const auto& v : row) jr.push_back(value_json(v));
      rows.push_back(jr);
    }
    e["rows"] = rows;
    tables.push_back(e);
  }
  doc["tables"] = tables;
  doc["notes"] = r.notes();
  ojson prov;
  prov["version"] = r.provenance().version;
  prov["config_hash"] = r.provenance().config_hash;
  prov["seed"] = r.provenance().seed;
  doc["provenance"] = prov;
  return doc.dump(2) + "\n";
}

std::string to_csv(const Report& r) {
  std::ostringstream out;
  out << "# provenance: " << r.provenance().version << ", config_hash "
      << r.provenance().config_hash << ", seed " << r.provenance().seed << "\n";
  if (!r.checks().empty()) {
    out << "# table: checks\n";
    out << "id,pass,measured,comparison,tolerance,detail\n";
    for (const auto& c : r.checks())
      out << csv_escape(c.id) << ',' << (c.pass ? "true" : "false") << ','
          << format_number(c.measured) << ',' << csv_escape(c.comparison) << ','
          << format_number(c.tolerance) << ',' << csv_escape(c.detail) << '\n';
  }
  for (const auto& t : r.tables()) {
    out << "# table: " << t.name << '\n';
    for (std::size_t k = 0; k < t.columns.size(); ++k)
      out << (k ? "," : "") << csv_escape(t.columns[k]);
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << value_csv(row[k]);
      out << '\n';
    }
  }
  return out.str();
}

void emit(const Report& r, ReportFormat format, const std::filesystem::path& path) {
  write_text_file(path, format == ReportFormat::json ? to_json(r) : to_csv(r));
}

}  // namespace innerlab
