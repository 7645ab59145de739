#pragma once

// Machine-readable experiment reports. Serialization is deterministic: keys
// keep insertion order and doubles are printed in shortest round-trip form.

#include <cstdint>
#include <deque>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace innerlab {

inline constexpr const char* kVersionString = "innerlab 0.1.0";
inline constexpr const char* kReportSchema = "innerlab.report/1";

using TableValue = std::variant<std::int64_t, double, std::string>;

struct Check {
  std::string id;
  double measured = 0.0;
  double tolerance = 0.0;
  /// How measured is compared with tolerance, e.g. "<=" or ">=".
  std::string comparison = "<=";
  bool pass = false;
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<TableValue>> rows;

  /// Throws Error when the row length does not match the columns.
  void add_row(std::vector<TableValue> row);
};

struct Provenance {
  std::string version = kVersionString;
  std::string config_hash;  // 16 hex digits
  std::uint64_t seed = 0;
};

class Report {
 public:
  explicit Report(std::string command = "") : command_(std::move(command)) {}

  const std::string& command() const { return command_; }
  void set_config(std::vector<std::pair<std::string, std::string>> config);
  const std::vector<std::pair<std::string, std::string>>& config() const { return config_; }

  /// Adds a check and returns its verdict. `pass` is computed from the
  /// comparison: "<=", "<", ">=", ">".
  bool check(std::string id, double measured, std::string comparison, double tolerance,
             std::string detail = "");
  /// Records a check whose verdict was computed elsewhere.
  void add_check(Check c);
  Table& table(const std::string& name, std::vector<std::string> columns);
  void note(std::string text) { notes_.push_back(std::move(text)); }

  const std::vector<Check>& checks() const { return checks_; }
  const std::deque<Table>& tables() const { return tables_; }
  const std::vector<std::string>& notes() const { return notes_; }
  Provenance& provenance() { return provenance_; }
  const Provenance& provenance() const { return provenance_; }

  bool all_pass() const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> config_;
  std::vector<Check> checks_;
  std::deque<Table> tables_;  // stable references for table()
  std::vector<std::string> notes_;
  Provenance provenance_;
};

enum class ReportFormat { json, csv };

/// FNV-1a 64-bit hash of the canonical "key=value\n" lines, as hex.
std::string config_hash(const std::vector<std::pair<std::string, std::string>>& config);

std::string to_json(const Report& r);
/// Checks first, then each table as "# table: <name>" + header + rows.
std::string to_csv(const Report& r);
void emit(const Report& r, ReportFormat format, const std::filesystem::path& path);

std::string format_number(double v);

}  // namespace innerlab
