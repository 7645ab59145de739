#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "innerlab/curvature_metric.hpp"
#include "innerlab/report.hpp"
#include "innerlab/roberts.hpp"

namespace innerlab::cli {

enum class Command { heins, gap, solynin, wedge, unstable, roberts, hull, invisibility, step3, cullen };

const char* command_name(Command c);

struct ExperimentConfig {
  Command command = Command::heins;
  GridDims dims;
  double tol = 0.0;  // 0 selects the per-command default
  int radii_k = 0;   // 0 selects the per-command default
  std::uint64_t seed = 1;
  int count = 0;     // sweep size; 0 selects the per-command default
  std::string measure_path;
  std::string blaschke_path;
  std::vector<std::string> critical_paths;
  std::string lower_grid_path;
  std::vector<int> n_values;
  std::vector<double> epsilons;
  std::vector<double> intervals;  // flattened (start, length) pairs
  RobertsParams roberts;
  bool verify = false;
  bool with_invisibility = false;
  ReportFormat format = ReportFormat::json;
  std::string out_path;
  std::string report_path;
  std::string grid_out_path;

  /// Fills command defaults for unset fields.
  void resolve_defaults();
  /// Throws DomainError on non-positive tolerances or bad sizes.
  void validate() const;
  /// Canonical key/value pairs; output locations are excluded so the same
  /// experiment written twice hashes identically.
  std::vector<std::pair<std::string, std::string>> canonical() const;
};

}  // namespace innerlab::cli
