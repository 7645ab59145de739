#include "config.hpp"

#include <sstream>

namespace innerlab::cli {

const char* command_name(Command c) {
  switch (c) {
    case Command::heins: return "heins";
    case Command::gap: return "gap";
    case Command::solynin: return "solynin";
    case Command::wedge: return "wedge";
    case Command::unstable: return "unstable";
    case Command::roberts: return "roberts";
    case Command::hull: return "hull";
    case Command::invisibility: return "invisibility";
    case Command::step3: return "step3";
    case Command::cullen: return "cullen";
  }
  return "?";
}

void ExperimentConfig::resolve_defaults() {
  if (tol == 0.0) {
    switch (command) {
      case Command::heins: tol = 1e-8; break;
      case Command::gap: tol = 1e-2; break;
      case Command::solynin: tol = 1e-6; break;
      case Command::wedge: tol = 5e-3; break;
      case Command::unstable: tol = 0.25; break;
      case Command::hull: tol = 1e-6; break;
      case Command::invisibility: tol = 0.1; break;
      case Command::step3: tol = 0.05; break;
      case Command::roberts:
      case Command::cullen: tol = 1e-10; break;
    }
  }
  if (radii_k == 0) {
    switch (command) {
      case Command::gap: radii_k = 14; break;
      case Command::hull: radii_k = 12; break;
      default: radii_k = 10; break;
    }
  }
  if (count == 0) {
    switch (command) {
      case Command::heins: count = 50; break;
      case Command::solynin: count = 100; break;
      case Command::wedge: count = 10; break;
      default: break;
    }
  }
  if (n_values.empty() && command == Command::unstable) n_values = {8, 16, 32, 64};
  if (epsilons.empty() && command == Command::step3) epsilons = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
}

void ExperimentConfig::validate() const {
  if (!(tol > 0.0)) throw DomainError("--tol must be positive");
  if (dims.radial < 2 || dims.angular < 4) throw DomainError("grid must have >= 2 radial and >= 4 angular cells");
  if (!(dims.outer_radius > 0.0 && dims.outer_radius < 1.0)) throw DomainError("outer radius must lie in (0, 1)");
  if (radii_k < 1 || radii_k > 40) throw DomainError("--radii-k must lie in [1, 40]");
  if (count < 0) throw DomainError("--count must be non-negative");
  if (intervals.size() % 2 != 0) throw DomainError("--interval takes start,length pairs");
  if (critical_paths.size() > 2) throw DomainError("--critical may be given at most twice");
  roberts.validate();
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::canonical() const {
  auto join = [](const auto& v) {
    std::ostringstream s;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) s << ',';
      if constexpr (std::is_same_v<std::decay_t<decltype(v[0])>, double>) {
        s << format_number(v[k]);
      } else {
        s << v[k];
      }
    }
    return s.str();
  };
  std::vector<std::pair<std::string, std::string>> out{
      {"command", command_name(command)},
      {"grid_outer_radius", format_number(dims.outer_radius)},
      {"grid_r", std::to_string(dims.radial)},
      {"grid_theta", std::to_string(dims.angular)},
      {"tol", format_number(tol)},
      {"radii_k", std::to_string(radii_k)},
      {"seed", std::to_string(seed)},
      {"count", std::to_string(count)},
  };
  if (!measure_path.empty()) out.emplace_back("measure", measure_path);
  if (!blaschke_path.empty()) out.emplace_back("blaschke", blaschke_path);
  if (!critical_paths.empty()) out.emplace_back("critical", join(critical_paths));
  if (!lower_grid_path.empty()) out.emplace_back("lower_grid", lower_grid_path);
  if (!n_values.empty()) out.emplace_back("n", join(n_values));
  if (!epsilons.empty()) out.emplace_back("eps", join(epsilons));
  if (!intervals.empty()) out.emplace_back("intervals", join(intervals));
  if (command == Command::roberts || command == Command::invisibility) {
    out.emplace_back("c", format_number(roberts.c));
    out.emplace_back("j0", std::to_string(roberts.j0));
    out.emplace_back("jmax", std::to_string(roberts.j_max));
  }
  out.emplace_back("verify", verify ? "true" : "false");
  out.emplace_back("invisibility", with_invisibility ? "true" : "false");
  out.emplace_back("format", format == ReportFormat::json ? "json" : "csv");
  return out;
}

}  // namespace innerlab::cli
