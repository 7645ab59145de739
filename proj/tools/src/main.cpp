// innerlab: command-line driver for the desk-scale experiments.
//
// Exit codes: 0 all checks pass, 1 a check failed (or a numerical method
// gave up), 2 usage or input error.

#include <CLI11.hpp>
#include <iostream>

#include "config.hpp"
#include "innerlab/experiments.hpp"
#include "innerlab/io.hpp"

namespace innerlab::cli {
namespace {

std::vector<double> radii_schedule(int k_min, int k_max) {
  if (k_max < k_min) throw DomainError("--radii-k is below the first radius of the schedule");
  return dyadic_radii(k_min, k_max);
}

CircleMeasure require_measure(const ExperimentConfig& cfg) {
  if (cfg.measure_path.empty()) throw ParseError("this command needs --measure");
  return load_measure(cfg.measure_path);
}

void finish(Report& rep, const ExperimentConfig& cfg, const std::string& path) {
  rep.set_config(cfg.canonical());
  if (cfg.command == Command::heins || cfg.command == Command::solynin ||
      cfg.command == Command::wedge)
    rep.provenance().seed = cfg.seed;
  if (path.empty()) {
    std::cout << (cfg.format == ReportFormat::json ? to_json(rep) : to_csv(rep));
  } else {
    emit(rep, cfg.format, path);
  }
}

Report run(const ExperimentConfig& cfg) {
  switch (cfg.command) {
    case Command::heins: {
      if (!cfg.blaschke_path.empty()) {
        // Forward direction: the critical set of a given product.
        const BlaschkeProduct b = load_blaschke(cfg.blaschke_path);
        const CriticalSet c = CriticalSet::make(critical_points(b));
        if (!cfg.out_path.empty()) write_text_file(cfg.out_path, critical_set_to_json(c));
        HeinsRun r = run_heins(c, cfg.verify, cfg.tol);
        return std::move(r.report);
      }
      if (cfg.critical_paths.empty()) return run_heins_sweep(cfg.seed, cfg.count, 5, 0.7, cfg.tol);
      HeinsRun r = run_heins(load_critical_set(cfg.critical_paths[0]), cfg.verify, cfg.tol);
      if (!cfg.out_path.empty()) write_text_file(cfg.out_path, blaschke_to_json(r.product));
      return std::move(r.report);
    }
    case Command::gap: {
      std::vector<GapCase> cases;
      if (cfg.measure_path.empty()) {
        cases = default_gap_cases();
      } else {
        const CircleMeasure mu = load_measure(cfg.measure_path);
        std::vector<Interval> ivs;
        for (std::size_t k = 0; k + 1 < cfg.intervals.size(); k += 2)
          ivs.emplace_back(cfg.intervals[k], cfg.intervals[k + 1]);
        if (ivs.empty()) ivs = {Interval::full_circle(), Interval(kPi / 2, kPi)};
        for (const auto& iv : ivs) cases.push_back({cfg.measure_path, mu, iv});
      }
      return run_gap_table(cases, radii_schedule(6, cfg.radii_k), 64, cfg.tol);
    }
    case Command::solynin:
      if (cfg.critical_paths.size() == 2)
        return run_solynin(load_critical_set(cfg.critical_paths[0]),
                           load_critical_set(cfg.critical_paths[1]), cfg.dims, cfg.tol);
      if (!cfg.critical_paths.empty()) throw ParseError("solynin needs --critical twice or not at all");
      return run_solynin_sweep(cfg.seed, cfg.count, cfg.dims, cfg.tol);
    case Command::wedge:
      if (cfg.critical_paths.size() == 2)
        return run_wedge(load_critical_set(cfg.critical_paths[0]),
                         load_critical_set(cfg.critical_paths[1]), cfg.dims, cfg.tol);
      if (!cfg.critical_paths.empty()) throw ParseError("wedge needs --critical twice or not at all");
      return run_wedge_sweep(cfg.seed, cfg.count, cfg.dims, cfg.tol);
    case Command::unstable:
      return run_unstable_example(cfg.n_values, 64, 0.05, cfg.tol);
    case Command::roberts: {
      const CircleMeasure mu = require_measure(cfg);
      Report rep = run_roberts(mu, cfg.roberts);
      if (cfg.with_invisibility) {
        InvisibilityOptions o;
        o.dims = cfg.dims;
        const Report inv = run_invisibility(mu, cfg.roberts, o);
        for (const auto& c : inv.checks()) rep.add_check(c);
        for (const auto& t : inv.tables()) rep.table("invisibility_" + t.name, t.columns).rows = t.rows;
        for (const auto& n : inv.notes()) rep.note(n);
      }
      return rep;
    }
    case Command::hull: {
      HullOptions o;
      o.dims = cfg.dims;
      o.radii = radii_schedule(3, cfg.radii_k);
      o.monotone_tol = cfg.tol;
      o.converge_tol = cfg.tol;
      Report rep("hull");
      if (!cfg.lower_grid_path.empty()) {
        const FieldPtr lower = grid_field(grid_from_csv(read_text_file(cfg.lower_grid_path)));
        const HullResult h = hull(*lower, o);
        auto& t = rep.table("hull", {"radius", "origin_value"});
        for (std::size_t k = 0; k < h.radii.size(); ++k) t.add_row({h.radii[k], h.origin_values[k]});
        rep.check("max_decrease", h.max_decrease, "<=", o.monotone_tol);
        if (!cfg.grid_out_path.empty()) write_text_file(cfg.grid_out_path, grid_to_csv(h.grid));
        return rep;
      }
      const CircleMeasure mu = require_measure(cfg);
      rep = run_hull(mu, o);
      if (!cfg.grid_out_path.empty()) {
        const HullResult h = hull(*singular_weighted_field(mu, poincare_field()), o);
        write_text_file(cfg.grid_out_path, grid_to_csv(h.grid));
      }
      return rep;
    }
    case Command::invisibility: {
      InvisibilityOptions o;
      o.dims = cfg.dims;
      return run_invisibility(require_measure(cfg), cfg.roberts, o, 1.0 - cfg.tol);
    }
    case Command::step3:
      return run_step3(cfg.epsilons, 0.8 - cfg.tol, 0.8 + cfg.tol);
    case Command::cullen:
      return run_cullen_spotcheck(require_measure(cfg), radii_schedule(1, cfg.radii_k));
  }
  throw Error("unknown command");
}

}  // namespace
}  // namespace innerlab::cli

int main(int argc, char** argv) {
  using namespace innerlab;
  using namespace innerlab::cli;

  CLI::App app{"Desk-scale experiments on inner functions and conformal metrics", "innerlab"};
  app.set_version_flag("--version", std::string(kVersionString));
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string format = "json";

  const std::vector<std::pair<Command, const char*>> commands{
      {Command::heins, "critical set <-> maximal Blaschke product round trips"},
      {Command::gap, "gap functional against interval masses"},
      {Command::solynin, "Solynin-type inequality on grid nodes"},
      {Command::wedge, "wedge of maximal Blaschke metrics against the union"},
      {Command::unstable, "outer part of F_n' at the origin"},
      {Command::roberts, "grating decomposition with certificates"},
      {Command::hull, "hull of |S_mu| lambda_D"},
      {Command::invisibility, "nested iteration over grating pieces"},
      {Command::step3, "scaling exponent of 1 - l"},
      {Command::cullen, "log+ means of S_mu' over a radius schedule"},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [cmd, help] : commands) {
    CLI::App* s = app.add_subcommand(command_name(cmd), help);
    s->add_option("--measure", cfg.measure_path, "measure description (JSON)")->check(CLI::ExistingFile);
    s->add_option("--blaschke", cfg.blaschke_path, "Blaschke product (JSON)")->check(CLI::ExistingFile);
    s->add_option("--critical", cfg.critical_paths, "critical set (JSON); repeat for a pair")
        ->check(CLI::ExistingFile);
    s->add_option("--grid-r", cfg.dims.radial, "radial grid intervals");
    s->add_option("--grid-theta", cfg.dims.angular, "angular grid points");
    s->add_option("--outer-radius", cfg.dims.outer_radius, "grid outer radius");
    s->add_option("--tol", cfg.tol, "command tolerance (defaults per command)");
    s->add_option("--radii-k", cfg.radii_k, "last k of the radius schedule 1 - 2^-k");
    s->add_option("--seed", cfg.seed, "seed for randomized sweeps");
    s->add_option("--count", cfg.count, "sweep size");
    s->add_option("--out", cfg.out_path, "output path (report; the product for heins)");
    s->add_option("--report", cfg.report_path, "report path");
    s->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--n", cfg.n_values, "n values")->delimiter(',');
    s->add_option("--eps", cfg.epsilons, "epsilon values")->delimiter(',');
    s->add_option("--interval", cfg.intervals, "start,length in radians; repeatable")->delimiter(',');
    s->add_option("--c", cfg.roberts.c, "grating constant");
    s->add_option("--j0", cfg.roberts.j0, "grating level offset");
    s->add_option("--jmax", cfg.roberts.j_max, "last grating level");
    s->add_option("--lower-grid", cfg.lower_grid_path, "grid dump used as the lower metric")
        ->check(CLI::ExistingFile);
    s->add_option("--grid-out", cfg.grid_out_path, "write the final grid as CSV");
    s->add_flag("--verify", cfg.verify, "recompute and compare the critical set");
    s->add_flag("--invisibility", cfg.with_invisibility, "append the invisibility trace");
    subs.emplace_back(s, cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [s, cmd] : subs)
    if (s->parsed()) cfg.command = cmd;
  cfg.format = format == "csv" ? ReportFormat::csv : ReportFormat::json;

  try {
    cfg.resolve_defaults();
    cfg.validate();
    Report rep = run(cfg);
    const std::string& path = cfg.command == Command::heins ? cfg.report_path
                              : cfg.report_path.empty()      ? cfg.out_path
                                                             : cfg.report_path;
    finish(rep, cfg, path);
    for (const auto& c : rep.checks())
      if (!c.pass)
        std::cerr << "FAIL " << c.id << ": " << format_number(c.measured) << ' ' << c.comparison
                  << ' ' << format_number(c.tolerance) << '\n';
    return rep.all_pass() ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "innerlab: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "innerlab: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "innerlab: " << e.what() << '\n';
    return 1;
  }
}
