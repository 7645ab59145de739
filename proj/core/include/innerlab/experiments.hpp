#pragma once

// Desk-scale experiments behind the innerlab subcommands. Each returns a
// Report whose checks carry the tolerances they were tested against.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "innerlab/curvature_metric.hpp"
#include "innerlab/hardy_inner.hpp"
#include "innerlab/maximal_blaschke.hpp"
#include "innerlab/report.hpp"
#include "innerlab/roberts.hpp"

namespace innerlab {

using Rng = std::mt19937_64;

/// Total multiplicity in [min_total, max_total], points uniform in |c| <= max_radius,
/// occasional double points.
CriticalSet random_critical_set(Rng& rng, int min_total, int max_total, double max_radius);
/// Degree in [1, max_degree] with zeros in |a| <= max_radius; a simple zero at
/// the origin when requested.
BlaschkeProduct random_blaschke(Rng& rng, int max_degree, double max_radius, bool zero_at_origin);

struct HeinsRun {
  Report report;
  BlaschkeProduct product;
};

HeinsRun run_heins(const CriticalSet& c, bool verify, double tol = 1e-8);
Report run_heins_sweep(std::uint64_t seed, int count = 50, int max_total = 5,
                       double max_radius = 0.7, double tol = 1e-8);

struct GapCase {
  std::string measure_id;
  CircleMeasure measure;
  Interval interval;
};

/// Built-in cases: 0.3 δ_1 on the full circle and off the atom, two atoms.
std::vector<GapCase> default_gap_cases();
Report run_gap_table(const std::vector<GapCase>& cases, const std::vector<double>& radii,
                     int grid = 64, double rel_tol = 1e-2);

Report run_solynin(const CriticalSet& c1, const CriticalSet& c2, const GridDims& dims,
                   double tol = 1e-6);
Report run_solynin_sweep(std::uint64_t seed, int pairs, const GridDims& dims, double tol = 1e-6);

Report run_wedge(const CriticalSet& c1, const CriticalSet& c2, const GridDims& dims,
                 double tol = 5e-3);
Report run_wedge_sweep(std::uint64_t seed, int pairs, const GridDims& dims, double tol = 5e-3);

/// |out F_n'(0)| for zeros 0 and e^{2πij/n}(1 - 1/n²); n = 0 means F = z.
/// `samples` must be >= 16 n.
double unstable_outer_derivative_at_origin(int n, int samples);
Report run_unstable_example(const std::vector<int>& n_values, int samples_per_n = 64,
                            double delta0 = 0.05, double spread_tol = 0.25);

Report run_roberts(const CircleMeasure& mu, const RobertsParams& params);

Report run_hull(const CircleMeasure& mu, const HullOptions& opts);

Report run_invisibility(const CircleMeasure& mu, const RobertsParams& params,
                        const InvisibilityOptions& opts, double floor = 0.9);

Report run_step3(const std::vector<double>& epsilons, double lo = 0.75, double hi = 0.85);

/// Sup over the schedule of (1/2π)∫ log⁺|S_μ'(r e^{iθ})| dθ, with the
/// increments between consecutive radii.
Report run_cullen_spotcheck(const CircleMeasure& mu, const std::vector<double>& radii,
                            int grid = 1 << 16);

}  // namespace innerlab
