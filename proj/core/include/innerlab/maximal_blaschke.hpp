#pragma once

// Finite Heins correspondence: the Blaschke product with prescribed critical
// set, normalized by F(0) = 0 and a positive first nonvanishing Taylor
// coefficient at 0.

#include <vector>

#include "innerlab/curvature_metric.hpp"
#include "innerlab/hardy_inner.hpp"

namespace innerlab {

struct CriticalSet {
  std::vector<Zero> points;

  /// Validates |c| < 1, mult >= 1; merges coincident points.
  static CriticalSet make(std::vector<Zero> points);
  int total_multiplicity() const;
  int degree() const { return total_multiplicity() + 1; }

  /// Multiset union (max multiplicity) and intersection (min multiplicity).
  static CriticalSet united(const CriticalSet& a, const CriticalSet& b);
  static CriticalSet intersected(const CriticalSet& a, const CriticalSet& b);
  ZeroSetAnnotation annotation() const { return {points}; }
};

struct ContinuationOptions {
  double t_start = 0.05;
  double initial_step = 0.05;
  double min_step = 1e-7;
  int max_newton = 14;
  double newton_tol = 1e-14;
};

struct ContinuationReport {
  int steps = 0;
  int rejected_steps = 0;
  double last_t = 0.0;
};

constexpr int kMaxHeinsMultiplicity = 11;

/// Throws DomainError when the total multiplicity exceeds 11 and
/// ConvergenceError (with the last good t) when continuation stalls.
BlaschkeProduct heins_inverse(const CriticalSet& c, const ContinuationOptions& opts = {},
                              ContinuationReport* report = nullptr);

/// Greedy point-by-point distance between two critical sets with
/// multiplicities expanded; +inf when the total multiplicities differ.
double critical_set_distance(const std::vector<Zero>& a, const std::vector<Zero>& b);

struct KrausResidual {
  std::vector<double> radii;
  std::vector<double> values;  // ∫ log(λ_f/λ_D) dθ over |z| = r
  int nudged_samples = 0;
};

KrausResidual kraus_residual(const BlaschkeProduct& f, const CriticalSet& c,
                             const std::vector<double>& radii, int samples = 4096);

struct SolyninReport {
  double margin = 0.0;  // min over nodes
  int worst_i = -1;
  int worst_k = -1;
  int skipped_nodes = 0;
  bool pass = false;
};

/// min over grid nodes of log λ_{F_{C1}} + log λ_{F_{C2}} - log λ_{F_{C1∪C2}}
/// - log λ_{F_{C1∩C2}}; passes at >= -tol.
SolyninReport solynin_check(const CriticalSet& c1, const CriticalSet& c2, const GridDims& dims,
                            double tol = 1e-6);

struct WedgeUnionReport {
  double deviation = 0.0;  // sup |log density difference| over nodes
  ObstacleReport obstacle;
};

WedgeUnionReport wedge_union_check(const CriticalSet& c1, const CriticalSet& c2,
                                   const GridDims& dims, const SolverOptions& opts = {});

}  // namespace innerlab
