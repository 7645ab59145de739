#pragma once

// Roberts grating of a singular measure against the nested partitions P_j of
// the circle into n_j = 2^{2^{j + j0}} equal arcs, the per-level
// modulus-of-continuity certificates, and the nested-Λ invisibility
// iteration built on the pieces.
//
// Partitions are never enumerated. Only arcs that contain an atom or a cell
// endpoint are materialized; between them the measure has constant density,
// so every arc there carries the same mass and is classified in one step.
// Once an arc is shorter than double resolution (n_j past ~2^40) the
// arcs are tracked symbolically: each atom owns its own arc and cells are
// treated as aligned with the partition.

#include <cstdint>
#include <string>
#include <vector>

#include "innerlab/circle_measure.hpp"
#include "innerlab/curvature_metric.hpp"

namespace innerlab {

/// A certificate expected by the invisibility iteration failed.
class CertificateError : public Error {
 public:
  using Error::Error;
};

struct RobertsParams {
  double c = 0.01;
  int j0 = 1;
  int j_max = 3;

  /// log2 n_j = 2^{j + j0}.
  double log2_n(int j) const;
  /// n_j as a double (may be +inf beyond 2^1023).
  double n(int j) const;
  /// Arc length 2π / n_j.
  double arc_length(int j) const;
  /// (c / n_j) log n_j.
  double threshold(int j) const;
  /// n_j when it fits in 64 bits.
  bool n_fits_u64(int j) const;
  std::uint64_t n_u64(int j) const;

  void validate() const;
};

enum class ArcClass { light, heavy };

struct LedgerEntry {
  int level = 0;
  /// First arc index (k in [0, n_j)) as a double; exact while n_j <= 2^53.
  double first_arc = 0.0;
  /// Number of consecutive arcs of equal mass this entry stands for.
  double arc_count = 1.0;
  double start = 0.0;   // radians
  double span = 0.0;    // arc_count * arc length (radians)
  ArcClass cls = ArcClass::light;
  double mass_before = 0.0;    // per arc
  double mass_assigned = 0.0;  // per arc
  bool symbolic = false;
};

struct LevelResult {
  CircleMeasure piece;
  CircleMeasure remainder;
  std::vector<LedgerEntry> ledger;
  /// Union of the heavy arcs at this level.
  std::vector<Interval> heavy_arcs;
  bool symbolic = false;
};

/// One grating step of `mu` against P_j.
LevelResult grate_level(const CircleMeasure& mu, int j, const RobertsParams& params);

struct ModContCertificate {
  int level = 0;
  double threshold = 0.0;
  double aligned_max = 0.0;   // largest mass of a partition arc
  double margin = 0.0;        // threshold - aligned_max
  double sliding_max = 0.0;   // ω(arc length) over all windows
  double straddle_ratio = 0.0;  // sliding_max / threshold, <= 2 by construction
  bool pass = false;          // margin >= -1e-12
};

struct GratingResult {
  RobertsParams params;
  std::vector<CircleMeasure> pieces;
  CircleMeasure residual;
  std::vector<std::vector<LedgerEntry>> ledger;  // per level
  std::vector<std::vector<Interval>> heavy_arcs;  // per level
  std::vector<ModContCertificate> certificates;
  double input_mass = 0.0;
  double mass_defect = 0.0;  // |Σ pieces + residual - input|
};

GratingResult roberts_decompose(const CircleMeasure& mu, const RobertsParams& params);

ModContCertificate verify_mod_cont(const CircleMeasure& piece, int j, const RobertsParams& params);

/// Largest mass of a single arc of P_j.
double max_aligned_arc_mass(const CircleMeasure& mu, int j, const RobertsParams& params);

struct PoissonLogBound {
  double ratio = 0.0;       // max P_μ(z) / log(1/(1 - |z|²)), i.e. the implied c'
  double worst_radius = 0.0;
  double worst_angle = 0.0;
  double max_radius = 0.0;  // sampled |z| <= max_radius
  bool below_step2 = false;  // ratio < 1/10
};

/// Samples 1/2 <= |z| <= min(1 - 1/n_j, 1 - 1e-12): uniform plus
/// breakpoint-aligned angles, radii geometric toward the circle.
PoissonLogBound poisson_log_bound(const CircleMeasure& piece, int j, const RobertsParams& params,
                                  int sample_count = 10000);

/// Complement of the union of light arcs over all levels: the points that
/// stay heavy at every level, as a gap list over the last level's heavy arcs.
GapList residual_carrier_gaps(const GratingResult& g);

/// Surrogate radii 1 - 1/min(n_j, cap) for j = 1..levels.
std::vector<double> surrogate_radii(const RobertsParams& params, int levels, double cap = 4096.0);

struct InvisibilityOptions {
  GridDims dims;
  SolverOptions solver;
  bool enforce_certificates = true;
};

struct LevelCertificate {
  int chain = 0;   // j of λ_j
  int level = 0;   // i within the chain
  double radius = 0.0;
  /// min over S_{r_i} of log(|S_{μ_i}| λ_D) / log λ_D; passes at >= 4/5.
  double exponent = 0.0;
  bool step2_pass = false;
  /// min over S_{r_{i-1}} of λ/λ_D for Λ_{r_i}[...]; passes at >= 1/2.
  double inductive_ratio = 1.0;
  bool inductive_pass = true;
};

struct InvisibilityTrace {
  std::vector<double> radii;
  std::vector<double> origin_values;  // λ_j(0), j = 1..levels
  std::vector<LevelCertificate> certificates;
};

/// λ_j = Λ_{r_1}[|S_{μ_1}| Λ_{r_2}[ ... Λ_{r_j}[|S_{μ_j}| λ_D] ... ]] at the
/// origin for j = 1..pieces.size(). Radii must be non-decreasing.
InvisibilityTrace invisibility_iterate(const std::vector<CircleMeasure>& pieces,
                                       const std::vector<double>& radii,
                                       const InvisibilityOptions& opts = {});

struct Step3Point {
  double epsilon = 0.0;
  double one_minus_ell = 0.0;         // from the radial Liouville solve
  double one_minus_ell_scalar = 0.0;  // from the scalar boundary equation
};

struct Step3Result {
  std::vector<Step3Point> points;
  double slope = 0.0;         // least squares of log(1 - ℓ) on log ε, PDE values
  double scalar_slope = 0.0;  // same for the scalar values
};

/// ℓ with (ℓ/R)/(1 - ℓ²) = (1 - R²)^{-4/5}, R = 1 - ε.
double step3_scalar_ell(double epsilon);

/// For each ε solves Λ_{1-ε}[λ_D^{4/5}] on a radial grid (two resolutions,
/// Richardson) and reads ℓ = R λ(0). Throws DomainError unless every ε lies in
/// [1e-4, 1e-1].
Step3Result step3_scaling(const std::vector<double>& epsilons, int radial = 1024);

}  // namespace innerlab
