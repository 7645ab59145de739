#pragma once

// Finite positive singular measures on the unit circle.
//
// A CircleMeasure is a finite sum of point masses and self-similar Cantor
// components. Cantor components are materialized at their construction
// depth into uniform-density cells; every mass, Poisson and Herglotz
// computation runs over atoms + cells. Pieces produced by the grating
// decomposition are built directly from atoms + cells.
//
// Angles are radians. Intervals are half-open, [start, start + length).

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "innerlab/common.hpp"

namespace innerlab {

struct Interval {
  double start = 0.0;   // in [0, 2π)
  double length = kTwoPi;  // in (0, 2π]

  Interval() = default;
  /// Normalizes start into [0, 2π); throws DomainError unless 0 < length <= 2π.
  Interval(double start, double length);

  static Interval full_circle() { return {}; }

  double end() const { return start + length; }  // may exceed 2π
  /// Lebesgue measure normalized so the whole circle has measure 1.
  double normalized_length() const { return length / kTwoPi; }
  bool contains(double angle) const;
};

struct Atom {
  double angle = 0.0;
  double mass = 0.0;
};

/// Self-similar Cantor construction on `base`: each cell keeps its two end
/// pieces of relative length (1 - gap_ratio)/2 and drops the middle.
struct CantorPart {
  Interval base;
  double gap_ratio = 1.0 / 3.0;
  int depth = 12;
  double mass = 0.0;
};

/// Mass spread uniformly over [start, start + length), with start in [0, 2π)
/// and start + length <= 2π.
struct Cell {
  double start = 0.0;
  double length = 0.0;
  double mass = 0.0;

  double end() const { return start + length; }
  double density() const { return mass / length; }
};

class CircleMeasure {
 public:
  static constexpr int kDefaultCantorDepth = 12;
  static constexpr int kMaxCantorDepth = 22;

  CircleMeasure() = default;
  /// Validates masses (>= 0), gap ratios (0, 1) and depths; merges atoms that
  /// share an angle.
  CircleMeasure(std::vector<Atom> atoms, std::vector<CantorPart> cantor_parts = {});

  /// Measure given directly by atoms and uniform cells (cells may wrap; they
  /// are split at 2π). Used for grating pieces and remainders.
  static CircleMeasure from_cells(std::vector<Atom> atoms, std::vector<Cell> cells);

  static CircleMeasure dirac(double angle, double mass);
  static CircleMeasure cantor(Interval base, double gap_ratio, int depth, double mass);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<CantorPart>& cantor_parts() const { return cantor_parts_; }
  const std::vector<Cell>& cells() const { return cells_; }

  bool empty() const { return atoms_.empty() && cells_.empty(); }
  bool is_atomic() const { return cells_.empty(); }

  double total_mass() const { return total_mass_; }
  double interval_mass(const Interval& i) const;

  /// P_μ(z) = ∫ (1 - |z|²)/|ζ - z|² dμ(ζ).
  double poisson(Complex z) const;
  /// H_μ(z) = ∫ (ζ + z)/(ζ - z) dμ(ζ); Re H_μ = P_μ.
  Complex herglotz(Complex z) const;
  /// H_μ'(z) = ∫ 2ζ/(ζ - z)² dμ(ζ).
  Complex herglotz_derivative(Complex z) const;
  /// Average of P_μ(r e^{iθ}) over θ in [center - width/2, center + width/2].
  double ring_average_poisson(double r, double center, double width) const;

  /// Positions where the distribution function changes slope or jumps:
  /// atom angles and cell endpoints, sorted in [0, 2π).
  std::vector<double> breakpoints() const;

  CircleMeasure scaled(double factor) const;
  CircleMeasure plus(const CircleMeasure& other) const;

 private:
  void build_distribution();
  // μ([0, x)) for x in [0, 2π].
  double mass_below(double x) const;

  std::vector<Atom> atoms_;             // sorted by angle, distinct
  std::vector<CantorPart> cantor_parts_;  // original description (may be empty)
  std::vector<Cell> cells_;             // sorted by start

  double total_mass_ = 0.0;
  std::vector<double> atom_prefix_;     // atom_prefix_[k] = Σ_{j<k} mass_j
  std::vector<double> knots_;           // continuous-part CDF knots
  std::vector<double> knot_cdf_;
  std::vector<double> knot_slope_;      // density on [knots_[p], knots_[p+1])
};

/// Complementary arcs of a closed subset of the circle.
struct GapList {
  std::vector<Interval> gaps;
  double covered_total = 0.0;  // Σ listed gap lengths (radians)
  // Contribution of gaps that a truncated self-similar construction did not
  // materialize: their total length (radians) and their entropy.
  double tail_length = 0.0;
  double tail_entropy = 0.0;
  bool tail_infinite = false;

  GapList() = default;
  explicit GapList(std::vector<Interval> gaps);
};

struct EntropyValue {
  double truncated = 0.0;
  double tail_bound = 0.0;
  bool finite = true;

  double total() const {
    return finite ? truncated + tail_bound : std::numeric_limits<double>::infinity();
  }
};

struct BcVerdict {
  bool is_bc = false;
  double entropy = 0.0;
  double uncovered_fraction = 0.0;
};

double total_mass(const CircleMeasure& mu);
double interval_mass(const CircleMeasure& mu, const Interval& i);

/// Lower-bound estimate of ω_μ(t) = sup_{|I| = t} μ(I). Window starts include
/// every atom and every cell endpoint (and the same shifted by -t), plus
/// n_probe uniform starts; exact for the materialized measure.
double modulus_of_continuity(const CircleMeasure& mu, double t, int n_probe);

/// Throws DomainError for |z| >= 1.
double poisson_extension(const CircleMeasure& mu, Complex z);

/// Σ |I_k| log(1/|I_k|) with lengths normalized to total 1, plus the tail.
EntropyValue bc_entropy(const GapList& gaps);

/// Finite entropy below `cap` and complement of Lebesgue measure <= tol.
BcVerdict is_beurling_carleson(const GapList& gaps, double tail_bound, double tol,
                               double cap = 1e12);

/// Gaps of a Cantor construction down to its depth; the unmaterialized
/// deeper gaps are summarized in tail_length / tail_entropy.
GapList cantor_gap_list(const CantorPart& part);

/// Merges touching or overlapping arcs and returns the complement of their
/// union as a gap list.
GapList complement_of_arcs(std::span<const Interval> arcs);

/// ∫_a^b (1 - |z|²)/|e^{iθ} - z|² dθ for b - a <= 2π, |z| < 1.
double arc_poisson(double a, double b, Complex z);

}  // namespace innerlab
