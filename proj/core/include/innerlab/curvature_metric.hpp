#pragma once

// Conformal metrics on centered disks D_R sampled on polar grids, and the
// Liouville machinery for curvature -4.
//
// Radial nodes are uniform in hyperbolic distance s = atanh(r), so they
// cluster toward the circle. Each grid stores both u = log λ and the
// relative log density
//
//     w = u - log λ_D - log|B_Z|,
//
// where B_Z is the Blaschke product of the annotated zero set. w stays finite
// at pseudometric zeros. In w the curvature -4 equation reads
// Δ_h w = 4(|B_Z|² e^{2w} - 1) with Δ_h the hyperbolic Laplacian.

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "innerlab/circle_measure.hpp"
#include "innerlab/common.hpp"
#include "innerlab/hardy_inner.hpp"

namespace innerlab {

struct ZeroSetAnnotation {
  std::vector<Zero> zeros;

  bool empty() const { return zeros.empty(); }
  /// log|B_Z(z)|, -inf at a zero.
  double log_abs_blaschke(Complex z) const;
  /// Multiset union (max multiplicity) and intersection (min multiplicity).
  static ZeroSetAnnotation united(const ZeroSetAnnotation& a, const ZeroSetAnnotation& b);
};

struct GridDims {
  double outer_radius = 1.0 - 1.0 / 4096.0;
  int radial = 128;   // radial intervals; nodes i = 0..radial
  int angular = 256;  // M
};

struct NudgedNode {
  int i = 0;
  int k = 0;
  Complex sampled_at;
};

class MetricGrid {
 public:
  MetricGrid(double outer_radius, int radial, int angular, ZeroSetAnnotation zeros = {});

  /// Builds from relative values w (rows = radial + 1, cols = angular).
  static MetricGrid from_relative(double outer_radius, Eigen::MatrixXd w,
                                  ZeroSetAnnotation zeros = {});
  /// Samples u = log λ from a function. Nodes within 1e-9 of an annotated
  /// zero are sampled half a cell away and recorded; their w is taken as the
  /// symmetric average of w around the node.
  static MetricGrid sample(double outer_radius, int radial, int angular,
                           const std::function<double(Complex)>& log_density,
                           ZeroSetAnnotation zeros = {});

  double outer_radius() const { return R_; }
  int radial_count() const { return N_; }
  int angular_count() const { return M_; }
  double ds() const { return ds_; }
  double dtheta() const { return kTwoPi / M_; }
  double s_node(int i) const { return i * ds_; }
  double r_node(int i) const { return r_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& radial_nodes() const { return r_; }
  double theta(int k) const { return kTwoPi * k / M_; }
  Complex point(int i, int k) const { return std::polar(r_node(i), theta(k)); }

  const Eigen::MatrixXd& log_density() const { return u_; }
  const Eigen::MatrixXd& relative() const { return w_; }
  double u(int i, int k) const { return u_(i, k); }
  double w(int i, int k) const { return w_(i, k); }

  const ZeroSetAnnotation& zero_set() const { return zeros_; }
  const std::vector<NudgedNode>& nudged_nodes() const { return nudged_; }

  /// Boundary samples u(R e^{iθ_k}).
  std::vector<double> boundary_trace() const;

  /// Interpolated w at |z| <= R: 4-point Lagrange in s (reflecting through
  /// the center) and in θ.
  double relative_at(Complex z) const;
  /// log λ at |z| <= R.
  double log_density_at(Complex z) const;

  /// Same grid with w replaced.
  MetricGrid with_relative(Eigen::MatrixXd w) const;

 private:
  void refresh_u();

  double R_;
  int N_;
  int M_;
  double ds_;
  std::vector<double> r_;
  Eigen::MatrixXd u_;
  Eigen::MatrixXd w_;
  ZeroSetAnnotation zeros_;
  std::vector<NudgedNode> nudged_;
};

/// log λ_D(z) = -log(1 - |z|²).
double log_poincare(Complex z);

/// A positive (pseudo)metric density given through its logarithm.
class LogDensityField {
 public:
  virtual ~LogDensityField() = default;
  virtual double log_density(Complex z) const = 0;
  /// Mean of log λ(r e^{iθ}) over θ in [center - width/2, center + width/2].
  virtual double ring_average(double r, double center, double width) const;
};

using FieldPtr = std::shared_ptr<const LogDensityField>;

/// c·λ_D.
FieldPtr poincare_field(double scale = 1.0);
/// The constant density C.
FieldPtr constant_field(double c);
/// |S_μ|·base; ring averages of -P_μ are exact for atoms.
FieldPtr singular_weighted_field(CircleMeasure mu, FieldPtr base);
/// λ_B for a Blaschke product.
FieldPtr pullback_field(BlaschkeProduct b);
/// |B_C|·λ_D.
FieldPtr kraus_field(ZeroSetAnnotation c);
/// Interpolates a computed grid (defined on |z| <= outer_radius).
FieldPtr grid_field(MetricGrid g);
FieldPtr function_field(std::function<double(Complex)> log_density);

/// Boundary trace on S_r for an M-point grid; each sample is the ring
/// average over its angular cell.
std::vector<double> boundary_samples(const LogDensityField& f, double r, int angular);

MetricGrid poincare_grid(const GridDims& dims);
MetricGrid pullback_grid(const BlaschkeProduct& b, const GridDims& dims);
/// |B_C| λ_D sampled with annotation C.
MetricGrid kraus_grid(const ZeroSetAnnotation& c, const GridDims& dims);
MetricGrid field_grid(const LogDensityField& f, const GridDims& dims,
                      ZeroSetAnnotation zeros = {});

/// Curvature -Δu e^{-2u} at nodes i = 0..radial-1 (the boundary row is NaN),
/// from the finite-volume hyperbolic Laplacian of w.
Eigen::MatrixXd curvature_residual(const MetricGrid& g);

struct SkReport {
  bool ok = true;
  double worst_curvature = -std::numeric_limits<double>::infinity();
  int worst_i = -1;
  int worst_k = -1;
};

/// Curvature <= -4 + tol at all interior nodes.
SkReport sk_check(const MetricGrid& g, double tol);

struct SolverOptions {
  int max_iter = 80;
  double tol = 1e-10;        // max |F|/area
  double accept_tol = 1e-8;  // accepted when Newton stagnates at round-off
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
};

/// Λ_r[u]: curvature -4 metric on D_r (with pseudometric zeros `zeros`)
/// matching boundary_u at r e^{iθ_k}. Damped Newton on the relative form.
MetricGrid solve_liouville(double r, const std::vector<double>& boundary_u, int radial,
                           const MetricGrid* init = nullptr, const ZeroSetAnnotation& zeros = {},
                           const SolverOptions& opts = {}, SolveReport* report = nullptr);

/// Largest curvature <= -4 solution below u_obstacle (given as relative
/// values on the grid of `shape`) via a primal-dual active-set iteration.
struct ObstacleReport {
  int outer_iterations = 0;
  int contact_nodes = 0;
  double min_slack = 0.0;
};
MetricGrid solve_obstacle(const MetricGrid& shape, const Eigen::MatrixXd& w_obstacle,
                          const SolverOptions& opts = {}, ObstacleReport* report = nullptr);

struct HullOptions {
  GridDims dims;
  std::vector<double> radii;  // default 1 - 2^{-k}, k = 3..12
  double monotone_tol = 1e-6;
  double converge_tol = 1e-6;
  SolverOptions solver;
};

struct HullResult {
  MetricGrid grid;                 // last iterate, on D_{radii.back()}
  std::vector<double> radii;
  std::vector<double> origin_values;  // λ at 0 per step
  double max_decrease = 0.0;       // worst drop between iterates on sampled points
  bool converged = false;
};

/// Increasing limit of Λ_r[lower on S_r] over the schedule. Throws
/// ConvergenceError when iterates decrease beyond monotone_tol.
HullResult hull(const LogDensityField& lower, const HullOptions& opts = {});

std::vector<double> default_hull_radii();

/// Replaces g inside the Euclidean disk D(center, radius) by the curvature -4
/// solution with g's trace on its boundary. Throws DomainError when the
/// subdisk leaves D_R.
MetricGrid perron_modify(const MetricGrid& g, Complex center, double radius,
                         const SolverOptions& opts = {});

/// Largest curvature -4 metric below min(g1, g2) on their common grid.
MetricGrid wedge(const MetricGrid& g1, const MetricGrid& g2, const SolverOptions& opts = {},
                 ObstacleReport* report = nullptr);

/// Pointwise max / min of log densities; same grid required.
MetricGrid pointwise_max(const MetricGrid& g1, const MetricGrid& g2);
MetricGrid pointwise_min(const MetricGrid& g1, const MetricGrid& g2);

}  // namespace innerlab
