#pragma once

// Finite Blaschke products, singular inner functions, outer functions built
// from boundary data, and the circle log-integrals behind the gap functional.

#include <functional>
#include <optional>
#include <vector>

#include "innerlab/circle_measure.hpp"
#include "innerlab/common.hpp"
#include "innerlab/polynomial.hpp"

namespace innerlab {

/// A point in the disk with an integral multiplicity. Used for zero sets and
/// critical sets alike.
struct Zero {
  Complex point;
  int mult = 1;
};

class BlaschkeProduct {
 public:
  /// The constant 1.
  BlaschkeProduct() = default;
  /// Merges coincident zeros; throws DomainError for |a| >= 1, mult < 1 or
  /// |rotation| != 1.
  explicit BlaschkeProduct(std::vector<Zero> zeros, Complex rotation = 1.0);

  static BlaschkeProduct identity() { return monomial(1); }
  static BlaschkeProduct monomial(int d);

  const std::vector<Zero>& zeros() const { return zeros_; }
  Complex rotation() const { return rotation_; }
  int degree() const { return degree_; }
  int origin_multiplicity() const;

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// log|B'(z)|; -inf at a critical point.
  double log_abs_derivative(Complex z) const;
  /// 1 - |B(z)|², accurate when |B| is close to 1.
  double one_minus_abs2(Complex z) const;
  /// log λ_B(z) with λ_B = |B'|/(1 - |B|²).
  double log_density(Complex z) const;

  /// ∏ (z - a)^m and ∏ (1 - ā z)^m.
  Polynomial numerator() const;
  Polynomial denominator() const;

  /// Zeros of B' that are not zeros of B, as roots of
  /// Σ_i m_i (1 - |a_i|²) ∏_{j≠i} (z - a_j)(1 - ā_j z) over distinct zeros.
  Polynomial reduced_derivative_numerator() const;

 private:
  std::vector<Zero> zeros_;
  Complex rotation_ = 1.0;
  int degree_ = 0;
};

Complex eval(const BlaschkeProduct& b, Complex z);
Complex derivative(const BlaschkeProduct& b, Complex z);

/// The d - 1 zeros of B' in the disk (multiple zeros of B included),
/// clustered into multiplicities. Throws DomainError for degree 0.
std::vector<Zero> critical_points(const BlaschkeProduct& b);

/// log|B'(e^{iθ})| = log Σ m_i P_{a_i}(e^{iθ}). Requires a zero at 0.
double boundary_log_derivative(const BlaschkeProduct& b, double theta);

class SingularInner {
 public:
  SingularInner() = default;
  explicit SingularInner(CircleMeasure mu) : mu_(std::move(mu)) {}

  const CircleMeasure& measure() const { return mu_; }
  /// exp(-H_μ(z)); throws DomainError for |z| >= 1.
  Complex operator()(Complex z) const;
  /// log|S_μ(z)| = -P_μ(z).
  double log_abs(Complex z) const;
  /// S_μ'(z) = -H_μ'(z) S_μ(z).
  Complex derivative(Complex z) const;
  double log_abs_derivative(Complex z) const;

 private:
  CircleMeasure mu_;
};

Complex eval_singular(const SingularInner& s, Complex z);

class OuterFromBoundary {
 public:
  /// Samples log|f| at θ_k = 2πk/M.
  explicit OuterFromBoundary(std::vector<double> log_modulus);
  static OuterFromBoundary from_function(const std::function<double(double)>& log_modulus,
                                         int samples);

  const std::vector<double>& log_modulus() const { return h_; }
  double mean_log_modulus() const;
  /// exp((1/M) Σ (ζ_k + z)/(ζ_k - z) h_k); throws DomainError for |z| >= 1.
  Complex operator()(Complex z) const;

 private:
  std::vector<double> h_;
};

Complex outer_eval(const OuterFromBoundary& o, Complex z);

/// An analytic function on the disk together with what is known about its
/// boundary behaviour.
struct Evaluator {
  std::function<Complex(Complex)> value;
  /// log|f(z)|; when unset computed from value. Lets functions like S_μ
  /// report moduli below the double range.
  std::function<double(Complex)> log_abs;
  /// log|f(e^{iθ})| a.e.; when unset the boundary is sampled directly.
  std::function<double(double)> boundary_log_abs;
  /// Angles near which |f| varies on small scales; quadrature refines there.
  std::vector<double> singular_angles;
  /// |f| = 1 a.e. on the circle.
  bool inner = false;

  double log_modulus(Complex z) const {
    return log_abs ? log_abs(z) : std::log(std::abs(value(z)));
  }
};

Evaluator evaluator_of(const BlaschkeProduct& b);
Evaluator derivative_evaluator_of(const BlaschkeProduct& b);
Evaluator evaluator_of(const SingularInner& s);
Evaluator derivative_evaluator_of(const SingularInner& s);
Evaluator constant_evaluator(Complex c);

struct RadialLogIntegral {
  double value = 0.0;
  int underflow_samples = 0;  // samples with |f| < 1e-300
};

/// (1/2π) ∫ log|f(r e^{iθ})| dθ (or log⁺) by the trapezoid rule.
RadialLogIntegral radial_log_integral(const Evaluator& f, double r, int grid,
                                      bool positive_part);

struct GapOptions {
  double tol = 1e-6;  // agreement required between extrapolants
  double quad_tol = 1e-11;
};

struct GapEstimate {
  Interval interval;
  double boundary_term = 0.0;
  double radial_limit_term = 0.0;
  double gap = 0.0;
  std::vector<double> radii_used;
  std::vector<double> radial_terms;
  double extrapolation_error = 0.0;
  bool converged = false;
};

/// gap_I(f) = (1/2π)∫_I log|f| dθ at r = 1 minus the limit of the same
/// integral over rI. The limit is Richardson-extrapolated in h = 1 - r.
/// `grid` sets the number of base panels of the adaptive quadrature.
GapEstimate gap_over_interval(const Evaluator& f, const Interval& i,
                              const std::vector<double>& radii, int grid,
                              const GapOptions& opts = {});

/// Radii 1 - 2^{-k}, k = k_min..k_max.
std::vector<double> dyadic_radii(int k_min, int k_max);

/// z ↦ (f(z) - ξ)/(1 - ξ̄ f(z)).
Evaluator frostman_shift(const Evaluator& f, Complex xi);
BlaschkeProduct frostman_shift(const BlaschkeProduct& b, Complex xi);

struct BlaschkeApproximation {
  BlaschkeProduct product;
  double sup_deviation = 0.0;  // max |B - S_μ| on sampled |z| <= 1/2
};

/// Degree-n Blaschke product converging to S_μ for atomic μ: n_k zeros of
/// radius exp(-m_k/n_k) toward atom k, with Σ n_k = n allocated by mass.
BlaschkeApproximation blaschke_approximation_of_singular(const CircleMeasure& mu, int n);

/// Möbius factor -(ā/|a|)(z - a)/(1 - ā z), equal to (z - a)/(1 - ā z)
/// for a = 0.
Complex normalized_factor(Complex a, Complex z);

}  // namespace innerlab
