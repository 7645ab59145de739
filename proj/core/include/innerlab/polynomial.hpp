#pragma once

#include <vector>

#include "innerlab/common.hpp"

namespace innerlab {

/// Dense complex polynomial, coefficients in ascending order.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs);
  static Polynomial constant(Complex c) { return Polynomial({c}); }
  /// (z - a)
  static Polynomial linear_root(Complex a) { return Polynomial({-a, 1.0}); }

  const std::vector<Complex>& coeffs() const { return c_; }
  /// Index of the highest nonzero coefficient; -1 for the zero polynomial.
  int degree() const;

  Complex operator()(Complex z) const;
  Polynomial derivative() const;

  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(Complex s) const;

  Polynomial pow(int e) const;

 private:
  std::vector<Complex> c_;
};

/// All roots with multiplicity. Exactly-zero trailing coefficients give exact
/// roots at 0; leading coefficients below `lead_tol` relative to the largest
/// are treated as roots at infinity and dropped. Companion-matrix
/// eigenvalues followed by Newton polish.
std::vector<Complex> polynomial_roots(const Polynomial& p, double lead_tol = 1e-14);

}  // namespace innerlab
