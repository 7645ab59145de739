#include "innerlab/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace innerlab {

Polynomial::Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {}

int Polynomial::degree() const {
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
    if (c_[static_cast<std::size_t>(k)] != Complex(0.0)) return k;
  return -1;
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial({0.0});
  std::vector<Complex> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return Polynomial({0.0});
  std::vector<Complex> out(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Complex> out(std::max(c_.size(), o.c_.size()));
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Complex(-1.0); }

Polynomial Polynomial::operator*(Complex s) const {
  std::vector<Complex> out = c_;
  for (auto& v : out) v *= s;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::pow(int e) const {
  Polynomial out({1.0});
  for (int k = 0; k < e; ++k) out = out * *this;
  return out;
}

std::vector<Complex> polynomial_roots(const Polynomial& p, double lead_tol) {
  std::vector<Complex> c = p.coeffs();
  double cmax = 0.0;
  for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) throw DomainError("roots of the zero polynomial are undefined");
  while (!c.empty() && std::abs(c.back()) <= lead_tol * cmax) c.pop_back();

  std::vector<Complex> roots;
  std::size_t low = 0;
  while (low < c.size() && c[low] == Complex(0.0)) {
    roots.emplace_back(0.0);
    ++low;
  }
  const int n = static_cast<int>(c.size() - low) - 1;
  if (n <= 0) return roots;

  // Companion matrix of the monic polynomial.
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  const Complex lead = c.back();
  for (int k = 0; k < n; ++k) comp(0, k) = -c[c.size() - 2 - static_cast<std::size_t>(k)] / lead;
  for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "companion eigen-solve failed for polynomial with coefficients:";
    for (const auto& v : p.coeffs()) msg << ' ' << v;
    throw ConvergenceError(msg.str());
  }

  const Polynomial reduced(std::vector<Complex>(c.begin() + static_cast<long>(low), c.end()));
  const Polynomial dreduced = reduced.derivative();
  for (int k = 0; k < n; ++k) {
    Complex z = solver.eigenvalues()(k);
    double best = std::abs(reduced(z));
    for (int it = 0; it < 8; ++it) {
      const Complex d = dreduced(z);
      if (d == Complex(0.0)) break;
      const Complex step = reduced(z) / d;
      const Complex cand = z - step;
      const double val = std::abs(reduced(cand));
      if (!(val < best)) break;
      z = cand;
      best = val;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    roots.push_back(z);
  }
  return roots;
}

}  // namespace innerlab
