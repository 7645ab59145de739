#include "innerlab/hardy_inner.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>

namespace innerlab {

namespace {

Complex unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

double poisson_kernel_at(Complex a, Complex x) {
  return (1.0 - std::norm(a)) / std::norm(x - a);
}

// Groups nearby points into (centroid, count).
std::vector<Zero> cluster_points(std::vector<Complex> pts, double tol) {
  std::vector<Zero> out;
  std::vector<bool> used(pts.size(), false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (used[i]) continue;
    Complex sum = pts[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (!used[j] && std::abs(pts[j] - pts[i]) < tol) {
        used[j] = true;
        sum += pts[j];
        ++count;
      }
    }
    out.push_back({sum / static_cast<double>(count), count});
  }
  return out;
}

constexpr double kClusterTol = 1e-5;

}  // namespace

Complex normalized_factor(Complex a, Complex z) {
  const Complex m = (z - a) / (1.0 - std::conj(a) * z);
  const double r = std::abs(a);
  if (r == 0.0) return m;
  return -(std::conj(a) / r) * m;
}

BlaschkeProduct::BlaschkeProduct(std::vector<Zero> zeros, Complex rotation) : rotation_(rotation) {
  if (std::abs(std::abs(rotation) - 1.0) > 1e-9)
    throw DomainError("Blaschke rotation must be unimodular");
  rotation_ = rotation / std::abs(rotation);
  for (const auto& z : zeros) {
    if (z.mult < 1) throw DomainError("zero multiplicity must be >= 1");
    if (!(std::abs(z.point) < 1.0)) throw DomainError("Blaschke zeros must satisfy |a| < 1");
    auto it = std::find_if(zeros_.begin(), zeros_.end(),
                           [&](const Zero& e) { return e.point == z.point; });
    if (it != zeros_.end()) {
      it->mult += z.mult;
    } else {
      zeros_.push_back(z);
    }
    degree_ += z.mult;
  }
}

BlaschkeProduct BlaschkeProduct::monomial(int d) {
  if (d < 0) throw DomainError("monomial degree must be >= 0");
  if (d == 0) return BlaschkeProduct();
  return BlaschkeProduct({Zero{0.0, d}});
}

int BlaschkeProduct::origin_multiplicity() const {
  for (const auto& z : zeros_)
    if (z.point == Complex(0.0)) return z.mult;
  return 0;
}

Complex BlaschkeProduct::operator()(Complex z) const {
  Complex acc = rotation_;
  for (const auto& a : zeros_) {
    const Complex f = (z - a.point) / (1.0 - std::conj(a.point) * z);
    acc *= std::pow(f, a.mult);
  }
  return acc;
}

namespace {

Complex reduced_numerator_value(const std::vector<Zero>& zs, Complex z) {
  Complex acc{};
  for (std::size_t i = 0; i < zs.size(); ++i) {
    Complex term = static_cast<double>(zs[i].mult) * (1.0 - std::norm(zs[i].point));
    for (std::size_t j = 0; j < zs.size(); ++j) {
      if (j == i) continue;
      term *= (z - zs[j].point) * (1.0 - std::conj(zs[j].point) * z);
    }
    acc += term;
  }
  return acc;
}

}  // namespace

Complex BlaschkeProduct::derivative(Complex z) const {
  if (degree_ == 0) return 0.0;
  Complex acc = rotation_ * reduced_numerator_value(zeros_, z);
  for (const auto& a : zeros_) {
    acc *= std::pow(z - a.point, a.mult - 1);
    acc /= std::pow(1.0 - std::conj(a.point) * z, a.mult + 1);
  }
  return acc;
}

double BlaschkeProduct::log_abs_derivative(Complex z) const {
  if (degree_ == 0) return -std::numeric_limits<double>::infinity();
  double acc = std::log(std::abs(reduced_numerator_value(zeros_, z)));
  for (const auto& a : zeros_) {
    if (a.mult > 1) acc += (a.mult - 1) * std::log(std::abs(z - a.point));
    acc -= (a.mult + 1) * std::log(std::abs(1.0 - std::conj(a.point) * z));
  }
  return acc;
}

double BlaschkeProduct::one_minus_abs2(Complex z) const {
  const double s = 1.0 - std::norm(z);
  double log_abs2 = 0.0;
  for (const auto& a : zeros_) {
    const double q = (1.0 - std::norm(a.point)) * s / std::norm(1.0 - std::conj(a.point) * z);
    log_abs2 += a.mult * std::log1p(-std::min(q, 1.0));
  }
  return -std::expm1(log_abs2);
}

double BlaschkeProduct::log_density(Complex z) const {
  return log_abs_derivative(z) - std::log(one_minus_abs2(z));
}

Polynomial BlaschkeProduct::numerator() const {
  Polynomial p = Polynomial::constant(1.0);
  for (const auto& a : zeros_) p = p * Polynomial::linear_root(a.point).pow(a.mult);
  return p;
}

Polynomial BlaschkeProduct::denominator() const {
  Polynomial p = Polynomial::constant(1.0);
  for (const auto& a : zeros_) p = p * Polynomial({1.0, -std::conj(a.point)}).pow(a.mult);
  return p;
}

Polynomial BlaschkeProduct::reduced_derivative_numerator() const {
  Polynomial acc({0.0});
  for (std::size_t i = 0; i < zeros_.size(); ++i) {
    Polynomial term =
        Polynomial::constant(static_cast<double>(zeros_[i].mult) * (1.0 - std::norm(zeros_[i].point)));
    for (std::size_t j = 0; j < zeros_.size(); ++j) {
      if (j == i) continue;
      term = term * Polynomial::linear_root(zeros_[j].point) *
             Polynomial({1.0, -std::conj(zeros_[j].point)});
    }
    acc = acc + term;
  }
  return acc;
}

Complex eval(const BlaschkeProduct& b, Complex z) { return b(z); }
Complex derivative(const BlaschkeProduct& b, Complex z) { return b.derivative(z); }

std::vector<Zero> critical_points(const BlaschkeProduct& b) {
  if (b.degree() < 1) throw DomainError("critical_points requires degree >= 1");
  std::vector<Zero> out;
  for (const auto& a : b.zeros())
    if (a.mult > 1) out.push_back({a.point, a.mult - 1});

  const std::size_t k = b.zeros().size();
  if (k <= 1) return out;
  const Polynomial r = b.reduced_derivative_numerator();
  std::vector<Complex> roots = polynomial_roots(r);
  std::sort(roots.begin(), roots.end(),
            [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
  if (roots.size() < k - 1) throw ConvergenceError("critical point polynomial lost roots");
  roots.resize(k - 1);
  for (const auto& z : roots)
    if (!(std::abs(z) < 1.0)) throw ConvergenceError("critical point root left the disk");
  for (auto c : cluster_points(roots, kClusterTol)) {
    // A root of multiplicity m is a simple root of the (m-1)-th derivative.
    if (c.mult > 1) {
      Polynomial d = r;
      for (int k = 1; k < c.mult; ++k) d = d.derivative();
      const Polynomial dd = d.derivative();
      for (int it = 0; it < 6; ++it) {
        const Complex slope = dd(c.point);
        if (slope == Complex(0.0)) break;
        const Complex step = d(c.point) / slope;
        if (!(std::abs(step) < kClusterTol)) break;
        c.point -= step;
      }
    }
    out.push_back(c);
  }
  return out;
}

double boundary_log_derivative(const BlaschkeProduct& b, double theta) {
  if (b.origin_multiplicity() == 0)
    throw DomainError("boundary_log_derivative requires a zero at the origin");
  const Complex x = unit(theta);
  double acc = 0.0;
  for (const auto& a : b.zeros()) acc += a.mult * poisson_kernel_at(a.point, x);
  return std::log(acc);
}

Complex SingularInner::operator()(Complex z) const {
  if (!(std::abs(z) < 1.0)) throw DomainError("singular inner function requires |z| < 1");
  return std::exp(-mu_.herglotz(z));
}

double SingularInner::log_abs(Complex z) const {
  if (!(std::abs(z) < 1.0)) throw DomainError("singular inner function requires |z| < 1");
  return -mu_.poisson(z);
}

Complex SingularInner::derivative(Complex z) const {
  return -mu_.herglotz_derivative(z) * (*this)(z);
}

double SingularInner::log_abs_derivative(Complex z) const {
  return log_abs(z) + std::log(std::abs(mu_.herglotz_derivative(z)));
}

Complex eval_singular(const SingularInner& s, Complex z) { return s(z); }

OuterFromBoundary::OuterFromBoundary(std::vector<double> log_modulus) : h_(std::move(log_modulus)) {
  if (h_.empty()) throw DomainError("outer function needs at least one boundary sample");
  for (double v : h_)
    if (!std::isfinite(v)) throw DomainError("outer boundary data must be finite");
}

OuterFromBoundary OuterFromBoundary::from_function(const std::function<double(double)>& f,
                                                   int samples) {
  if (samples < 1) throw DomainError("samples must be >= 1");
  std::vector<double> h(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) h[static_cast<std::size_t>(k)] = f(kTwoPi * k / samples);
  return OuterFromBoundary(std::move(h));
}

double OuterFromBoundary::mean_log_modulus() const {
  return std::accumulate(h_.begin(), h_.end(), 0.0) / static_cast<double>(h_.size());
}

Complex OuterFromBoundary::operator()(Complex z) const {
  if (!(std::abs(z) < 1.0)) throw DomainError("outer function requires |z| < 1");
  const std::size_t m = h_.size();
  Complex acc{};
  for (std::size_t k = 0; k < m; ++k) {
    const Complex zeta = unit(kTwoPi * static_cast<double>(k) / static_cast<double>(m));
    acc += (zeta + z) / (zeta - z) * h_[k];
  }
  return std::exp(acc / static_cast<double>(m));
}

Complex outer_eval(const OuterFromBoundary& o, Complex z) { return o(z); }

Evaluator evaluator_of(const BlaschkeProduct& b) {
  Evaluator e;
  e.value = [b](Complex z) { return b(z); };
  e.log_abs = [b](Complex z) {
    double acc = 0.0;
    for (const auto& a : b.zeros())
      acc += a.mult * std::log(std::abs((z - a.point) / (1.0 - std::conj(a.point) * z)));
    return acc;
  };
  e.boundary_log_abs = [](double) { return 0.0; };
  for (const auto& a : b.zeros())
    if (std::abs(a.point) > 0.0) e.singular_angles.push_back(wrap_angle(std::arg(a.point)));
  e.inner = true;
  return e;
}

Evaluator derivative_evaluator_of(const BlaschkeProduct& b) {
  Evaluator e;
  e.value = [b](Complex z) { return b.derivative(z); };
  e.log_abs = [b](Complex z) { return b.log_abs_derivative(z); };
  e.boundary_log_abs = [b](double theta) {
    const Complex x = unit(theta);
    double acc = 0.0;
    for (const auto& a : b.zeros()) acc += a.mult * poisson_kernel_at(a.point, x);
    return std::log(acc);
  };
  for (const auto& a : b.zeros())
    if (std::abs(a.point) > 0.0) e.singular_angles.push_back(wrap_angle(std::arg(a.point)));
  return e;
}

namespace {

std::vector<double> measure_hints(const CircleMeasure& mu) {
  std::vector<double> out;
  for (const auto& a : mu.atoms()) out.push_back(a.angle);
  for (const auto& p : mu.cantor_parts()) {
    out.push_back(p.base.start);
    out.push_back(wrap_angle(p.base.end()));
  }
  if (mu.cantor_parts().empty() && mu.cells().size() <= 256)
    for (const auto& c : mu.cells()) {
      out.push_back(c.start);
      out.push_back(wrap_angle(c.end()));
    }
  return out;
}

}  // namespace

Evaluator evaluator_of(const SingularInner& s) {
  Evaluator e;
  e.value = [s](Complex z) { return s(z); };
  e.log_abs = [s](Complex z) { return s.log_abs(z); };
  e.boundary_log_abs = [](double) { return 0.0; };
  e.singular_angles = measure_hints(s.measure());
  e.inner = true;
  return e;
}

Evaluator derivative_evaluator_of(const SingularInner& s) {
  Evaluator e;
  e.value = [s](Complex z) { return s.derivative(z); };
  e.log_abs = [s](Complex z) { return s.log_abs_derivative(z); };
  e.boundary_log_abs = [s](double theta) {
    return std::log(std::abs(s.measure().herglotz_derivative(unit(theta))));
  };
  e.singular_angles = measure_hints(s.measure());
  return e;
}

Evaluator constant_evaluator(Complex c) {
  Evaluator e;
  e.value = [c](Complex) { return c; };
  const double l = std::log(std::abs(c));
  e.log_abs = [l](Complex) { return l; };
  e.boundary_log_abs = [l](double) { return l; };
  e.inner = std::abs(std::abs(c) - 1.0) < 1e-15;
  return e;
}

RadialLogIntegral radial_log_integral(const Evaluator& f, double r, int grid, bool positive_part) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("radial_log_integral requires 0 < r < 1");
  if (grid < 1) throw DomainError("grid must be >= 1");
  const double floor_log = std::log(1e-300);
  RadialLogIntegral out;
  double acc = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double v = f.log_modulus(std::polar(r, kTwoPi * k / grid));
    if (v < floor_log) ++out.underflow_samples;
    acc += positive_part ? std::max(v, 0.0) : v;
  }
  out.value = acc / grid;
  return out;
}

namespace {

// Panel breakpoints on [a, b]: uniform panels plus geometric refinement of
// scale `h` around each hint angle.
std::vector<double> panel_knots(double a, double b, int panels, const std::vector<double>& hints,
                                double h) {
  std::vector<double> knots;
  for (int p = 0; p <= panels; ++p) knots.push_back(a + (b - a) * p / panels);
  for (double s0 : hints) {
    for (int wrap = -1; wrap <= 2; ++wrap) {
      const double s = s0 + wrap * kTwoPi;
      if (s < a - kPi || s > b + kPi) continue;
      if (s > a && s < b) knots.push_back(s);
      for (double d = h; d < (b - a); d *= 4.0) {
        if (s - d > a && s - d < b) knots.push_back(s - d);
        if (s + d > a && s + d < b) knots.push_back(s + d);
      }
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  return knots;
}

template <class F>
double integrate_panels(F&& f, const std::vector<double>& knots, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
    if (knots[p + 1] <= knots[p]) continue;
    acc += gauss_kronrod<double, 21>::integrate(f, knots[p], knots[p + 1], 12, tol);
  }
  return acc;
}

// Value at h = 0 of the interpolating polynomial through (h_k, y_k).
double neville_at_zero(const std::vector<double>& h, const std::vector<double>& y) {
  std::vector<double> p = y;
  const std::size_t n = h.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
  return p[0];
}

}  // namespace

std::vector<double> dyadic_radii(int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min) throw DomainError("invalid dyadic radii range");
  std::vector<double> out;
  for (int k = k_min; k <= k_max; ++k) out.push_back(1.0 - std::ldexp(1.0, -k));
  return out;
}

GapEstimate gap_over_interval(const Evaluator& f, const Interval& i,
                              const std::vector<double>& radii, int grid, const GapOptions& opts) {
  if (radii.empty()) throw DomainError("radii schedule must be non-empty");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0 && radii[k] < 1.0)) throw DomainError("radii must lie in (0, 1)");
    if (k > 0 && !(radii[k] > radii[k - 1])) throw DomainError("radii must be increasing");
  }
  if (radii.back() < 0.999) throw DomainError("last radius must be >= 0.999");
  if (grid < 1) throw DomainError("grid must be >= 1");

  GapEstimate out;
  out.interval = i;
  out.radii_used = radii;
  const double a = i.start;
  const double b = i.start + i.length;

  if (f.inner) {
    out.boundary_term = 0.0;
  } else {
    auto g = [&](double t) {
      return f.boundary_log_abs ? f.boundary_log_abs(t) : f.log_modulus(unit(t));
    };
    const double h0 = 1.0 - radii.back();
    out.boundary_term =
        integrate_panels(g, panel_knots(a, b, grid, f.singular_angles, h0), opts.quad_tol) / kTwoPi;
  }

  std::vector<double> hs;
  for (double r : radii) {
    auto g = [&](double t) { return f.log_modulus(std::polar(r, t)); };
    const double h = 1.0 - r;
    out.radial_terms.push_back(
        integrate_panels(g, panel_knots(a, b, grid, f.singular_angles, h), opts.quad_tol) /
        kTwoPi);
    hs.push_back(h);
  }

  const std::size_t n = hs.size();
  const std::size_t q = std::min<std::size_t>(4, n);
  std::vector<double> ht(hs.end() - static_cast<long>(q), hs.end());
  std::vector<double> yt(out.radial_terms.end() - static_cast<long>(q), out.radial_terms.end());
  out.radial_limit_term = neville_at_zero(ht, yt);
  if (q >= 2) {
    std::vector<double> h2(ht.begin() + 1, ht.end());
    std::vector<double> y2(yt.begin() + 1, yt.end());
    out.extrapolation_error = std::abs(out.radial_limit_term - neville_at_zero(h2, y2));
  } else {
    out.extrapolation_error = std::numeric_limits<double>::infinity();
  }
  out.converged = out.extrapolation_error <= opts.tol * std::max(1.0, std::abs(out.radial_limit_term));
  out.gap = out.boundary_term - out.radial_limit_term;
  return out;
}

Evaluator frostman_shift(const Evaluator& f, Complex xi) {
  if (!(std::abs(xi) < 1.0)) throw DomainError("Frostman parameter must satisfy |xi| < 1");
  if (xi == Complex(0.0)) return f;
  Evaluator e;
  auto base = f.value;
  e.value = [base, xi](Complex z) {
    const Complex w = base(z);
    return (w - xi) / (1.0 - std::conj(xi) * w);
  };
  e.singular_angles = f.singular_angles;
  e.inner = f.inner;
  if (f.inner) e.boundary_log_abs = [](double) { return 0.0; };
  return e;
}

BlaschkeProduct frostman_shift(const BlaschkeProduct& b, Complex xi) {
  if (!(std::abs(xi) < 1.0)) throw DomainError("Frostman parameter must satisfy |xi| < 1");
  if (xi == Complex(0.0) || b.degree() == 0) {
    if (b.degree() == 0) {
      const Complex w = b.rotation();
      const Complex v = (w - xi) / (1.0 - std::conj(xi) * w);
      return BlaschkeProduct({}, v / std::abs(v));
    }
    return b;
  }
  const Polynomial p = b.numerator() * b.rotation() - b.denominator() * xi;
  std::vector<Complex> roots = polynomial_roots(p);
  std::vector<Zero> zeros = cluster_points(roots, kClusterTol);
  for (auto& z : zeros)
    if (!(std::abs(z.point) < 1.0)) throw ConvergenceError("Frostman shift root left the disk");
  BlaschkeProduct unrotated(zeros);
  const Complex candidates[] = {0.0, {0.5, 0.0}, {0.0, 0.5}, {-0.5, 0.0}, {0.0, -0.5}};
  Complex z0 = 0.0;
  double best = -1.0;
  for (const Complex c : candidates) {
    double dmin = 1e300;
    for (const auto& z : zeros) dmin = std::min(dmin, std::abs(c - z.point));
    if (dmin > best) {
      best = dmin;
      z0 = c;
    }
  }
  const Complex w = b(z0);
  const Complex target = (w - xi) / (1.0 - std::conj(xi) * w);
  const Complex rot = target / unrotated(z0);
  return BlaschkeProduct(zeros, rot / std::abs(rot));
}

BlaschkeApproximation blaschke_approximation_of_singular(const CircleMeasure& mu, int n) {
  if (n < 1) throw DomainError("approximation degree must be >= 1");
  if (!mu.is_atomic()) throw DomainError("blaschke_approximation_of_singular requires atomic μ");
  BlaschkeApproximation out;
  const auto& atoms = mu.atoms();
  if (atoms.empty()) return out;
  if (static_cast<std::size_t>(n) < atoms.size())
    throw DomainError("approximation degree must be at least the number of atoms");

  const double total = mu.total_mass();
  std::vector<double> ideal(atoms.size());
  std::vector<int> count(atoms.size());
  int used = 0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    ideal[k] = n * atoms[k].mass / total;
    count[k] = std::max(1, static_cast<int>(std::floor(ideal[k])));
    used += count[k];
  }
  while (used < n) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < atoms.size(); ++k)
      if (ideal[k] - count[k] > ideal[best] - count[best]) best = k;
    ++count[best];
    ++used;
  }
  while (used > n) {
    std::size_t best = atoms.size();
    for (std::size_t k = 0; k < atoms.size(); ++k)
      if (count[k] > 1 && (best == atoms.size() || ideal[k] - count[k] < ideal[best] - count[best]))
        best = k;
    --count[best];
    --used;
  }

  std::vector<Zero> zeros;
  Complex rotation = 1.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double radius = std::exp(-atoms[k].mass / count[k]);
    const Complex zeta = unit(atoms[k].angle);
    zeros.push_back({radius * zeta, count[k]});
    rotation *= std::pow(-std::conj(zeta), count[k]);
  }
  out.product = BlaschkeProduct(zeros, rotation);

  const SingularInner s(mu);
  for (int ir = 0; ir <= 8; ++ir) {
    const double r = 0.5 * ir / 8.0;
    for (int k = 0; k < 64; ++k) {
      const Complex z = std::polar(r, kTwoPi * k / 64.0);
      out.sup_deviation = std::max(out.sup_deviation, std::abs(out.product(z) - s(z)));
    }
  }
  return out;
}

}  // namespace innerlab
