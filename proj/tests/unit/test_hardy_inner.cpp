#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "innerlab/hardy_inner.hpp"
#include "innerlab/polynomial.hpp"

using namespace innerlab;
using doctest::Approx;

namespace {

BlaschkeProduct zeros_0_08() { return BlaschkeProduct({{0.0, 1}, {0.8, 1}}); }

BlaschkeProduct random_product(std::mt19937_64& rng, bool origin) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Zero> zs;
  if (origin) zs.push_back({0.0, 1});
  const int d = 1 + static_cast<int>(rng() % 5);
  for (int k = 0; k < d; ++k) zs.push_back({std::polar(0.95 * std::sqrt(u(rng)), kTwoPi * u(rng)), 1});
  return BlaschkeProduct(zs, std::polar(1.0, kTwoPi * u(rng)));
}

}  // namespace

TEST_CASE("polynomial arithmetic and roots") {
  const Polynomial p = Polynomial::linear_root(0.5) * Polynomial::linear_root(Complex(0.0, 2.0));
  CHECK(p.degree() == 2);
  CHECK(std::abs(p(0.5)) < 1e-15);
  CHECK(std::abs(p.derivative()(0.0) - (-0.5 - Complex(0.0, 2.0))) < 1e-15);
  auto roots = polynomial_roots(p);
  REQUIRE(roots.size() == 2);
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  CHECK(std::abs(roots[0] - 0.5) < 1e-13);
  CHECK(std::abs(roots[1] - Complex(0.0, 2.0)) < 1e-13);
  CHECK(polynomial_roots(Polynomial::linear_root(0.0).pow(3)).size() == 3);
}

TEST_CASE("Blaschke evaluation") {
  CHECK(std::abs(eval(BlaschkeProduct::identity(), 0.5) - 0.5) < 1e-16);
  CHECK(std::abs(eval(zeros_0_08(), 0.0)) == 0.0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const BlaschkeProduct b = random_product(rng, false);
    CHECK(std::abs(std::abs(eval(b, std::polar(1.0, 0.1 * t))) - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(BlaschkeProduct({{1.0, 1}}), DomainError);
  CHECK_THROWS_AS(BlaschkeProduct({{0.1, 0}}), DomainError);
  CHECK_THROWS_AS(BlaschkeProduct({}, 2.0), DomainError);
  CHECK(BlaschkeProduct().degree() == 0);
}

TEST_CASE("singular inner evaluation") {
  const SingularInner s(CircleMeasure::dirac(0.0, 1.0));
  CHECK(std::abs(eval_singular(s, 0.0) - std::exp(-1.0)) < 1e-15);
  CHECK(std::abs(eval_singular(s, 0.5) - std::exp(-3.0)) < 1e-15);
  CHECK(std::abs(eval_singular(SingularInner(), Complex(0.3, 0.2)) - 1.0) < 1e-15);
  CHECK(s.log_abs(Complex(0.2, 0.4)) == Approx(-poisson_extension(s.measure(), Complex(0.2, 0.4))));
  CHECK_THROWS_AS(eval_singular(s, 1.0), DomainError);
}

TEST_CASE("derivative matches closed forms and finite differences") {
  CHECK(std::abs(derivative(BlaschkeProduct::identity(), Complex(0.3, 0.1)) - 1.0) < 1e-15);
  CHECK(std::abs(derivative(BlaschkeProduct::monomial(2), 0.3) - 0.6) < 1e-15);
  const double a = 0.8;
  const double crit = (1.0 - std::sqrt(1.0 - a * a)) / a;
  CHECK(crit == Approx(0.5));
  CHECK(std::abs(derivative(zeros_0_08(), 0.5)) < 1e-15);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const BlaschkeProduct b = random_product(rng, false);
    const Complex z = std::polar(0.6, 0.7 * t);
    const double h = 1e-5;
    const Complex fd = (b(z + h) - b(z - h)) / (2.0 * h);
    CHECK(std::abs(b.derivative(z) - fd) < 1e-8);
  }
}

TEST_CASE("critical points") {
  CHECK(critical_points(BlaschkeProduct::identity()).empty());
  const auto z2 = critical_points(BlaschkeProduct::monomial(2));
  REQUIRE(z2.size() == 1);
  CHECK(std::abs(z2[0].point) < 1e-14);
  CHECK(z2[0].mult == 1);
  const auto c = critical_points(zeros_0_08());
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c[0].point - 0.5) < 1e-13);
  CHECK_THROWS_AS(critical_points(BlaschkeProduct()), DomainError);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const BlaschkeProduct b = random_product(rng, t % 2 == 0);
    int total = 0;
    for (const auto& p : critical_points(b)) {
      total += p.mult;
      CHECK(std::abs(p.point) < 1.0);
      CHECK(std::abs(b.derivative(p.point)) < 1e-10);
    }
    CHECK(total == b.degree() - 1);
  }
}

TEST_CASE("boundary log derivative") {
  CHECK(boundary_log_derivative(BlaschkeProduct::identity(), 1.3) == Approx(0.0));
  const BlaschkeProduct b = zeros_0_08();
  CHECK(boundary_log_derivative(b, 0.0) == Approx(std::log(10.0)).epsilon(1e-14));
  CHECK(boundary_log_derivative(b, kPi) == Approx(std::log(10.0 / 9.0)).epsilon(1e-14));
  CHECK_THROWS_AS(boundary_log_derivative(BlaschkeProduct({{0.5, 1}}), 0.0), DomainError);
  // Radial limit of log|B'|, extrapolated from r = 1 - h and 1 - 2h.
  const double h = 1e-5;
  const double f1 = b.log_abs_derivative(std::polar(1.0 - h, 0.7));
  const double f2 = b.log_abs_derivative(std::polar(1.0 - 2 * h, 0.7));
  CHECK(2 * f1 - f2 == Approx(boundary_log_derivative(b, 0.7)).epsilon(1e-6));
}

TEST_CASE("outer functions from boundary data") {
  const OuterFromBoundary zero(std::vector<double>(64, 0.0));
  CHECK(std::abs(outer_eval(zero, Complex(0.3, -0.2)) - 1.0) < 1e-14);
  const OuterFromBoundary c(std::vector<double>(64, 0.7));
  CHECK(std::abs(outer_eval(c, Complex(-0.5, 0.1)) - std::exp(0.7)) < 1e-13);
  CHECK_THROWS_AS(outer_eval(c, 1.0), DomainError);
  // Unstable configuration with n = 8: |out F'(0)| > 1.
  std::vector<Zero> zs{{0.0, 1}};
  for (int j = 0; j < 8; ++j) zs.push_back({std::polar(1.0 - 1.0 / 64.0, kTwoPi * j / 8), 1});
  const BlaschkeProduct f(zs);
  const auto o = OuterFromBoundary::from_function([&](double t) { return boundary_log_derivative(f, t); }, 1 << 14);
  CHECK(std::abs(outer_eval(o, 0.0)) > 1.0);
  CHECK(std::abs(outer_eval(o, 0.0)) == Approx(std::exp(o.mean_log_modulus())));
}

TEST_CASE("radial log integrals") {
  CHECK(radial_log_integral(constant_evaluator(2.5), 0.5, 64, false).value == Approx(std::log(2.5)));
  const Evaluator s = evaluator_of(SingularInner(CircleMeasure::dirac(0.0, 1.0)));
  for (double r : {0.3, 0.9, 0.99})
    CHECK(radial_log_integral(s, r, 4096, false).value == Approx(-1.0).epsilon(1e-9));
  const BlaschkeProduct b = zeros_0_08();
  const auto d = derivative_evaluator_of(b);
  const double r = 0.99;
  // Oracle: adaptive Gauss-Kronrod of log|B'(r e^{it})|.
  const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                         [&](double t) { return b.log_abs_derivative(std::polar(r, t)); }, -kPi, kPi, 15, 1e-13) /
                     kTwoPi;
  CHECK(radial_log_integral(d, r, 4096, false).value == Approx(ref).epsilon(1e-9));
}

TEST_CASE("gap functional") {
  const std::vector<double> radii = dyadic_radii(6, 14);
  const Evaluator s03 = evaluator_of(SingularInner(CircleMeasure::dirac(0.0, 0.3)));
  CHECK(gap_over_interval(s03, Interval::full_circle(), radii, 64).gap == Approx(0.3).epsilon(1e-6));
  const Evaluator s1 = evaluator_of(SingularInner(CircleMeasure::dirac(0.0, 1.0)));
  CHECK(std::abs(gap_over_interval(s1, Interval(kPi / 2, kPi), radii, 64).gap) < 1e-6);
  const auto g = gap_over_interval(s1, Interval(-0.5, 1.0), radii, 64);
  CHECK(g.gap == Approx(1.0).epsilon(1e-4));
  CHECK(g.gap == Approx(g.boundary_term - g.radial_limit_term));

  std::mt19937_64 rng(13);
  for (int t = 0; t < 4; ++t) {
    const BlaschkeProduct b = random_product(rng, true);
    const Interval iv(0.3 * t, 1.5);
    CHECK(std::abs(gap_over_interval(evaluator_of(b), iv, radii, 64).gap) < 1e-4);
    CHECK(gap_over_interval(derivative_evaluator_of(b), iv, radii, 64).gap > -1e-6);
  }
}

TEST_CASE("Frostman shifts") {
  const BlaschkeProduct b = zeros_0_08();
  const Evaluator e = evaluator_of(b);
  const Evaluator same = frostman_shift(e, 0.0);
  CHECK(std::abs(same.value(Complex(0.2, 0.3)) - b(Complex(0.2, 0.3))) < 1e-15);
  const Evaluator z = frostman_shift(evaluator_of(BlaschkeProduct::identity()), 0.5);
  CHECK(std::abs(z.value(0.5)) < 1e-16);
  const Evaluator sh = frostman_shift(e, Complex(0.3, -0.4));
  CHECK(std::abs(std::abs(sh.value(std::polar(1.0, 2.0))) - 1.0) < 1e-12);

  // Critical points survive post-composition with a disk automorphism.
  std::mt19937_64 rng(21);
  for (int t = 0; t < 10; ++t) {
    const BlaschkeProduct f = random_product(rng, false);
    const BlaschkeProduct g = frostman_shift(f, std::polar(0.4, 1.0 * t));
    auto a = critical_points(f);
    auto c = critical_points(g);
    REQUIRE(a.size() == c.size());
    for (const auto& p : a) {
      double best = 1.0;
      for (const auto& q : c) best = std::min(best, std::abs(p.point - q.point));
      CHECK(best < 1e-8);
    }
  }
}

TEST_CASE("Schwarz-Pick and Ahern-Clark sampling") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const BlaschkeProduct b = random_product(rng, true);
    const Complex z = std::polar(0.99 * std::sqrt(u(rng)), kTwoPi * u(rng));
    CHECK(std::abs(b.derivative(z)) / b.one_minus_abs2(z) <= 1.0 / (1.0 - std::norm(z)) + 1e-10);
    const double th = kTwoPi * u(rng);
    const double r = u(rng);
    CHECK(std::abs(b.derivative(std::polar(r, th))) <= 4.0 * std::abs(b.derivative(std::polar(1.0, th))) + 1e-9);
  }
}

TEST_CASE("Dyakonov inequality with the outer part of B'") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const BlaschkeProduct b = random_product(rng, true);
    const auto o = OuterFromBoundary::from_function([&](double th) { return boundary_log_derivative(b, th); }, 1 << 13);
    for (int q = 0; q < 100; ++q) {
      const Complex z = std::polar(0.8 * std::sqrt(u(rng)), kTwoPi * u(rng));
      CHECK((1.0 - std::abs(b(z))) / (1.0 - std::abs(z)) <= std::abs(outer_eval(o, z)) + 1e-6);
    }
  }
}

TEST_CASE("Blaschke approximation of singular inner functions") {
  const auto empty = blaschke_approximation_of_singular(CircleMeasure(), 8);
  CHECK(empty.product.degree() == 0);
  const CircleMeasure d = CircleMeasure::dirac(0.0, 1.0);
  const auto a64 = blaschke_approximation_of_singular(d, 64);
  CHECK(a64.product.degree() == 64);
  CHECK(std::abs(std::abs(a64.product(0.0)) - std::exp(-1.0)) < 0.05);
  CHECK(blaschke_approximation_of_singular(d, 128).sup_deviation <
        blaschke_approximation_of_singular(d, 32).sup_deviation);
  CHECK_THROWS_AS(blaschke_approximation_of_singular(CircleMeasure::cantor(Interval(0.0, 1.0), 0.3, 6, 1.0), 8), DomainError);
}
