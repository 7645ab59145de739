#include <doctest.h>

#include <cmath>
#include <random>

#include "innerlab/maximal_blaschke.hpp"

using namespace innerlab;
using doctest::Approx;

namespace {

CriticalSet random_set(std::mt19937_64& rng, int total) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Zero> pts;
  for (int k = 0; k < total; ++k) pts.push_back({std::polar(0.7 * std::sqrt(u(rng)), kTwoPi * u(rng)), 1});
  return CriticalSet::make(pts);
}

}  // namespace

TEST_CASE("critical set validation") {
  CHECK_THROWS_AS(CriticalSet::make({{1.0, 1}}), DomainError);
  CHECK_THROWS_AS(CriticalSet::make({{0.2, 0}}), DomainError);
  const CriticalSet c = CriticalSet::make({{0.2, 1}, {0.2, 2}, {0.3, 1}});
  CHECK(c.total_multiplicity() == 4);
  CHECK(c.degree() == 5);
  const CriticalSet a = CriticalSet::make({{0.2, 2}, {0.5, 1}});
  const CriticalSet b = CriticalSet::make({{0.2, 1}, {-0.5, 1}});
  CHECK(CriticalSet::united(a, b).total_multiplicity() == 4);
  CHECK(CriticalSet::intersected(a, b).total_multiplicity() == 1);
}

TEST_CASE("Heins inverse: closed forms") {
  const BlaschkeProduct id = heins_inverse(CriticalSet{});
  CHECK(id.degree() == 1);
  CHECK(std::abs(id(0.3) - 0.3) < 1e-14);

  const BlaschkeProduct z4 = heins_inverse(CriticalSet::make({{0.0, 3}}));
  CHECK(z4.degree() == 4);
  CHECK(std::abs(z4(Complex(0.3, 0.4)) - std::pow(Complex(0.3, 0.4), 4)) < 1e-12);

  const BlaschkeProduct f = heins_inverse(CriticalSet::make({{0.5, 1}}));
  REQUIRE(f.degree() == 2);
  const double a = 2.0 * 0.5 / (1.0 + 0.25);
  double nonzero = -1.0;
  for (const auto& z : f.zeros())
    if (std::abs(z.point) > 1e-12) nonzero = std::abs(z.point - a);
  CHECK(nonzero >= 0.0);
  CHECK(nonzero < 1e-10);
  CHECK(std::abs(f(0.0)) < 1e-14);
  const Complex d0 = f.derivative(0.0);
  CHECK(d0.real() > 0.0);
  CHECK(std::abs(d0.imag()) < 1e-12);
}

TEST_CASE("Heins inverse: round trips and path independence") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    const CriticalSet c = random_set(rng, 1 + t % 5);
    const BlaschkeProduct f = heins_inverse(c);
    CHECK(critical_set_distance(critical_points(f), c.points) < 1e-8);
    ContinuationOptions fine;
    fine.initial_step = 0.01;
    const BlaschkeProduct g = heins_inverse(c, fine);
    std::vector<Zero> fz = f.zeros();
    CHECK(critical_set_distance(fz, g.zeros()) < 1e-8);
  }
  CHECK_THROWS_AS(heins_inverse(CriticalSet::make({{0.1, 12}})), DomainError);
}

TEST_CASE("critical set distance") {
  CHECK(critical_set_distance({{0.1, 2}}, {{0.1, 1}, {0.1, 1}}) == 0.0);
  CHECK(std::isinf(critical_set_distance({{0.1, 1}}, {})));
  CHECK(critical_set_distance({{0.1, 1}}, {{0.2, 1}}) == Approx(0.1));
}

TEST_CASE("Kraus residual") {
  const std::vector<double> radii = dyadic_radii(4, 12);
  const KrausResidual zd = kraus_residual(BlaschkeProduct::monomial(3), CriticalSet::make({{0.0, 2}}), radii);
  CHECK(std::abs(zd.values.back()) < 1e-3);
  const CriticalSet c = CriticalSet::make({{0.5, 1}});
  const KrausResidual h = kraus_residual(heins_inverse(c), c, radii);
  CHECK(std::abs(h.values.back()) < 1e-3);
  for (std::size_t k = 1; k < h.values.size(); ++k) CHECK(std::abs(h.values[k]) <= std::abs(h.values[k - 1]) + 1e-12);
  // Post-composition with a disk automorphism keeps both the critical set and maximality.
  const KrausResidual s = kraus_residual(frostman_shift(heins_inverse(c), Complex(0.3, 0.2)), c, radii);
  CHECK(std::abs(s.values.back()) < 1e-3);
  CHECK_THROWS_AS(kraus_residual(heins_inverse(c), CriticalSet::make({{-0.5, 1}}), radii), DomainError);
}

TEST_CASE("Solynin inequality") {
  const GridDims dims{0.99, 32, 64};
  const CriticalSet a = CriticalSet::make({{0.5, 1}});
  const CriticalSet b = CriticalSet::make({{-0.5, 1}});
  CHECK(solynin_check(a, a, dims).margin == Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(std::abs(solynin_check(CriticalSet{}, b, dims).margin) < 1e-12);
  const SolyninReport coarse = solynin_check(a, b, dims);
  const SolyninReport fine = solynin_check(a, b, {0.99, 64, 128});
  CHECK(coarse.pass);
  CHECK(fine.margin >= -1e-6);
}

TEST_CASE("monotone degree: more critical points give a smaller metric") {
  std::mt19937_64 rng(37);
  const MetricGrid shape(0.98, 24, 48);
  for (int t = 0; t < 5; ++t) {
    const CriticalSet c = random_set(rng, 2);
    const CriticalSet cp = CriticalSet::united(c, random_set(rng, 1));
    const BlaschkeProduct f = heins_inverse(c);
    const BlaschkeProduct g = heins_inverse(cp);
    for (int i = 0; i <= shape.radial_count(); ++i)
      for (int k = 0; k < shape.angular_count(); ++k) {
        const Complex z = shape.point(i, k);
        CHECK(std::exp(g.log_density(z)) <= std::exp(f.log_density(z)) + 1e-6);
      }
  }
}

TEST_CASE("wedge-union law: trivial cases") {
  const GridDims dims{0.95, 32, 64};
  CHECK(wedge_union_check(CriticalSet{}, CriticalSet{}, dims).deviation < 1e-9);
  CHECK(wedge_union_check(CriticalSet::make({{0.5, 1}}), CriticalSet{}, dims).deviation < 1e-3);
}
