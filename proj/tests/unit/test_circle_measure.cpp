#include <doctest.h>

#include <cmath>
#include <random>

#include "innerlab/circle_measure.hpp"

using namespace innerlab;
using doctest::Approx;

namespace {

CircleMeasure thirds_on_unit_arc() {
  return CircleMeasure::cantor(Interval(0.0, 1.0), 1.0 / 3.0, 12, 1.0);
}

}  // namespace

TEST_CASE("interval construction normalizes and validates") {
  const Interval i(-0.5, 1.0);
  CHECK(i.start == Approx(kTwoPi - 0.5));
  CHECK(i.contains(0.25));
  CHECK_FALSE(i.contains(0.5));
  CHECK(Interval::full_circle().normalized_length() == 1.0);
  CHECK_THROWS_AS(Interval(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(Interval(0.0, 7.0), DomainError);
}

TEST_CASE("total mass") {
  CHECK(total_mass(CircleMeasure()) == 0.0);
  const CircleMeasure a = CircleMeasure::dirac(0.0, 0.3);
  CHECK(total_mass(a) == Approx(0.3));
  const CircleMeasure both({Atom{0.0, 0.3}}, {CantorPart{Interval(0.0, 1.0), 1.0 / 3.0, 12, 0.7}});
  CHECK(std::abs(total_mass(both) - 1.0) < 1e-12);
}

TEST_CASE("construction rejects invalid data and merges atoms") {
  CHECK_THROWS_AS(CircleMeasure({Atom{0.0, -1.0}}), DomainError);
  CHECK_THROWS_AS(CircleMeasure({}, {CantorPart{Interval(0.0, 1.0), 1.5, 12, 1.0}}), DomainError);
  CHECK_THROWS_AS(CircleMeasure({}, {CantorPart{Interval(0.0, 1.0), 0.3, 0, 1.0}}), DomainError);
  const CircleMeasure m({Atom{1.0, 0.2}, Atom{1.0 + kTwoPi, 0.3}});
  REQUIRE(m.atoms().size() == 1);
  CHECK(m.atoms()[0].mass == Approx(0.5));
}

TEST_CASE("interval mass: atoms and half-open endpoints") {
  const CircleMeasure d = CircleMeasure::dirac(0.0, 1.0);
  CHECK(interval_mass(d, Interval(-0.1, 0.2)) == 1.0);
  CHECK(interval_mass(d, Interval(0.5, 0.5)) == 0.0);
  CHECK(interval_mass(d, Interval(0.0, 0.5)) == 1.0);
  CHECK(interval_mass(d, Interval(-0.5, 0.5)) == 0.0);
}

TEST_CASE("interval mass: Cantor left third carries half the mass") {
  const CircleMeasure c = thirds_on_unit_arc();
  CHECK(interval_mass(c, Interval(0.0, 1.0 / 3.0)) == Approx(0.5).epsilon(1e-12));
  CHECK(interval_mass(c, Interval(0.0, 1.0 / 9.0)) == Approx(0.25).epsilon(1e-12));
  CHECK(interval_mass(c, Interval(1.0 / 3.0, 1.0 / 3.0)) == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("interval mass is additive over partitions") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 5; ++k) atoms.push_back({kTwoPi * u(rng), u(rng)});
    const CircleMeasure m(atoms, {CantorPart{Interval(kTwoPi * u(rng), 2.0), 0.4, 10, u(rng)}});
    const int parts = 7;
    double offset = kTwoPi * u(rng);
    double sum = 0.0;
    for (int p = 0; p < parts; ++p) sum += interval_mass(m, Interval(offset + kTwoPi * p / parts, kTwoPi / parts));
    CHECK(std::abs(sum - m.total_mass()) < 1e-6);
    const CircleMeasure a(atoms);
    double atom_sum = 0.0;
    for (int p = 0; p < parts; ++p) atom_sum += interval_mass(a, Interval(offset + kTwoPi * p / parts, kTwoPi / parts));
    CHECK(std::abs(atom_sum - a.total_mass()) < 1e-12);
  }
}

TEST_CASE("modulus of continuity") {
  CHECK(modulus_of_continuity(CircleMeasure::dirac(2.0, 1.0), 0.01, 8) == Approx(1.0));
  const CircleMeasure two({Atom{0.0, 0.5}, Atom{kPi, 0.5}});
  CHECK(modulus_of_continuity(two, 0.1, 16) == Approx(0.5));
  const CircleMeasure c = thirds_on_unit_arc();
  CHECK(modulus_of_continuity(c, 1.0 / 3.0, 64) == Approx(0.5).epsilon(1e-9));
  double prev = 0.0;
  for (double t = 0.01; t < 1.0; t *= 1.7) {
    const double w = modulus_of_continuity(c, t, 64);
    CHECK(w >= prev - 1e-15);
    prev = w;
  }
}

TEST_CASE("Poisson extension") {
  const CircleMeasure d = CircleMeasure::dirac(0.0, 1.0);
  CHECK(poisson_extension(d, 0.5) == Approx(3.0).epsilon(1e-14));
  CHECK(poisson_extension(CircleMeasure::dirac(kPi, 1.0), 0.5) == Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(poisson_extension(d, 1.0), DomainError);
  CHECK_THROWS_AS(poisson_extension(d, Complex(0.8, 0.8)), DomainError);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Atom> atoms;
    const int na = static_cast<int>(rng() % 4);
    for (int k = 0; k < na; ++k) atoms.push_back({kTwoPi * u(rng), u(rng)});
    std::vector<CantorPart> parts;
    if (trial % 3 == 0) parts.push_back({Interval(kTwoPi * u(rng), 1.0 + u(rng)), 0.2 + 0.6 * u(rng), 8, u(rng)});
    const CircleMeasure m(atoms, parts);
    CHECK(std::abs(poisson_extension(m, 0.0) - m.total_mass()) < 1e-10);
    if (m.total_mass() > 0.0) CHECK(poisson_extension(m, std::polar(0.95, kTwoPi * u(rng))) > 0.0);
  }
}

TEST_CASE("Poisson extension of a Cantor part matches brute-force cell quadrature") {
  const CircleMeasure c = thirds_on_unit_arc();
  const Complex z = std::polar(0.9, 0.4);
  // Independent oracle: midpoint rule inside every materialized cell.
  double ref = 0.0;
  for (const auto& cell : c.cells()) {
    const int q = 64;
    for (int k = 0; k < q; ++k) {
      const double t = cell.start + cell.length * (k + 0.5) / q;
      ref += cell.mass / q * (1.0 - std::norm(z)) / std::norm(std::polar(1.0, t) - z);
    }
  }
  CHECK(poisson_extension(c, z) == Approx(ref).epsilon(1e-8));
}

TEST_CASE("Beurling-Carleson entropy") {
  CHECK(bc_entropy(GapList()).total() == 0.0);
  const GapList one({Interval(0.0, kTwoPi / std::exp(1.0))});
  CHECK(bc_entropy(one).total() == Approx(1.0 / std::exp(1.0)).epsilon(1e-12));

  const CantorPart full{Interval::full_circle(), 1.0 / 3.0, 12, 1.0};
  const GapList gaps = cantor_gap_list(full);
  // Geometric-series oracle: level n has 2^{n-1} gaps of normalized length 3^{-n}.
  double oracle = 0.0;
  for (int n = 1; n <= 40; ++n)
    oracle += std::ldexp(1.0, n - 1) * std::pow(3.0, -n) * n * std::log(3.0);
  CHECK(oracle == Approx(3.0 * std::log(3.0)).epsilon(1e-6));
  CHECK(bc_entropy(gaps).total() == Approx(oracle).epsilon(1e-6));

  CHECK(is_beurling_carleson(gaps, 0.0, 1e-6).is_bc);
  const double two_pi_minus = kTwoPi * (1.0 - 1e-12);
  CHECK(is_beurling_carleson(GapList({Interval(0.0, two_pi_minus)}), 0.0, 1e-9).is_bc);
  CHECK_FALSE(is_beurling_carleson(gaps, std::numeric_limits<double>::infinity(), 1e-6).is_bc);
}

TEST_CASE("complement of arcs merges overlaps") {
  const std::vector<Interval> arcs{Interval(0.0, 1.0), Interval(0.5, 1.0), Interval(3.0, 0.5)};
  const GapList g = complement_of_arcs(arcs);
  REQUIRE(g.gaps.size() == 2);
  CHECK(g.covered_total == Approx(kTwoPi - 2.0));
}

TEST_CASE("arc Poisson integral") {
  CHECK(arc_poisson(0.0, kTwoPi, Complex(0.3, 0.4)) == Approx(kTwoPi).epsilon(1e-12));
  CHECK(arc_poisson(0.0, kPi, 0.0) == Approx(kPi).epsilon(1e-12));
}
