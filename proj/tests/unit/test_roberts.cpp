#include <doctest.h>

#include <cmath>

#include "innerlab/roberts.hpp"

using namespace innerlab;
using doctest::Approx;

namespace {

// n_j = 2^{2^{j+j0}}; heavy arcs receive (c/n_j) log n_j.
double assigned(double c, int j, int j0) {
  const double log2n = std::ldexp(1.0, j + j0);
  return c * log2n * std::log(2.0) * std::exp2(-log2n);
}

CircleMeasure cantor_full() { return CircleMeasure::cantor(Interval::full_circle(), 1.0 / 3.0, 12, 1.0); }

}  // namespace

TEST_CASE("parameters") {
  RobertsParams p;
  CHECK(p.log2_n(1) == 4.0);
  CHECK(p.n(2) == 256.0);
  CHECK(p.n_u64(3) == 65536u);
  CHECK(p.threshold(1) == Approx(0.01 * 4.0 * std::log(2.0) / 16.0));
  CHECK(p.arc_length(1) == Approx(kTwoPi / 16.0));
  CHECK_FALSE(p.n_fits_u64(6));
  RobertsParams bad;
  bad.c = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = RobertsParams{};
  bad.j_max = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("grate_level on an atom") {
  RobertsParams p;
  p.c = 0.1;
  const LevelResult r = grate_level(CircleMeasure::dirac(0.0, 1.0), 1, p);
  CHECK(r.piece.total_mass() == Approx(assigned(0.1, 1, 1)).epsilon(1e-14));
  CHECK(r.remainder.total_mass() == Approx(1.0 - assigned(0.1, 1, 1)).epsilon(1e-14));
  REQUIRE(r.ledger.size() == 1);
  CHECK(r.ledger[0].cls == ArcClass::heavy);
  CHECK(r.heavy_arcs.size() == 1);
}

TEST_CASE("grate_level trivial cases") {
  const RobertsParams p;
  const LevelResult z = grate_level(CircleMeasure(), 1, p);
  CHECK(z.piece.total_mass() == 0.0);
  CHECK(z.remainder.total_mass() == 0.0);
  const CircleMeasure tiny({Atom{0.1, 1e-6}, Atom{3.0, 2e-6}});
  const LevelResult l = grate_level(tiny, 1, p);
  CHECK(l.piece.total_mass() == Approx(3e-6));
  CHECK(l.remainder.total_mass() == Approx(0.0).scale(1.0).epsilon(1e-18));
  for (const auto& e : l.ledger) CHECK(e.cls == ArcClass::light);
}

TEST_CASE("decomposition residual of an atom") {
  for (double c : {0.1, 0.01}) {
    RobertsParams p;
    p.c = c;
    const GratingResult g = roberts_decompose(CircleMeasure::dirac(0.0, 1.0), p);
    double oracle = 1.0;
    for (int j = 1; j <= 3; ++j) oracle -= assigned(c, j, 1);
    CHECK(g.residual.total_mass() == Approx(oracle).epsilon(1e-13));
    CHECK(g.mass_defect <= 1e-10);
  }
  RobertsParams p;
  p.c = 0.1;
  CHECK(verify_mod_cont(grate_level(CircleMeasure::dirac(0.0, 1.0), 1, p).piece, 1, p).margin ==
        Approx(0.0).scale(1.0).epsilon(1e-16));
  CHECK(verify_mod_cont(CircleMeasure(), 2, p).margin == Approx(p.threshold(2)));
}

TEST_CASE("decomposition of the zero measure") {
  const GratingResult g = roberts_decompose(CircleMeasure(), {});
  CHECK(g.residual.total_mass() == 0.0);
  for (const auto& piece : g.pieces) CHECK(piece.total_mass() == 0.0);
}

TEST_CASE("Cantor decomposition: conservation, certificates, carrier") {
  const RobertsParams p;
  const CircleMeasure mu = cantor_full();
  const GratingResult g = roberts_decompose(mu, p);
  CHECK(g.mass_defect <= 1e-10);
  CHECK(g.residual.total_mass() > 0.5);
  for (const auto& c : g.certificates) {
    CHECK(c.margin >= -1e-12);
    CHECK(c.straddle_ratio <= 2.0 + 1e-12);
  }
  // Independent check of the aligned maximum on level 1 by brute force over all 16 arcs.
  double brute = 0.0;
  for (int k = 0; k < 16; ++k)
    brute = std::max(brute, interval_mass(g.pieces[0], Interval(kTwoPi * k / 16, kTwoPi / 16)));
  CHECK(max_aligned_arc_mass(g.pieces[0], 1, p) == Approx(brute).epsilon(1e-12));
  CHECK(bc_entropy(residual_carrier_gaps(g)).finite);
  // ω(t) ~ t^{log 2/log 3} dominates t log(1/t), so heavy arcs persist at every level.
  for (const auto& arcs : g.heavy_arcs) CHECK_FALSE(arcs.empty());
}

TEST_CASE("Poisson log bound") {
  const RobertsParams p;
  CHECK(poisson_log_bound(CircleMeasure(), 1, p).ratio == 0.0);
  const LevelResult r = grate_level(CircleMeasure::dirac(0.0, 1.0), 1, p);
  const PoissonLogBound b = poisson_log_bound(r.piece, 1, p);
  CHECK(b.ratio < 0.1);
  CHECK(b.below_step2);
  const PoissonLogBound b2 = poisson_log_bound(r.piece.scaled(2.0), 1, p);
  CHECK(b2.ratio == Approx(2.0 * b.ratio).epsilon(1e-12));
}

TEST_CASE("surrogate radii") {
  const auto r = surrogate_radii({}, 3);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == Approx(1.0 - 1.0 / 16.0));
  CHECK(r[1] == Approx(1.0 - 1.0 / 256.0));
  CHECK(r[2] == Approx(1.0 - 1.0 / 4096.0));
}

TEST_CASE("invisibility iteration") {
  InvisibilityOptions o;
  o.dims = {0.95, 32, 64};
  SUBCASE("zero pieces reproduce the Poincare metric") {
    const std::vector<CircleMeasure> pieces(2);
    const InvisibilityTrace t = invisibility_iterate(pieces, {0.75, 0.875}, o);
    for (double v : t.origin_values) CHECK(v == Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("a tiny atom is nearly invisible") {
    const InvisibilityTrace t = invisibility_iterate({CircleMeasure::dirac(0.0, 1e-3)}, {0.9375}, o);
    CHECK(std::abs(t.origin_values[0] - 1.0) < 0.05);
  }
  SUBCASE("radii must be non-decreasing") {
    CHECK_THROWS_AS(invisibility_iterate({CircleMeasure(), CircleMeasure()}, {0.9, 0.8}, o), DomainError);
  }
  SUBCASE("a heavy piece violates the Step-2 certificate") {
    CHECK_THROWS_AS(invisibility_iterate({CircleMeasure::dirac(0.0, 5.0)}, {0.9375}, o), CertificateError);
  }
}

TEST_CASE("Step-3 scaling") {
  CHECK(step3_scalar_ell(0.0) == 1.0);
  const Step3Result s = step3_scaling({1e-2, 3e-3, 1e-3, 3e-4, 1e-4}, 256);
  CHECK(s.slope >= 0.75);
  CHECK(s.slope <= 0.85);
  // Doubling ε shifts log(1 - ℓ) by about slope·log 2.
  const double a = 1.0 - step3_scalar_ell(1e-3);
  const double b = 1.0 - step3_scalar_ell(2e-3);
  CHECK(std::log(b / a) == Approx(s.scalar_slope * std::log(2.0)).epsilon(0.02));
  CHECK_THROWS_AS(step3_scaling({0.5}), DomainError);
}
