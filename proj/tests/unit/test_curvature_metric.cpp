#include <doctest.h>

#include <cmath>
#include <random>

#include "innerlab/curvature_metric.hpp"
#include "innerlab/maximal_blaschke.hpp"

using namespace innerlab;
using doctest::Approx;

namespace {

// Largest |k + 4| over interior nodes with r in [r_min, r_max].
double curvature_error(const MetricGrid& g, double target, double r_min, double r_max) {
  const Eigen::MatrixXd k = curvature_residual(g);
  double worst = 0.0;
  for (int i = 0; i < g.radial_count(); ++i) {
    if (g.r_node(i) < r_min || g.r_node(i) > r_max) continue;
    for (int q = 0; q < g.angular_count(); ++q) worst = std::max(worst, std::abs(k(i, q) - target));
  }
  return worst;
}

std::vector<double> poincare_trace(double r, int m, double scale) {
  return std::vector<double>(static_cast<std::size_t>(m), std::log(scale / (1.0 - r * r)));
}

double max_abs_diff(const MetricGrid& a, const MetricGrid& b) {
  return (a.log_density() - b.log_density()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("Poincare grid values") {
  const MetricGrid g = poincare_grid({0.95, 32, 64});
  CHECK(g.u(0, 0) == Approx(0.0));
  CHECK(std::exp(g.log_density_at(0.5)) == Approx(4.0 / 3.0).epsilon(1e-6));
  CHECK(std::exp(log_poincare(0.9)) == Approx(1.0 / 0.19));
  CHECK(std::abs(g.r_node(g.radial_count()) - 0.95) < 1e-15);
}

TEST_CASE("grid construction validates shape") {
  CHECK_THROWS_AS(MetricGrid(1.0, 8, 16), DomainError);
  CHECK_THROWS_AS(MetricGrid(0.5, 1, 16), DomainError);
}

TEST_CASE("curvature of known metrics on a 128x256 grid") {
  const GridDims dims{0.95, 128, 256};
  CHECK(curvature_error(poincare_grid(dims), -4.0, 0.0, 1.0) < 5e-3);
  // The flat residual carries a (1 - r^2)^-2 factor on top of the stencil
  // truncation, so it needs the finer radial step.
  const MetricGrid flat = field_grid(*constant_field(1.0), {0.95, 256, 256});
  CHECK(curvature_error(flat, 0.0, 0.0, 1.0) < 5e-3);
  // Near the pseudometric zero at 0 the error is amplified by 1/|z|^2.
  const MetricGrid z2 = pullback_grid(BlaschkeProduct::monomial(2), dims);
  CHECK(curvature_error(z2, -4.0, 0.25, 1.0) < 5e-3);
}

TEST_CASE("pullback grids") {
  const GridDims dims{0.95, 32, 64};
  const MetricGrid id = pullback_grid(BlaschkeProduct::identity(), dims);
  CHECK(max_abs_diff(id, poincare_grid(dims)) < 1e-12);
  const MetricGrid z2 = pullback_grid(BlaschkeProduct::monomial(2), dims);
  CHECK(std::abs(std::exp(z2.log_density_at(0.5)) - 1.0 / (1.0 - 0.0625)) < 1e-4);
  const MetricGrid b = pullback_grid(BlaschkeProduct({{0.0, 1}, {0.8, 1}}), dims);
  REQUIRE(b.zero_set().zeros.size() == 1);
  CHECK(std::abs(b.zero_set().zeros[0].point - 0.5) < 1e-12);
  for (int i = 0; i <= b.radial_count(); ++i)
    for (int k = 0; k < b.angular_count(); ++k) CHECK(std::isfinite(b.u(i, k)));
}

TEST_CASE("SK checks") {
  const GridDims dims{0.95, 64, 128};
  CHECK(sk_check(poincare_grid(dims), 5e-3).ok);
  const MetricGrid scaled = field_grid(*poincare_field(1.1), dims);
  const SkReport s = sk_check(scaled, 5e-3);
  CHECK_FALSE(s.ok);
  CHECK(s.worst_curvature == Approx(-4.0 / 1.21).epsilon(1e-2));

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    std::vector<Zero> c;
    for (int q = 0; q < 2; ++q) c.push_back({std::polar(0.6 * std::sqrt(u(rng)), kTwoPi * u(rng)), 1});
    const ZeroSetAnnotation a{c};
    CHECK(sk_check(kraus_grid(a, dims), 5e-3).ok);
  }
}

TEST_CASE("maxima of SK metrics stay SK, minima do not") {
  const GridDims dims{0.95, 64, 128};
  const MetricGrid f1 = pullback_grid(heins_inverse(CriticalSet::make({{0.5, 1}})), dims);
  const MetricGrid f2 = pullback_grid(heins_inverse(CriticalSet::make({{-0.5, 1}})), dims);
  // The ridge of a maximum carries extra negative curvature; of a minimum, positive.
  const SkReport mx = sk_check(pointwise_max(f1, f2), 0.25);
  CHECK(mx.ok);
  const SkReport mn = sk_check(pointwise_min(f1, f2), 0.25);
  CHECK_FALSE(mn.ok);
  CHECK(mn.worst_curvature > 0.0);
}

TEST_CASE("Liouville solver") {
  const double r = 0.9;
  const int n = 64;
  const int m = 128;
  SUBCASE("Poincare trace is fixed") {
    const MetricGrid g = solve_liouville(r, poincare_trace(r, m, 1.0), n);
    CHECK(max_abs_diff(g, poincare_grid({r, n, m})) < 1e-6);
  }
  SUBCASE("scaled trace gives a Mobius-scaled Poincare metric") {
    const double c = 0.5;
    // (a)/(1 - a^2 r^2) = c/(1 - r^2) with a = r'/r; positive root of the quadratic.
    const double k = c / (1.0 - r * r);
    const double a = (-1.0 + std::sqrt(1.0 + 4.0 * k * k * r * r)) / (2.0 * k * r * r);
    CHECK(a * r == Approx(0.8110).epsilon(1e-3));
    const MetricGrid g = solve_liouville(r, poincare_trace(r, m, c), n);
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double rr = g.r_node(i);
      const double exact = std::log(a / (1.0 - a * a * rr * rr));
      worst = std::max(worst, std::abs(std::exp(g.u(i, 0) - exact) - 1.0));
    }
    CHECK(worst < 1e-3);
  }
  SUBCASE("constant data: origin value increases toward 1/r") {
    const double rr = 0.99;
    double prev = 0.0;
    for (double big : {1.0, 10.0, 100.0}) {
      const MetricGrid g = solve_liouville(rr, std::vector<double>(m, std::log(big)), n);
      const double v = std::exp(g.u(0, 0));
      const double a = (-1.0 + std::sqrt(1.0 + 4.0 * big * big * rr * rr)) / (2.0 * big * rr * rr);
      CHECK(v > prev);
      CHECK(v < 1.0 / rr);
      CHECK(std::abs(v / a - 1.0) < 1e-3);
      prev = v;
    }
  }
  SUBCASE("solution does not depend on the initial guess") {
    const auto trace = poincare_trace(r, m, 0.7);
    const MetricGrid a = solve_liouville(r, trace, n);
    const MetricGrid seed = poincare_grid({r, n, m});
    const MetricGrid b = solve_liouville(r, trace, n, &seed);
    CHECK(max_abs_diff(a, b) < 1e-8);
  }
  SUBCASE("monotone in the boundary data and bounded by the Poincare metric") {
    std::vector<double> lo(m);
    std::vector<double> hi(m);
    for (int k = 0; k < m; ++k) {
      lo[static_cast<std::size_t>(k)] = std::log(0.5 / (1 - r * r)) + 0.3 * std::sin(3.0 * kTwoPi * k / m);
      hi[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)] + 0.2 + 0.1 * std::cos(kTwoPi * k / m);
    }
    const MetricGrid a = solve_liouville(r, lo, n);
    const MetricGrid b = solve_liouville(r, hi, n);
    const MetricGrid p = poincare_grid({r, n, m});
    CHECK((b.log_density() - a.log_density()).minCoeff() > -1e-10);
    CHECK((p.log_density() - b.log_density()).minCoeff() > -1e-8);
  }
  SUBCASE("non-finite data is rejected") {
    auto bad = poincare_trace(r, m, 1.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(solve_liouville(r, bad, n), DomainError);
  }
}

TEST_CASE("hull") {
  HullOptions o;
  o.dims = {0.95, 32, 64};
  o.radii = {0.5, 0.75, 0.875, 0.9375};
  SUBCASE("of the Poincare metric") {
    const HullResult h = hull(*poincare_field(), o);
    CHECK(h.origin_values.back() == Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("sandwich for half the Poincare metric") {
    const HullResult h = hull(*poincare_field(0.5), o);
    for (int i = 0; i <= h.grid.radial_count(); ++i) {
      const double lp = log_poincare(h.grid.r_node(i));
      CHECK(h.grid.u(i, 0) >= std::log(0.5) + lp - 1e-8);
      CHECK(h.grid.u(i, 0) <= lp + 1e-8);
    }
    for (std::size_t k = 1; k < h.origin_values.size(); ++k)
      CHECK(h.origin_values[k] >= h.origin_values[k - 1] - 1e-9);
  }
  SUBCASE("idempotent") {
    const HullResult h = hull(*poincare_field(0.5), o);
    HullOptions o2 = o;
    // Interpolating the first hull grid is not exactly SK between nodes.
    o2.monotone_tol = 1e-3;
    const HullResult hh = hull(*grid_field(h.grid), o2);
    CHECK(std::abs(hh.origin_values.back() - h.origin_values.back()) < 1e-8);
  }
  SUBCASE("a small atom barely moves the origin value") {
    HullOptions big;
    big.dims = {1.0 - 1.0 / 4096, 64, 128};
    const HullResult h = hull(*singular_weighted_field(CircleMeasure::dirac(0.0, 0.05), poincare_field()), big);
    CHECK(std::abs(h.origin_values.back() - 1.0) < 0.05);
  }
}

TEST_CASE("Perron modification") {
  const GridDims dims{0.95, 64, 128};
  const MetricGrid p = poincare_grid(dims);
  CHECK(max_abs_diff(perron_modify(p, 0.0, 0.3), p) < 1e-8);
  const MetricGrid g = field_grid(*poincare_field(0.9), dims);
  const MetricGrid m = perron_modify(g, 0.0, 0.3);
  CHECK(m.u(0, 0) > g.u(0, 0) + 1e-4);
  double outside = 0.0;
  for (int i = 0; i <= dims.radial; ++i)
    if (g.r_node(i) > 0.35)
      for (int k = 0; k < dims.angular; ++k) outside = std::max(outside, std::abs(m.u(i, k) - g.u(i, k)));
  CHECK(outside < 1e-12);
  CHECK(max_abs_diff(pointwise_max(g, m), m) < 1e-12);
  CHECK_THROWS_AS(perron_modify(g, 0.8, 0.3), DomainError);
}

TEST_CASE("wedge") {
  const GridDims dims{0.95, 32, 64};
  const MetricGrid f = pullback_grid(heins_inverse(CriticalSet::make({{0.5, 1}})), dims);
  // The wedge is a discrete solve, f is sampled: they agree to truncation error.
  CHECK(max_abs_diff(wedge(f, f), f) < 1e-3);
  CHECK(max_abs_diff(wedge(poincare_grid(dims), f), f) < 1e-3);
}

TEST_CASE("Fundamental Lemma: pullbacks dominate |B_C| lambda_D") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MetricGrid shape(0.99, 32, 64);
  for (int t = 0; t < 10; ++t) {
    std::vector<Zero> zs;
    const int d = 2 + static_cast<int>(rng() % 4);
    for (int q = 0; q < d; ++q) zs.push_back({std::polar(0.8 * std::sqrt(u(rng)), kTwoPi * u(rng)), 1});
    const BlaschkeProduct b(zs);
    const ZeroSetAnnotation c{critical_points(b)};
    for (int i = 0; i <= shape.radial_count(); ++i)
      for (int k = 0; k < shape.angular_count(); ++k) {
        const Complex z = shape.point(i, k);
        const double lhs = std::exp(b.log_density(z));
        const double rhs = std::exp(c.log_abs_blaschke(z) + log_poincare(z));
        CHECK(lhs >= rhs - 1e-6);
      }
  }
}
