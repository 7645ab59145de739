#include "innerlab/experiments.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "innerlab/parallel.hpp"

namespace innerlab {

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Complex random_disk_point(Rng& rng, double max_radius) {
  const double r = max_radius * std::sqrt(uniform01(rng));
  return std::polar(r, kTwoPi * uniform01(rng));
}

std::string describe(const std::vector<Zero>& pts) {
  std::ostringstream out;
  out << '{';
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) out << "; ";
    out << format_number(pts[k].point.real()) << (pts[k].point.imag() < 0 ? "" : "+")
        << format_number(pts[k].point.imag()) << 'i';
    if (pts[k].mult > 1) out << " x" << pts[k].mult;
  }
  out << '}';
  return out.str();
}

std::string describe(const Interval& i) {
  return "[" + format_number(i.start) + "," + format_number(i.start + i.length) + ")";
}

}  // namespace

CriticalSet random_critical_set(Rng& rng, int min_total, int max_total, double max_radius) {
  if (min_total < 0 || max_total < min_total) throw DomainError("bad multiplicity range");
  const int total =
      min_total + static_cast<int>(rng() % static_cast<std::uint64_t>(max_total - min_total + 1));
  std::vector<Zero> pts;
  int used = 0;
  while (used < total) {
    int m = uniform01(rng) < 0.2 ? 2 : 1;
    if (used + m > total) m = 1;
    pts.push_back({random_disk_point(rng, max_radius), m});
    used += m;
  }
  return CriticalSet::make(std::move(pts));
}

BlaschkeProduct random_blaschke(Rng& rng, int max_degree, double max_radius, bool zero_at_origin) {
  if (max_degree < 1) throw DomainError("max_degree must be >= 1");
  const int degree = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_degree));
  std::vector<Zero> zs;
  if (zero_at_origin) zs.push_back({0.0, 1});
  while (static_cast<int>(zs.size()) < degree) zs.push_back({random_disk_point(rng, max_radius), 1});
  return BlaschkeProduct(std::move(zs), std::polar(1.0, kTwoPi * uniform01(rng)));
}

HeinsRun run_heins(const CriticalSet& c, bool verify, double tol) {
  HeinsRun out{Report("heins"), {}};
  ContinuationReport cr;
  out.product = heins_inverse(c, {}, &cr);
  auto& t = out.report.table("zeros", {"re", "im", "mult"});
  for (const auto& z : out.product.zeros())
    t.add_row({z.point.real(), z.point.imag(), static_cast<std::int64_t>(z.mult)});
  out.report.note("continuation steps " + std::to_string(cr.steps) + ", rejected " +
                  std::to_string(cr.rejected_steps));
  if (verify) {
    const std::vector<Zero> crit =
        out.product.degree() >= 1 ? critical_points(out.product) : std::vector<Zero>{};
    out.report.check("critical_set_distance", critical_set_distance(crit, c.points), "<=", tol,
                     "critical_points(F) against the requested set");
  }
  return out;
}

Report run_heins_sweep(std::uint64_t seed, int count, int max_total, double max_radius, double tol) {
  Report rep("heins");
  rep.provenance().seed = seed;
  Rng rng(seed);
  std::vector<CriticalSet> sets;
  for (int k = 0; k < count; ++k) sets.push_back(random_critical_set(rng, 1, max_total, max_radius));
  struct Row {
    double distance = 0.0;
    int steps = 0;
  };
  const auto rows = parallel_map<Row>(sets.size(), [&](std::size_t k) {
    ContinuationReport cr;
    const BlaschkeProduct f = heins_inverse(sets[k], {}, &cr);
    return Row{critical_set_distance(critical_points(f), sets[k].points), cr.steps};
  });
  auto& t = rep.table("round_trip", {"set_id", "critical_set", "total_multiplicity", "distance", "steps"});
  double worst = 0.0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    t.add_row({static_cast<std::int64_t>(k), describe(sets[k].points),
               static_cast<std::int64_t>(sets[k].total_multiplicity()), rows[k].distance,
               static_cast<std::int64_t>(rows[k].steps)});
    worst = std::max(worst, rows[k].distance);
  }
  rep.check("round_trip_max_distance", worst, "<=", tol,
            std::to_string(count) + " seeded sets, total multiplicity <= " +
                std::to_string(max_total));
  return rep;
}

std::vector<GapCase> default_gap_cases() {
  const CircleMeasure a = CircleMeasure::dirac(0.0, 0.3);
  const CircleMeasure two({Atom{0.0, 0.3}, Atom{kPi, 0.5}});
  return {
      {"0.3*delta_1", a, Interval::full_circle()},
      {"0.3*delta_1", a, Interval(kPi / 2, kPi)},
      {"0.3*delta_1", a, Interval(-0.5, 1.0)},
      {"two_atoms", two, Interval(kPi / 2, kPi)},
      {"two_atoms", two, Interval(-0.5, 1.0)},
  };
}

Report run_gap_table(const std::vector<GapCase>& cases, const std::vector<double>& radii, int grid,
                     double rel_tol) {
  Report rep("gap");
  struct Row {
    Interval used;
    bool nudged = false;
    double mass = 0.0;
    GapEstimate est;
  };
  const auto rows = parallel_map<Row>(cases.size(), [&](std::size_t k) {
    const auto& c = cases[k];
    Row row;
    // Endpoints charging an atom move 1e-9 rad so the half-open mass is kept.
    double start = c.interval.start;
    double end = c.interval.start + c.interval.length;
    const bool full = c.interval.length >= kTwoPi;
    for (const auto& a : full ? std::vector<Atom>{} : c.measure.atoms()) {
      for (double shift : {0.0, kTwoPi, -kTwoPi}) {
        const double ang = a.angle + shift;
        if (std::abs(ang - start) < 1e-9) {
          start = ang - 1e-9;
          row.nudged = true;
        }
        if (std::abs(ang - end) < 1e-9) {
          end = ang - 1e-9;
          row.nudged = true;
        }
      }
    }
    row.used = full ? c.interval : Interval(start, end - start);
    row.mass = c.measure.interval_mass(c.interval);
    row.est = gap_over_interval(evaluator_of(SingularInner(c.measure)), row.used, radii, grid);
    return row;
  });
  auto& t = rep.table("gap_table", {"measure_id", "interval", "gap", "mass", "rel_err"});
  double worst = 0.0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& r = rows[k];
    const double rel = std::abs(r.est.gap - r.mass) / std::max(r.mass, 0.01);
    worst = std::max(worst, rel);
    t.add_row({cases[k].measure_id, describe(cases[k].interval), r.est.gap, r.mass, rel});
    if (r.nudged)
      rep.note("case " + std::to_string(k) + ": interval endpoint charged an atom; nudged to " +
               describe(r.used) + " (offsets below 1 - r_max are not resolved radially)");
    if (!r.est.converged)
      rep.note("case " + std::to_string(k) + ": radial extrapolation error " +
               format_number(r.est.extrapolation_error));
  }
  rep.check("gap_rel_err_max", worst, "<=", rel_tol, "|gap - mu(I)| / max(mu(I), 0.01)");
  return rep;
}

Report run_solynin(const CriticalSet& c1, const CriticalSet& c2, const GridDims& dims, double tol) {
  Report rep("solynin");
  const SolyninReport s = solynin_check(c1, c2, dims, tol);
  auto& t = rep.table("solynin", {"c1", "c2", "margin", "worst_i", "worst_k", "skipped_nodes"});
  t.add_row({describe(c1.points), describe(c2.points), s.margin,
             static_cast<std::int64_t>(s.worst_i), static_cast<std::int64_t>(s.worst_k),
             static_cast<std::int64_t>(s.skipped_nodes)});
  rep.check("solynin_margin", s.margin, ">=", -tol);
  return rep;
}

Report run_solynin_sweep(std::uint64_t seed, int pairs, const GridDims& dims, double tol) {
  Report rep("solynin");
  rep.provenance().seed = seed;
  Rng rng(seed);
  std::vector<std::pair<CriticalSet, CriticalSet>> cases;
  for (int k = 0; k < pairs; ++k) {
    std::vector<Zero> a;
    std::vector<Zero> b;
    const int na = static_cast<int>(rng() % 4);
    const int nb = static_cast<int>(rng() % 4);
    for (int q = 0; q < na; ++q) a.push_back({random_disk_point(rng, 0.7), 1});
    for (int q = 0; q < nb; ++q) {
      if (!a.empty() && uniform01(rng) < 0.3) {
        b.push_back(a[rng() % a.size()]);
      } else {
        b.push_back({random_disk_point(rng, 0.7), 1});
      }
    }
    cases.emplace_back(CriticalSet::make(a), CriticalSet::make(b));
  }
  const auto res = parallel_map<SolyninReport>(cases.size(), [&](std::size_t k) {
    return solynin_check(cases[k].first, cases[k].second, dims, tol);
  });
  auto& t = rep.table("solynin", {"pair_id", "c1", "c2", "margin", "skipped_nodes"});
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cases.size(); ++k) {
    t.add_row({static_cast<std::int64_t>(k), describe(cases[k].first.points),
               describe(cases[k].second.points), res[k].margin,
               static_cast<std::int64_t>(res[k].skipped_nodes)});
    worst = std::min(worst, res[k].margin);
  }
  rep.check("solynin_min_margin", worst, ">=", -tol, std::to_string(pairs) + " seeded pairs");
  return rep;
}

Report run_wedge(const CriticalSet& c1, const CriticalSet& c2, const GridDims& dims, double tol) {
  Report rep("wedge");
  const WedgeUnionReport w = wedge_union_check(c1, c2, dims);
  auto& t = rep.table("wedge_union", {"c1", "c2", "deviation", "contact_nodes", "outer_iterations"});
  t.add_row({describe(c1.points), describe(c2.points), w.deviation,
             static_cast<std::int64_t>(w.obstacle.contact_nodes),
             static_cast<std::int64_t>(w.obstacle.outer_iterations)});
  rep.check("wedge_union_deviation", w.deviation, "<=", tol, "sup |log density difference|");
  return rep;
}

Report run_wedge_sweep(std::uint64_t seed, int pairs, const GridDims& dims, double tol) {
  Report rep("wedge");
  rep.provenance().seed = seed;
  Rng rng(seed);
  std::vector<std::pair<CriticalSet, CriticalSet>> cases;
  for (int k = 0; k < pairs; ++k) {
    std::vector<Zero> a;
    std::vector<Zero> b;
    const int na = 1 + static_cast<int>(rng() % 2);
    const int nb = static_cast<int>(rng() % 3);
    for (int q = 0; q < na; ++q) a.push_back({random_disk_point(rng, 0.6), 1});
    for (int q = 0; q < nb; ++q) b.push_back({random_disk_point(rng, 0.6), 1});
    cases.emplace_back(CriticalSet::make(a), CriticalSet::make(b));
  }
  auto& t = rep.table("wedge_union", {"pair_id", "c1", "c2", "deviation", "contact_nodes"});
  double worst = 0.0;
  const auto res = parallel_map<WedgeUnionReport>(cases.size(), [&](std::size_t k) {
    return wedge_union_check(cases[k].first, cases[k].second, dims);
  });
  for (std::size_t k = 0; k < cases.size(); ++k) {
    t.add_row({static_cast<std::int64_t>(k), describe(cases[k].first.points),
               describe(cases[k].second.points), res[k].deviation,
               static_cast<std::int64_t>(res[k].obstacle.contact_nodes)});
    worst = std::max(worst, res[k].deviation);
  }
  rep.check("wedge_union_max_deviation", worst, "<=", tol, std::to_string(pairs) + " seeded disjoint pairs");
  return rep;
}

double unstable_outer_derivative_at_origin(int n, int samples) {
  if (n < 0) throw DomainError("n must be >= 0");
  if (n == 0) return 1.0;
  if (samples < 16 * n)
    throw DomainError("quadrature resolution must be at least 16 n samples");
  std::vector<Zero> zs{{0.0, 1}};
  const double rad = 1.0 - 1.0 / (static_cast<double>(n) * n);
  for (int j = 0; j < n; ++j) zs.push_back({std::polar(rad, kTwoPi * j / n), 1});
  const BlaschkeProduct b(std::move(zs));
  auto h = [&](double t) { return boundary_log_derivative(b, t); };

  // The integrand has period 2π/n and is even about each zero direction, so
  // (1/2π)∫ = (n/π)∫_0^{π/n}. Panels refine geometrically toward the peak.
  const double half = kPi / n;
  const double width = 1.0 / (static_cast<double>(n) * n);
  std::vector<double> knots{0.0};
  for (double x = 0.25 * width; x < half; x *= 2.0) knots.push_back(x);
  const int base = std::max(8, samples / (2 * n));
  for (int p = 1; p <= base; ++p) knots.push_back(half * p / base);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < knots.size(); ++p)
    acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(h, knots[p], knots[p + 1],
                                                                         10, 1e-13);
  return std::exp(acc * n / kPi);
}

Report run_unstable_example(const std::vector<int>& n_values, int samples_per_n, double delta0,
                            double spread_tol) {
  Report rep("unstable");
  if (samples_per_n < 16) throw DomainError("samples per n must be >= 16");
  struct Row {
    double value = 0.0;
    double refined = 0.0;
  };
  const auto rows = parallel_map<Row>(n_values.size(), [&](std::size_t k) {
    const int n = n_values[k];
    const int s = samples_per_n * std::max(n, 1);
    return Row{unstable_outer_derivative_at_origin(n, s),
               unstable_outer_derivative_at_origin(n, 2 * s)};
  });
  auto& t = rep.table("unstable", {"n", "out_derivative_at_0", "refined", "resolution_diff"});
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double res_diff = 0.0;
  double nontrivial_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    const double d = std::abs(rows[k].refined - rows[k].value);
    t.add_row({static_cast<std::int64_t>(n_values[k]), rows[k].value, rows[k].refined, d});
    res_diff = std::max(res_diff, d);
    if (n_values[k] >= 4) {
      lo = std::min(lo, rows[k].value);
      hi = std::max(hi, rows[k].value);
      nontrivial_min = std::min(nontrivial_min, rows[k].value);
    }
  }
  if (std::isfinite(nontrivial_min)) {
    rep.check("min_out_derivative", nontrivial_min, ">", 1.0 + delta0, "n >= 4");
    rep.check("relative_spread", (hi - lo) / lo, "<", spread_tol, "(max - min) / min over n >= 4");
  }
  rep.check("resolution_agreement", res_diff, "<=", 1e-8, "two quadrature resolutions");
  return rep;
}

Report run_roberts(const CircleMeasure& mu, const RobertsParams& params) {
  Report rep("roberts");
  const GratingResult g = roberts_decompose(mu, params);
  auto& lv = rep.table("levels", {"level", "log2_n", "threshold", "piece_mass", "heavy_entries",
                                  "light_entries", "aligned_margin", "straddle_ratio",
                                  "poisson_log_ratio"});
  bool all_certified = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= params.j_max; ++j) {
    const auto& led = g.ledger[static_cast<std::size_t>(j - 1)];
    std::int64_t heavy = 0;
    for (const auto& e : led) heavy += e.cls == ArcClass::heavy;
    const auto& cert = g.certificates[static_cast<std::size_t>(j - 1)];
    const PoissonLogBound plb = poisson_log_bound(g.pieces[static_cast<std::size_t>(j - 1)], j, params);
    lv.add_row({static_cast<std::int64_t>(j), params.log2_n(j), params.threshold(j),
                g.pieces[static_cast<std::size_t>(j - 1)].total_mass(), heavy,
                static_cast<std::int64_t>(led.size()) - heavy, cert.margin, cert.straddle_ratio,
                plb.ratio});
    all_certified = all_certified && cert.pass;
    worst_margin = std::min(worst_margin, cert.margin);
  }
  auto& ledger = rep.table("ledger", {"level", "first_arc", "arc_count", "start", "span", "class",
                                      "mass_before", "mass_assigned"});
  for (const auto& led : g.ledger)
    for (const auto& e : led)
      ledger.add_row({static_cast<std::int64_t>(e.level), e.first_arc, e.arc_count, e.start, e.span,
                      std::string(e.cls == ArcClass::heavy ? "heavy" : "light"), e.mass_before,
                      e.mass_assigned});
  rep.check("mass_conservation", g.mass_defect, "<=", 1e-10, "|sum pieces + residual - input|");
  rep.check("mod_cont_margin_min", worst_margin, ">=", -1e-12, "aligned windows");
  const EntropyValue ent = bc_entropy(residual_carrier_gaps(g));
  rep.check("carrier_entropy", ent.total(), "<", std::numeric_limits<double>::infinity(),
            "complement of the light arcs");
  auto& s = rep.table("summary", {"input_mass", "residual_mass", "carrier_entropy"});
  s.add_row({g.input_mass, g.residual.total_mass(), ent.total()});
  if (!all_certified) rep.note("at least one level failed its modulus-of-continuity certificate");
  return rep;
}

Report run_hull(const CircleMeasure& mu, const HullOptions& opts) {
  Report rep("hull");
  const FieldPtr lower = singular_weighted_field(mu, poincare_field());
  try {
    const HullResult h = hull(*lower, opts);
    auto& t = rep.table("hull", {"radius", "origin_value"});
    for (std::size_t k = 0; k < h.radii.size(); ++k) t.add_row({h.radii[k], h.origin_values[k]});
    rep.check("max_decrease", h.max_decrease, "<=", opts.monotone_tol, "log density between iterates");
    const std::size_t s = h.origin_values.size();
    const double last_step = s >= 2 ? h.origin_values[s - 1] - h.origin_values[s - 2]
                                    : std::numeric_limits<double>::infinity();
    // Reported, not checked: iterates for atomic data creep upward slowly.
    auto& c = rep.table("convergence", {"last_increment", "converge_tol", "converged"});
    c.add_row({last_step, opts.converge_tol, std::string(h.converged ? "true" : "false")});
  } catch (const ConvergenceError& e) {
    rep.check("max_decrease", std::numeric_limits<double>::infinity(), "<=", opts.monotone_tol, e.what());
  }
  return rep;
}

Report run_invisibility(const CircleMeasure& mu, const RobertsParams& params,
                        const InvisibilityOptions& opts, double floor) {
  Report rep("invisibility");
  const GratingResult g = roberts_decompose(mu, params);
  const std::vector<double> radii = surrogate_radii(params, params.j_max);
  rep.note("surrogate schedule r_j = 1 - 1/min(n_j, 4096)");
  InvisibilityOptions o = opts;
  o.enforce_certificates = false;
  const InvisibilityTrace tr = invisibility_iterate(g.pieces, radii, o);
  auto& t = rep.table("origin_values", {"level", "radius", "origin_value"});
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tr.origin_values.size(); ++k) {
    t.add_row({static_cast<std::int64_t>(k + 1), radii[k], tr.origin_values[k]});
    lowest = std::min(lowest, tr.origin_values[k]);
  }
  auto& c = rep.table("certificates", {"chain", "level", "radius", "exponent", "inductive_ratio"});
  double worst_exp = std::numeric_limits<double>::infinity();
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (const auto& x : tr.certificates) {
    c.add_row({static_cast<std::int64_t>(x.chain), static_cast<std::int64_t>(x.level), x.radius,
               x.exponent, x.inductive_ratio});
    worst_exp = std::min(worst_exp, x.exponent);
    worst_ratio = std::min(worst_ratio, x.inductive_ratio);
  }
  if (!tr.origin_values.empty()) {
    rep.check("origin_value_min", lowest, ">=", floor, "surrogate schedule");
    rep.check("step2_exponent_min", worst_exp, ">=", 0.8, "|S| lambda_D >= lambda_D^{4/5}");
    rep.check("inductive_ratio_min", worst_ratio, ">=", 0.5, "Lambda >= lambda_D / 2 on the next circle");
  }
  return rep;
}

Report run_step3(const std::vector<double>& epsilons, double lo, double hi) {
  Report rep("step3");
  const Step3Result s = step3_scaling(epsilons);
  auto& t = rep.table("step3", {"epsilon", "one_minus_ell", "one_minus_ell_scalar"});
  for (const auto& p : s.points) t.add_row({p.epsilon, p.one_minus_ell, p.one_minus_ell_scalar});
  rep.check("slope_lower", s.slope, ">=", lo, "least-squares slope of log(1 - l) on log eps");
  rep.check("slope_upper", s.slope, "<=", hi);
  rep.check("scalar_agreement", std::abs(s.slope - s.scalar_slope), "<=", 1e-3, "PDE vs scalar slope");
  return rep;
}

Report run_cullen_spotcheck(const CircleMeasure& mu, const std::vector<double>& radii, int grid) {
  Report rep("cullen");
  if (!mu.is_atomic()) throw DomainError("Cullen spot-check needs an atomic measure");
  const Evaluator d = derivative_evaluator_of(SingularInner(mu));
  const auto vals = parallel_map<RadialLogIntegral>(radii.size(), [&](std::size_t k) {
    return radial_log_integral(d, radii[k], grid, true);
  });
  auto& t = rep.table("cullen", {"radius", "log_plus_mean", "increment"});
  double sup = 0.0;
  double first_inc = 0.0;
  double last_inc = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double inc = k ? vals[k].value - vals[k - 1].value : 0.0;
    if (k == 1) first_inc = std::abs(inc);
    if (k >= 1) last_inc = std::abs(inc);
    t.add_row({radii[k], vals[k].value, inc});
    sup = std::max(sup, vals[k].value);
  }
  rep.check("sup_log_plus", sup, "<", std::numeric_limits<double>::infinity(), "over the schedule");
  if (radii.size() >= 3)
    rep.check("increment_ratio", first_inc > 0.0 ? last_inc / first_inc : 0.0, "<=", 1.0,
              "last increment / first increment");
  rep.note("consistency spot-check on a finite schedule, not a proof of boundedness");
  return rep;
}

}  // namespace innerlab
