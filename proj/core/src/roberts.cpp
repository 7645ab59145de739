#include "innerlab/roberts.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace innerlab {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
// Arcs shorter than this are tracked symbolically.
constexpr double kMinResolvedArc = 1e-11;

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;  // density
};

// Piecewise-constant density of the cells, positive segments only.
std::vector<Segment> density_profile(const CircleMeasure& mu) {
  std::vector<std::pair<double, double>> events;
  for (const auto& c : mu.cells()) {
    events.emplace_back(c.start, c.density());
    events.emplace_back(c.end(), -c.density());
  }
  std::sort(events.begin(), events.end());
  std::vector<Segment> out;
  double d = 0.0;
  std::size_t e = 0;
  while (e < events.size()) {
    const double x = events[e].first;
    while (e < events.size() && events[e].first == x) d += events[e++].second;
    if (e == events.size()) break;
    const double next = events[e].first;
    if (d > 1e-300 && next > x) out.push_back({x, next, d});
  }
  return out;
}

double density_at(const std::vector<Segment>& prof, double x) {
  auto it = std::upper_bound(prof.begin(), prof.end(), x,
                             [](double v, const Segment& s) { return v < s.b; });
  if (it != prof.end() && it->a <= x) return it->d;
  return 0.0;
}

// A run of consecutive partition arcs with identical content. Either a single
// arc holding atoms or segment endpoints, or a uniform-density run.
struct ArcGroup {
  double first = 0.0;
  double count = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> atoms;
  std::vector<Segment> parts;  // clipped density pieces (single arcs)
  double uniform_density = 0.0;
  bool uniform = false;
  bool symbolic = false;
  double mass_per_arc = 0.0;
};

void for_each_group(const CircleMeasure& mu, int j, const RobertsParams& p,
                    const std::function<void(const ArcGroup&)>& cb) {
  const double len = p.arc_length(j);
  const auto prof = density_profile(mu);
  const auto& atoms = mu.atoms();

  if (len < kMinResolvedArc) {
    // Each atom owns its arc; segments are taken as partition aligned.
    const double log_ratio = p.c * p.log2_n(j) * kLn2 / kTwoPi;  // thr / len
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      ArcGroup g;
      g.first = -1.0;
      g.lo = atoms[a].angle;
      g.hi = atoms[a].angle + len;
      g.atoms = {a};
      g.symbolic = true;
      g.mass_per_arc = atoms[a].mass;
      cb(g);
    }
    for (const auto& s : prof) {
      ArcGroup g;
      g.first = -1.0;
      g.count = (s.b - s.a) / len;
      g.lo = s.a;
      g.hi = s.b;
      g.uniform = true;
      g.symbolic = true;
      g.uniform_density = s.d;
      // d * len, compared against thr through thr / len to avoid underflow.
      g.mass_per_arc = s.d * len;
      g.parts = {{s.a, s.b, std::min(s.d, log_ratio)}};
      cb(g);
    }
    return;
  }

  const double n = p.n(j);
  auto index_of = [&](double x) { return std::clamp(std::floor(x / len), 0.0, n - 1.0); };
  auto lo_of = [&](double k) { return k * len; };
  auto hi_of = [&](double k) { return k + 1.0 >= n ? kTwoPi : (k + 1.0) * len; };

  std::vector<double> special;
  std::vector<double> atom_index(atoms.size());
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    atom_index[a] = index_of(atoms[a].angle);
    special.push_back(atom_index[a]);
  }
  for (const auto& s : prof) {
    special.push_back(index_of(s.a));
    special.push_back(index_of(s.b));
    // b may sit exactly on the boundary of the arc it closes.
    if (s.b > 0.0) special.push_back(index_of(std::nextafter(s.b, 0.0)));
  }
  std::sort(special.begin(), special.end());
  special.erase(std::unique(special.begin(), special.end()), special.end());

  auto emit_run = [&](double k0, double k1) {  // arcs k0..k1-1, no breakpoints inside
    if (k1 <= k0) return;
    ArcGroup g;
    g.first = k0;
    g.count = k1 - k0;
    g.lo = lo_of(k0);
    g.hi = hi_of(k1 - 1.0);
    g.uniform = true;
    g.uniform_density = density_at(prof, 0.5 * (g.lo + g.hi));
    if (g.uniform_density <= 0.0) return;
    g.mass_per_arc = g.uniform_density * len;
    g.parts = {{g.lo, g.hi, g.uniform_density}};
    cb(g);
  };

  std::size_t atom_cursor = 0;
  std::vector<std::size_t> atom_order(atoms.size());
  std::iota(atom_order.begin(), atom_order.end(), 0);
  std::sort(atom_order.begin(), atom_order.end(),
            [&](std::size_t x, std::size_t y) { return atom_index[x] < atom_index[y]; });

  double next_free = 0.0;
  for (double k : special) {
    emit_run(next_free, k);
    ArcGroup g;
    g.first = k;
    g.lo = lo_of(k);
    g.hi = hi_of(k);
    while (atom_cursor < atom_order.size() && atom_index[atom_order[atom_cursor]] < k)
      ++atom_cursor;
    while (atom_cursor < atom_order.size() && atom_index[atom_order[atom_cursor]] == k) {
      const std::size_t a = atom_order[atom_cursor++];
      g.atoms.push_back(a);
      g.mass_per_arc += atoms[a].mass;
    }
    auto it = std::upper_bound(prof.begin(), prof.end(), g.lo,
                               [](double v, const Segment& s) { return v < s.b; });
    for (; it != prof.end() && it->a < g.hi; ++it) {
      const double a = std::max(it->a, g.lo);
      const double b = std::min(it->b, g.hi);
      if (b > a) {
        g.parts.push_back({a, b, it->d});
        g.mass_per_arc += it->d * (b - a);
      }
    }
    if (g.mass_per_arc > 0.0) cb(g);
    next_free = k + 1.0;
  }
  emit_run(next_free, n);
}

}  // namespace

double RobertsParams::log2_n(int j) const { return std::ldexp(1.0, j + j0); }

double RobertsParams::n(int j) const { return std::ldexp(1.0, static_cast<int>(log2_n(j))); }

double RobertsParams::arc_length(int j) const {
  return std::ldexp(kTwoPi, -static_cast<int>(log2_n(j)));
}

double RobertsParams::threshold(int j) const {
  return c * log2_n(j) * kLn2 * std::ldexp(1.0, -static_cast<int>(log2_n(j)));
}

bool RobertsParams::n_fits_u64(int j) const { return j + j0 <= 5; }

std::uint64_t RobertsParams::n_u64(int j) const {
  if (!n_fits_u64(j)) throw DomainError("n_j exceeds 64 bits");
  return std::uint64_t{1} << static_cast<unsigned>(log2_n(j));
}

void RobertsParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("grating constant c must be positive");
  if (j0 < 1) throw DomainError("j0 must be >= 1");
  if (j_max < 1) throw DomainError("j_max must be >= 1");
  if (j0 + j_max > 9) throw DomainError("j0 + j_max must be <= 9 (n_j beyond the double range)");
}

LevelResult grate_level(const CircleMeasure& mu, int j, const RobertsParams& params) {
  params.validate();
  if (j < 1 || j > params.j_max) throw DomainError("grating level out of range");
  const double thr = params.threshold(j);
  const double len = params.arc_length(j);

  LevelResult out;
  out.symbolic = len < kMinResolvedArc;
  std::vector<Atom> piece_atoms;
  std::vector<Atom> rem_atoms;
  std::vector<Cell> piece_cells;
  std::vector<Cell> rem_cells;
  const auto& atoms = mu.atoms();

  for_each_group(mu, j, params, [&](const ArcGroup& g) {
    LedgerEntry e;
    e.level = j;
    e.first_arc = g.first;
    e.arc_count = g.count;
    e.start = g.lo;
    e.span = g.hi - g.lo;
    e.mass_before = g.mass_per_arc;
    e.symbolic = g.symbolic;

    bool heavy = false;
    if (g.uniform && g.symbolic) {
      heavy = g.parts.front().d < g.uniform_density;
    } else {
      heavy = g.mass_per_arc > thr;
    }
    e.cls = heavy ? ArcClass::heavy : ArcClass::light;
    const double f = heavy ? (g.uniform ? 1.0 : thr / g.mass_per_arc) : 1.0;

    for (std::size_t a : g.atoms) {
      const double m = atoms[a].mass;
      const double pm = (g.symbolic && heavy) ? thr : f * m;
      piece_atoms.push_back({atoms[a].angle, pm});
      if (m - pm > 0.0) rem_atoms.push_back({atoms[a].angle, m - pm});
    }
    for (const auto& s : g.parts) {
      const double w = s.b - s.a;
      double pd = 0.0;
      double full = 0.0;
      if (g.uniform) {
        full = g.uniform_density * w;
        pd = g.symbolic ? s.d : std::min(g.uniform_density, thr / len);
      } else {
        full = s.d * w;
        pd = f * s.d;
      }
      const double pm = std::min(pd * w, full);
      if (pm > 0.0) piece_cells.push_back({s.a, w, pm});
      if (full - pm > 0.0) rem_cells.push_back({s.a, w, full - pm});
    }
    if (g.uniform) {
      e.mass_assigned = heavy ? (g.symbolic ? g.parts.front().d * len : thr) : g.mass_per_arc;
    } else {
      e.mass_assigned = heavy ? thr : g.mass_per_arc;
    }
    if (heavy) out.heavy_arcs.emplace_back(g.lo, std::max(g.hi - g.lo, len));
    out.ledger.push_back(e);
  });

  out.piece = CircleMeasure::from_cells(std::move(piece_atoms), std::move(piece_cells));
  out.remainder = CircleMeasure::from_cells(std::move(rem_atoms), std::move(rem_cells));
  return out;
}

double max_aligned_arc_mass(const CircleMeasure& mu, int j, const RobertsParams& params) {
  params.validate();
  double best = 0.0;
  for_each_group(mu, j, params,
                 [&](const ArcGroup& g) { best = std::max(best, g.mass_per_arc); });
  return best;
}

ModContCertificate verify_mod_cont(const CircleMeasure& piece, int j, const RobertsParams& params) {
  ModContCertificate c;
  c.level = j;
  c.threshold = params.threshold(j);
  c.aligned_max = max_aligned_arc_mass(piece, j, params);
  c.margin = c.threshold - c.aligned_max;
  const double len = params.arc_length(j);
  c.sliding_max = len < kMinResolvedArc ? c.aligned_max : modulus_of_continuity(piece, len, 64);
  c.straddle_ratio = c.sliding_max / c.threshold;
  c.pass = c.margin >= -1e-12;
  return c;
}

GratingResult roberts_decompose(const CircleMeasure& mu, const RobertsParams& params) {
  params.validate();
  GratingResult out;
  out.params = params;
  out.input_mass = mu.total_mass();
  CircleMeasure rem = mu;
  double assigned = 0.0;
  for (int j = 1; j <= params.j_max; ++j) {
    LevelResult lv = grate_level(rem, j, params);
    out.certificates.push_back(verify_mod_cont(lv.piece, j, params));
    assigned += lv.piece.total_mass();
    out.pieces.push_back(std::move(lv.piece));
    out.ledger.push_back(std::move(lv.ledger));
    out.heavy_arcs.push_back(std::move(lv.heavy_arcs));
    rem = std::move(lv.remainder);
  }
  out.residual = std::move(rem);
  out.mass_defect = std::abs(assigned + out.residual.total_mass() - out.input_mass);
  return out;
}

PoissonLogBound poisson_log_bound(const CircleMeasure& piece, int j, const RobertsParams& params,
                                  int sample_count) {
  if (sample_count < 16) throw DomainError("sample_count must be >= 16");
  PoissonLogBound out;
  const double h_min = std::max(std::ldexp(1.0, -static_cast<int>(params.log2_n(j))), 1e-12);
  out.max_radius = 1.0 - h_min;
  if (piece.empty()) {
    out.below_step2 = true;
    return out;
  }
  const int n_rad = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(sample_count)) / 4));
  std::vector<double> angles;
  const int n_uniform = std::max(4, sample_count / n_rad);
  for (int k = 0; k < n_uniform; ++k) angles.push_back(kTwoPi * k / n_uniform);
  for (const auto& a : piece.atoms()) angles.push_back(a.angle);
  // Centers of the heaviest cells.
  std::vector<Cell> cells = piece.cells();
  std::sort(cells.begin(), cells.end(),
            [](const Cell& x, const Cell& y) { return x.mass > y.mass; });
  if (cells.size() > 256) cells.resize(256);
  for (const auto& c : cells) angles.push_back(c.start + 0.5 * c.length);

  // 1 - r geometric from 1/2 down to h_min.
  for (int q = 0; q < n_rad; ++q) {
    const double h = 0.5 * std::pow(h_min / 0.5, static_cast<double>(q) / (n_rad - 1));
    const double r = 1.0 - h;
    const double lg = -std::log(h * (1.0 + r));
    for (double t : angles) {
      const double ratio = piece.poisson(std::polar(r, t)) / lg;
      if (ratio > out.ratio) {
        out.ratio = ratio;
        out.worst_radius = r;
        out.worst_angle = t;
      }
    }
  }
  out.below_step2 = out.ratio < 0.1;
  return out;
}

GapList residual_carrier_gaps(const GratingResult& g) {
  if (g.heavy_arcs.empty()) return GapList({Interval::full_circle()});
  return complement_of_arcs(g.heavy_arcs.back());
}

std::vector<double> surrogate_radii(const RobertsParams& params, int levels, double cap) {
  if (!(cap >= 2.0)) throw DomainError("surrogate cap must be >= 2");
  std::vector<double> out;
  for (int j = 1; j <= levels; ++j) out.push_back(1.0 - 1.0 / std::min(params.n(j), cap));
  return out;
}

InvisibilityTrace invisibility_iterate(const std::vector<CircleMeasure>& pieces,
                                       const std::vector<double>& radii,
                                       const InvisibilityOptions& opts) {
  if (radii.size() != pieces.size()) throw DomainError("need one radius per piece");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0 && radii[k] < 1.0)) throw DomainError("radii must lie in (0, 1)");
    if (k > 0 && radii[k] < radii[k - 1]) throw DomainError("radii must be non-decreasing");
  }
  const int m = opts.dims.angular;
  InvisibilityTrace out;
  out.radii = radii;

  // Step-2 exponent per level; it does not depend on the chain.
  std::vector<double> exponents(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double r = radii[i];
    const double ud = -std::log1p(-r * r);
    double worst_p = 0.0;
    std::vector<double> angles;
    for (int k = 0; k < m; ++k) angles.push_back(kTwoPi * k / m);
    for (const auto& a : pieces[i].atoms()) angles.push_back(a.angle);
    for (double t : angles) worst_p = std::max(worst_p, pieces[i].poisson(std::polar(r, t)));
    exponents[i] = (ud - worst_p) / ud;
  }

  for (std::size_t chain = 1; chain <= pieces.size(); ++chain) {
    FieldPtr inner = poincare_field();
    double origin = 1.0;
    for (std::size_t i = chain; i-- > 0;) {
      const double r = radii[i];
      LevelCertificate cert;
      cert.chain = static_cast<int>(chain);
      cert.level = static_cast<int>(i + 1);
      cert.radius = r;
      cert.exponent = exponents[i];
      cert.step2_pass = exponents[i] >= 0.8;

      const FieldPtr lower = singular_weighted_field(pieces[i], inner);
      MetricGrid g = solve_liouville(r, boundary_samples(*lower, r, m), opts.dims.radial, nullptr,
                                     {}, opts.solver);
      if (i > 0) {
        const double rp = radii[i - 1];
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < m; ++k) {
          const Complex z = std::polar(rp, kTwoPi * k / m);
          worst = std::min(worst, std::exp(g.log_density_at(z) - log_poincare(z)));
        }
        cert.inductive_ratio = worst;
        cert.inductive_pass = worst >= 0.5;
      }
      out.certificates.push_back(cert);
      if (opts.enforce_certificates && !(cert.step2_pass && cert.inductive_pass)) {
        std::ostringstream msg;
        msg << "invisibility certificate failed at level " << cert.level << " of chain "
            << cert.chain << ": exponent " << cert.exponent << " (need >= 0.8), ratio "
            << cert.inductive_ratio << " (need >= 0.5)";
        throw CertificateError(msg.str());
      }
      origin = std::exp(g.u(0, 0));
      inner = grid_field(std::move(g));
    }
    out.origin_values.push_back(origin);
  }
  return out;
}

double step3_scalar_ell(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in [0, 1)");
  if (epsilon == 0.0) return 1.0;
  const double r = 1.0 - epsilon;
  // ℓ/(1 - ℓ²) = A with A = R (1 - R²)^{-4/5}.
  const double a = r * std::pow(epsilon * (2.0 - epsilon), -0.8);
  const double s = std::sqrt(1.0 + 4.0 * a * a);
  return 2.0 * a / (1.0 + s);
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

}  // namespace

Step3Result step3_scaling(const std::vector<double>& epsilons, int radial) {
  if (epsilons.size() < 2) throw DomainError("step3_scaling needs at least two epsilons");
  if (radial < 16) throw DomainError("radial resolution must be >= 16");
  Step3Result out;
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> ls;
  for (double eps : epsilons) {
    if (!(eps >= 1e-4 * (1 - 1e-12) && eps <= 1e-1)) throw DomainError("epsilon must lie in [1e-4, 1e-1]");
    const double r = 1.0 - eps;
    const double ub = -0.8 * std::log(eps * (2.0 - eps));
    auto one_minus_ell = [&](int n) {
      const MetricGrid g = solve_liouville(r, {ub}, n);
      return 1.0 - r * std::exp(g.u(0, 0));
    };
    const double coarse = one_minus_ell(radial);
    const double fine = one_minus_ell(2 * radial);
    Step3Point p;
    p.epsilon = eps;
    p.one_minus_ell = (4.0 * fine - coarse) / 3.0;
    p.one_minus_ell_scalar = 1.0 - step3_scalar_ell(eps);
    out.points.push_back(p);
    lx.push_back(std::log(eps));
    ly.push_back(std::log(p.one_minus_ell));
    ls.push_back(std::log(p.one_minus_ell_scalar));
  }
  out.slope = fit_slope(lx, ly);
  out.scalar_slope = fit_slope(lx, ls);
  return out;
}

}  // namespace innerlab
