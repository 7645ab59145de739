#include "innerlab/circle_measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

namespace innerlab {

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double wrap_signed(double theta) {
  double t = wrap_angle(theta + kPi) - kPi;
  return t;
}

namespace {

// 5-point Gauss–Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussX = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                           0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {0.2369268850561891, 0.4786286704993665,
                                           0.5688888888888889, 0.4786286704993665,
                                           0.2369268850561891};

Complex unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

double poisson_kernel(double theta, Complex z) {
  const double r2 = std::norm(z);
  return (1.0 - r2) / std::norm(unit(theta) - z);
}

// Antiderivative of the Poisson kernel in ψ = θ - arg z, continuous on [-π, π].
double poisson_antiderivative(double psi, double r) {
  return 2.0 * std::atan2((1.0 + r) * std::sin(0.5 * psi), (1.0 - r) * std::cos(0.5 * psi));
}

// True when the arc is short compared with its distance to z, so that a
// fixed Gauss rule is more accurate than differencing the closed form.
bool short_and_far(double a, double len, Complex z) {
  const double d = std::abs(unit(a + 0.5 * len) - z);
  return len <= 0.1 * d;
}

template <class F>
auto gauss_len(double a, double len, F&& f) {
  const double half = 0.5 * len;
  const double mid = a + half;
  decltype(f(mid)) acc{};
  for (std::size_t q = 0; q < kGaussX.size(); ++q) acc += kGaussW[q] * f(mid + half * kGaussX[q]);
  return acc * half;
}

void split_into_cells(double start, double length, double mass, std::vector<Cell>& out) {
  if (mass <= 0.0 || length <= 0.0) return;
  const double s = wrap_angle(start);
  if (s + length <= kTwoPi) {
    out.push_back({s, length, mass});
    return;
  }
  const double first = kTwoPi - s;
  const double m1 = mass * first / length;
  if (first > 0.0) out.push_back({s, first, m1});
  out.push_back({0.0, length - first, mass - m1});
}

void materialize_cantor(double start, double length, double mass, double gap_ratio, int depth,
                        std::vector<Cell>& out) {
  if (depth == 0) {
    split_into_cells(start, length, mass, out);
    return;
  }
  const double child = 0.5 * length * (1.0 - gap_ratio);
  materialize_cantor(start, child, 0.5 * mass, gap_ratio, depth - 1, out);
  materialize_cantor(start + length - child, child, 0.5 * mass, gap_ratio, depth - 1, out);
}

std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
  std::map<double, double> merged;
  for (const auto& a : atoms) {
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
      throw DomainError("atom mass must be finite and non-negative");
    if (!std::isfinite(a.angle)) throw DomainError("atom angle must be finite");
    if (a.mass == 0.0) continue;
    merged[wrap_angle(a.angle)] += a.mass;
  }
  std::vector<Atom> out;
  out.reserve(merged.size());
  for (const auto& [angle, mass] : merged) out.push_back({angle, mass});
  return out;
}

}  // namespace

Interval::Interval(double start_, double length_) : start(wrap_angle(start_)), length(length_) {
  if (!(length_ > 0.0) || length_ > kTwoPi * (1.0 + 1e-15))
    throw DomainError("interval length must lie in (0, 2π]");
  length = std::min(length_, kTwoPi);
}

bool Interval::contains(double angle) const {
  const double offset = wrap_angle(angle - start);
  return offset < length;
}

CircleMeasure::CircleMeasure(std::vector<Atom> atoms, std::vector<CantorPart> cantor_parts)
    : atoms_(normalize_atoms(std::move(atoms))), cantor_parts_(std::move(cantor_parts)) {
  for (const auto& part : cantor_parts_) {
    if (!(part.mass >= 0.0) || !std::isfinite(part.mass))
      throw DomainError("cantor mass must be finite and non-negative");
    if (!(part.gap_ratio > 0.0 && part.gap_ratio < 1.0))
      throw DomainError("cantor gap_ratio must lie in (0, 1)");
    if (part.depth < 1 || part.depth > kMaxCantorDepth)
      throw DomainError("cantor depth must lie in [1, 22]");
    if (part.mass > 0.0)
      materialize_cantor(part.base.start, part.base.length, part.mass, part.gap_ratio,
                         part.depth, cells_);
  }
  std::sort(cells_.begin(), cells_.end(),
            [](const Cell& a, const Cell& b) { return a.start < b.start; });
  build_distribution();
}

CircleMeasure CircleMeasure::from_cells(std::vector<Atom> atoms, std::vector<Cell> cells) {
  CircleMeasure out;
  out.atoms_ = normalize_atoms(std::move(atoms));
  for (const auto& c : cells) {
    if (!(c.mass >= 0.0) || !std::isfinite(c.mass))
      throw DomainError("cell mass must be finite and non-negative");
    if (!(c.length > 0.0)) continue;
    split_into_cells(c.start, c.length, c.mass, out.cells_);
  }
  std::sort(out.cells_.begin(), out.cells_.end(),
            [](const Cell& a, const Cell& b) { return a.start < b.start; });
  out.build_distribution();
  return out;
}

CircleMeasure CircleMeasure::dirac(double angle, double mass) {
  return CircleMeasure({Atom{angle, mass}});
}

CircleMeasure CircleMeasure::cantor(Interval base, double gap_ratio, int depth, double mass) {
  return CircleMeasure({}, {CantorPart{base, gap_ratio, depth, mass}});
}

void CircleMeasure::build_distribution() {
  atom_prefix_.assign(atoms_.size() + 1, 0.0);
  for (std::size_t k = 0; k < atoms_.size(); ++k)
    atom_prefix_[k + 1] = atom_prefix_[k] + atoms_[k].mass;

  std::vector<std::pair<double, double>> events;  // (position, change in density)
  events.reserve(2 * cells_.size() + 2);
  events.emplace_back(0.0, 0.0);
  events.emplace_back(kTwoPi, 0.0);
  for (const auto& c : cells_) {
    events.emplace_back(c.start, c.density());
    events.emplace_back(std::min(c.end(), kTwoPi), -c.density());
  }
  std::sort(events.begin(), events.end());

  knots_.clear();
  knot_cdf_.clear();
  knot_slope_.clear();
  double density = 0.0;
  double cdf = 0.0;
  std::size_t e = 0;
  while (e < events.size()) {
    const double x = events[e].first;
    if (!knots_.empty()) cdf += density * (x - knots_.back());
    while (e < events.size() && events[e].first == x) density += events[e++].second;
    if (std::abs(density) < 1e-300) density = 0.0;
    knots_.push_back(x);
    knot_cdf_.push_back(cdf);
    knot_slope_.push_back(std::max(density, 0.0));
  }
  double cell_total = 0.0;
  for (const auto& c : cells_) cell_total += c.mass;
  total_mass_ = atom_prefix_.back() + cell_total;
}

double CircleMeasure::mass_below(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= kTwoPi) return total_mass_;
  double atoms = 0.0;
  if (!atoms_.empty()) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                               [](const Atom& a, double v) { return a.angle < v; });
    atoms = atom_prefix_[static_cast<std::size_t>(it - atoms_.begin())];
  }
  double cont = 0.0;
  if (!cells_.empty()) {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t p = static_cast<std::size_t>(it - knots_.begin()) - 1;
    cont = knot_cdf_[p] + knot_slope_[p] * (x - knots_[p]);
  }
  return atoms + cont;
}

double CircleMeasure::interval_mass(const Interval& i) const {
  if (empty()) return 0.0;
  if (i.length >= kTwoPi) return total_mass_;
  const double a = i.start;
  const double b = a + i.length;
  double m;
  if (b <= kTwoPi) {
    m = mass_below(b) - mass_below(a);
  } else {
    m = (total_mass_ - mass_below(a)) + mass_below(b - kTwoPi);
  }
  return std::max(m, 0.0);
}

namespace {

// Arc given by start and length; cells pass their stored length so short
// arcs far from angle 0 keep full relative precision.
double arc_poisson_len(double a, double len, Complex z) {
  if (len <= 0.0) return 0.0;
  const double r = std::abs(z);
  if (r == 0.0) return len;
  if (len >= kTwoPi) return kTwoPi;
  if (short_and_far(a, len, z)) return gauss_len(a, len, [&](double t) { return poisson_kernel(t, z); });
  const double phi = std::arg(z);
  const double psi1 = wrap_signed(a - phi);
  const double psi2 = psi1 + len;
  if (psi2 <= kPi) return poisson_antiderivative(psi2, r) - poisson_antiderivative(psi1, r);
  return (kPi - poisson_antiderivative(psi1, r)) + (poisson_antiderivative(psi2 - kTwoPi, r) + kPi);
}

}  // namespace

double arc_poisson(double a, double b, Complex z) { return arc_poisson_len(a, b - a, z); }

namespace {

Complex arc_herglotz(double a, double len, Complex z) {
  const double b = a + len;
  if (short_and_far(a, len, z)) {
    return gauss_len(a, len, [&](double t) {
      const Complex zeta = unit(t);
      return (zeta + z) / (zeta - z);
    });
  }
  const double re = arc_poisson_len(a, len, z);
  const double im = -2.0 * (std::log(std::abs(unit(b) - z)) - std::log(std::abs(unit(a) - z)));
  return {re, im};
}

Complex arc_herglotz_derivative(double a, double len, Complex z) {
  const double b = a + len;
  if (short_and_far(a, len, z)) {
    return gauss_len(a, len, [&](double t) {
      const Complex zeta = unit(t);
      const Complex d = zeta - z;
      return 2.0 * zeta / (d * d);
    });
  }
  const Complex i2(0.0, 2.0);
  return i2 * (1.0 / (unit(b) - z) - 1.0 / (unit(a) - z));
}

}  // namespace

double CircleMeasure::poisson(Complex z) const {
  const double r2 = std::norm(z);
  double acc = 0.0;
  for (const auto& a : atoms_) acc += a.mass * (1.0 - r2) / std::norm(unit(a.angle) - z);
  for (const auto& c : cells_) acc += c.density() * arc_poisson_len(c.start, c.length, z);
  return acc;
}

Complex CircleMeasure::herglotz(Complex z) const {
  Complex acc{};
  for (const auto& a : atoms_) {
    const Complex zeta = unit(a.angle);
    acc += a.mass * (zeta + z) / (zeta - z);
  }
  for (const auto& c : cells_) acc += c.density() * arc_herglotz(c.start, c.length, z);
  return acc;
}

Complex CircleMeasure::herglotz_derivative(Complex z) const {
  Complex acc{};
  for (const auto& a : atoms_) {
    const Complex zeta = unit(a.angle);
    const Complex d = zeta - z;
    acc += a.mass * 2.0 * zeta / (d * d);
  }
  for (const auto& c : cells_) acc += c.density() * arc_herglotz_derivative(c.start, c.length, z);
  return acc;
}

double CircleMeasure::ring_average_poisson(double r, double center, double width) const {
  if (width <= 0.0) return poisson(std::polar(r, center));
  const Complex zr(r, 0.0);
  const double half = 0.5 * width;
  // P_{δ_φ}(r e^{iθ}) depends on φ - θ only, so the window average of an atom
  // is an arc integral of the kernel seen from the real point r.
  auto window_average = [&](double phi) {
    const double off = wrap_signed(phi - center);
    return arc_poisson(off - half, off + half, zr) / width;
  };
  double acc = 0.0;
  for (const auto& a : atoms_) acc += a.mass * window_average(a.angle);
  const double scale = std::max(1.0 - r, 1e-12);
  for (const auto& c : cells_) {
    const int pieces = std::clamp(static_cast<int>(std::ceil(4.0 * c.length / scale)), 1, 64);
    const double step = c.length / pieces;
    double cell_acc = 0.0;
    for (int p = 0; p < pieces; ++p) {
      const double lo = c.start + p * step;
      cell_acc += gauss_len(lo, step, window_average);
    }
    acc += c.density() * cell_acc;
  }
  return acc;
}

std::vector<double> CircleMeasure::breakpoints() const {
  std::vector<double> out;
  out.reserve(atoms_.size() + 2 * cells_.size());
  for (const auto& a : atoms_) out.push_back(a.angle);
  for (const auto& c : cells_) {
    out.push_back(c.start);
    out.push_back(wrap_angle(c.end()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CircleMeasure CircleMeasure::scaled(double factor) const {
  if (!(factor >= 0.0)) throw DomainError("scale factor must be non-negative");
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.mass *= factor;
  std::vector<Cell> cells = cells_;
  for (auto& c : cells) c.mass *= factor;
  CircleMeasure out = from_cells(std::move(atoms), std::move(cells));
  out.cantor_parts_ = cantor_parts_;
  for (auto& p : out.cantor_parts_) p.mass *= factor;
  return out;
}

CircleMeasure CircleMeasure::plus(const CircleMeasure& other) const {
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  std::vector<Cell> cells = cells_;
  cells.insert(cells.end(), other.cells_.begin(), other.cells_.end());
  CircleMeasure out = from_cells(std::move(atoms), std::move(cells));
  out.cantor_parts_ = cantor_parts_;
  out.cantor_parts_.insert(out.cantor_parts_.end(), other.cantor_parts_.begin(),
                           other.cantor_parts_.end());
  return out;
}

double total_mass(const CircleMeasure& mu) { return mu.total_mass(); }

double interval_mass(const CircleMeasure& mu, const Interval& i) { return mu.interval_mass(i); }

double modulus_of_continuity(const CircleMeasure& mu, double t, int n_probe) {
  if (!(t > 0.0) || t > kTwoPi * (1.0 + 1e-15)) throw DomainError("window length must lie in (0, 2π]");
  if (n_probe < 1) throw DomainError("n_probe must be >= 1");
  t = std::min(t, kTwoPi);
  if (mu.empty()) return 0.0;
  if (t >= kTwoPi) return mu.total_mass();

  // μ([s, s + t)) is piecewise linear in s with jumps; its supremum is
  // attained at (or just right of) a breakpoint of s or s + t.
  constexpr double kNudge = 1e-13;
  std::vector<double> starts;
  const auto bps = mu.breakpoints();
  starts.reserve(3 * bps.size() + static_cast<std::size_t>(n_probe));
  for (double b : bps) {
    starts.push_back(b);
    starts.push_back(b - t);
    starts.push_back(b - t + kNudge);
  }
  for (int p = 0; p < n_probe; ++p) starts.push_back(kTwoPi * p / n_probe);

  double best = 0.0;
  for (double s : starts) best = std::max(best, mu.interval_mass(Interval(s, t)));
  return best;
}

double poisson_extension(const CircleMeasure& mu, Complex z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("poisson_extension requires |z| < 1");
  return mu.poisson(z);
}

GapList::GapList(std::vector<Interval> g) : gaps(std::move(g)) {
  for (const auto& i : gaps) covered_total += i.length;
}

EntropyValue bc_entropy(const GapList& gaps) {
  EntropyValue out;
  for (const auto& g : gaps.gaps) {
    const double l = g.normalized_length();
    if (l > 0.0 && l < 1.0) out.truncated += l * std::log(1.0 / l);
  }
  out.tail_bound = gaps.tail_entropy;
  out.finite = !gaps.tail_infinite && std::isfinite(gaps.tail_entropy);
  return out;
}

BcVerdict is_beurling_carleson(const GapList& gaps, double tail_bound, double tol, double cap) {
  if (!(tail_bound >= 0.0)) throw DomainError("tail_bound must be >= 0");
  BcVerdict v;
  const EntropyValue e = bc_entropy(gaps);
  v.entropy = e.truncated;
  const double uncovered = kTwoPi - gaps.covered_total - gaps.tail_length;
  v.uncovered_fraction = std::max(uncovered, 0.0) / kTwoPi;
  const double total = e.truncated + tail_bound + (e.finite ? e.tail_bound : 0.0);
  v.is_bc = e.finite && std::isfinite(tail_bound) && std::isfinite(total) && total < cap &&
            v.uncovered_fraction <= tol;
  return v;
}

GapList cantor_gap_list(const CantorPart& part) {
  std::vector<Interval> gaps;
  if (part.base.length < kTwoPi) gaps.emplace_back(part.base.end(), kTwoPi - part.base.length);

  struct Node {
    double start;
    double length;
  };
  std::vector<Node> level = {{part.base.start, part.base.length}};
  for (int d = 0; d < part.depth; ++d) {
    std::vector<Node> next;
    next.reserve(2 * level.size());
    for (const auto& n : level) {
      const double child = 0.5 * n.length * (1.0 - part.gap_ratio);
      gaps.emplace_back(n.start + child, n.length * part.gap_ratio);
      next.push_back({n.start, child});
      next.push_back({n.start + n.length - child, child});
    }
    level = std::move(next);
  }
  GapList out(std::move(gaps));

  // Deeper levels k > depth: 2^{k-1} gaps of normalized length
  // base·g·((1-g)/2)^{k-1}.
  const double base = part.base.normalized_length();
  const double shrink = 0.5 * (1.0 - part.gap_ratio);
  double tail_entropy = 0.0;
  double tail_len = 0.0;
  for (int k = part.depth + 1; k < part.depth + 4000; ++k) {
    const double log_len = std::log(base * part.gap_ratio) + (k - 1) * std::log(shrink);
    const double total_len = std::exp((k - 1) * std::log(2.0) + log_len);
    const double term = total_len * (-log_len);
    tail_entropy += term;
    tail_len += total_len;
    if (term < 1e-18 * std::max(tail_entropy, 1e-300) && total_len < 1e-18) break;
  }
  out.tail_entropy = tail_entropy;
  out.tail_length = tail_len * kTwoPi;
  return out;
}

GapList complement_of_arcs(std::span<const Interval> arcs) {
  if (arcs.empty()) return GapList({Interval::full_circle()});
  // Unroll to [0, 2π) segments, merge, complement.
  std::vector<std::pair<double, double>> segs;
  for (const auto& a : arcs) {
    if (a.length >= kTwoPi) return GapList{};
    const double s = a.start;
    const double e = s + a.length;
    if (e <= kTwoPi) {
      segs.emplace_back(s, e);
    } else {
      segs.emplace_back(s, kTwoPi);
      segs.emplace_back(0.0, e - kTwoPi);
    }
  }
  std::sort(segs.begin(), segs.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& s : segs) {
    if (!merged.empty() && s.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, s.second);
    } else {
      merged.push_back(s);
    }
  }
  std::vector<Interval> gaps;
  for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
    const double gs = merged[k].second;
    const double ge = merged[k + 1].first;
    if (ge > gs) gaps.emplace_back(gs, ge - gs);
  }
  const double wrap_len = (kTwoPi - merged.back().second) + merged.front().first;
  if (wrap_len > 0.0) gaps.emplace_back(merged.back().second, wrap_len);
  return GapList(std::move(gaps));
}

}  // namespace innerlab
