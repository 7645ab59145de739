#include "innerlab/maximal_blaschke.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "internal.hpp"

namespace innerlab {

CriticalSet CriticalSet::make(std::vector<Zero> points) {
  CriticalSet out;
  for (const auto& p : points) {
    if (p.mult < 1) throw DomainError("critical multiplicity must be >= 1");
    if (!(std::abs(p.point) < 1.0)) throw DomainError("critical points must satisfy |c| < 1");
    auto it = std::find_if(out.points.begin(), out.points.end(),
                           [&](const Zero& z) { return z.point == p.point; });
    if (it != out.points.end()) {
      it->mult += p.mult;
    } else {
      out.points.push_back(p);
    }
  }
  return out;
}

int CriticalSet::total_multiplicity() const {
  int n = 0;
  for (const auto& p : points) n += p.mult;
  return n;
}

CriticalSet CriticalSet::united(const CriticalSet& a, const CriticalSet& b) {
  return {multiset_union(a.points, b.points)};
}

CriticalSet CriticalSet::intersected(const CriticalSet& a, const CriticalSet& b) {
  return {multiset_intersection(a.points, b.points)};
}

namespace {

// Integrates a polynomial with zero constant term.
Polynomial antiderivative(const Polynomial& p) {
  std::vector<Complex> c(p.coeffs().size() + 1);
  for (std::size_t k = 0; k < p.coeffs().size(); ++k)
    c[k + 1] = p.coeffs()[k] / static_cast<double>(k + 1);
  return Polynomial(std::move(c));
}

struct Target {
  Complex point;
  int order;  // derivative order of the condition
};

class HeinsSystem {
 public:
  HeinsSystem(int origin_mult, std::vector<Zero> nonzero) : n0_(origin_mult) {
    for (const auto& c : nonzero)
      for (int k = 0; k < c.mult; ++k) base_.push_back({c.point, k});
  }

  int size() const { return static_cast<int>(base_.size()); }

  // Reduced derivative numerator of z^{n0+1} ∏ φ_{a_j} and its scaled
  // derivatives at t·c_i.
  Eigen::VectorXd residual(const std::vector<Complex>& a, double t) const {
    std::vector<Zero> zs;
    zs.push_back({0.0, n0_ + 1});
    for (const auto& x : a) zs.push_back({x, 1});
    const BlaschkeProduct b(zs);
    Polynomial r = b.reduced_derivative_numerator();
    std::vector<Polynomial> ders = {r};
    int max_order = 0;
    for (const auto& tg : base_) max_order = std::max(max_order, tg.order);
    for (int k = 1; k <= max_order; ++k) ders.push_back(ders.back().derivative());
    Eigen::VectorXd out(2 * size());
    double fact = 1.0;
    std::vector<double> facts(static_cast<std::size_t>(max_order) + 1, 1.0);
    for (int k = 1; k <= max_order; ++k) facts[static_cast<std::size_t>(k)] = (fact *= k);
    for (int e = 0; e < size(); ++e) {
      const auto& tg = base_[static_cast<std::size_t>(e)];
      const Complex v = ders[static_cast<std::size_t>(tg.order)](t * tg.point) /
                        facts[static_cast<std::size_t>(tg.order)];
      out(2 * e) = v.real();
      out(2 * e + 1) = v.imag();
    }
    return out;
  }

 private:
  int n0_;
  std::vector<Target> base_;
};

std::vector<Complex> unpack(const Eigen::VectorXd& x) {
  std::vector<Complex> a(static_cast<std::size_t>(x.size() / 2));
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = {x(2 * j), x(2 * j + 1)};
  return a;
}

bool inside(const Eigen::VectorXd& x) {
  for (Eigen::Index j = 0; j < x.size() / 2; ++j)
    if (std::hypot(x(2 * j), x(2 * j + 1)) >= 1.0) return false;
  return true;
}

// Newton with finite-difference Jacobian; true when converged.
bool correct(const HeinsSystem& sys, Eigen::VectorXd& x, double t, const ContinuationOptions& o) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd f = sys.residual(unpack(x), t);
  const auto scale = [&](const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); };
  for (int it = 0; it < o.max_newton; ++it) {
    Eigen::MatrixXd jac(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(c)));
      Eigen::VectorXd xp = x, xm = x;
      xp(c) += h;
      xm(c) -= h;
      jac.col(c) = (sys.residual(unpack(xp), t) - sys.residual(unpack(xm), t)) / (2.0 * h);
    }
    const Eigen::VectorXd step = jac.fullPivLu().solve(-f);
    if (!step.allFinite()) return false;
    double lam = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 12; ++ls) {
      Eigen::VectorXd trial = x + lam * step;
      if (inside(trial)) {
        Eigen::VectorXd ft = sys.residual(unpack(trial), t);
        if (scale(ft) < scale(f) || scale(f) < o.newton_tol) {
          x = std::move(trial);
          f = std::move(ft);
          accepted = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!accepted) return scale(f) < 1e3 * o.newton_tol;
    if (scale(f) < o.newton_tol && step.cwiseAbs().maxCoeff() * lam < 1e-12) return true;
  }
  return scale(f) < 1e3 * o.newton_tol;
}

}  // namespace

BlaschkeProduct heins_inverse(const CriticalSet& c, const ContinuationOptions& opts,
                              ContinuationReport* report) {
  const int n = c.total_multiplicity();
  if (n > kMaxHeinsMultiplicity) throw DomainError("heins_inverse supports total multiplicity <= 11");
  for (const auto& p : c.points)
    if (!(std::abs(p.point) < 1.0)) throw DomainError("critical points must satisfy |c| < 1");

  int n0 = 0;
  std::vector<Zero> nonzero;
  for (const auto& p : c.points) {
    if (p.point == Complex(0.0)) {
      n0 += p.mult;
    } else {
      nonzero.push_back(p);
    }
  }
  ContinuationReport rep;
  if (nonzero.empty()) {
    rep.last_t = 1.0;
    if (report) *report = rep;
    return BlaschkeProduct::monomial(n + 1);
  }

  // Polynomial limit: q' = ∏ (z - c_i)^{m_i}, q(0) = 0; zeros of F_t ≈ t·α.
  Polynomial dq = Polynomial::constant(1.0);
  for (const auto& p : c.points) dq = dq * Polynomial::linear_root(p.point).pow(p.mult);
  const Polynomial q = antiderivative(dq);
  std::vector<Complex> roots = polynomial_roots(q);
  std::sort(roots.begin(), roots.end(),
            [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
  // The n0 + 1 smallest are the root at the origin; exact zeros were split
  // off by polynomial_roots.
  std::vector<Complex> alpha(roots.begin() + n0 + 1, roots.end());

  const HeinsSystem sys(n0, nonzero);
  double t = opts.t_start;
  Eigen::VectorXd x(2 * alpha.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    x(2 * j) = t * alpha[j].real();
    x(2 * j + 1) = t * alpha[j].imag();
  }
  if (!correct(sys, x, t, opts)) {
    std::ostringstream msg;
    msg << "Heins continuation failed to start at t = " << t;
    throw ConvergenceError(msg.str());
  }

  Eigen::VectorXd x_prev = x;
  double t_prev = t;
  double h = opts.initial_step;
  while (t < 1.0) {
    const double t_next = std::min(1.0, t + h);
    Eigen::VectorXd guess = x;
    if (t > t_prev) guess = x + (x - x_prev) * ((t_next - t) / (t - t_prev));
    if (!inside(guess)) guess = x;
    Eigen::VectorXd trial = guess;
    if (correct(sys, trial, t_next, opts)) {
      x_prev = x;
      t_prev = t;
      x = trial;
      t = t_next;
      ++rep.steps;
      h = std::min(0.2, h * 1.5);
    } else {
      ++rep.rejected_steps;
      h *= 0.5;
      if (h < opts.min_step) {
        std::ostringstream msg;
        msg << "Heins continuation stalled; last good t = " << t;
        throw ConvergenceError(msg.str());
      }
    }
  }
  rep.last_t = t;
  if (report) *report = rep;

  const std::vector<Complex> a = unpack(x);
  std::vector<Zero> zeros = {{0.0, n0 + 1}};
  Complex lead = 1.0;
  for (const auto& z : a) {
    zeros.push_back({z, 1});
    lead *= -z;
  }
  return BlaschkeProduct(zeros, std::conj(lead) / std::abs(lead));
}

double critical_set_distance(const std::vector<Zero>& a, const std::vector<Zero>& b) {
  std::vector<Complex> pa, pb;
  for (const auto& z : a)
    for (int k = 0; k < z.mult; ++k) pa.push_back(z.point);
  for (const auto& z : b)
    for (int k = 0; k < z.mult; ++k) pb.push_back(z.point);
  if (pa.size() != pb.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(pb.size(), false);
  double worst = 0.0;
  for (const auto& x : pa) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < pb.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(pb[j] - x);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

KrausResidual kraus_residual(const BlaschkeProduct& f, const CriticalSet& c,
                             const std::vector<double>& radii, int samples) {
  if (samples < 8) throw DomainError("kraus_residual needs at least 8 samples");
  const std::vector<Zero> crit = f.degree() >= 1 ? critical_points(f) : std::vector<Zero>{};
  if (critical_set_distance(crit, c.points) > 1e-6)
    throw DomainError("function's critical set does not match the given set");
  KrausResidual out;
  out.radii = radii;
  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("radii must lie in (0, 1)");
    double acc = 0.0;
    for (int k = 0; k < samples; ++k) {
      Complex z = std::polar(r, kTwoPi * k / samples);
      for (const auto& p : crit) {
        if (std::abs(z - p.point) < 1e-9) {
          z = std::polar(r, kTwoPi * (k + 0.5) / samples);
          ++out.nudged_samples;
          break;
        }
      }
      acc += f.log_density(z) - log_poincare(z);
    }
    out.values.push_back(acc * kTwoPi / samples);
  }
  return out;
}

SolyninReport solynin_check(const CriticalSet& c1, const CriticalSet& c2, const GridDims& dims,
                            double tol) {
  const BlaschkeProduct f1 = heins_inverse(c1);
  const BlaschkeProduct f2 = heins_inverse(c2);
  const BlaschkeProduct fu = heins_inverse(CriticalSet::united(c1, c2));
  const BlaschkeProduct fi = heins_inverse(CriticalSet::intersected(c1, c2));
  const MetricGrid shape(dims.outer_radius, dims.radial, dims.angular);

  std::vector<Complex> avoid;
  for (const auto* s : {&c1, &c2})
    for (const auto& p : s->points) avoid.push_back(p.point);

  SolyninReport rep;
  rep.margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= dims.radial; ++i) {
    for (int k = 0; k < (i == 0 ? 1 : dims.angular); ++k) {
      const Complex z = shape.point(i, k);
      bool skip = false;
      for (const auto& a : avoid) skip = skip || std::abs(z - a) < 1e-6;
      if (skip) {
        ++rep.skipped_nodes;
        continue;
      }
      const double m = f1.log_density(z) + f2.log_density(z) - fu.log_density(z) - fi.log_density(z);
      if (m < rep.margin) {
        rep.margin = m;
        rep.worst_i = i;
        rep.worst_k = k;
      }
    }
  }
  rep.pass = rep.margin >= -tol;
  return rep;
}

WedgeUnionReport wedge_union_check(const CriticalSet& c1, const CriticalSet& c2,
                                   const GridDims& dims, const SolverOptions& opts) {
  const MetricGrid g1 = pullback_grid(heins_inverse(c1), dims);
  const MetricGrid g2 = pullback_grid(heins_inverse(c2), dims);
  const MetricGrid gu = pullback_grid(heins_inverse(CriticalSet::united(c1, c2)), dims);
  WedgeUnionReport rep;
  const MetricGrid gw = wedge(g1, g2, opts, &rep.obstacle);
  for (int i = 0; i <= dims.radial; ++i) {
    for (int k = 0; k < dims.angular; ++k) {
      const Complex p = gu.point(i, k);
      const double a = gw.w(i, k) + gw.zero_set().log_abs_blaschke(p);
      const double b = gu.w(i, k) + gu.zero_set().log_abs_blaschke(p);
      if (std::isfinite(a) && std::isfinite(b))
        rep.deviation = std::max(rep.deviation, std::abs(a - b));
      else
        rep.deviation = std::max(rep.deviation, std::abs(gw.w(i, k) - gu.w(i, k)));
    }
  }
  return rep;
}

}  // namespace innerlab
