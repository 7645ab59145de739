#include "innerlab/curvature_metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "internal.hpp"

namespace innerlab {

std::vector<double> default_hull_radii() { return dyadic_radii(3, 12); }

HullResult hull(const LogDensityField& lower, const HullOptions& opts) {
  std::vector<double> radii = opts.radii.empty() ? default_hull_radii() : opts.radii;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0 && radii[k] < 1.0)) throw DomainError("hull radii must lie in (0, 1)");
    if (k > 0 && !(radii[k] > radii[k - 1])) throw DomainError("hull radii must be increasing");
  }
  const int m = opts.dims.angular;
  const int n = opts.dims.radial;

  std::optional<MetricGrid> prev;
  HullResult out{MetricGrid(radii.front(), n, m), radii, {}, 0.0, false};
  for (double r : radii) {
    MetricGrid cur = solve_liouville(r, boundary_samples(lower, r, m), n, nullptr, {}, opts.solver);
    out.origin_values.push_back(std::exp(cur.u(0, 0)));
    if (prev) {
      // Compare on sample points inside the previous disk.
      double worst = 0.0;
      const double rp = prev->outer_radius();
      for (double f : {0.0, 0.25, 0.5, 0.75, 0.95}) {
        for (int k = 0; k < 16; ++k) {
          const Complex z = std::polar(f * rp, kTwoPi * k / 16.0);
          worst = std::max(worst, prev->log_density_at(z) - cur.log_density_at(z));
          if (f == 0.0) break;
        }
      }
      out.max_decrease = std::max(out.max_decrease, worst);
      if (worst > opts.monotone_tol) {
        std::ostringstream msg;
        msg << "hull iterates decreased by " << worst << " (log density) between radii " << rp
            << " and " << r << "; the lower density is not SK";
        throw ConvergenceError(msg.str());
      }
    }
    prev = std::move(cur);
  }
  out.grid = std::move(*prev);
  const std::size_t s = out.origin_values.size();
  out.converged = s >= 2 && std::abs(out.origin_values[s - 1] - out.origin_values[s - 2]) <
                                opts.converge_tol;
  return out;
}

MetricGrid perron_modify(const MetricGrid& g, Complex center, double radius,
                         const SolverOptions& opts) {
  const double c = std::abs(center);
  if (!(radius > 0.0)) throw DomainError("subdisk radius must be positive");
  if (c + radius > g.outer_radius() * (1.0 + 1e-12))
    throw DomainError("subdisk escapes the grid domain");

  // A disk automorphism T carrying the subdisk onto the centered disk D_ρ'.
  // λ/λ_D is automorphism invariant, so the relative density transports.
  const double alpha = c > 0.0 ? std::arg(center) : 0.0;
  const double x1 = c - radius;
  const double x2 = c + radius;
  double a = 0.0;
  if (c > 0.0) {
    const double p = 1.0 + x1 * x2;
    const double q = x1 + x2;
    a = (p - std::sqrt(p * p - q * q)) / q;
  }
  const Complex rot = std::polar(1.0, alpha);
  auto to_model = [&](Complex z) {
    const Complex y = z / rot;
    return (y - a) / (1.0 - a * y);
  };
  auto from_model = [&](Complex zeta) { return rot * (zeta + a) / (1.0 + a * zeta); };
  const double rho = (x2 - a) / (1.0 - a * x2);

  auto v_of = [&](Complex z) { return g.log_density_at(z) - log_poincare(z); };
  const int m = g.angular_count();
  std::vector<double> bu(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const Complex zeta = std::polar(rho, kTwoPi * k / m);
    bu[static_cast<std::size_t>(k)] = v_of(from_model(zeta)) + log_poincare(zeta);
  }
  const MetricGrid sub = solve_liouville(rho, bu, g.radial_count(), nullptr, {}, opts);

  ZeroSetAnnotation kept;
  ZeroSetAnnotation removed;
  for (const auto& z : g.zero_set().zeros)
    (std::abs(z.point - center) < radius ? removed : kept).zeros.push_back(z);

  Eigen::MatrixXd w = g.relative();
  for (int i = 0; i <= g.radial_count(); ++i) {
    for (int k = 0; k < m; ++k) {
      const Complex p = g.point(i, k);
      if (std::abs(p - center) < radius) {
        Complex zeta = to_model(p);
        if (std::abs(zeta) > rho) zeta *= rho / std::abs(zeta);
        w(i, k) = sub.relative_at(zeta) - kept.log_abs_blaschke(p);
      } else {
        w(i, k) += removed.log_abs_blaschke(p);
      }
    }
  }
  for (int k = 1; k < m; ++k) w(0, k) = w(0, 0);
  return MetricGrid::from_relative(g.outer_radius(), std::move(w), std::move(kept));
}

MetricGrid wedge(const MetricGrid& g1, const MetricGrid& g2, const SolverOptions& opts,
                 ObstacleReport* report) {
  const MetricGrid lo = pointwise_min(g1, g2);
  return solve_obstacle(lo, lo.relative(), opts, report);
}

}  // namespace innerlab
