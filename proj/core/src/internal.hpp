#pragma once

#include <cmath>
#include <vector>

#include "innerlab/curvature_metric.hpp"

namespace innerlab {

std::vector<Zero> multiset_union(const std::vector<Zero>& a, const std::vector<Zero>& b);
std::vector<Zero> multiset_intersection(const std::vector<Zero>& a, const std::vector<Zero>& b);

namespace detail {

// Finite-volume hyperbolic Laplacian on a polar grid with s-uniform rings.
// Ring i >= 1 is the cell [s_i - ds/2, s_i + ds/2] x [θ_k - dθ/2, θ_k + dθ/2];
// the center node owns the hyperbolic disk of radius ds/2.
struct Stencil {
  int n = 0;
  int m = 0;
  double ds = 0.0;
  double dth = 0.0;
  std::vector<double> radial_face;  // face between rings i and i+1, i = 0..n-1
  std::vector<double> angular;      // ring i >= 1
  std::vector<double> area;         // area[0] is the center cell

  explicit Stencil(const MetricGrid& g)
      : n(g.radial_count()), m(g.angular_count()), ds(g.ds()), dth(g.dtheta()) {
    auto rho = [](double s) { return 0.5 * std::sinh(2.0 * s); };
    radial_face.resize(static_cast<std::size_t>(n));
    angular.assign(static_cast<std::size_t>(n) + 1, 0.0);
    area.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) radial_face[static_cast<std::size_t>(i)] = rho((i + 0.5) * ds) * dth / ds;
    for (int i = 1; i <= n; ++i) {
      const double r = rho(i * ds);
      angular[static_cast<std::size_t>(i)] = m > 1 ? ds / (r * dth) : 0.0;
      area[static_cast<std::size_t>(i)] = r * ds * dth;
    }
    const double sh = std::sinh(0.5 * ds);
    area[0] = kPi * sh * sh;
  }

  // Σ fluxes into the cell of node (i, k), 0 <= i < n.
  double flux_sum(const Eigen::MatrixXd& w, int i, int k) const {
    if (i == 0) {
      double acc = 0.0;
      for (int q = 0; q < m; ++q) acc += w(1, q) - w(0, 0);
      return radial_face[0] * acc;
    }
    const auto ui = static_cast<std::size_t>(i);
    const int kp = (k + 1) % m;
    const int km = (k + m - 1) % m;
    const double inner = i == 1 ? w(0, 0) : w(i - 1, k);
    return radial_face[ui] * (w(i + 1, k) - w(i, k)) - radial_face[ui - 1] * (w(i, k) - inner) +
           angular[ui] * (w(i, kp) - 2.0 * w(i, k) + w(i, km));
  }

  double laplacian(const Eigen::MatrixXd& w, int i, int k) const {
    return flux_sum(w, i, k) / area[static_cast<std::size_t>(i)];
  }
};

}  // namespace detail
}  // namespace innerlab
