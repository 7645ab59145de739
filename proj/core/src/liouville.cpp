#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "innerlab/curvature_metric.hpp"
#include "internal.hpp"

namespace innerlab {

namespace {

// Newton solver for F(w) = flux_sum(w) - area·4(q e^{2w} - 1) = 0 on the
// unknown nodes, with the boundary ring and any `fixed` node held.
class LiouvilleSystem {
 public:
  LiouvilleSystem(const MetricGrid& shape, std::vector<char> fixed)
      : g_(shape), st_(shape), n_(shape.radial_count()), m_(shape.angular_count()),
        fixed_(std::move(fixed)) {
    q_ = Eigen::MatrixXd::Zero(n_ + 1, m_);
    for (int i = 0; i <= n_; ++i)
      for (int k = 0; k < m_; ++k) {
        const double l = g_.zero_set().log_abs_blaschke(g_.point(i, k));
        q_(i, k) = std::exp(2.0 * l);
      }
    if (fixed_.empty()) fixed_.assign(static_cast<std::size_t>(unknowns()), 0);
  }

  int unknowns() const { return 1 + (n_ - 1) * m_; }
  int index(int i, int k) const { return i == 0 ? 0 : 1 + (i - 1) * m_ + k; }

  double residual(const Eigen::MatrixXd& w, int i, int k) const {
    const double a = st_.area[static_cast<std::size_t>(i)];
    return st_.flux_sum(w, i, k) - a * 4.0 * (q_(i, k) * std::exp(2.0 * w(i, k)) - 1.0);
  }

  // Scaled max residual over free nodes.
  double merit(const Eigen::MatrixXd& w) const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < (i == 0 ? 1 : m_); ++k) {
        if (fixed_[static_cast<std::size_t>(index(i, k))]) continue;
        worst = std::max(worst, std::abs(residual(w, i, k)) / st_.area[static_cast<std::size_t>(i)]);
      }
    return worst;
  }

  double merit2(const Eigen::MatrixXd& w) const {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < (i == 0 ? 1 : m_); ++k) {
        if (fixed_[static_cast<std::size_t>(index(i, k))]) continue;
        const double f = residual(w, i, k);
        acc += f * f / st_.area[static_cast<std::size_t>(i)];
      }
    return acc;
  }

  void solve(Eigen::MatrixXd& w, const SolverOptions& opts, SolveReport* report) {
    const int nu = unknowns();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool analyzed = false;
    SolveReport local;
    double current = merit(w);
    local.history.push_back(current);
    int it = 0;
    int stalled = 0;
    for (; it < opts.max_iter && current > opts.tol; ++it) {
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(static_cast<std::size_t>(nu) * 5 + static_cast<std::size_t>(2 * m_));
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu);
      for (int i = 0; i < n_; ++i) {
        for (int k = 0; k < (i == 0 ? 1 : m_); ++k) {
          const int row = index(i, k);
          if (fixed_[static_cast<std::size_t>(row)]) {
            trip.emplace_back(row, row, 1.0);
            continue;
          }
          rhs(row) = residual(w, i, k);
          const double a = st_.area[static_cast<std::size_t>(i)];
          double diag = a * 8.0 * q_(i, k) * std::exp(2.0 * w(i, k));
          auto couple = [&](int ii, int kk, double coef) {
            diag += coef;
            if (ii >= n_) return;  // Dirichlet ring
            const int col = index(ii, kk);
            if (fixed_[static_cast<std::size_t>(col)]) return;
            trip.emplace_back(row, col, -coef);
          };
          if (i == 0) {
            for (int q = 0; q < m_; ++q) couple(1, q, st_.radial_face[0]);
          } else {
            const auto ui = static_cast<std::size_t>(i);
            couple(i + 1, k, st_.radial_face[ui]);
            couple(i - 1, k, st_.radial_face[ui - 1]);
            if (m_ > 1) {
              couple(i, (k + 1) % m_, st_.angular[ui]);
              couple(i, (k + m_ - 1) % m_, st_.angular[ui]);
            }
          }
          trip.emplace_back(row, row, diag);
        }
      }
      Eigen::SparseMatrix<double> a(nu, nu);
      a.setFromTriplets(trip.begin(), trip.end());
      if (!analyzed) {
        ldlt.analyzePattern(a);
        analyzed = true;
      }
      ldlt.factorize(a);
      if (ldlt.info() != Eigen::Success) throw ConvergenceError("Liouville Newton matrix is singular");
      const Eigen::VectorXd delta = ldlt.solve(rhs);

      const double m2 = merit2(w);
      double t = 1.0;
      Eigen::MatrixXd trial;
      for (int ls = 0; ls < 30; ++ls) {
        trial = w;
        apply(trial, delta, t);
        if (merit2(trial) < m2 || ls == 29) break;
        t *= 0.5;
      }
      w = std::move(trial);
      const double before = current;
      current = merit(w);
      local.history.push_back(current);
      // Round-off floor: further Newton steps no longer reduce the residual.
      stalled = current > 0.5 * before ? stalled + 1 : 0;
      if (stalled >= 2 && current <= opts.accept_tol) break;
    }
    local.iterations = it;
    local.residual = current;
    if (report) *report = local;
    if (current > opts.tol && current > opts.accept_tol) {
      std::ostringstream msg;
      msg << "Liouville solve did not converge after " << it << " Newton steps; residual history:";
      for (double h : local.history) msg << ' ' << h;
      throw ConvergenceError(msg.str());
    }
  }

 private:
  void apply(Eigen::MatrixXd& w, const Eigen::VectorXd& delta, double t) const {
    const double c = w(0, 0) + t * delta(0);
    for (int k = 0; k < m_; ++k) w(0, k) = c;
    for (int i = 1; i < n_; ++i)
      for (int k = 0; k < m_; ++k) w(i, k) += t * delta(index(i, k));
  }

  const MetricGrid& g_;
  detail::Stencil st_;
  int n_;
  int m_;
  std::vector<char> fixed_;
  Eigen::MatrixXd q_;
};

Eigen::MatrixXd initial_guess(const MetricGrid& shape, const std::vector<double>& wb) {
  const int n = shape.radial_count();
  const int m = shape.angular_count();
  double mean = 0.0;
  for (double v : wb) mean += v;
  mean /= static_cast<double>(wb.size());
  Eigen::MatrixXd w(n + 1, m);
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double blend = t * t;
    for (int k = 0; k < m; ++k)
      w(i, k) = (1.0 - blend) * std::min(mean, 0.0) + blend * wb[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < m; ++k) w(0, k) = w(0, 0);
  return w;
}

}  // namespace

MetricGrid solve_liouville(double r, const std::vector<double>& boundary_u, int radial,
                           const MetricGrid* init, const ZeroSetAnnotation& zeros,
                           const SolverOptions& opts, SolveReport* report) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("Liouville domain radius must lie in (0, 1)");
  if (boundary_u.empty()) throw DomainError("boundary data must be non-empty");
  for (double v : boundary_u)
    if (!std::isfinite(v)) throw DomainError("boundary data must be finite");
  const int m = static_cast<int>(boundary_u.size());
  MetricGrid shape(r, radial, m, zeros);

  std::vector<double> wb(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const Complex p = shape.point(radial, k);
    wb[static_cast<std::size_t>(k)] =
        boundary_u[static_cast<std::size_t>(k)] - log_poincare(p) - zeros.log_abs_blaschke(p);
  }

  Eigen::MatrixXd w;
  if (init && init->radial_count() == radial && init->angular_count() == m &&
      init->outer_radius() == r) {
    w = init->relative();
    for (int i = 0; i <= radial; ++i)
      for (int k = 0; k < m; ++k) {
        const Complex p = shape.point(i, k);
        w(i, k) += init->zero_set().log_abs_blaschke(p) - zeros.log_abs_blaschke(p);
        if (!std::isfinite(w(i, k))) w(i, k) = 0.0;
      }
  } else {
    w = initial_guess(shape, wb);
  }
  for (int k = 0; k < m; ++k) w(radial, k) = wb[static_cast<std::size_t>(k)];
  for (int k = 1; k < m; ++k) w(0, k) = w(0, 0);

  LiouvilleSystem sys(shape, {});
  sys.solve(w, opts, report);
  return shape.with_relative(std::move(w));
}

MetricGrid solve_obstacle(const MetricGrid& shape, const Eigen::MatrixXd& psi,
                          const SolverOptions& opts, ObstacleReport* report) {
  const int n = shape.radial_count();
  const int m = shape.angular_count();
  if (psi.rows() != n + 1 || psi.cols() != m) throw DomainError("obstacle shape mismatch");

  std::vector<double> wb(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) wb[static_cast<std::size_t>(k)] = psi(n, k);
  Eigen::MatrixXd w = psi;
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k < m; ++k)
      if (!std::isfinite(w(i, k))) w(i, k) = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) w(i, k) = std::min(w(i, k), 50.0);
  for (int k = 0; k < m; ++k) w(0, k) = w(0, 0);

  const int nu = 1 + (n - 1) * m;
  auto index = [m](int i, int k) { return i == 0 ? 0 : 1 + (i - 1) * m + k; };
  std::vector<char> fixed(static_cast<std::size_t>(nu), 0);
  const detail::Stencil st(shape);
  constexpr double kSlack = 1e-9;

  ObstacleReport rep;
  for (int outer = 0; outer < 400; ++outer) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < (i == 0 ? 1 : m); ++k)
        if (fixed[static_cast<std::size_t>(index(i, k))]) w(i, k) = psi(i, k);
    for (int k = 1; k < m; ++k) w(0, k) = w(0, 0);

    LiouvilleSystem sys(shape, fixed);
    sys.solve(w, opts, nullptr);
    rep.outer_iterations = outer + 1;

    bool changed = false;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < (i == 0 ? 1 : m); ++k) {
        const auto j = static_cast<std::size_t>(index(i, k));
        if (!fixed[j] && w(i, k) > psi(i, k) + kSlack) {
          fixed[j] = 1;
          changed = true;
        } else if (fixed[j] && sys.residual(w, i, k) < -kSlack * st.area[static_cast<std::size_t>(i)]) {
          fixed[j] = 0;
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (outer == 399) throw ConvergenceError("obstacle active set did not settle");
  }
  for (int k = 1; k < m; ++k) w(0, k) = w(0, 0);
  rep.contact_nodes = static_cast<int>(std::count(fixed.begin(), fixed.end(), 1));
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) rep.min_slack = std::min(rep.min_slack, psi(i, k) - w(i, k));
  if (report) *report = rep;
  return shape.with_relative(std::move(w));
}

}  // namespace innerlab
