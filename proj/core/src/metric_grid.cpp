#include <algorithm>
#include <array>
#include <cmath>

#include "innerlab/curvature_metric.hpp"
#include "internal.hpp"

namespace innerlab {

double ZeroSetAnnotation::log_abs_blaschke(Complex z) const {
  double acc = 0.0;
  for (const auto& c : zeros)
    acc += c.mult * std::log(std::abs((z - c.point) / (1.0 - std::conj(c.point) * z)));
  return acc;
}

namespace {

std::vector<Zero> merge_multisets(const std::vector<Zero>& a, const std::vector<Zero>& b,
                                  bool take_max) {
  constexpr double kSame = 1e-9;
  std::vector<Zero> out;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    int other = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(b[j].point - x.point) < kSame) {
        other = b[j].mult;
        used[j] = true;
        break;
      }
    }
    const int m = take_max ? std::max(x.mult, other) : std::min(x.mult, other);
    if (m > 0) out.push_back({x.point, m});
  }
  if (take_max)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j]) out.push_back(b[j]);
  return out;
}

}  // namespace

ZeroSetAnnotation ZeroSetAnnotation::united(const ZeroSetAnnotation& a,
                                            const ZeroSetAnnotation& b) {
  return {merge_multisets(a.zeros, b.zeros, true)};
}

std::vector<Zero> multiset_union(const std::vector<Zero>& a, const std::vector<Zero>& b) {
  return merge_multisets(a, b, true);
}

std::vector<Zero> multiset_intersection(const std::vector<Zero>& a, const std::vector<Zero>& b) {
  return merge_multisets(a, b, false);
}

double log_poincare(Complex z) { return -std::log1p(-std::norm(z)); }

MetricGrid::MetricGrid(double outer_radius, int radial, int angular, ZeroSetAnnotation zeros)
    : R_(outer_radius), N_(radial), M_(angular), zeros_(std::move(zeros)) {
  if (!(outer_radius > 0.0 && outer_radius < 1.0))
    throw DomainError("grid outer radius must lie in (0, 1)");
  if (radial < 4) throw DomainError("grid needs at least 4 radial intervals");
  if (angular < 1) throw DomainError("grid needs at least 1 angular node");
  ds_ = std::atanh(R_) / N_;
  r_.resize(static_cast<std::size_t>(N_) + 1);
  for (int i = 0; i <= N_; ++i) r_[static_cast<std::size_t>(i)] = std::tanh(i * ds_);
  r_.back() = R_;
  u_ = Eigen::MatrixXd::Zero(N_ + 1, M_);
  w_ = Eigen::MatrixXd::Zero(N_ + 1, M_);
  refresh_u();
}

namespace {

constexpr double kCollision = 1e-9;

bool near_zero(const ZeroSetAnnotation& z, Complex p) {
  for (const auto& c : z.zeros)
    if (std::abs(c.point - p) < kCollision) return true;
  return false;
}

}  // namespace

void MetricGrid::refresh_u() {
  nudged_.clear();
  for (int i = 0; i <= N_; ++i) {
    for (int k = 0; k < M_; ++k) {
      Complex p = point(i, k);
      if (near_zero(zeros_, p)) {
        p = std::polar(std::tanh(s_node(i) + 0.5 * ds_), theta(k));
        nudged_.push_back({i, k, p});
      }
      u_(i, k) = w_(i, k) + log_poincare(p) + zeros_.log_abs_blaschke(p);
    }
  }
}

MetricGrid MetricGrid::from_relative(double outer_radius, Eigen::MatrixXd w,
                                     ZeroSetAnnotation zeros) {
  MetricGrid g(outer_radius, static_cast<int>(w.rows()) - 1, static_cast<int>(w.cols()),
               std::move(zeros));
  g.w_ = std::move(w);
  g.refresh_u();
  return g;
}

MetricGrid MetricGrid::with_relative(Eigen::MatrixXd w) const {
  if (w.rows() != w_.rows() || w.cols() != w_.cols())
    throw DomainError("relative data does not match grid shape");
  MetricGrid g = *this;
  g.w_ = std::move(w);
  g.refresh_u();
  return g;
}

MetricGrid MetricGrid::sample(double outer_radius, int radial, int angular,
                              const std::function<double(Complex)>& log_density,
                              ZeroSetAnnotation zeros) {
  MetricGrid g(outer_radius, radial, angular, std::move(zeros));
  auto rel = [&](Complex q) {
    return log_density(q) - log_poincare(q) - g.zeros_.log_abs_blaschke(q);
  };
  for (int i = 0; i <= g.N_; ++i) {
    for (int k = 0; k < g.M_; ++k) {
      if (i == 0 && k > 0) {
        g.w_(0, k) = g.w_(0, 0);
        continue;
      }
      const Complex p = g.point(i, k);
      if (near_zero(g.zeros_, p)) {
        const double d = 1e-4 * std::max(g.ds_, 1e-3);
        const std::array<Complex, 4> offs = {Complex(d, 0), Complex(-d, 0), Complex(0, d),
                                             Complex(0, -d)};
        double acc = 0.0;
        for (const auto& o : offs) acc += rel(p + o);
        g.w_(i, k) = 0.25 * acc;
      } else {
        g.w_(i, k) = rel(p);
      }
    }
  }
  g.refresh_u();
  // Record sampled values at nudged positions rather than the w-derived ones.
  for (const auto& n : g.nudged_) g.u_(n.i, n.k) = log_density(n.sampled_at);
  return g;
}

std::vector<double> MetricGrid::boundary_trace() const {
  std::vector<double> out(static_cast<std::size_t>(M_));
  for (int k = 0; k < M_; ++k) out[static_cast<std::size_t>(k)] = u_(N_, k);
  return out;
}

namespace {

// Lagrange weights for nodes x0..x0+3 (unit spacing) at fractional x.
std::array<double, 4> lagrange4(double t) {
  // t measured from node 1 of the four (nodes at -1, 0, 1, 2).
  return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
          -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

}  // namespace

double MetricGrid::relative_at(Complex z) const {
  const double r = std::abs(z);
  if (r > R_ * (1.0 + 1e-12)) throw DomainError("interpolation point outside grid disk");
  const double s = std::atanh(std::min(r, R_));
  const double th = r > 0.0 ? std::arg(z) : 0.0;
  const double dth = dtheta();

  auto ring_value = [&](int i, double theta_) -> double {
    if (i < 0) {
      i = -i;
      theta_ += kPi;
    }
    if (i == 0) return w_(0, 0);
    if (M_ == 1) return w_(i, 0);
    const double x = wrap_angle(theta_) / dth;
    const int k0 = static_cast<int>(std::floor(x));
    const auto wt = lagrange4(x - k0);
    double acc = 0.0;
    for (int q = 0; q < 4; ++q) {
      const int k = ((k0 - 1 + q) % M_ + M_) % M_;
      acc += wt[static_cast<std::size_t>(q)] * w_(i, k);
    }
    return acc;
  };

  const double x = s / ds_;
  int i0 = static_cast<int>(std::floor(x));
  if (i0 + 2 > N_) i0 = N_ - 2;
  const auto wt = lagrange4(x - i0);
  double acc = 0.0;
  for (int q = 0; q < 4; ++q) acc += wt[static_cast<std::size_t>(q)] * ring_value(i0 - 1 + q, th);
  return acc;
}

double MetricGrid::log_density_at(Complex z) const {
  return relative_at(z) + log_poincare(z) + zeros_.log_abs_blaschke(z);
}

double LogDensityField::ring_average(double r, double center, double width) const {
  static constexpr std::array<double, 5> gx = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> gw = {0.2369268850561891, 0.4786286704993665,
                                               0.5688888888888889, 0.4786286704993665,
                                               0.2369268850561891};
  if (width <= 0.0) return log_density(std::polar(r, center));
  constexpr int panels = 2;
  const double step = width / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = center - 0.5 * width + (p + 0.5) * step;
    for (std::size_t q = 0; q < gx.size(); ++q)
      acc += gw[q] * 0.5 * log_density(std::polar(r, mid + 0.5 * step * gx[q]));
  }
  return acc / panels;
}

namespace {

class PoincareField final : public LogDensityField {
 public:
  explicit PoincareField(double scale) : log_scale_(std::log(scale)) {}
  double log_density(Complex z) const override { return log_scale_ + log_poincare(z); }
  double ring_average(double r, double, double) const override {
    return log_scale_ + log_poincare(r);
  }

 private:
  double log_scale_;
};

class ConstantField final : public LogDensityField {
 public:
  explicit ConstantField(double c) : log_c_(std::log(c)) {}
  double log_density(Complex) const override { return log_c_; }
  double ring_average(double, double, double) const override { return log_c_; }

 private:
  double log_c_;
};

class SingularWeightedField final : public LogDensityField {
 public:
  SingularWeightedField(CircleMeasure mu, FieldPtr base) : mu_(std::move(mu)), base_(std::move(base)) {}
  double log_density(Complex z) const override { return base_->log_density(z) - mu_.poisson(z); }
  double ring_average(double r, double center, double width) const override {
    return base_->ring_average(r, center, width) - mu_.ring_average_poisson(r, center, width);
  }

 private:
  CircleMeasure mu_;
  FieldPtr base_;
};

class PullbackField final : public LogDensityField {
 public:
  explicit PullbackField(BlaschkeProduct b) : b_(std::move(b)) {}
  double log_density(Complex z) const override { return b_.log_density(z); }

 private:
  BlaschkeProduct b_;
};

class KrausField final : public LogDensityField {
 public:
  explicit KrausField(ZeroSetAnnotation c) : c_(std::move(c)) {}
  double log_density(Complex z) const override {
    return c_.log_abs_blaschke(z) + log_poincare(z);
  }

 private:
  ZeroSetAnnotation c_;
};

class GridField final : public LogDensityField {
 public:
  explicit GridField(MetricGrid g) : g_(std::move(g)) {}
  double log_density(Complex z) const override { return g_.log_density_at(z); }

 private:
  MetricGrid g_;
};

class FunctionField final : public LogDensityField {
 public:
  explicit FunctionField(std::function<double(Complex)> f) : f_(std::move(f)) {}
  double log_density(Complex z) const override { return f_(z); }

 private:
  std::function<double(Complex)> f_;
};

}  // namespace

FieldPtr poincare_field(double scale) {
  if (!(scale > 0.0)) throw DomainError("metric scale must be positive");
  return std::make_shared<PoincareField>(scale);
}
FieldPtr constant_field(double c) {
  if (!(c > 0.0)) throw DomainError("constant density must be positive");
  return std::make_shared<ConstantField>(c);
}
FieldPtr singular_weighted_field(CircleMeasure mu, FieldPtr base) {
  return std::make_shared<SingularWeightedField>(std::move(mu), std::move(base));
}
FieldPtr pullback_field(BlaschkeProduct b) { return std::make_shared<PullbackField>(std::move(b)); }
FieldPtr kraus_field(ZeroSetAnnotation c) { return std::make_shared<KrausField>(std::move(c)); }
FieldPtr grid_field(MetricGrid g) { return std::make_shared<GridField>(std::move(g)); }
FieldPtr function_field(std::function<double(Complex)> f) {
  return std::make_shared<FunctionField>(std::move(f));
}

std::vector<double> boundary_samples(const LogDensityField& f, double r, int angular) {
  std::vector<double> out(static_cast<std::size_t>(angular));
  const double width = kTwoPi / angular;
  for (int k = 0; k < angular; ++k)
    out[static_cast<std::size_t>(k)] = f.ring_average(r, kTwoPi * k / angular, width);
  return out;
}

MetricGrid poincare_grid(const GridDims& dims) {
  if (dims.outer_radius > 1.0 - 1e-6) throw DomainError("poincare_grid requires r <= 1 - 1e-6");
  return MetricGrid(dims.outer_radius, dims.radial, dims.angular);
}

MetricGrid pullback_grid(const BlaschkeProduct& b, const GridDims& dims) {
  ZeroSetAnnotation z;
  if (b.degree() >= 1) z.zeros = critical_points(b);
  return MetricGrid::sample(dims.outer_radius, dims.radial, dims.angular,
                            [&](Complex p) { return b.log_density(p); }, std::move(z));
}

MetricGrid kraus_grid(const ZeroSetAnnotation& c, const GridDims& dims) {
  return MetricGrid(dims.outer_radius, dims.radial, dims.angular, c);
}

MetricGrid field_grid(const LogDensityField& f, const GridDims& dims, ZeroSetAnnotation zeros) {
  return MetricGrid::sample(dims.outer_radius, dims.radial, dims.angular,
                            [&](Complex p) { return f.log_density(p); }, std::move(zeros));
}

Eigen::MatrixXd curvature_residual(const MetricGrid& g) {
  const int n = g.radial_count();
  const int m = g.angular_count();
  const detail::Stencil st(g);
  Eigen::MatrixXd k = Eigen::MatrixXd::Constant(n + 1, m, std::numeric_limits<double>::quiet_NaN());
  const Eigen::MatrixXd& w = g.relative();
  for (int i = 0; i < n; ++i) {
    for (int q = 0; q < m; ++q) {
      if (i == 0 && q > 0) {
        k(0, q) = k(0, 0);
        continue;
      }
      const double lw = st.laplacian(w, i, q);
      const Complex p = g.point(i, q);
      const double wp = w(i, q) + g.zero_set().log_abs_blaschke(p);
      k(i, q) = -(4.0 + lw) * std::exp(-2.0 * wp);
    }
  }
  return k;
}

SkReport sk_check(const MetricGrid& g, double tol) {
  const Eigen::MatrixXd k = curvature_residual(g);
  SkReport rep;
  for (int i = 0; i < g.radial_count(); ++i) {
    for (int q = 0; q < g.angular_count(); ++q) {
      const double v = k(i, q);
      if (std::isnan(v)) continue;
      if (v > rep.worst_curvature) {
        rep.worst_curvature = v;
        rep.worst_i = i;
        rep.worst_k = q;
      }
    }
  }
  rep.ok = rep.worst_curvature <= -4.0 + tol;
  return rep;
}

namespace {

MetricGrid combine(const MetricGrid& g1, const MetricGrid& g2, bool take_max) {
  if (g1.radial_count() != g2.radial_count() || g1.angular_count() != g2.angular_count() ||
      g1.outer_radius() != g2.outer_radius())
    throw DomainError("metric grids must share their shape");
  ZeroSetAnnotation z{take_max ? multiset_intersection(g1.zero_set().zeros, g2.zero_set().zeros)
                               : multiset_union(g1.zero_set().zeros, g2.zero_set().zeros)};
  Eigen::MatrixXd w(g1.radial_count() + 1, g1.angular_count());
  for (int i = 0; i <= g1.radial_count(); ++i) {
    for (int k = 0; k < g1.angular_count(); ++k) {
      const Complex p = g1.point(i, k);
      const double lz = z.log_abs_blaschke(p);
      const double a = g1.w(i, k) + g1.zero_set().log_abs_blaschke(p) - lz;
      const double b = g2.w(i, k) + g2.zero_set().log_abs_blaschke(p) - lz;
      w(i, k) = take_max ? std::max(a, b) : std::min(a, b);
    }
  }
  return MetricGrid::from_relative(g1.outer_radius(), std::move(w), std::move(z));
}

}  // namespace

MetricGrid pointwise_max(const MetricGrid& g1, const MetricGrid& g2) { return combine(g1, g2, true); }
MetricGrid pointwise_min(const MetricGrid& g1, const MetricGrid& g2) { return combine(g1, g2, false); }

}  // namespace innerlab
