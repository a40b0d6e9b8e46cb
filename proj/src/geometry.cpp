#include "holo/geometry.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace holo {

void set_num_threads(int n) { omp_set_num_threads(std::max(1, n)); }
int max_threads() { return omp_get_max_threads(); }

// ---- ChartDomain -----------------------------------------------------------

ChartDomain ChartDomain::box(Vector lower, Vector upper, double margin) {
  ChartDomain c;
  c.dim = static_cast<int>(lower.size());
  c.lower = std::move(lower);
  c.upper = std::move(upper);
  c.margin = margin;
  c.validate();
  return c;
}

ChartDomain ChartDomain::ball(int dim, double radius, double margin) {
  ChartDomain c;
  c.dim = dim;
  c.lower = Vector::Constant(dim, -radius);
  c.upper = Vector::Constant(dim, radius);
  c.margin = margin;
  c.radius = radius;
  c.validate();
  return c;
}

void ChartDomain::validate() const {
  if (dim < 1) throw std::invalid_argument("ChartDomain: dim must be positive");
  if (lower.size() != dim || upper.size() != dim)
    throw std::invalid_argument("ChartDomain: bounds do not match dim");
  for (int i = 0; i < dim; ++i)
    if (!(lower(i) < upper(i))) throw std::invalid_argument("ChartDomain: lower must be < upper");
  if (!(margin > 0.0) || !(margin < 0.5 * smallest_extent()))
    throw std::invalid_argument("ChartDomain: margin must lie in (0, smallest extent / 2)");
  if (radius && !(*radius > margin)) throw std::invalid_argument("ChartDomain: radius must exceed margin");
}

double ChartDomain::smallest_extent() const { return (upper - lower).minCoeff(); }

double ChartDomain::default_step() const { return 1e-4 * smallest_extent(); }

bool ChartDomain::is_interior(const Point& x) const {
  if (x.size() != dim || !x.allFinite()) return false;
  for (int i = 0; i < dim; ++i)
    if (x(i) < lower(i) + margin || x(i) > upper(i) - margin) return false;
  if (radius && x.norm() > *radius - margin) return false;
  return true;
}

std::vector<Point> ChartDomain::grid_points(int grid) const {
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(grid);
  std::vector<Point> pts;
  pts.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point p(dim);
    std::size_t rest = idx;
    for (int i = 0; i < dim; ++i) {
      const auto step = static_cast<double>(rest % grid) / (grid - 1);
      rest /= grid;
      const double lo = lower(i) + margin;
      const double hi = upper(i) - margin;
      p(i) = lo + step * (hi - lo);
    }
    if (is_interior(p)) pts.push_back(std::move(p));
  }
  return pts;
}

// ---- MetricField -----------------------------------------------------------

std::vector<Matrix> MetricField::derivatives(const Point& x, double step) const {
  if (derivative) return (*derivative)(x);
  std::vector<Matrix> d(dim);
  for (int i = 0; i < dim; ++i) {
    Point xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    d[i] = (evaluate(xp) - evaluate(xm)) / (2.0 * step);
  }
  return d;
}

// ---- Christoffel symbols and compatibility --------------------------------

std::vector<Matrix> christoffel(const MetricField& metric, const ChartDomain& chart, const Point& x,
                                double step) {
  if (!chart.is_interior(x)) throw DomainError("christoffel: point is not in the chart interior");
  const Matrix g = metric.evaluate(x);
  Eigen::LLT<Matrix> llt(g);
  if (!g.allFinite() || llt.info() != Eigen::Success)
    throw std::invalid_argument("christoffel: metric is not positive definite at x");
  const Matrix g_inv = llt.solve(Matrix::Identity(g.rows(), g.cols()));
  const std::vector<Matrix> dg = metric.derivatives(x, step);
  const int n = metric.dim;

  // lowered symbols Gamma_{l,ij} = (d_i g_jl + d_j g_il - d_l g_ij) / 2
  std::vector<Matrix> result(n, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector lowered(n);
      for (int l = 0; l < n; ++l) lowered(l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Vector raised = g_inv * lowered;
      for (int k = 0; k < n; ++k) result[i](k, j) = raised(k);
    }
  return result;
}

ConnectionField levi_civita(const MetricField& metric, const ChartDomain& chart, double step) {
  ConnectionField conn;
  conn.base_dim = metric.dim;
  conn.fibre_dim = metric.dim;
  conn.label = "levi_civita(" + metric.label + ")";
  conn.coefficients = [metric, chart, step](const Point& x) { return christoffel(metric, chart, x, step); };
  conn.metric = metric;
  return conn;
}

double compatibility_residual(const ConnectionField& conn, const MetricField& metric,
                              const ChartDomain& chart, const Point& x, double step) {
  if (!chart.is_interior(x)) throw DomainError("compatibility_residual: point is not interior");
  const Matrix g = metric.evaluate(x);
  const std::vector<Matrix> dg = metric.derivatives(x, step);
  const std::vector<Matrix> a = conn.coefficients(x);
  double worst = 0.0;
  for (int i = 0; i < conn.base_dim; ++i)
    worst = std::max(worst, (dg[i] - a[i].transpose() * g - g * a[i]).norm());
  return worst;
}

// ---- Grid-sup distances ----------------------------------------------------

double c0_connection_distance(const ConnectionField& a, const ConnectionField& b,
                              const ChartDomain& chart, int grid, Exec exec) {
  const std::vector<Point> pts = chart.grid_points(grid);
  std::vector<double> local(pts.size(), 0.0);
  parallel_for(pts.size(), exec, [&](std::size_t p) {
    const auto ca = a.coefficients(pts[p]);
    const auto cb = b.coefficients(pts[p]);
    double worst = 0.0;
    for (std::size_t i = 0; i < ca.size(); ++i) worst = std::max(worst, (ca[i] - cb[i]).norm());
    local[p] = worst;
  });
  return local.empty() ? 0.0 : *std::max_element(local.begin(), local.end());
}

double c1_metric_distance(const MetricField& a, const MetricField& b, const ChartDomain& chart,
                          int grid, double step, Exec exec) {
  const std::vector<Point> pts = chart.grid_points(grid);
  std::vector<double> value_dist(pts.size(), 0.0);
  std::vector<double> deriv_dist(pts.size(), 0.0);
  parallel_for(pts.size(), exec, [&](std::size_t p) {
    value_dist[p] = (a.evaluate(pts[p]) - b.evaluate(pts[p])).norm();
    const auto da = a.derivatives(pts[p], step);
    const auto db = b.derivatives(pts[p], step);
    double worst = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) worst = std::max(worst, (da[i] - db[i]).norm());
    deriv_dist[p] = worst;
  });
  if (pts.empty()) return 0.0;
  return *std::max_element(value_dist.begin(), value_dist.end()) +
         *std::max_element(deriv_dist.begin(), deriv_dist.end());
}

// ---- Curvature -------------------------------------------------------------

std::vector<Matrix> curvature(const ConnectionField& conn, const ChartDomain& chart, const Point& x,
                              double step) {
  if (!chart.is_interior(x)) throw DomainError("curvature: point is not in the chart interior");
  const int n = conn.base_dim;
  const auto a = conn.coefficients(x);
  // da[i][j] = d_i A_j
  std::vector<std::vector<Matrix>> da(n);
  for (int i = 0; i < n; ++i) {
    Point xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    const auto ap = conn.coefficients(xp);
    const auto am = conn.coefficients(xm);
    da[i].resize(n);
    for (int j = 0; j < n; ++j) da[i][j] = (ap[j] - am[j]) / (2.0 * step);
  }
  std::vector<Matrix> f(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f[i * n + j] = da[i][j] - da[j][i] + commutator(a[i], a[j]);
  return f;
}

Matrix standard_complex_structure(int dim) {
  if (dim % 2 != 0) throw std::invalid_argument("complex structure needs even dimension");
  Matrix j = Matrix::Zero(dim, dim);
  for (int p = 0; p < dim / 2; ++p) {
    j(2 * p + 1, 2 * p) = 1.0;
    j(2 * p, 2 * p + 1) = -1.0;
  }
  return j;
}

}  // namespace holo
