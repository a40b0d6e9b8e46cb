#pragma once

// Chart-based metrics and connections on a single coordinate patch.

#include "holo/matrix_core.hpp"
#include "holo/parallel.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace holo {

using Point = Eigen::VectorXd;

/// Coordinate box, optionally intersected with a centred ball. Points at
/// distance < margin from the boundary are not interior.
struct ChartDomain {
  int dim = 0;
  Vector lower;
  Vector upper;
  double margin = 0.0;
  std::optional<double> radius;  ///< ball |x| < radius around the origin

  static ChartDomain box(Vector lower, Vector upper, double margin);
  static ChartDomain ball(int dim, double radius, double margin);

  /// Throws std::invalid_argument when the invariants fail.
  void validate() const;
  bool is_interior(const Point& x) const;
  double smallest_extent() const;
  /// Default finite-difference step: 1e-4 times the smallest extent.
  double default_step() const;
  /// Interior points of the grid^n lattice spanning the margin-shrunk box.
  std::vector<Point> grid_points(int grid) const;
};

/// Riemannian metric on a chart, with optional analytic first derivatives.
struct MetricField {
  using Evaluate = std::function<Matrix(const Point&)>;
  using Derivative = std::function<std::vector<Matrix>(const Point&)>;

  int dim = 0;
  Evaluate evaluate;
  std::optional<Derivative> derivative;
  std::string label;

  /// Analytic derivatives when present; central differences otherwise.
  std::vector<Matrix> derivatives(const Point& x, double step) const;
};

/// Connection coefficients A_1..A_n (each l x l) with nabla_i s = d_i s + A_i s.
struct ConnectionField {
  using Coefficients = std::function<std::vector<Matrix>(const Point&)>;

  int base_dim = 0;
  int fibre_dim = 0;
  Coefficients coefficients;
  std::string label;
  /// The metric this connection is compatible with, when known.
  std::optional<MetricField> metric;
};

/// A sequence of metrics g_k converging to a limit g on a chart.
struct MetricFamily {
  std::string name;
  std::function<MetricField(int)> member;
  MetricField limit;
  Point basepoint;
  ChartDomain chart;
};

/// Christoffel symbols at x: (A_i)^k_j = Gamma^k_ij.
std::vector<Matrix> christoffel(const MetricField& metric, const ChartDomain& chart, const Point& x,
                                double step);

/// Levi-Civita connection as a field; carries the metric.
ConnectionField levi_civita(const MetricField& metric, const ChartDomain& chart, double step);

/// max_i |d_i M_g - A_i^T M_g - M_g A_i|_F.
double compatibility_residual(const ConnectionField& conn, const MetricField& metric,
                              const ChartDomain& chart, const Point& x, double step);

/// Grid-sup of max_i |A_i^a - A_i^b|_F over interior lattice points.
double c0_connection_distance(const ConnectionField& a, const ConnectionField& b,
                              const ChartDomain& chart, int grid, Exec exec = Exec::parallel);

/// Grid-sup of |M_a - M_b|_F plus grid-sup over i of |d_i M_a - d_i M_b|_F.
double c1_metric_distance(const MetricField& a, const MetricField& b, const ChartDomain& chart,
                          int grid, double step, Exec exec = Exec::parallel);

/// F_ij = d_i A_j - d_j A_i + [A_i, A_j], stored row-major as result[i * n + j].
std::vector<Matrix> curvature(const ConnectionField& conn, const ChartDomain& chart, const Point& x,
                              double step);

/// Names accepted by builtin_family.
const std::vector<std::string>& builtin_family_names();

/// Numeric parameters by name; unknown names are rejected by builtin_family.
struct FamilyParams {
  std::vector<std::pair<std::string, double>> values;
  std::optional<double> get(const std::string& key) const;
};

MetricFamily builtin_family(const std::string& name, const FamilyParams& params = {});

/// Standard complex structure on R^{2m}: (x, y) -> (-y, x) on each pair.
Matrix standard_complex_structure(int dim);

}  // namespace holo
