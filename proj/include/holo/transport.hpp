#pragma once

// Parallel transport along piecewise-differentiable loops.
//
// Conventions: a section s along c solves s'(t) = -sum_i c'^i(t) A_i(c(t)) s(t)
// with s(0) = I, and traversing c then d gives P = P_d * P_c. For the
// Poincare disk family a counter-clockwise circle yields a rotation by
// -Area/k^2 (negative curvature), measured in a g-orthonormal frame.

#include "holo/geometry.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace holo {

/// A differentiable piece t in [0, 1] -> chart.
struct CurveSegment {
  std::function<Point(double)> position;
  std::function<Point(double)> velocity;
};

struct LoopPath {
  std::vector<CurveSegment> segments;
  Point basepoint;
  std::string label;

  /// Checks chaining and closure (tolerance 1e-12) and, on a dense sample,
  /// that the image stays in the chart interior.
  void validate(const ChartDomain& chart) const;
  Point start() const;
  Point end() const;
};

struct TransportResult {
  Matrix matrix;
  double error_estimate = 0.0;
  double so_defect = 0.0;
  int steps_used = 0;
};

// ---- loop builders ----

CurveSegment line_segment(const Point& from, const Point& to);
/// Counter-clockwise square in the (i, j) coordinate plane with corner at x.
LoopPath square_loop(const Point& x, int i, int j, double side);
/// Circle in the (i, j) plane around `center`, starting and ending at
/// center + radius * e_i, counter-clockwise.
LoopPath circle_loop(const Point& center, double radius, int i, int j);
/// Loop traversed backwards.
LoopPath reversed(const LoopPath& loop);
/// c followed by d (both based at the same point).
LoopPath concatenate(const LoopPath& c, const LoopPath& d);

/// Bump profile sigma(t) = t - sin(2 pi t) / (2 pi): smooth, increasing,
/// sigma'(0) = sigma'(1) = 0.
double bump_profile(double t);
double bump_profile_derivative(double t);

/// Reparametrizes every segment by the bump profile so the velocity
/// vanishes at segment endpoints.
LoopPath reparametrize_smooth(const LoopPath& loop);

/// Fixed-step RK4 transport. `steps` per segment, even and >= 16. The error
/// estimate compares against a rerun with half as many steps (Richardson,
/// divided by 15). so_defect is so_residual against the connection's metric
/// at the basepoint (identity if the connection carries no metric).
TransportResult parallel_transport(const ConnectionField& conn, const LoopPath& loop, int steps,
                                   const ChartDomain& chart);

/// Transport without error estimation; the raw RK4 solution.
Matrix transport_matrix(const ConnectionField& conn, const LoopPath& loop, int steps,
                        const ChartDomain& chart);

/// Transports every loop of a catalog.
std::vector<TransportResult> transport_all(const ConnectionField& conn, const std::vector<LoopPath>& loops,
                                           int steps, const ChartDomain& chart, Exec exec = Exec::parallel);

// ---- loop catalog ----

struct LoopSpec {
  std::vector<double> square_scales;
  std::vector<double> circle_radii;
  int random_count = 0;
  std::uint64_t seed = 0;
  double random_amplitude = 0.1;
  int random_modes = 3;
};

struct LoopCatalog {
  std::vector<LoopPath> loops;
  std::vector<std::string> notes;  ///< shrunk or rejected loops
};

/// Squares for every index pair and scale, circles through x in every
/// coordinate plane, and seeded random Fourier loops.
LoopCatalog loop_catalog(const Point& x, const LoopSpec& spec, const ChartDomain& chart);

// ---- convergence across a family ----

struct ConvergenceRow {
  int k = 0;
  double transport_distance = 0.0;
  double connection_distance = 0.0;
  double error_estimate = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope through the origin of transport vs connection distance.
  double regression_constant = 0.0;
  /// Smallest C with transport_distance <= C * connection_distance on every row.
  double bound_constant = 0.0;
};

ConvergenceTable transport_convergence_table(const MetricFamily& family, const LoopPath& loop,
                                             const std::vector<int>& ks, int steps, int grid,
                                             Exec exec = Exec::parallel);

/// Rotation angle atan2(P(1,0), P(0,0)) of a 2x2 matrix.
double rotation_angle(const Matrix& p);

}  // namespace holo
