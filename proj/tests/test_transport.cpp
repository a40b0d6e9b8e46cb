#include "holo/transport.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace holo;
using namespace holo::testing;

namespace {

Point origin(int n) { return Point::Zero(n); }

// Hyperbolic area of the disk |x| < rho for 4|dx|^2 / (1 - r^2/k^2)^2, composite Simpson in r.
double poincare_disk_area(double rho, double k) {
  const int n = 4000;
  const double h = rho / n;
  auto f = [k](double r) {
    const double u = 1.0 - r * r / (k * k);
    return 2.0 * std::numbers::pi * r * 4.0 / (u * u);
  };
  double sum = f(0.0) + f(rho);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

ConnectionField lc(const MetricFamily& fam, const MetricField& m) {
  return levi_civita(m, fam.chart, fam.chart.default_step());
}

// Single-segment loop wrapper used to transport one piece in isolation.
LoopPath piece(const CurveSegment& seg) {
  LoopPath p;
  p.segments = {seg};
  p.basepoint = seg.position(0.0);
  p.label = "piece";
  return p;
}

}  // namespace

TEST(Transport, FlatConnectionGivesIdentity) {
  const MetricFamily fam = builtin_family("flat", {{{"dim", 3}}});
  const ConnectionField conn = lc(fam, fam.member(1));
  LoopSpec spec;
  spec.square_scales = {0.1};
  spec.circle_radii = {0.1};
  spec.random_count = 4;
  for (const auto& loop : loop_catalog(origin(3), spec, fam.chart).loops) {
    const TransportResult tr = parallel_transport(conn, loop, 64, fam.chart);
    EXPECT_LT((tr.matrix - Matrix::Identity(3, 3)).norm(), 1e-12) << loop.label;
  }
}

TEST(Transport, CircleHolonomyMatchesGaussBonnetQuadrature) {
  const MetricFamily fam = builtin_family("poincare2d");
  for (int k : {1, 2, 8})
    for (double rho : {0.1, 0.3}) {
      const LoopPath loop = circle_loop(origin(2), rho, 0, 1);
      const TransportResult tr = parallel_transport(lc(fam, fam.member(k)), loop, 2048, fam.chart);
      const double expected = -poincare_disk_area(rho, k) / (k * k);
      // the metric is scalar at the basepoint, so coordinates are already a conformal frame
      EXPECT_NEAR(rotation_angle(tr.matrix), expected, 1e-9 * std::abs(expected)) << "k=" << k << " rho=" << rho;
      EXPECT_LT(tr.so_defect, 1e-10);
    }
}

TEST(Transport, ConcatenationComposes) {
  const MetricFamily fam = builtin_family("poincare2d");
  const ConnectionField conn = lc(fam, fam.member(1));
  const Point x = fam.basepoint;
  const LoopPath c = square_loop(x, 0, 1, 0.1);
  Point center = x;
  center(0) -= 0.15;
  LoopPath d = circle_loop(center, 0.15, 0, 1);
  d.basepoint = x;
  const auto pc = parallel_transport(conn, c, 512, fam.chart);
  const auto pd = parallel_transport(conn, d, 512, fam.chart);
  const auto pcd = parallel_transport(conn, concatenate(c, d), 512, fam.chart);
  EXPECT_LT((pcd.matrix - pd.matrix * pc.matrix).norm(),
            pc.error_estimate + pd.error_estimate + pcd.error_estimate + 1e-13);
  EXPECT_THROW(concatenate(c, circle_loop(origin(2), 0.1, 0, 1)), std::invalid_argument);
}

TEST(Transport, ReversalInverts) {
  const MetricFamily fam = builtin_family("sheared_poincare");
  const ConnectionField conn = lc(fam, fam.member(1));
  const LoopPath loop = square_loop(fam.basepoint, 0, 1, 0.2);
  const auto fwd = parallel_transport(conn, loop, 512, fam.chart);
  const auto back = parallel_transport(conn, reversed(loop), 512, fam.chart);
  EXPECT_LT((back.matrix * fwd.matrix - Matrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(Transport, FourthOrderConvergence) {
  const MetricFamily fam = builtin_family("poincare2d");
  const ConnectionField conn = lc(fam, fam.member(1));
  const LoopPath loop = circle_loop(origin(2), 0.4, 0, 1);
  const double e16 = parallel_transport(conn, loop, 16, fam.chart).error_estimate;
  const double e32 = parallel_transport(conn, loop, 32, fam.chart).error_estimate;
  const double e64 = parallel_transport(conn, loop, 64, fam.chart).error_estimate;
  EXPECT_GT(e16 / e32, 12.0);
  EXPECT_LT(e16 / e32, 20.0);
  EXPECT_GT(e32 / e64, 12.0);
  EXPECT_LT(e32 / e64, 20.0);
}

TEST(Transport, ErrorEstimateTracksTrueError) {
  const MetricFamily fam = builtin_family("poincare2d");
  const ConnectionField conn = lc(fam, fam.member(1));
  const LoopPath loop = circle_loop(origin(2), 0.4, 0, 1);
  const Matrix reference = parallel_transport(conn, loop, 4096, fam.chart).matrix;
  const auto coarse = parallel_transport(conn, loop, 32, fam.chart);
  const double actual = (coarse.matrix - reference).norm();
  EXPECT_GT(coarse.error_estimate, 0.5 * actual);
  EXPECT_LT(coarse.error_estimate, 2.0 * actual);
}

TEST(Transport, ReparametrizationInvariance) {
  const MetricFamily fam = builtin_family("fubini_study_chart");
  const ConnectionField conn = lc(fam, fam.member(1));
  Point center = fam.basepoint;
  center(0) -= 0.2;
  LoopPath loop = circle_loop(center, 0.2, 0, 2);
  loop.basepoint = fam.basepoint;
  const auto a = parallel_transport(conn, loop, 256, fam.chart);
  const auto b = parallel_transport(conn, reparametrize_smooth(loop), 256, fam.chart);
  EXPECT_LT((a.matrix - b.matrix).norm(), 10.0 * (a.error_estimate + b.error_estimate) + 1e-13);
}

TEST(Transport, SmoothedSquareHasZeroCornerVelocity) {
  const LoopPath sq = reparametrize_smooth(square_loop(origin(2), 0, 1, 0.1));
  for (const auto& seg : sq.segments) {
    EXPECT_EQ(seg.velocity(0.0).norm(), 0.0);
    EXPECT_EQ(seg.velocity(1.0).norm(), 0.0);
  }
}

TEST(Transport, SquareEqualsSegmentwiseComposition) {
  const MetricFamily fam = builtin_family("product4d");
  const ConnectionField conn = lc(fam, fam.member(1));
  const LoopPath sq = square_loop(fam.basepoint, 0, 1, 0.1);
  Matrix composed = Matrix::Identity(4, 4);
  for (const auto& seg : sq.segments) composed = transport_matrix(conn, piece(seg), 1024, fam.chart) * composed;
  const auto smooth = parallel_transport(conn, reparametrize_smooth(sq), 1024, fam.chart);
  EXPECT_LT((smooth.matrix - composed).norm(), 1e-9);
}

TEST(Transport, DomainAndNumericErrors) {
  const MetricFamily fam = builtin_family("poincare2d");
  const ConnectionField conn = lc(fam, fam.member(1));
  EXPECT_THROW(parallel_transport(conn, circle_loop(origin(2), 0.49, 0, 1), 64, fam.chart), DomainError);
  EXPECT_THROW(parallel_transport(conn, circle_loop(origin(2), 0.1, 0, 1), 15, fam.chart), std::invalid_argument);
  EXPECT_THROW(parallel_transport(conn, circle_loop(origin(2), 0.1, 0, 1), 8, fam.chart), std::invalid_argument);
  ConnectionField bad = conn;
  bad.coefficients = [](const Point&) {
    return std::vector<Matrix>(2, Matrix::Constant(2, 2, std::numeric_limits<double>::quiet_NaN()));
  };
  EXPECT_THROW(parallel_transport(bad, circle_loop(origin(2), 0.1, 0, 1), 64, fam.chart), NumericError);
  LoopPath open = circle_loop(origin(2), 0.1, 0, 1);
  open.basepoint(0) += 0.01;
  EXPECT_THROW(parallel_transport(conn, open, 64, fam.chart), std::invalid_argument);
}

TEST(Transport, StaysInTwistedGroupAcrossFamilies) {
  for (const auto& name : builtin_family_names()) {
    const MetricFamily fam = builtin_family(name);
    LoopSpec spec;
    spec.square_scales = {0.05};
    spec.random_count = 3;
    spec.seed = 4;
    const ConnectionField conn = lc(fam, fam.member(2));
    for (const auto& tr : transport_all(conn, loop_catalog(fam.basepoint, spec, fam.chart).loops, 512, fam.chart))
      EXPECT_LT(tr.so_defect, std::max(1e-10, 10.0 * tr.error_estimate)) << name;
  }
}

// ---- catalog ----

TEST(LoopCatalog, SquareCountsPerPlane) {
  LoopSpec spec;
  spec.square_scales = {0.05};
  const MetricFamily p = builtin_family("poincare2d");
  EXPECT_EQ(loop_catalog(p.basepoint, spec, p.chart).loops.size(), 1u);
  const MetricFamily q = builtin_family("product4d");
  EXPECT_EQ(loop_catalog(q.basepoint, spec, q.chart).loops.size(), 6u);
  spec.square_scales = {0.02, 0.05};
  spec.circle_radii = {0.1};
  EXPECT_EQ(loop_catalog(q.basepoint, spec, q.chart).loops.size(), 18u);
}

TEST(LoopCatalog, LoopsAreClosedAndInside) {
  LoopSpec spec;
  spec.square_scales = {0.05};
  spec.circle_radii = {0.1};
  spec.random_count = 10;
  spec.random_amplitude = 0.3;
  const MetricFamily fam = builtin_family("fubini_study_chart");
  for (const auto& loop : loop_catalog(fam.basepoint, spec, fam.chart).loops) {
    EXPECT_NO_THROW(loop.validate(fam.chart)) << loop.label;
    EXPECT_LT((loop.basepoint - fam.basepoint).norm(), 1e-15);
  }
}

TEST(LoopCatalog, SeedDeterminism) {
  LoopSpec spec;
  spec.random_count = 5;
  spec.seed = 42;
  const MetricFamily fam = builtin_family("product4d");
  const auto a = loop_catalog(fam.basepoint, spec, fam.chart).loops;
  const auto b = loop_catalog(fam.basepoint, spec, fam.chart).loops;
  spec.seed = 43;
  const auto c = loop_catalog(fam.basepoint, spec, fam.chart).loops;
  ASSERT_EQ(a.size(), b.size());
  bool any_differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (double t : {0.1, 0.37, 0.8}) {
      EXPECT_EQ(a[i].segments[0].position(t), b[i].segments[0].position(t));
      any_differs |= a[i].segments[0].position(t) != c[i].segments[0].position(t);
    }
  EXPECT_TRUE(any_differs);
}

TEST(LoopCatalog, OversizedLoopsAreRejectedWithNotes) {
  LoopSpec spec;
  spec.square_scales = {0.9};
  spec.random_count = 1;
  spec.random_amplitude = 100.0;
  const MetricFamily fam = builtin_family("poincare2d");
  const LoopCatalog cat = loop_catalog(fam.basepoint, spec, fam.chart);
  EXPECT_TRUE(cat.loops.empty());
  EXPECT_EQ(cat.notes.size(), 2u);
}

// ---- convergence table ----

TEST(ConvergenceTable, ConstantFamilyIsZero) {
  const MetricFamily fam = builtin_family("flat");
  const auto table = transport_convergence_table(fam, square_loop(origin(2), 0, 1, 0.1), {1, 2, 3}, 64, 5);
  for (const auto& row : table.rows) {
    EXPECT_LE(row.transport_distance, 2 * row.error_estimate + 1e-15);
    EXPECT_EQ(row.connection_distance, 0.0);
  }
}

TEST(ConvergenceTable, PoincareCircleMatchesClosedFormAndDecreases) {
  const MetricFamily fam = builtin_family("poincare2d");
  const double rho = 0.3;
  const std::vector<int> ks{2, 4, 8, 16, 32};
  const auto table = transport_convergence_table(fam, circle_loop(origin(2), rho, 0, 1), ks, 2048, 21);
  ASSERT_EQ(table.rows.size(), ks.size());
  double previous = std::numeric_limits<double>::infinity();
  for (const auto& row : table.rows) {
    // limit transport is the identity; |R(a) - I|_F = 2 sqrt(1 - cos a)
    const double a = poincare_disk_area(rho, row.k) / (row.k * row.k);
    EXPECT_NEAR(row.transport_distance, 2.0 * std::sqrt(1.0 - std::cos(a)), 1e-9);
    EXPECT_LT(row.transport_distance, previous);
    EXPECT_LE(row.transport_distance, table.bound_constant * row.connection_distance * (1 + 1e-12));
    previous = row.transport_distance;
  }
  EXPECT_GT(table.regression_constant, 0.0);
  EXPECT_LE(table.regression_constant, table.bound_constant);
}
