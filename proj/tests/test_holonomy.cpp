#include "holo/holonomy.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace holo;
using namespace holo::testing;

namespace {

struct Case {
  MetricFamily fam;
  MetricField metric;
  ConnectionField conn;
  Matrix frame;
};

Case setup(const std::string& name, int k, FamilyParams params = {}) {
  Case s{builtin_family(name, params), {}, {}, {}};
  s.metric = k > 0 ? s.fam.member(k) : s.fam.limit;
  s.conn = levi_civita(s.metric, s.fam.chart, s.fam.chart.default_step());
  s.frame = orthonormal_frame(s.metric.evaluate(s.fam.basepoint));
  return s;
}

SampleOptions quick_options() {
  SampleOptions o;
  o.steps = 512;
  o.n_loops = 4;
  return o;
}

AlgebraEstimate estimate_for(const Case& s, const Matrix& frame) {
  const HolonomySample sample = sample_holonomy(s.conn, s.fam.chart, s.fam.basepoint, frame, quick_options());
  const auto gens = small_loop_generators(s.conn, s.fam.chart, s.fam.basepoint, frame, 0.01, 512);
  return estimate_algebra(sample, gens);
}

// Principal angles between two subspaces of skew matrices, as the largest
// residual of projecting one orthonormal basis onto the other.
double subspace_gap(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double worst = 0.0;
  for (const Matrix& x : a) {
    Matrix rest = x;
    for (const Matrix& y : b) rest -= (x.cwiseProduct(y).sum()) * y;
    worst = std::max(worst, rest.norm());
  }
  return worst;
}

Matrix so2_upper(int l) {
  Matrix e = Matrix::Zero(l, l);
  e(1, 0) = 1.0 / std::sqrt(2.0);
  e(0, 1) = -1.0 / std::sqrt(2.0);
  return e;
}

}  // namespace

// ---- frames ----

TEST(Frames, OrthonormalAndPositivelyOriented) {
  std::mt19937_64 rng(30);
  for (int l = 2; l <= 4; ++l) {
    const Matrix m = random_spd(l, rng);
    for (const Matrix& f : {orthonormal_frame(m), gram_schmidt_frame(m)}) {
      EXPECT_LT((f.transpose() * m * f - Matrix::Identity(l, l)).norm(), 1e-12);
      EXPECT_GT(f.determinant(), 0.0);
    }
  }
}

TEST(Sample, RejectsBadFrames) {
  const Case s = setup("poincare2d", 2);
  EXPECT_THROW(sample_holonomy(s.conn, s.fam.chart, s.fam.basepoint, Matrix::Identity(2, 2), quick_options()),
               std::invalid_argument);
  Matrix flipped = s.frame;
  flipped.col(0) *= -1.0;
  EXPECT_THROW(sample_holonomy(s.conn, s.fam.chart, s.fam.basepoint, flipped, quick_options()),
               std::invalid_argument);
}

// ---- samples ----

TEST(Sample, FlatTransportsAreIdentity) {
  const Case s = setup("flat", 1);
  const HolonomySample sample = sample_holonomy(s.conn, s.fam.chart, s.fam.basepoint, s.frame, quick_options());
  EXPECT_FALSE(sample.framed.empty());
  for (const Matrix& p : sample.framed) EXPECT_LT((p - Matrix::Identity(2, 2)).norm(), 1e-10);
  EXPECT_EQ(estimate_algebra(sample, {}).dim, 0);
}

TEST(Sample, PoincareHolonomyIsCommutingRotations) {
  const Case s = setup("poincare2d", 2);
  const HolonomySample sample = sample_holonomy(s.conn, s.fam.chart, s.fam.basepoint, s.frame, quick_options());
  for (const Matrix& p : sample.framed) {
    EXPECT_LT(so_residual(p), 1e-10);
    for (const Matrix& q : sample.framed) EXPECT_LT((p * q - q * p).norm(), 1e-10);
  }
  const AlgebraEstimate est = estimate_algebra(sample, {});
  EXPECT_EQ(est.dim, 1);
  EXPECT_LT(subspace_gap(est.basis, {so2_upper(2)}), 1e-10);
}

TEST(Sample, ProductHolonomyIsBlockDiagonalAndMatchesPlanarFactor) {
  const Case s = setup("product4d", 2);
  const HolonomySample sample = sample_holonomy(s.conn, s.fam.chart, s.fam.basepoint, s.frame, quick_options());
  for (const Matrix& p : sample.framed) {
    EXPECT_LT((p.block(2, 2, 2, 2) - Matrix::Identity(2, 2)).norm(), 1e-10);
    EXPECT_LT(p.block(0, 2, 2, 2).norm() + p.block(2, 0, 2, 2).norm(), 1e-10);
  }
  // the (0,1) square agrees with the planar Poincare computation
  const Case planar = setup("poincare2d", 2);
  Point x2(2);
  x2 << s.fam.basepoint(0), s.fam.basepoint(1);
  const Matrix p4 = transport_matrix(s.conn, square_loop(s.fam.basepoint, 0, 1, 0.05), 512, s.fam.chart);
  const Matrix p2 = transport_matrix(planar.conn, square_loop(x2, 0, 1, 0.05), 512, planar.fam.chart);
  EXPECT_LT((p4.block(0, 0, 2, 2) - p2).norm(), 1e-12);
  const AlgebraEstimate est = estimate_algebra(sample, {});
  EXPECT_EQ(est.dim, 1);
  EXPECT_LT(subspace_gap(est.basis, {so2_upper(4)}), 1e-10);
}

// ---- small loop generators ----

TEST(Generators, FlatIsZero) {
  const Case s = setup("flat", 1, {{{"dim", 3}}});
  for (const Matrix& g : small_loop_generators(s.conn, s.fam.chart, s.fam.basepoint, s.frame, 0.01, 256))
    EXPECT_LT(g.norm(), 1e-8);
}

TEST(Generators, ApproachFramedCurvatureLinearlyInEps) {
  for (const char* name : {"poincare2d", "fubini_study_chart"}) {
    const Case s = setup(name, 1);
    const int n = s.fam.chart.dim;
    const auto f = curvature(s.conn, s.fam.chart, s.fam.basepoint, 1e-4);
    const Matrix frame_inv = s.frame.inverse();
    auto defect = [&](double eps) {
      const auto gens = small_loop_generators(s.conn, s.fam.chart, s.fam.basepoint, s.frame, eps, 512);
      double worst = 0.0;
      std::size_t idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++idx)
          worst = std::max(worst, (gens[idx] - frame_inv * f[i * n + j] * s.frame).norm());
      return worst;
    };
    const double d2 = defect(0.02), d1 = defect(0.01);
    EXPECT_LT(d1, d2) << name;
    // first order in general; the Fubini-Study origin is symmetric and gains an order
    EXPECT_GT(d2 / d1, 1.6) << name;
    EXPECT_LT(d2 / d1, 4.5) << name;
  }
}

TEST(Generators, FubiniStudyCommuteWithComplexStructure) {
  const Case s = setup("fubini_study_chart", 1);
  const Matrix j = standard_complex_structure(4);
  ASSERT_LT((s.frame * j - j * s.frame).norm(), 1e-12);
  for (const Matrix& g : small_loop_generators(s.conn, s.fam.chart, s.fam.basepoint, s.frame, 0.01, 512)) {
    EXPECT_GT(g.norm(), 0.1);
    EXPECT_LT((g * j - j * g).norm(), 1e-8);
  }
}

// ---- estimate_algebra ----

TEST(Estimate, EmptyInputWarns) {
  const AlgebraEstimate est = estimate_algebra(std::vector<Matrix>{}, 3);
  EXPECT_TRUE(est.empty_input);
  EXPECT_EQ(est.dim, 0);
}

TEST(Estimate, BasisIsSkewAndOrthonormal) {
  std::mt19937_64 rng(31);
  std::vector<Matrix> elems;
  for (int i = 0; i < 3; ++i) elems.push_back(random_skew(4, rng));
  const AlgebraEstimate est = estimate_algebra(elems, 4);
  for (std::size_t a = 0; a < est.basis.size(); ++a) {
    EXPECT_LT((est.basis[a] + est.basis[a].transpose()).norm(), 1e-14);
    for (std::size_t b = 0; b < est.basis.size(); ++b)
      EXPECT_NEAR(est.basis[a].cwiseProduct(est.basis[b]).sum(), a == b ? 1.0 : 0.0, 1e-12);
  }
}

TEST(Estimate, BracketClosureCompletesSo3) {
  Matrix x = Matrix::Zero(3, 3), y = Matrix::Zero(3, 3);
  x(1, 2) = -1;
  x(2, 1) = 1;
  y(0, 2) = 1;
  y(2, 0) = -1;
  EXPECT_EQ(estimate_algebra({x, y}, 3).dim, 3);
  EstimateOptions no_closure;
  no_closure.closure_passes = 0;
  EXPECT_EQ(estimate_algebra({x, y}, 3, no_closure).dim, 2);
}

TEST(Estimate, DimensionMonotoneUnderInclusionProperty) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const int l = 3 + trial % 2;
    std::vector<Matrix> elems;
    // low-rank samples so that inclusion can actually increase the dimension
    const Matrix base = random_skew(l, rng);
    elems.push_back(0.3 * base);
    int previous = estimate_algebra(elems, l).dim;
    for (int add = 0; add < 4; ++add) {
      elems.push_back(add % 2 ? 0.2 * base : random_skew(l, rng, 0.2));
      const int now = estimate_algebra(elems, l).dim;
      EXPECT_GE(now, previous);
      previous = now;
    }
  }
}

// ---- classify ----

TEST(Classify, DimensionZeroIsTrivial) {
  const Case s = setup("flat", 1);
  const Classification c = classify(estimate_for(s, s.frame), catalog(2));
  EXPECT_EQ(c.id, "trivial");
  EXPECT_EQ(c.residual, 0.0);
  EXPECT_LT((c.witness - Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Classify, RotatedProductFrameFindsNontrivialWitness) {
  const Case s = setup("product4d", 2);
  const Matrix r = random_rotation(4, 1234);
  const AlgebraEstimate est = estimate_for(s, s.frame * r);
  ASSERT_EQ(est.dim, 1);
  const Classification c = classify(est, catalog(4));
  EXPECT_EQ(c.id, "so2_block");
  EXPECT_LT(c.residual, 1e-6);
  EXPECT_GT((c.witness - Matrix::Identity(4, 4)).norm(), 1e-3);
  EXPECT_LT(so_residual(c.witness), 1e-10);
  EXPECT_LT(containment_residual(est.basis, catalog_entry("so2_block", 4), c.witness), 1e-6);
}

TEST(Classify, FrameEquivariance) {
  const Case s = setup("fubini_study_chart", 2);
  const Matrix r = random_rotation(4, 77);
  const AlgebraEstimate a = estimate_for(s, s.frame);
  const AlgebraEstimate b = estimate_for(s, s.frame * r);
  ASSERT_EQ(a.dim, b.dim);
  const Classification ca = classify(a, catalog(4));
  const Classification cb = classify(b, catalog(4));
  EXPECT_EQ(ca.id, cb.id);
  // a witness for the rotated frame, composed with R^T, certifies the original estimate
  const SubgroupSpec target = catalog_entry(ca.id, 4);
  EXPECT_LT(containment_residual(a.basis, target, cb.witness * r.transpose()), 1e-6);
}

TEST(Classify, FubiniStudyIsUnitaryButNotSpecialUnitary) {
  const Case s = setup("fubini_study_chart", 1);
  const AlgebraEstimate est = estimate_for(s, s.frame);
  EXPECT_EQ(est.dim, 4);
  const Classification c = classify(est, catalog(4));
  EXPECT_EQ(c.id, "u2");
  EXPECT_LT(c.residual, 1e-6);
  for (const auto& cand : c.candidates)
    if (cand.id == "su2") EXPECT_GT(cand.residual, 0.1);
}

TEST(Classify, PoincareMemberAndLimit) {
  const Case member = setup("poincare2d", 4);
  EXPECT_EQ(classify(estimate_for(member, member.frame), catalog(2)).id, "so2_block");
  const Case limit = setup("poincare2d", 0);
  EXPECT_EQ(classify(estimate_for(limit, limit.frame), catalog(2)).id, "trivial");
}

TEST(Classify, UnclassifiedWhenNothingFits) {
  std::mt19937_64 rng(33);
  std::vector<Matrix> elems;
  for (int i = 0; i < 2; ++i) elems.push_back(random_skew(3, rng));
  const AlgebraEstimate est = estimate_algebra(elems, 3);
  ASSERT_EQ(est.dim, 3);
  std::vector<SubgroupSpec> small;
  for (const auto& s : catalog(3))
    if (s.group_dim < 3) small.push_back(s);
  const Classification c = classify(est, small);
  EXPECT_FALSE(c.classified());
  EXPECT_GT(c.residual, 0.1);
}
