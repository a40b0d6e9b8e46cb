#include "holo/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace holo {

namespace {

Matrix stack_skew(const std::vector<Matrix>& elements, Eigen::Index l) {
  Matrix rows(static_cast<Eigen::Index>(elements.size()), l * (l - 1) / 2);
  for (std::size_t r = 0; r < elements.size(); ++r) rows.row(static_cast<Eigen::Index>(r)) = skew_to_vector(elements[r]);
  return rows;
}

}  // namespace

Matrix orthonormal_frame(const Matrix& metric_at_x) {
  return sym_sqrt(metric_at_x, SqrtMethod::eigen).inverse();
}

Matrix gram_schmidt_frame(const Matrix& metric_at_x) {
  Eigen::LLT<Matrix> llt(metric_at_x);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("gram_schmidt_frame: metric is not positive definite");
  const Matrix lower = llt.matrixL();
  return lower.transpose().inverse();
}

HolonomySample sample_holonomy(const ConnectionField& conn, const ChartDomain& chart, const Point& x,
                               const Matrix& frame, const SampleOptions& options) {
  if (frame.rows() != conn.fibre_dim || frame.cols() != conn.fibre_dim)
    throw std::invalid_argument("sample_holonomy: frame has the wrong size");
  if (!(frame.determinant() > 0.0)) throw std::invalid_argument("sample_holonomy: frame is not positively oriented");
  if (conn.metric) {
    const Matrix m = conn.metric->evaluate(x);
    const double defect = (frame.transpose() * m * frame - Matrix::Identity(frame.rows(), frame.cols())).norm();
    if (defect > 1e-10) throw std::invalid_argument("sample_holonomy: frame is not orthonormal for the metric");
  }

  LoopSpec spec;
  spec.square_scales = options.square_scales;
  spec.circle_radii = options.circle_radii;
  spec.random_count = options.n_loops;
  spec.seed = options.seed;
  spec.random_amplitude = options.random_amplitude;
  const LoopCatalog cat = loop_catalog(x, spec, chart);

  HolonomySample sample;
  sample.basepoint = x;
  sample.orthonormal_frame = frame;
  sample.transports = transport_all(conn, cat.loops, options.steps, chart, options.exec);
  const Matrix frame_inv = frame.inverse();
  for (std::size_t i = 0; i < cat.loops.size(); ++i) {
    sample.loops.push_back(cat.loops[i].label);
    sample.framed.push_back(frame_inv * sample.transports[i].matrix * frame);
  }
  return sample;
}

std::vector<Matrix> small_loop_generators(const ConnectionField& conn, const ChartDomain& chart, const Point& x,
                                          const Matrix& frame, double eps, int steps) {
  const int n = conn.base_dim;
  const Matrix frame_inv = frame.inverse();
  std::vector<Matrix> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const LoopPath sq = square_loop(x, i, j, eps);
      sq.validate(chart);
      const Matrix p = frame_inv * transport_matrix(conn, sq, steps, chart) * frame;
      out.push_back(skew(-principal_log(p)) / (eps * eps));
    }
  return out;
}

AlgebraEstimate estimate_algebra(const HolonomySample& sample, const std::vector<Matrix>& generators,
                                 const EstimateOptions& options) {
  std::vector<Matrix> elements;
  const Eigen::Index l = sample.orthonormal_frame.rows();
  for (const Matrix& p : sample.framed) {
    if (spectral_norm(p - Matrix::Identity(l, l)) >= options.log_radius) continue;
    elements.push_back(skew(principal_log(p)));
  }
  elements.insert(elements.end(), generators.begin(), generators.end());
  return estimate_algebra(elements, static_cast<int>(l), options);
}

AlgebraEstimate estimate_algebra(const std::vector<Matrix>& input, int ambient_dim, const EstimateOptions& options) {
  const Eigen::Index l = ambient_dim;
  AlgebraEstimate est;
  std::vector<Matrix> elements;
  for (const Matrix& e : input)
    if (e.norm() >= options.absolute_floor) elements.push_back(skew(e));
  if (elements.empty() || l < 2) {
    est.empty_input = true;
    est.spectral_gap = std::numeric_limits<double>::infinity();
    return est;
  }

  // Bracket closure on the current span: brackets of unit singular directions
  // scaled by the top singular value so that genuine brackets are not
  // suppressed by the overall scale of the sample.
  for (int pass = 0; pass < options.closure_passes; ++pass) {
    Eigen::JacobiSVD<Matrix> svd(stack_skew(elements, l), Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double top = sv(0);
    std::vector<Matrix> dirs;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > options.gap_threshold * top && sv(i) > options.absolute_floor)
        dirs.push_back(vector_to_skew(svd.matrixV().col(i), l));
    const std::size_t before = elements.size();
    for (std::size_t a = 0; a < dirs.size(); ++a)
      for (std::size_t b = a + 1; b < dirs.size(); ++b) {
        const Matrix br = top * commutator(dirs[a], dirs[b]);
        if (br.norm() >= options.absolute_floor) elements.push_back(br);
      }
    if (elements.size() == before) break;
  }

  Eigen::JacobiSVD<Matrix> svd(stack_skew(elements, l), Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double top = sv(0);
  int kept = 0;
  while (kept < sv.size() && sv(kept) > options.gap_threshold * top && sv(kept) > options.absolute_floor) ++kept;
  double discarded = 0.0;
  for (Eigen::Index i = kept; i < sv.size(); ++i) discarded += sv(i) * sv(i);
  est.dim = kept;
  est.residual = std::sqrt(discarded);
  est.spectral_gap = (kept < sv.size() && sv(kept) > 0.0 && kept > 0) ? sv(kept - 1) / sv(kept)
                                                                      : std::numeric_limits<double>::infinity();
  for (int i = 0; i < kept; ++i) est.basis.push_back(vector_to_skew(svd.matrixV().col(i), l));
  return est;
}

Classification classify(const AlgebraEstimate& estimate, const std::vector<SubgroupSpec>& catalog,
                        const SearchOptions& options) {
  if (catalog.empty()) throw std::invalid_argument("classify: empty catalog");
  const int l = catalog.front().ambient_dim;
  Classification best;
  best.id = "unclassified";
  best.witness = Matrix::Identity(l, l);
  best.residual = std::numeric_limits<double>::infinity();

  std::vector<const SubgroupSpec*> order;
  for (const SubgroupSpec& s : catalog) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const SubgroupSpec* a, const SubgroupSpec* b) { return a->group_dim < b->group_dim; });

  double best_unclassified = std::numeric_limits<double>::infinity();
  for (const SubgroupSpec* spec : order) {
    CandidateResidual cand{spec->id, 0.0, false};
    if (spec->group_dim < estimate.dim) {
      cand.residual = span_info(estimate.basis, spec->group_dim).tail_bound;
      best.candidates.push_back(cand);
      best_unclassified = std::min(best_unclassified, cand.residual);
      continue;
    }
    const OrderVerdict v = conjugacy_search(estimate.basis, *spec, options);
    cand.residual = v.residual;
    cand.searched = true;
    best.candidates.push_back(cand);
    best_unclassified = std::min(best_unclassified, v.residual);
    const bool better_same_dim = best.classified() && spec->group_dim == best.group_dim && v.residual < best.residual;
    if (v.holds && (!best.classified() || better_same_dim)) {
      best.id = spec->id;
      best.witness = v.witness;
      best.residual = v.residual;
      best.group_dim = spec->group_dim;
    }
  }
  if (!best.classified()) best.residual = best_unclassified;
  return best;
}

}  // namespace holo
