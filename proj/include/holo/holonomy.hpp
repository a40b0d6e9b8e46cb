#pragma once

// Holonomy algebra estimation at a basepoint and classification against the
// subgroup catalog up to conjugation.

#include "holo/subgroup_order.hpp"
#include "holo/transport.hpp"

#include <string>
#include <vector>

namespace holo {

struct HolonomySample {
  std::vector<TransportResult> transports;
  std::vector<std::string> loops;
  Point basepoint;
  /// Columns form a positively oriented g-orthonormal basis at the basepoint.
  Matrix orthonormal_frame;
  /// Transports expressed in the frame: frame^{-1} P frame.
  std::vector<Matrix> framed;
};

struct AlgebraEstimate {
  std::vector<Matrix> basis;
  int dim = 0;
  double spectral_gap = 0.0;  ///< smallest kept / largest discarded singular value
  double residual = 0.0;      ///< norm of the discarded singular values
  bool empty_input = false;   ///< no usable element (warning)
};

/// Symmetric frame M_g^{-1/2}; g-orthonormal, det > 0.
Matrix orthonormal_frame(const Matrix& metric_at_x);
/// Frame from the Cholesky factor M_g = L L^T: L^{-T}; upper triangular, det > 0.
Matrix gram_schmidt_frame(const Matrix& metric_at_x);

struct SampleOptions {
  std::vector<double> square_scales{0.02, 0.05};
  std::vector<double> circle_radii{};
  int n_loops = 8;
  std::uint64_t seed = 1;
  double random_amplitude = 0.1;
  int steps = 2048;
  Exec exec = Exec::parallel;
};

/// Transports the loop catalog at x and expresses every transport in the frame.
HolonomySample sample_holonomy(const ConnectionField& conn, const ChartDomain& chart, const Point& x,
                               const Matrix& frame, const SampleOptions& options);

/// One generator per index pair i < j: -log(P_square)/eps^2 in the frame,
/// which approximates F_ij(x) conjugated into the frame to O(eps).
std::vector<Matrix> small_loop_generators(const ConnectionField& conn, const ChartDomain& chart, const Point& x,
                                          const Matrix& frame, double eps, int steps = 2048);

struct EstimateOptions {
  double gap_threshold = 1e-4;
  int closure_passes = 1;
  double log_radius = 0.9;      ///< transports with |P - I| >= this are skipped
  double absolute_floor = 1e-9;  ///< elements and singular values below this are noise
};

/// Stacks logs of the sampled transports, the generators and their Lie
/// brackets, and keeps singular directions above gap_threshold * sigma_max.
AlgebraEstimate estimate_algebra(const HolonomySample& sample, const std::vector<Matrix>& generators,
                                 const EstimateOptions& options = {});
/// Same, from an explicit element list.
AlgebraEstimate estimate_algebra(const std::vector<Matrix>& elements, int ambient_dim,
                                 const EstimateOptions& options = {});

struct CandidateResidual {
  std::string id;
  double residual = 0.0;
  bool searched = false;
};

struct Classification {
  std::string id;  ///< "unclassified" when nothing is under tol
  Matrix witness;
  double residual = 0.0;
  int group_dim = -1;
  std::vector<CandidateResidual> candidates;
  bool classified() const { return id != "unclassified"; }
};

/// Minimal-dimension catalog entry containing a conjugate of the estimate.
Classification classify(const AlgebraEstimate& estimate, const std::vector<SubgroupSpec>& catalog,
                        const SearchOptions& options = {});

}  // namespace holo
