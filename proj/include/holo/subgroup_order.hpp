#pragma once

// Closed connected subgroups of SO(l) described by their Lie algebras, the
// conjugacy search on SO(l), and the partial order [A] <= [B] on conjugacy
// classes (conjugate inclusion of representatives).

#include "holo/matrix_core.hpp"
#include "holo/parallel.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace holo {

struct SubgroupSpec {
  std::string id;
  int ambient_dim = 0;
  std::vector<Matrix> algebra_basis;  ///< skew, Frobenius-orthonormal
  int group_dim = 0;
  std::function<double(const Matrix&)> membership;  ///< zero iff the element belongs
  std::optional<Matrix> complex_structure;

  /// Orthogonal projection of X onto the algebra.
  Matrix project(const Matrix& x) const;
};

/// Catalog for l in {2, 3, 4}: trivial, so2_block, so<l> (l >= 3), and for
/// l = 4 also u2 and su2.
std::vector<SubgroupSpec> catalog(int l);
/// Looks up a catalog entry by id; throws std::invalid_argument if absent.
SubgroupSpec catalog_entry(const std::string& id, int l);

/// The spec V H V^T, with membership and structure data conjugated as well.
SubgroupSpec conjugate_spec(const SubgroupSpec& spec, const Matrix& v, const std::string& new_id);

/// A conjugacy class represented by a Lie algebra basis (skew matrices).
struct ConjugacyClass {
  std::string id;
  int ambient_dim = 0;
  std::vector<Matrix> algebra_basis;
  int dim() const { return static_cast<int>(algebra_basis.size()); }

  static ConjugacyClass of(const SubgroupSpec& spec);
};

struct OrderVerdict {
  bool holds = false;
  Matrix witness;
  double residual = 0.0;
  int restarts_used = 0;
};

struct SearchOptions {
  int restarts = 32;
  int max_iterations = 500;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;
};

/// sqrt(sum_s |Ad_U s - Pi(Ad_U s)|_F^2).
double containment_residual(const std::vector<Matrix>& source, const SubgroupSpec& target, const Matrix& u);

/// Numerical rank of a set of skew matrices and the Eckart-Young lower bound
/// on the containment residual in any algebra of dimension target_dim.
struct SpanInfo {
  int rank = 0;
  double tail_bound = 0.0;
};
SpanInfo span_info(const std::vector<Matrix>& source, int target_dim);

/// Minimizes the containment residual over U in SO(l) by seeded random
/// restarts and geodesic gradient descent with backtracking.
OrderVerdict conjugacy_search(const std::vector<Matrix>& source, const SubgroupSpec& target,
                              const SearchOptions& options = {});

/// Spec whose algebra is spanned by `cls` (membership checks Ad-invariance
/// of the algebra is not available, so membership is via the log).
SubgroupSpec spec_from_class(const ConjugacyClass& cls);

/// [a] <= [b]: dim(a) <= dim(b) and a conjugate of a's algebra lies in b's.
OrderVerdict leq(const ConjugacyClass& a, const ConjugacyClass& b, const SearchOptions& options = {});

struct AntisymmetryReport {
  OrderVerdict forward;   ///< K <= H
  OrderVerdict backward;  ///< H <= K
  bool both_hold = false;
  bool dims_equal = false;
  bool equality_certified = false;
  std::string note;
};

/// Runs leq both ways; when both hold, certifies equal dimensions and mutual
/// containment with the found witnesses.
AntisymmetryReport antisymmetry_check(const SubgroupSpec& k_spec, const SubgroupSpec& h_spec,
                                      const SearchOptions& options = {});

/// Uniformly random rotation from a seed (QR of a Gaussian matrix).
Matrix random_rotation(int l, std::uint64_t seed);

}  // namespace holo
