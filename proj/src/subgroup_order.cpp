#include "holo/subgroup_order.hpp"

#include "holo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

namespace holo {

namespace {

constexpr double kSkewTol = 1e-8;
constexpr double kRankTol = 1e-9;

Matrix skew_basis_element(int l, int i, int j) {
  Matrix b = Matrix::Zero(l, l);
  b(i, j) = 1.0 / std::sqrt(2.0);
  b(j, i) = -1.0 / std::sqrt(2.0);
  return b;
}

std::vector<Matrix> full_skew_basis(int l) {
  std::vector<Matrix> basis;
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j) basis.push_back(skew_basis_element(l, i, j));
  return basis;
}

// Orthonormal basis of the skew matrices X with constraint(X) = 0, where the
// constraint is linear and given as a list of output entries.
std::vector<Matrix> skew_null_space(int l, const std::function<Vector(const Matrix&)>& constraint) {
  const std::vector<Matrix> basis = full_skew_basis(l);
  const Eigen::Index rows = constraint(basis.front()).size();
  Matrix op(rows, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) op.col(static_cast<Eigen::Index>(c)) = constraint(basis[c]);
  Eigen::JacobiSVD<Matrix> svd(op, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < op.cols(); ++c) {
    const double s = c < sv.size() ? sv(c) : 0.0;
    if (s < 1e-12) out.push_back(vector_to_skew(svd.matrixV().col(c), l));
  }
  return out;
}

Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

std::complex<double> complex_determinant(const Matrix& a) {
  const Eigen::Index m = a.rows() / 2;
  Eigen::MatrixXcd c(m, m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = 0; q < m; ++q) c(p, q) = {a(2 * p, 2 * q), a(2 * p + 1, 2 * q)};
  return c.determinant();
}

bool is_skew(const Matrix& s) { return (s + s.transpose()).norm() <= kSkewTol * std::max(1.0, s.norm()); }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix nearest_rotation(const Matrix& u) {
  Eigen::JacobiSVD<Matrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Matrix uu = svd.matrixU();
    uu.col(uu.cols() - 1) *= -1.0;
    r = uu * svd.matrixV().transpose();
  }
  return r;
}

struct Objective {
  const std::vector<Matrix>& source;
  const SubgroupSpec& target;

  double value(const Matrix& u) const {
    double f = 0.0;
    for (const Matrix& s : source) {
      const Matrix y = u * s * u.transpose();
      f += (y - target.project(y)).squaredNorm();
    }
    return f;
  }
};

struct DescentResult {
  Matrix u;
  double f = 0.0;
};

// Residual vector r(U) = stacked (I - Pi)(U s U^T) and its Jacobian with
// respect to right-trivialized skew coordinates Omega, U -> U exp(Omega).
void linearize(const Objective& obj, const Matrix& u, Vector& r, Matrix& jac) {
  const Eigen::Index l = u.rows();
  const Eigen::Index d = l * (l - 1) / 2;
  const Eigen::Index block = l * l;
  const auto count = static_cast<Eigen::Index>(obj.source.size());
  r.resize(count * block);
  jac.resize(count * block, d);
  for (Eigen::Index s = 0; s < count; ++s) {
    const Matrix& src = obj.source[static_cast<std::size_t>(s)];
    const Matrix y = u * src * u.transpose();
    r.segment(s * block, block) = flatten(y - obj.target.project(y));
    for (Eigen::Index c = 0; c < d; ++c) {
      const Matrix e = vector_to_skew(Vector::Unit(d, c), l);
      const Matrix dy = u * commutator(e, src) * u.transpose();
      jac.block(s * block, c, block, 1) = flatten(dy - obj.target.project(dy));
    }
  }
}

// Geodesic descent U <- U exp(eta G) with backtracking; G is the
// Levenberg-Marquardt-preconditioned negative gradient.
DescentResult descend(const Objective& obj, Matrix u, int max_iterations) {
  const Eigen::Index l = u.rows();
  double f = obj.value(u);
  double damping = 1e-3;
  int stalls = 0;
  Vector r;
  Matrix jac;
  for (int it = 0; it < max_iterations && f > 1e-26; ++it) {
    linearize(obj, u, r, jac);
    const Vector grad = jac.transpose() * r;
    if (grad.squaredNorm() < 1e-32) break;
    const Matrix normal = jac.transpose() * jac;
    const double scale = std::max(normal.diagonal().maxCoeff(), 1e-12);
    Matrix lhs = normal;
    lhs.diagonal().array() += damping * scale;
    const Vector delta = -lhs.ldlt().solve(grad);
    const Matrix g = vector_to_skew(delta, l);

    double eta = 1.0;
    double f_new = f;
    Matrix candidate;
    while (true) {
      candidate = u * matrix_exp(eta * g);
      f_new = obj.value(candidate);
      if (f_new <= f + 1e-4 * eta * grad.dot(delta) || eta < 1e-10) break;
      eta *= 0.5;
    }
    if (!(f_new < f)) {
      damping *= 10.0;
      if (damping > 1e8) break;
      continue;
    }
    damping = std::max(damping * (eta == 1.0 ? 0.3 : 2.0), 1e-12);
    stalls = (f - f_new <= 1e-14 * f) ? stalls + 1 : 0;
    u = candidate;
    f = f_new;
    if (stalls >= 5) break;
  }
  u = nearest_rotation(u);
  return {u, obj.value(u)};
}

}  // namespace

Matrix SubgroupSpec::project(const Matrix& x) const {
  Matrix p = Matrix::Zero(x.rows(), x.cols());
  for (const Matrix& b : algebra_basis) p += (b.cwiseProduct(x).sum()) * b;
  return p;
}

std::vector<SubgroupSpec> catalog(int l) {
  if (l < 2 || l > 4) throw std::invalid_argument("catalog: ambient dimension must be 2, 3 or 4");
  std::vector<SubgroupSpec> out;

  SubgroupSpec trivial;
  trivial.id = "trivial";
  trivial.ambient_dim = l;
  trivial.group_dim = 0;
  trivial.membership = [l](const Matrix& a) { return (a - Matrix::Identity(l, l)).norm(); };
  out.push_back(trivial);

  SubgroupSpec block;
  block.id = "so2_block";
  block.ambient_dim = l;
  block.algebra_basis = {skew_basis_element(l, 0, 1)};
  block.group_dim = 1;
  block.membership = [l](const Matrix& a) {
    Matrix expected = Matrix::Identity(l, l);
    expected.topLeftCorner(2, 2) = a.topLeftCorner(2, 2);
    return so_residual(a) + (a - expected).norm();
  };
  out.push_back(block);

  if (l >= 3) {
    SubgroupSpec full;
    full.id = "so" + std::to_string(l);
    full.ambient_dim = l;
    full.algebra_basis = full_skew_basis(l);
    full.group_dim = l * (l - 1) / 2;
    full.membership = [](const Matrix& a) { return so_residual(a); };
    out.push_back(full);
  }

  if (l == 4) {
    const Matrix j = standard_complex_structure(l);
    auto commutes = [j](const Matrix& x) { return flatten(x * j - j * x); };
    auto commutes_traceless = [j](const Matrix& x) {
      Vector v(x.size() + 1);
      v.head(x.size()) = flatten(x * j - j * x);
      v(x.size()) = x.cwiseProduct(j).sum();
      return v;
    };

    SubgroupSpec u;
    u.id = "u2";
    u.ambient_dim = l;
    u.algebra_basis = skew_null_space(l, commutes);
    u.group_dim = static_cast<int>(u.algebra_basis.size());
    u.complex_structure = j;
    u.membership = [j](const Matrix& a) { return so_residual(a) + (a * j - j * a).norm(); };

    SubgroupSpec su;
    su.id = "su2";
    su.ambient_dim = l;
    su.algebra_basis = skew_null_space(l, commutes_traceless);
    su.group_dim = static_cast<int>(su.algebra_basis.size());
    su.complex_structure = j;
    su.membership = [j](const Matrix& a) {
      return so_residual(a) + (a * j - j * a).norm() + std::abs(complex_determinant(a) - 1.0);
    };
    out.push_back(su);
    out.push_back(u);
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const SubgroupSpec& a, const SubgroupSpec& b) { return a.group_dim < b.group_dim; });
  return out;
}

SubgroupSpec catalog_entry(const std::string& id, int l) {
  for (SubgroupSpec& s : catalog(l))
    if (s.id == id) return s;
  throw std::invalid_argument("no subgroup '" + id + "' in the catalog for dimension " + std::to_string(l));
}

SubgroupSpec conjugate_spec(const SubgroupSpec& spec, const Matrix& v, const std::string& new_id) {
  SubgroupSpec out = spec;
  out.id = new_id;
  for (Matrix& b : out.algebra_basis) b = v * b * v.transpose();
  if (out.complex_structure) out.complex_structure = v * (*out.complex_structure) * v.transpose();
  const auto inner = spec.membership;
  const Matrix vt = v.transpose();
  out.membership = [inner, v, vt](const Matrix& a) { return inner(vt * a * v); };
  return out;
}

ConjugacyClass ConjugacyClass::of(const SubgroupSpec& spec) {
  return {spec.id, spec.ambient_dim, spec.algebra_basis};
}

SubgroupSpec spec_from_class(const ConjugacyClass& cls) {
  SubgroupSpec s;
  s.id = cls.id;
  s.ambient_dim = cls.ambient_dim;
  s.algebra_basis = cls.algebra_basis;
  s.group_dim = cls.dim();
  const std::vector<Matrix> basis = cls.algebra_basis;
  s.membership = [basis](const Matrix& a) {
    const Eigen::Index l = a.rows();
    if (spectral_norm(a - Matrix::Identity(l, l)) >= 1.0) return std::numeric_limits<double>::infinity();
    const Matrix x = principal_log(a);
    Matrix p = Matrix::Zero(l, l);
    for (const Matrix& b : basis) p += b.cwiseProduct(x).sum() * b;
    return so_residual(a) + (x - p).norm();
  };
  return s;
}

double containment_residual(const std::vector<Matrix>& source, const SubgroupSpec& target, const Matrix& u) {
  return std::sqrt(Objective{source, target}.value(u));
}

SpanInfo span_info(const std::vector<Matrix>& source, int target_dim) {
  SpanInfo info;
  if (source.empty()) return info;
  const Eigen::Index l = source.front().rows();
  Matrix stacked(static_cast<Eigen::Index>(source.size()), l * (l - 1) / 2);
  for (std::size_t r = 0; r < source.size(); ++r) stacked.row(static_cast<Eigen::Index>(r)) = skew_to_vector(source[r]);
  if (stacked.cols() == 0) return info;
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const Vector& sv = svd.singularValues();
  const double floor = std::max(kRankTol * sv(0), 1e-12);
  double tail = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > floor) ++info.rank;
    if (i >= target_dim) tail += sv(i) * sv(i);
  }
  info.tail_bound = std::sqrt(tail);
  return info;
}

Matrix random_rotation(int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  Matrix g(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      // Box-Muller
      const double u1 = uniform(), u2 = uniform();
      g(i, j) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < l; ++i)
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

OrderVerdict conjugacy_search(const std::vector<Matrix>& source, const SubgroupSpec& target,
                              const SearchOptions& options) {
  const int l = target.ambient_dim;
  for (const Matrix& s : source) {
    if (s.rows() != l || s.cols() != l) throw std::invalid_argument("conjugacy_search: dimension mismatch");
    if (!is_skew(s)) throw std::invalid_argument("conjugacy_search: source element is not skew");
  }

  OrderVerdict verdict;
  verdict.witness = Matrix::Identity(l, l);

  const SpanInfo span = span_info(source, target.group_dim);
  if (span.rank > target.group_dim) {
    verdict.holds = false;
    verdict.residual = span.tail_bound;
    return verdict;
  }

  const Objective obj{source, target};
  verdict.residual = std::sqrt(obj.value(verdict.witness));
  if (verdict.residual < options.tol) {
    verdict.holds = true;
    return verdict;
  }

  const int restarts = std::max(1, options.restarts);
  std::vector<DescentResult> results(static_cast<std::size_t>(restarts));
  parallel_for(results.size(), options.exec, [&](std::size_t r) {
    const Matrix start = r == 0 ? Matrix::Identity(l, l) : random_rotation(l, mix_seed(options.seed, r));
    results[r] = descend(obj, start, options.max_iterations);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].f < results[best].f) best = r;
  verdict.witness = results[best].u;
  verdict.residual = std::sqrt(results[best].f);
  verdict.holds = verdict.residual < options.tol;
  verdict.restarts_used = restarts;
  return verdict;
}

OrderVerdict leq(const ConjugacyClass& a, const ConjugacyClass& b, const SearchOptions& options) {
  if (a.ambient_dim != b.ambient_dim) throw std::invalid_argument("leq: ambient dimensions differ");
  if (a.dim() > b.dim()) {
    OrderVerdict v;
    v.witness = Matrix::Identity(a.ambient_dim, a.ambient_dim);
    v.residual = span_info(a.algebra_basis, b.dim()).tail_bound;
    return v;
  }
  return conjugacy_search(a.algebra_basis, spec_from_class(b), options);
}

AntisymmetryReport antisymmetry_check(const SubgroupSpec& k_spec, const SubgroupSpec& h_spec,
                                      const SearchOptions& options) {
  if (k_spec.ambient_dim != h_spec.ambient_dim)
    throw std::invalid_argument("antisymmetry_check: ambient dimensions differ");
  AntisymmetryReport rep;
  const ConjugacyClass k = ConjugacyClass::of(k_spec);
  const ConjugacyClass h = ConjugacyClass::of(h_spec);
  rep.forward = leq(k, h, options);
  rep.backward = leq(h, k, options);
  rep.both_hold = rep.forward.holds && rep.backward.holds;
  if (!rep.both_hold) {
    rep.note = "no antisymmetry instance: " + std::string(rep.forward.holds ? "" : k_spec.id + " <= " + h_spec.id + " fails") +
               std::string(!rep.forward.holds && !rep.backward.holds ? "; " : "") +
               std::string(rep.backward.holds ? "" : h_spec.id + " <= " + k_spec.id + " fails");
    return rep;
  }
  rep.dims_equal = k_spec.group_dim == h_spec.group_dim;
  const double fwd = containment_residual(k_spec.algebra_basis, h_spec, rep.forward.witness);
  const double bwd = containment_residual(h_spec.algebra_basis, k_spec, rep.backward.witness);
  rep.equality_certified = rep.dims_equal && fwd < options.tol && bwd < options.tol;
  rep.note = rep.equality_certified ? "mutual containment with equal dimension: conjugate subgroups"
                                    : "mutual containment not certified";
  return rep;
}

}  // namespace holo
