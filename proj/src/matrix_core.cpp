#include "holo/matrix_core.hpp"

#include <cmath>
#include <limits>

namespace holo {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr int kMaxSeriesTerms = 200000;

bool is_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTol * scale;
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
}

// Denman-Beavers iteration for the principal square root of a matrix with no
// eigenvalues on the closed negative real axis.
Matrix db_sqrt(const Matrix& a) {
  Matrix y = a;
  Matrix z = Matrix::Identity(a.rows(), a.cols());
  for (int it = 0; it < 60; ++it) {
    const Matrix y_inv = y.partialPivLu().inverse();
    const Matrix z_inv = z.partialPivLu().inverse();
    const Matrix y_next = 0.5 * (y + z_inv);
    z = 0.5 * (z + y_inv);
    const double change = (y_next - y).norm();
    y = y_next;
    if (change <= 1e-15 * y.norm()) break;
  }
  return y;
}

}  // namespace

BilinearForm::BilinearForm(Matrix m) : m_(std::move(m)) {
  require_square(m_, "BilinearForm");
  if (!is_finite(m_)) throw std::invalid_argument("BilinearForm: non-finite entries");
  if (!is_symmetric(m_)) throw std::invalid_argument("BilinearForm: matrix is not symmetric");
  m_ = 0.5 * (m_ + m_.transpose());
}

bool BilinearForm::is_positive_definite() const {
  if (m_.size() == 0) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0;
}

bool is_finite(const Matrix& m) { return m.allFinite(); }

Matrix representing_endomorphism(const BilinearForm& q, const BilinearForm& g) {
  if (q.dim() != g.dim()) throw std::invalid_argument("representing_endomorphism: dimension mismatch");
  Eigen::LLT<Matrix> llt(g.matrix());
  if (llt.info() != Eigen::Success || !g.is_positive_definite())
    throw std::invalid_argument("representing_endomorphism: g is not positive definite");
  return llt.solve(q.matrix());
}

double spectral_norm(const Matrix& z) {
  if (z.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(z);
  return svd.singularValues()(0);
}

double operator_norm(const Matrix& z, const BilinearForm& g) {
  if (!g.is_positive_definite()) throw std::invalid_argument("operator_norm: g is not positive definite");
  if (z.rows() != g.dim() || z.cols() != g.dim())
    throw std::invalid_argument("operator_norm: dimension mismatch");
  const Matrix w = sym_sqrt(g.matrix(), SqrtMethod::eigen);
  const Matrix w_inv = w.inverse();
  return spectral_norm(w * z * w_inv);
}

int sqrt_series_terms(double distance, double tol) {
  if (distance >= 1.0) return -1;
  if (distance == 0.0) return 0;
  // smallest N with q^{N+1} / (1 - q) < tol
  const double bound = std::log(tol * (1.0 - distance)) / std::log(distance) - 1.0;
  int n = std::max(0, static_cast<int>(std::ceil(bound)));
  while (std::pow(distance, n + 1) / (1.0 - distance) >= tol) ++n;
  return n;
}

Matrix sym_sqrt(const Matrix& z, SqrtMethod method, double tol) {
  require_square(z, "sym_sqrt");
  if (!is_symmetric(z)) throw std::invalid_argument("sym_sqrt: matrix is not symmetric");
  const Eigen::Index l = z.rows();
  const Matrix zs = 0.5 * (z + z.transpose());

  if (method == SqrtMethod::eigen) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(zs);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
      throw DomainError("sym_sqrt: matrix is not positive definite");
    const Vector root = es.eigenvalues().cwiseSqrt();
    Matrix w = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    return 0.5 * (w + w.transpose());
  }

  const Matrix c = zs - Matrix::Identity(l, l);
  const double q = spectral_norm(c);
  const int terms = sqrt_series_terms(q, tol);
  if (terms < 0 || terms > kMaxSeriesTerms)
    throw DomainError("sym_sqrt: power series requires |Z - I| < 1, got " + std::to_string(q));

  Matrix result = Matrix::Identity(l, l);
  Matrix power = Matrix::Identity(l, l);
  double coeff = 1.0;  // binom(1/2, n)
  for (int n = 1; n <= terms; ++n) {
    coeff *= (0.5 - (n - 1)) / n;
    power = power * c;
    result += coeff * power;
  }
  return 0.5 * (result + result.transpose());
}

BilinearForm in_orthonormal_basis(const BilinearForm& q, const BilinearForm& g) {
  if (!g.is_positive_definite()) throw std::invalid_argument("in_orthonormal_basis: g is not positive definite");
  const Matrix b = sym_sqrt(g.matrix(), SqrtMethod::eigen).inverse();
  const Matrix m = b.transpose() * q.matrix() * b;
  return BilinearForm(0.5 * (m + m.transpose()));
}

NonstandardFrame make_nonstandard_frame(const BilinearForm& h_orthonormal, SqrtMethod method, double tol) {
  if (!h_orthonormal.is_positive_definite())
    throw std::invalid_argument("make_nonstandard_frame: form is not positive definite");
  NonstandardFrame frame;
  frame.form = h_orthonormal;
  frame.sqrt = sym_sqrt(h_orthonormal.matrix(), method, tol);
  frame.sqrt_inverse = frame.sqrt.inverse();
  frame.sqrt_inverse = 0.5 * (frame.sqrt_inverse + frame.sqrt_inverse.transpose());
  return frame;
}

Matrix nonstandard_embed(const NonstandardFrame& frame, const Matrix& a) {
  if (a.rows() != frame.sqrt.rows() || a.cols() != frame.sqrt.cols())
    throw std::invalid_argument("nonstandard_embed: dimension mismatch");
  if (so_residual(a) > 1e-8) throw std::invalid_argument("nonstandard_embed: argument is not in SO(l)");
  return frame.sqrt_inverse * a * frame.sqrt;
}

Matrix nonstandard_unembed(const NonstandardFrame& frame, const Matrix& a) {
  if (a.rows() != frame.sqrt.rows() || a.cols() != frame.sqrt.cols())
    throw std::invalid_argument("nonstandard_unembed: dimension mismatch");
  return frame.sqrt * a * frame.sqrt_inverse;
}

double so_residual(const Matrix& a, const Matrix& m_h) {
  return (a.transpose() * m_h * a - m_h).norm() + std::abs(a.determinant() - 1.0);
}

double so_residual(const Matrix& a) {
  return so_residual(a, Matrix::Identity(a.rows(), a.cols()));
}

Matrix principal_log(const Matrix& a, double tol) {
  require_square(a, "principal_log");
  const Eigen::Index l = a.rows();
  const Matrix id = Matrix::Identity(l, l);
  double q = spectral_norm(a - id);
  if (!(q < 1.0)) throw DomainError("principal_log: requires |A - I| < 1, got " + std::to_string(q));

  Matrix x = a;
  int squarings = 0;
  while (q > 0.25 && squarings < 30) {
    x = db_sqrt(x);
    q = spectral_norm(x - id);
    ++squarings;
  }

  const Matrix c = x - id;
  Matrix result = Matrix::Zero(l, l);
  Matrix power = id;
  for (int n = 1; n < 10000; ++n) {
    power = power * c;
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    result += (sign / n) * power;
    // tail bound q^{n+1} / ((n+1)(1-q))
    if (std::pow(q, n + 1) / ((n + 1) * (1.0 - q)) < tol * 1e-2) break;
  }
  return std::ldexp(1.0, squarings) * result;
}

Matrix matrix_exp(const Matrix& x) {
  require_square(x, "matrix_exp");
  const Eigen::Index l = x.rows();
  const double norm = x.lpNorm<1>();
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix y = std::ldexp(1.0, -s) * x;
  Matrix result = Matrix::Identity(l, l);
  Matrix term = Matrix::Identity(l, l);
  for (int n = 1; n <= 24; ++n) {
    term = term * y / n;
    result += term;
  }
  for (int i = 0; i < s; ++i) result = result * result;
  return result;
}

Matrix skew(const Matrix& x) { return 0.5 * (x - x.transpose()); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Vector skew_to_vector(const Matrix& x) {
  const Eigen::Index l = x.rows();
  Vector v(l * (l - 1) / 2);
  Eigen::Index idx = 0;
  const double r2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < l; ++i)
    for (Eigen::Index j = i + 1; j < l; ++j) v(idx++) = r2 * 0.5 * (x(i, j) - x(j, i));
  return v;
}

Matrix vector_to_skew(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * (dim - 1) / 2) throw std::invalid_argument("vector_to_skew: size mismatch");
  Matrix x = Matrix::Zero(dim, dim);
  Eigen::Index idx = 0;
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      x(i, j) = r * v(idx);
      x(j, i) = -r * v(idx);
      ++idx;
    }
  return x;
}

}  // namespace holo
