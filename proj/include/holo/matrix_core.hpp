#pragma once

// Dense small-matrix primitives: representing endomorphisms of bilinear
// forms, symmetric square roots, the nonstandard embedding SO(l) -> SO(l)_h,
// metric operator norms and matrix log/exp near the identity.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace holo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when an input lies outside the region where a series or chart is valid.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a computation produces non-finite values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric representing matrix of a bilinear form in a fixed basis.
class BilinearForm {
 public:
  BilinearForm() = default;
  /// Throws std::invalid_argument if `m` is not square, finite and symmetric.
  explicit BilinearForm(Matrix m);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  bool is_positive_definite() const;

 private:
  Matrix m_;
};

enum class SqrtMethod { power_series, eigen };

/// The data of a nonstandard embedding: a form h expressed in a g-orthonormal
/// basis (so its representing endomorphism Z_h is the matrix itself) together
/// with W_h = sqrt(Z_h) and W_h^{-1}.
struct NonstandardFrame {
  BilinearForm form;
  Matrix sqrt;
  Matrix sqrt_inverse;
};

/// Z_Q with g(X, Z_Q Y) = Q(X, Y), i.e. M_g^{-1} M_Q.
Matrix representing_endomorphism(const BilinearForm& q, const BilinearForm& g);

/// sup_{v != 0} |Zv|_g / |v|_g.
double operator_norm(const Matrix& z, const BilinearForm& g);

/// Spectral norm (operator norm for the identity metric).
double spectral_norm(const Matrix& z);

/// Symmetric positive definite square root. The power series of sqrt(1+c)
/// is truncated once the geometric tail bound |Z-I|^{N+1}/(1-|Z-I|) < tol.
/// Throws DomainError for the power series when |Z-I| >= 1.
Matrix sym_sqrt(const Matrix& z, SqrtMethod method = SqrtMethod::eigen, double tol = 1e-14);

/// Number of series terms the power-series square root uses for a given
/// distance |Z-I| and tolerance.
int sqrt_series_terms(double distance, double tol);

/// Expresses q in the g-orthonormal basis given by the columns of W_g^{-1}.
BilinearForm in_orthonormal_basis(const BilinearForm& q, const BilinearForm& g);

/// Builds the frame for h, where h is given in a g-orthonormal basis.
NonstandardFrame make_nonstandard_frame(const BilinearForm& h_orthonormal,
                                        SqrtMethod method = SqrtMethod::eigen,
                                        double tol = 1e-14);

/// A -> W_h^{-1} A W_h. Requires A in SO(l).
Matrix nonstandard_embed(const NonstandardFrame& frame, const Matrix& a);
/// A -> W_h A W_h^{-1}.
Matrix nonstandard_unembed(const NonstandardFrame& frame, const Matrix& a);

/// |A^T M_h A - M_h|_F + |det A - 1|; zero iff A is in SO(l)_h.
double so_residual(const Matrix& a, const Matrix& m_h);
double so_residual(const Matrix& a);

/// Principal logarithm for |A - I| < 1 (spectral norm), by inverse scaling
/// and squaring followed by the Mercator series. Throws DomainError otherwise.
Matrix principal_log(const Matrix& a, double tol = 1e-14);

/// Matrix exponential by scaling and squaring of the Taylor series.
Matrix matrix_exp(const Matrix& x);

/// Skew part (X - X^T)/2.
Matrix skew(const Matrix& x);
Matrix commutator(const Matrix& a, const Matrix& b);

/// Coordinates of a skew matrix in the Frobenius-orthonormal basis
/// (E_ij - E_ji)/sqrt(2), i < j; and the inverse map.
Vector skew_to_vector(const Matrix& x);
Matrix vector_to_skew(const Vector& v, Eigen::Index dim);

bool is_finite(const Matrix& m);

}  // namespace holo
