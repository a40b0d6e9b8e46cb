#include "holo/geometry.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <set>

namespace holo {

namespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

void check_k(int k) {
  if (k < 1) throw std::invalid_argument("family member index k must be >= 1");
}

Vector point2(double x, double y) {
  Vector p(2);
  p << x, y;
  return p;
}

// Conformal factor 4 / (1 - r^2/k^2)^2 of the disk of radius k and its gradient.
double poincare_factor(const Vector& y, double k) {
  const double u = 1.0 - y.squaredNorm() / (k * k);
  if (!(u > 0.0)) throw DomainError("poincare metric evaluated outside the disk of radius k");
  return 4.0 / (u * u);
}

Vector poincare_factor_gradient(const Vector& y, double k) {
  const double u = 1.0 - y.squaredNorm() / (k * k);
  if (!(u > 0.0)) throw DomainError("poincare metric evaluated outside the disk of radius k");
  return (16.0 / (k * k * u * u * u)) * y;
}

MetricField constant_metric(const Matrix& m, const std::string& label) {
  MetricField f;
  f.dim = static_cast<int>(m.rows());
  f.evaluate = [m](const Point&) { return m; };
  const int n = f.dim;
  f.derivative = [n](const Point&) { return std::vector<Matrix>(n, Matrix::Zero(n, n)); };
  f.label = label;
  return f;
}

MetricField poincare_member(int k) {
  check_k(k);
  const double kk = k;
  MetricField f;
  f.dim = 2;
  f.evaluate = [kk](const Point& x) -> Matrix { return poincare_factor(x, kk) * Matrix::Identity(2, 2); };
  f.derivative = [kk](const Point& x) {
    const Vector grad = poincare_factor_gradient(x, kk);
    return std::vector<Matrix>{grad(0) * Matrix::Identity(2, 2), grad(1) * Matrix::Identity(2, 2)};
  };
  f.label = "poincare2d[k=" + std::to_string(k) + "]";
  return f;
}

MetricField product_member(int k) {
  check_k(k);
  const double kk = k;
  MetricField f;
  f.dim = 4;
  f.evaluate = [kk](const Point& x) -> Matrix {
    Matrix m = Matrix::Identity(4, 4);
    const double lambda = poincare_factor(x.head(2), kk);
    m(0, 0) = lambda;
    m(1, 1) = lambda;
    return m;
  };
  f.derivative = [kk](const Point& x) {
    const Vector grad = poincare_factor_gradient(x.head(2), kk);
    std::vector<Matrix> d(4, Matrix::Zero(4, 4));
    for (int i = 0; i < 2; ++i) {
      d[i](0, 0) = grad(i);
      d[i](1, 1) = grad(i);
    }
    return d;
  };
  f.label = "product4d[k=" + std::to_string(k) + "]";
  return f;
}

Matrix rotation2(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// Pullback of the disk metric of radius k along x -> L x.
MetricField sheared_member(int k, const Matrix& shear, double theta_inf, double theta_rate) {
  check_k(k);
  const double kk = k;
  const Matrix l = rotation2(theta_inf + theta_rate / kk) * shear;
  const Matrix ltl = l.transpose() * l;
  MetricField f;
  f.dim = 2;
  f.evaluate = [kk, l, ltl](const Point& x) -> Matrix { return poincare_factor(l * x, kk) * ltl; };
  f.derivative = [kk, l, ltl](const Point& x) {
    const Vector grad = l.transpose() * poincare_factor_gradient(l * x, kk);
    return std::vector<Matrix>{grad(0) * ltl, grad(1) * ltl};
  };
  f.label = "sheared_poincare[k=" + std::to_string(k) + "]";
  return f;
}

// Real symmetric form of a Hermitian matrix H via Re(u^* H v), coordinates
// ordered (Re z1, Im z1, Re z2, Im z2, ...).
Matrix realify(const ComplexMatrix& h) {
  const Eigen::Index m = h.rows();
  Matrix r(2 * m, 2 * m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      const double re = h(a, b).real();
      const double im = h(a, b).imag();
      r(2 * a, 2 * b) = re;
      r(2 * a, 2 * b + 1) = -im;
      r(2 * a + 1, 2 * b) = im;
      r(2 * a + 1, 2 * b + 1) = re;
    }
  return r;
}

Eigen::VectorXcd complex_coords(const Point& x) {
  Eigen::VectorXcd z(x.size() / 2);
  for (Eigen::Index a = 0; a < z.size(); ++a) z(a) = Complex(x(2 * a), x(2 * a + 1));
  return z;
}

// Fubini-Study metric k^2 dd^c log(1 + |z|^2/k^2) on the affine chart of CP^2.
// Hermitian matrix H_ab = ((1+s) delta_ab - z_a conj(z_b)/k^2) / (1+s)^2, s = |z|^2/k^2.
MetricField fubini_study_member(int k) {
  check_k(k);
  const double k2 = static_cast<double>(k) * k;
  MetricField f;
  f.dim = 4;
  f.evaluate = [k2](const Point& x) -> Matrix {
    const Eigen::VectorXcd z = complex_coords(x);
    const double s = z.squaredNorm() / k2;
    const ComplexMatrix w = z * z.adjoint() / k2;
    const ComplexMatrix h = ((1.0 + s) * ComplexMatrix::Identity(2, 2) - w) / ((1.0 + s) * (1.0 + s));
    return realify(h);
  };
  f.derivative = [k2](const Point& x) {
    const Eigen::VectorXcd z = complex_coords(x);
    const double s = z.squaredNorm() / k2;
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix w = z * z.adjoint() / k2;
    std::vector<Matrix> d(4);
    for (int i = 0; i < 4; ++i) {
      Eigen::VectorXcd dz = Eigen::VectorXcd::Zero(2);
      dz(i / 2) = (i % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
      const double ds = 2.0 * (z.adjoint() * dz)(0).real() / k2;
      const ComplexMatrix dw = (dz * z.adjoint() + z * dz.adjoint()) / k2;
      const ComplexMatrix dh = (ds * id - dw) / ((1.0 + s) * (1.0 + s)) -
                               2.0 * ds * ((1.0 + s) * id - w) / std::pow(1.0 + s, 3);
      d[i] = realify(dh);
    }
    return d;
  };
  f.label = "fubini_study_chart[k=" + std::to_string(k) + "]";
  return f;
}

void check_params(const FamilyParams& params, const std::set<std::string>& allowed, const std::string& name) {
  for (const auto& [key, value] : params.values) {
    if (!allowed.count(key)) throw std::invalid_argument("family " + name + ": unknown parameter '" + key + "'");
    if (!std::isfinite(value)) throw std::invalid_argument("family " + name + ": parameter '" + key + "' is not finite");
  }
}

}  // namespace

std::optional<double> FamilyParams::get(const std::string& key) const {
  for (const auto& [k, v] : values)
    if (k == key) return v;
  return std::nullopt;
}

const std::vector<std::string>& builtin_family_names() {
  static const std::vector<std::string> names = {"poincare2d", "flat", "product4d", "sheared_poincare",
                                                 "fubini_study_chart"};
  return names;
}

MetricFamily builtin_family(const std::string& name, const FamilyParams& params) {
  MetricFamily fam;
  fam.name = name;
  auto param = [&](const char* key, double fallback) { return params.get(key).value_or(fallback); };

  if (name == "poincare2d") {
    check_params(params, {"radius", "margin", "x0", "y0"}, name);
    fam.chart = ChartDomain::ball(2, param("radius", 0.5), param("margin", 0.02));
    fam.basepoint = point2(param("x0", 0.05), param("y0", 0.0));
    fam.member = poincare_member;
    fam.limit = constant_metric(4.0 * Matrix::Identity(2, 2), "poincare2d[limit]");
  } else if (name == "flat") {
    check_params(params, {"dim", "scale", "half_width", "margin"}, name);
    const int n = static_cast<int>(param("dim", 2));
    if (n < 1 || n > 4) throw std::invalid_argument("family flat: dim must lie in 1..4");
    const double scale = param("scale", 4.0);
    if (!(scale > 0.0)) throw std::invalid_argument("family flat: scale must be positive");
    const double hw = param("half_width", 0.5);
    fam.chart = ChartDomain::box(Vector::Constant(n, -hw), Vector::Constant(n, hw), param("margin", 0.02));
    fam.basepoint = Vector::Zero(n);
    const MetricField m = constant_metric(scale * Matrix::Identity(n, n), "flat");
    fam.member = [m](int k) {
      check_k(k);
      return m;
    };
    fam.limit = m;
  } else if (name == "product4d") {
    check_params(params, {"half_width", "margin", "x0"}, name);
    const double hw = param("half_width", 0.35);
    fam.chart = ChartDomain::box(Vector::Constant(4, -hw), Vector::Constant(4, hw), param("margin", 0.02));
    fam.basepoint = Vector::Zero(4);
    fam.basepoint(0) = param("x0", 0.05);
    fam.member = product_member;
    Matrix lim = Matrix::Identity(4, 4);
    lim(0, 0) = lim(1, 1) = 4.0;
    fam.limit = constant_metric(lim, "product4d[limit]");
  } else if (name == "sheared_poincare") {
    check_params(params, {"shear", "theta_inf", "theta_rate", "half_width", "margin", "x0", "y0"}, name);
    Matrix shear = Matrix::Identity(2, 2);
    shear(0, 1) = param("shear", 0.3);
    const double theta_inf = param("theta_inf", 0.4);
    const double theta_rate = param("theta_rate", 1.0);
    const double hw = param("half_width", 0.4);
    fam.chart = ChartDomain::box(Vector::Constant(2, -hw), Vector::Constant(2, hw), param("margin", 0.02));
    fam.basepoint = point2(param("x0", 0.05), param("y0", 0.0));
    fam.member = [shear, theta_inf, theta_rate](int k) { return sheared_member(k, shear, theta_inf, theta_rate); };
    fam.limit = constant_metric(4.0 * shear.transpose() * shear, "sheared_poincare[limit]");
  } else if (name == "fubini_study_chart") {
    check_params(params, {"half_width", "margin", "x0"}, name);
    const double hw = param("half_width", 0.5);
    fam.chart = ChartDomain::box(Vector::Constant(4, -hw), Vector::Constant(4, hw), param("margin", 0.02));
    fam.basepoint = Vector::Zero(4);
    fam.basepoint(0) = param("x0", 0.0);
    fam.member = fubini_study_member;
    fam.limit = constant_metric(Matrix::Identity(4, 4), "fubini_study_chart[limit]");
  } else {
    throw std::invalid_argument("unknown metric family '" + name + "'");
  }
  if (!fam.chart.is_interior(fam.basepoint))
    throw std::invalid_argument("family " + name + ": basepoint is not in the chart interior");
  return fam;
}

}  // namespace holo
