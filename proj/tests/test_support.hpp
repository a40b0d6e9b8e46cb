#pragma once

// Random inputs for property-style tests. Deterministic per seed.

#include "holo/matrix_core.hpp"

#include <random>

namespace holo::testing {

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

inline Matrix random_symmetric(int l, std::mt19937_64& rng) {
  const Matrix a = random_matrix(l, l, rng);
  return 0.5 * (a + a.transpose());
}

/// SPD with eigenvalues in [lo, hi].
inline Matrix random_spd(int l, std::mt19937_64& rng, double lo = 0.5, double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::HouseholderQR<Matrix> qr(random_matrix(l, l, rng));
  const Matrix q = qr.householderQ();
  Vector d(l);
  for (int i = 0; i < l; ++i) d(i) = u(rng);
  Matrix m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

inline Matrix random_skew(int l, std::mt19937_64& rng, double scale = 1.0) {
  const Matrix a = random_matrix(l, l, rng, scale);
  return 0.5 * (a - a.transpose());
}

/// SPD Z with |Z - I|_2 exactly `distance`.
inline Matrix spd_at_distance(int l, std::mt19937_64& rng, double distance) {
  std::uniform_real_distribution<double> u(-distance, distance);
  Eigen::HouseholderQR<Matrix> qr(random_matrix(l, l, rng));
  const Matrix q = qr.householderQ();
  Vector d(l);
  for (int i = 0; i < l; ++i) d(i) = 1.0 + u(rng);
  d(0) = 1.0 + distance;
  Matrix m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

inline Matrix rotation2(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace holo::testing
