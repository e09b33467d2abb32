#pragma once

// Test-only generators. Random unitaries come from a QR factorization of a
// complex Gaussian matrix, which is independent of the exponential chart in
// the optimizer.

#include <Eigen/QR>

#include <random>

#include "twovis/linalg.hpp"

namespace twovis::test {

inline ComplexMatrix random_unitary(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd z(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) z(r, c) = {normal(gen), normal(gen)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& rr = qr.matrixQR();
  for (int c = 0; c < n; ++c) q.col(c) *= rr(c, c) / std::abs(rr(c, c));
  return q;
}

inline ComplexMatrix random_density(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = {normal(gen), normal(gen)};
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

inline ComplexMatrix random_hermitian(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = {normal(gen), normal(gen)};
  return (g + g.adjoint()) * 0.5;
}

inline ComplexMatrix diag(std::initializer_list<Complex<double>> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                        static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (auto v : d) m(i, i) = v, ++i;
  return m;
}

}  // namespace twovis::test
