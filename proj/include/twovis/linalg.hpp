#pragma once

// Dense complex linear algebra for the 2x2 and 4x4 matrices that occur in
// two-qubit problems. Basis order everywhere is |00>, |01>, |10>, |11>, with
// the left tensor factor acting on qubit 1.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "twovis/error.hpp"

namespace twovis {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Runtime-sized, stack-allocated complex matrix of at most 4x4.
template <typename Scalar>
using Matrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::ColMajor, 4, 4>;

template <typename Scalar>
using Vector =
    Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;

using ComplexMatrix = Matrix<double>;
using ComplexVector = Vector<double>;

enum class Qubit { first = 1, second = 2 };

namespace tolerance {
inline constexpr double validation = 1e-10;
inline constexpr double hermitian = 1e-12;
inline constexpr double solver = 1e-12;
inline constexpr int max_sweeps = 100;
}  // namespace tolerance

template <typename Scalar>
struct EigenDecomposition {
  RealVector<Scalar> eigenvalues;  // descending
  Matrix<Scalar> eigenvectors;     // column j pairs with eigenvalues[j]
};

// ---------------------------------------------------------------------------
// Constants

template <typename Scalar = double>
Matrix<Scalar> identity(Eigen::Index n) {
  return Matrix<Scalar>::Identity(n, n);
}

template <typename Scalar = double>
Matrix<Scalar> pauli_x() {
  Matrix<Scalar> m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar = double>
Matrix<Scalar> pauli_y() {
  const Complex<Scalar> i(0, 1);
  Matrix<Scalar> m(2, 2);
  m << Complex<Scalar>(0), -i, i, Complex<Scalar>(0);
  return m;
}

template <typename Scalar = double>
Matrix<Scalar> pauli_z() {
  Matrix<Scalar> m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Balanced real mixing matrix (1/sqrt2)[[1,1],[1,-1]].
template <typename Scalar = double>
Matrix<Scalar> hadamard() {
  const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
  Matrix<Scalar> m(2, 2);
  m << h, h, h, -h;
  return m;
}

/// Computational basis vector |index> in dimension n.
template <typename Scalar = double>
Vector<Scalar> basis_vector(Eigen::Index n, Eigen::Index index) {
  Vector<Scalar> v = Vector<Scalar>::Zero(n);
  v(index) = 1;
  return v;
}

// ---------------------------------------------------------------------------
// Checks

template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  using std::abs;
  typename Eigen::NumTraits<typename Derived::Scalar>::Real best = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) best = std::max(best, abs(m(r, c)));
  return best;
}

template <typename Scalar>
Scalar hermiticity_defect(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<Scalar>::infinity();
  return max_abs((a - a.adjoint()).eval());
}

template <typename Scalar>
Scalar unitarity_defect(const Matrix<Scalar>& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<Scalar>::infinity();
  Matrix<Scalar> g = u.adjoint() * u;
  g -= Matrix<Scalar>::Identity(u.rows(), u.cols());
  return max_abs(g);
}

template <typename Scalar>
bool is_hermitian(const Matrix<Scalar>& a, Scalar tol = Scalar(tolerance::hermitian)) {
  return hermiticity_defect(a) <= tol;
}

template <typename Scalar>
bool is_unitary(const Matrix<Scalar>& u, Scalar tol = Scalar(tolerance::validation)) {
  return unitarity_defect(u) <= tol;
}

template <typename Scalar>
void require_unitary(const Matrix<Scalar>& u, const char* name) {
  if (!is_unitary(u)) {
    std::ostringstream os;
    os << name << " is not unitary (max |U^dag U - I| = " << unitarity_defect(u) << ")";
    throw ValidationError(os.str());
  }
}

// ---------------------------------------------------------------------------
// Products

template <typename Scalar>
Matrix<Scalar> matmul(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream os;
    os << "matmul: incompatible shapes " << a.rows() << "x" << a.cols() << " and "
       << b.rows() << "x" << b.cols();
    throw DimensionError(os.str());
  }
  return a * b;
}

template <typename Scalar>
Matrix<Scalar> adjoint(const Matrix<Scalar>& a) {
  return a.adjoint();
}

template <typename Scalar>
Complex<Scalar> trace(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) throw DimensionError("trace: matrix is not square");
  return a.trace();
}

/// Kronecker product; the row index of the result is (row_a * rows_b + row_b).
template <typename Scalar>
Matrix<Scalar> tensor(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > 4 || cols > 4)
    throw DimensionError("tensor: result exceeds the supported 4x4 size");
  Matrix<Scalar> out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Scalar>
Vector<Scalar> tensor(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  if (a.size() * b.size() > 4)
    throw DimensionError("tensor: result exceeds the supported size 4");
  Vector<Scalar> out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic complex Jacobi)

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Sweeps until the off-diagonal Frobenius norm drops below
/// 1e-12 * max(1, ||A||_F).
template <typename Scalar>
EigenDecomposition<Scalar> eig_hermitian(const Matrix<Scalar>& input) {
  using std::abs;
  using std::sqrt;
  using C = Complex<Scalar>;
  if (input.rows() != input.cols())
    throw DimensionError("eig_hermitian: matrix is not square");
  if (!is_hermitian(input, Scalar(tolerance::validation))) {
    std::ostringstream os;
    os << "eig_hermitian: matrix is not Hermitian (defect " << hermiticity_defect(input) << ")";
    throw ValidationError(os.str());
  }
  const Eigen::Index n = input.rows();
  Matrix<Scalar> a = (input + input.adjoint()) * Scalar(0.5);
  Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);

  const auto off_norm = [&] {
    Scalar s = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q)
        if (p != q) s += std::norm(a(p, q));
    return sqrt(s);
  };
  const Scalar threshold =
      Scalar(tolerance::solver) * std::max(Scalar(1), Scalar(a.norm()));

  int sweep = 0;
  for (; sweep < tolerance::max_sweeps && off_norm() >= threshold; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar mag = abs(a(p, q));
        if (mag == Scalar(0)) continue;
        const C phase = a(p, q) / mag;  // e^{i phi}
        const Scalar app = a(p, p).real();
        const Scalar aqq = a(q, q).real();
        const Scalar theta = (aqq - app) / (Scalar(2) * mag);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (abs(theta) + sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane.
        const C gpp = c, gpq = s;
        const C gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
        for (Eigen::Index r = 0; r < n; ++r) {
          const C arp = a(r, p), arq = a(r, q);
          a(r, p) = arp * gpp + arq * gqp;
          a(r, q) = arp * gpq + arq * gqq;
          const C vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp * gpp + vrq * gqp;
          v(r, q) = vrp * gpq + vrq * gqq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const C apr = a(p, r), aqr = a(q, r);
          a(p, r) = std::conj(gpp) * apr + std::conj(gqp) * aqr;
          a(q, r) = std::conj(gpq) * apr + std::conj(gqq) * aqr;
        }
        a(p, q) = a(q, p) = C(0);
        a(p, p) = C(a(p, p).real());
        a(q, q) = C(a(q, q).real());
      }
    }
  }
  const Scalar residual = off_norm();
  if (residual >= threshold) {
    std::ostringstream os;
    os << "eig_hermitian: no convergence after " << tolerance::max_sweeps
       << " sweeps (off-diagonal norm " << residual << ")";
    throw ConvergenceError(os.str(), static_cast<double>(residual));
  }

  std::array<Eigen::Index, 4> order{};
  std::iota(order.begin(), order.begin() + n, Eigen::Index{0});
  std::stable_sort(order.begin(), order.begin() + n, [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });
  EigenDecomposition<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenvalues(j) = a(order[j], order[j]).real();
    out.eigenvectors.col(j) = v.col(order[j]);
  }
  return out;
}

/// Accepts any Eigen expression, e.g. eig_hermitian(rho - rho_sep).
template <typename Derived>
auto eig_hermitian(const Eigen::MatrixBase<Derived>& expr) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  return eig_hermitian(Matrix<Real>(expr));
}

/// Sum_j f(alpha_j) v_j v_j^dag.
template <typename Scalar, typename F>
Matrix<Scalar> spectral_apply(const EigenDecomposition<Scalar>& e, F&& f) {
  const Eigen::Index n = e.eigenvalues.size();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    out += Complex<Scalar>(f(e.eigenvalues(j))) * e.eigenvectors.col(j) *
           e.eigenvectors.col(j).adjoint();
  return out;
}

template <typename Scalar>
Matrix<Scalar> reconstruct(const EigenDecomposition<Scalar>& e) {
  return spectral_apply(e, [](Scalar x) { return x; });
}

// ---------------------------------------------------------------------------
// Density matrices

/// Throws ValidationError naming the first violated property.
template <typename Scalar>
void validate_density(const Matrix<Scalar>& rho) {
  using std::abs;
  const Scalar tol(tolerance::validation);
  if (rho.rows() != rho.cols())
    throw ValidationError("density matrix is not square");
  if (!is_hermitian(rho, tol)) throw ValidationError("density matrix is not Hermitian");
  if (abs(rho.trace() - Complex<Scalar>(1)) > tol)
    throw ValidationError("density matrix does not have unit trace");
  if (eig_hermitian(rho).eigenvalues.minCoeff() < -tol)
    throw ValidationError("density matrix is not positive semidefinite");
}

/// Reduced density operator of one qubit from a 4x4 two-qubit matrix.
/// No validation; see partial_trace.
template <typename Scalar>
Matrix<Scalar> partial_trace_unchecked(const Matrix<Scalar>& rho, Qubit keep) {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(2, 2);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int traced = 0; traced < 2; ++traced) {
        if (keep == Qubit::first)
          out(x, y) += rho(2 * x + traced, 2 * y + traced);
        else
          out(x, y) += rho(2 * traced + x, 2 * traced + y);
      }
  return out;
}

template <typename Scalar>
Matrix<Scalar> partial_trace(const Matrix<Scalar>& rho, Qubit keep) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw DimensionError("partial_trace: expected a 4x4 two-qubit matrix");
  validate_density(rho);
  return partial_trace_unchecked(rho, keep);
}

}  // namespace twovis
