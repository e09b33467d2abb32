#pragma once

// Two-qubit pure states and the quantities derived from them: Schmidt data,
// density and reduced density matrices, the separable reference rho1 (x) rho2,
// concurrence and Haar-random sampling.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include "twovis/linalg.hpp"

namespace twovis {

/// Reduced eigenvalues below this are treated as exactly zero.
inline constexpr double schmidt_zero_clamp = 1e-14;

template <typename Scalar = double>
class TwoQubitPureState {
 public:
  /// Validates and renormalizes. Rejects the zero vector and any vector whose
  /// norm is more than 1e-6 away from 1.
  static TwoQubitPureState from_amplitudes(const Vector<Scalar>& amps) {
    if (amps.size() != 4)
      throw DimensionError("two-qubit state needs exactly 4 amplitudes");
    const Scalar norm = amps.norm();
    if (!(norm > Scalar(0)))
      throw ValidationError("state amplitudes are all zero");
    if (std::abs(norm - Scalar(1)) > Scalar(1e-6)) {
      std::ostringstream os;
      os << "state norm " << norm << " deviates from 1 by more than 1e-6";
      throw ValidationError(os.str());
    }
    return TwoQubitPureState(amps / norm);
  }

  static TwoQubitPureState from_amplitudes(Complex<Scalar> a00, Complex<Scalar> a01,
                                           Complex<Scalar> a10, Complex<Scalar> a11) {
    Vector<Scalar> v(4);
    v << a00, a01, a10, a11;
    return from_amplitudes(v);
  }

  /// sqrt(lambda0)|00> + sqrt(1 - lambda0)|11>.
  static TwoQubitPureState from_schmidt_value(Scalar lambda0) {
    if (!(lambda0 >= Scalar(0.5) && lambda0 <= Scalar(1))) {
      std::ostringstream os;
      os << "lambda0 = " << lambda0 << " outside [0.5, 1]";
      throw ValidationError(os.str());
    }
    Vector<Scalar> v = Vector<Scalar>::Zero(4);
    v(0) = std::sqrt(lambda0);
    v(3) = std::sqrt(Scalar(1) - lambda0);
    return TwoQubitPureState(v);
  }

  const Vector<Scalar>& amplitudes() const noexcept { return amps_; }
  Complex<Scalar> operator()(int j, int k) const { return amps_(2 * j + k); }

  /// 2x2 coefficient matrix M[j][k] = <jk|psi>.
  Matrix<Scalar> coefficients() const {
    Matrix<Scalar> m(2, 2);
    m << amps_(0), amps_(1), amps_(2), amps_(3);
    return m;
  }

 private:
  explicit TwoQubitPureState(Vector<Scalar> amps) : amps_(std::move(amps)) {}
  Vector<Scalar> amps_;
};

template <typename Scalar = double>
struct SchmidtData {
  Scalar lambda0;
  Scalar lambda1;
  Matrix<Scalar> basis_eta;  // columns |eta_0>, |eta_1> (qubit 1)
  Matrix<Scalar> basis_xi;   // columns |xi_0>, |xi_1> (qubit 2)
};

// ---------------------------------------------------------------------------

template <typename Scalar>
TwoQubitPureState<Scalar> evolve(const Matrix<Scalar>& u, const TwoQubitPureState<Scalar>& s) {
  if (u.rows() != 4 || u.cols() != 4) throw DimensionError("evolve: expected a 4x4 unitary");
  require_unitary(u, "U");
  return TwoQubitPureState<Scalar>::from_amplitudes(u * s.amplitudes());
}

template <typename Scalar>
TwoQubitPureState<Scalar> evolve_local(const Matrix<Scalar>& u1, const Matrix<Scalar>& u2,
                                      const TwoQubitPureState<Scalar>& s) {
  return evolve(tensor(u1, u2), s);
}

/// Schmidt decomposition via the eigendecomposition of M M^dag, with
/// rho1 = M M^dag. The qubit-2 basis is |xi_j> = M^T conj(eta_j) / sqrt(lambda_j);
/// |xi_1> is completed orthogonally when lambda1 vanishes. Reconstruction
/// coefficients are real and nonnegative.
template <typename Scalar>
SchmidtData<Scalar> schmidt(const TwoQubitPureState<Scalar>& state) {
  const Matrix<Scalar> m = state.coefficients();
  const Matrix<Scalar> gram = m * m.adjoint();
  const auto eig = eig_hermitian(gram);

  SchmidtData<Scalar> sd;
  sd.lambda0 = eig.eigenvalues(0);
  sd.lambda1 = eig.eigenvalues(1);
  if (sd.lambda1 < Scalar(schmidt_zero_clamp)) {
    sd.lambda1 = Scalar(0);
    sd.lambda0 = Scalar(1);
  }
  sd.basis_eta = eig.eigenvectors;

  Vector<Scalar> xi0 = m.transpose() * sd.basis_eta.col(0).conjugate();
  xi0 /= xi0.norm();
  Vector<Scalar> xi1(2);
  if (sd.lambda1 > Scalar(0)) {
    xi1 = m.transpose() * sd.basis_eta.col(1).conjugate();
    // Re-orthogonalize against xi0 to absorb rounding in small lambda1.
    xi1 -= xi0 * xi0.dot(xi1);
    xi1 /= xi1.norm();
  } else {
    xi1 << -std::conj(xi0(1)), std::conj(xi0(0));
  }
  // Fix the phase of xi1 so that <eta_1 xi_1|psi> is real nonnegative.
  const Complex<Scalar> c1 =
      (sd.basis_eta.col(1).adjoint() * m * xi1.conjugate())(0, 0);
  if (std::abs(c1) > Scalar(0)) xi1 *= c1 / std::abs(c1);
  sd.basis_xi.resize(2, 2);
  sd.basis_xi.col(0) = xi0;
  sd.basis_xi.col(1) = xi1;
  return sd;
}

/// Sum_j sqrt(lambda_j) |eta_j>|xi_j>.
template <typename Scalar>
Vector<Scalar> reconstruct(const SchmidtData<Scalar>& sd) {
  const Vector<Scalar> eta0 = sd.basis_eta.col(0), eta1 = sd.basis_eta.col(1);
  const Vector<Scalar> xi0 = sd.basis_xi.col(0), xi1 = sd.basis_xi.col(1);
  const Vector<Scalar> a = tensor(eta0, xi0), b = tensor(eta1, xi1);
  return std::sqrt(sd.lambda0) * a + std::sqrt(sd.lambda1) * b;
}

template <typename Scalar>
Matrix<Scalar> density(const TwoQubitPureState<Scalar>& state) {
  return state.amplitudes() * state.amplitudes().adjoint();
}

template <typename Scalar>
Matrix<Scalar> reduced_density(const TwoQubitPureState<Scalar>& state, Qubit keep) {
  return partial_trace_unchecked(density(state), keep);
}

/// rho1 (x) rho2.
template <typename Scalar>
Matrix<Scalar> separable_reference(const TwoQubitPureState<Scalar>& state) {
  const Matrix<Scalar> rho = density(state);
  return tensor(partial_trace(rho, Qubit::first), partial_trace(rho, Qubit::second));
}

/// |<psi| sigma_y (x) sigma_y |psi*>|.
template <typename Scalar>
Scalar spin_flip_concurrence(const TwoQubitPureState<Scalar>& state) {
  const Matrix<Scalar> yy = tensor(pauli_y<Scalar>(), pauli_y<Scalar>());
  const Vector<Scalar>& psi = state.amplitudes();
  return std::abs(psi.dot(yy * psi.conjugate()));
}

template <typename Scalar>
Scalar concurrence(const SchmidtData<Scalar>& sd) {
  return Scalar(2) * std::sqrt(sd.lambda0 * sd.lambda1);
}

/// 2 sqrt(lambda0 lambda1), checked against the spin-flip formula.
template <typename Scalar>
Scalar concurrence(const TwoQubitPureState<Scalar>& state) {
  const Scalar from_schmidt = concurrence(schmidt(state));
  const Scalar from_flip = spin_flip_concurrence(state);
  if (std::abs(from_schmidt - from_flip) > Scalar(1e-10)) {
    std::ostringstream os;
    os.precision(17);
    os << "concurrence routes disagree: Schmidt " << from_schmidt << ", spin-flip "
       << from_flip;
    throw ConsistencyError(os.str());
  }
  return from_schmidt;
}

/// tr(rho^2) of a single-qubit density matrix.
template <typename Derived>
auto purity(const Eigen::MatrixBase<Derived>& rho) {
  if (rho.rows() != 2 || rho.cols() != 2)
    throw DimensionError("purity: expected a 2x2 density matrix");
  return (rho * rho).trace().real();
}

/// Haar-random pure states: four i.i.d. standard complex Gaussians, normalized.
template <typename Scalar = double>
std::vector<TwoQubitPureState<Scalar>> sample_haar(std::uint64_t seed, std::size_t count) {
  if (count < 1) throw ValidationError("sample_haar: count must be at least 1");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<TwoQubitPureState<Scalar>> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    Vector<Scalar> v(4);
    for (int j = 0; j < 4; ++j) {
      const double re = normal(gen);
      const double im = normal(gen);
      v(j) = Complex<Scalar>(Scalar(re), Scalar(im));
    }
    out.push_back(TwoQubitPureState<Scalar>::from_amplitudes(v / v.norm()));
  }
  return out;
}

}  // namespace twovis
