#pragma once

// Outcome distributions after local or global unitaries, the two correlator
// families
//   pbar(j,k) = p(j,k) - p1(j) p2(k) + 1/4
//   cbar(j,k) = p(j,k) - psep(j,k) + 1/4
// and the Kolmogorov distance. Four-outcome distributions are indexed
// 00, 01, 10, 11.

#include <array>
#include <cmath>
#include <numeric>
#include <span>

#include "twovis/linalg.hpp"
#include "twovis/states.hpp"

namespace twovis {

template <typename Scalar, std::size_t N>
struct Distribution {
  std::array<Scalar, N> values{};

  Scalar& operator[](std::size_t i) { return values[i]; }
  const Scalar& operator[](std::size_t i) const { return values[i]; }
  Scalar operator()(int j, int k) const
    requires(N == 4)
  {
    return values[static_cast<std::size_t>(2 * j + k)];
  }
  Scalar sum() const { return std::accumulate(values.begin(), values.end(), Scalar(0)); }
  std::span<const Scalar> span() const noexcept { return values; }
  static constexpr std::size_t size() noexcept { return N; }

  static Distribution uniform() {
    Distribution d;
    d.values.fill(Scalar(1) / Scalar(N));
    return d;
  }
};

template <typename Scalar = double>
using ProbDistribution2 = Distribution<Scalar, 2>;
template <typename Scalar = double>
using CorrelatorDistribution = Distribution<Scalar, 4>;

/// Entries within [-1e-12, 1 + 1e-12] and total within 1e-10 of one.
template <typename Scalar>
bool is_distribution(std::span<const Scalar> p) {
  Scalar total = 0;
  for (Scalar x : p) {
    if (x < Scalar(-1e-12) || x > Scalar(1 + 1e-12)) return false;
    total += x;
  }
  return std::abs(total - Scalar(1)) <= Scalar(1e-10);
}

/// (1/2) sum_i |p_i - q_i|.
template <typename Scalar>
Scalar kolmogorov(std::span<const Scalar> p, std::span<const Scalar> q) {
  if (p.size() != q.size())
    throw DimensionError("kolmogorov: distributions have different sizes");
  Scalar s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s / Scalar(2);
}

template <typename Scalar, std::size_t N, std::size_t M>
Scalar kolmogorov(const Distribution<Scalar, N>& p, const Distribution<Scalar, M>& q) {
  return kolmogorov(p.span(), q.span());
}

namespace detail {

/// Diagonal of U rho U^dag, no validation.
template <typename Scalar>
CorrelatorDistribution<Scalar> conjugated_diagonal(const Matrix<Scalar>& rho,
                                                   const Matrix<Scalar>& u) {
  const Matrix<Scalar> ur = u * rho;
  CorrelatorDistribution<Scalar> p;
  for (int i = 0; i < 4; ++i) p[i] = ur.row(i).dot(u.row(i)).real();
  return p;
}

template <typename Scalar>
CorrelatorDistribution<Scalar> squared_moduli(const Vector<Scalar>& psi) {
  CorrelatorDistribution<Scalar> p;
  for (int i = 0; i < 4; ++i) p[i] = std::norm(psi(i));
  return p;
}

template <typename Scalar>
CorrelatorDistribution<Scalar> pbar_from_joint(const CorrelatorDistribution<Scalar>& p) {
  const Scalar p1[2] = {p[0] + p[1], p[2] + p[3]};
  const Scalar p2[2] = {p[0] + p[2], p[1] + p[3]};
  CorrelatorDistribution<Scalar> out;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) out[2 * j + k] = p[2 * j + k] - p1[j] * p2[k] + Scalar(0.25);
  return out;
}

template <typename Scalar>
CorrelatorDistribution<Scalar> cbar_from(const CorrelatorDistribution<Scalar>& p,
                                         const CorrelatorDistribution<Scalar>& psep) {
  CorrelatorDistribution<Scalar> out;
  for (int i = 0; i < 4; ++i) out[i] = p[i] - psep[i] + Scalar(0.25);
  return out;
}

}  // namespace detail

template <typename Scalar>
CorrelatorDistribution<Scalar> outcome_probs_local(const TwoQubitPureState<Scalar>& state,
                                                   const Matrix<Scalar>& u1,
                                                   const Matrix<Scalar>& u2) {
  if (u1.rows() != 2 || u2.rows() != 2)
    throw DimensionError("outcome_probs_local: expected 2x2 unitaries");
  require_unitary(u1, "U1");
  require_unitary(u2, "U2");
  return detail::squared_moduli<Scalar>(tensor(u1, u2) * state.amplitudes());
}

template <typename Scalar>
CorrelatorDistribution<Scalar> outcome_probs_global(const Matrix<Scalar>& rho,
                                                    const Matrix<Scalar>& u) {
  if (u.rows() != 4 || rho.rows() != 4)
    throw DimensionError("outcome_probs_global: expected 4x4 matrices");
  require_unitary(u, "U");
  validate_density(rho);
  return detail::conjugated_diagonal(rho, u);
}

/// Single-qubit outcome distribution of qubit 1 after U1.
template <typename Scalar>
ProbDistribution2<Scalar> outcome_probs_one(const Matrix<Scalar>& rho1,
                                            const Matrix<Scalar>& u1) {
  if (u1.rows() != 2 || rho1.rows() != 2)
    throw DimensionError("outcome_probs_one: expected 2x2 matrices");
  require_unitary(u1, "U1");
  const Matrix<Scalar> r = u1 * rho1 * u1.adjoint();
  return {{r(0, 0).real(), r(1, 1).real()}};
}

template <typename Scalar>
CorrelatorDistribution<Scalar> pbar(const TwoQubitPureState<Scalar>& state,
                                    const Matrix<Scalar>& u1, const Matrix<Scalar>& u2) {
  return detail::pbar_from_joint(outcome_probs_local(state, u1, u2));
}

/// pbar with a global 4x4 unitary in place of U1 (x) U2.
template <typename Scalar>
CorrelatorDistribution<Scalar> pbar(const TwoQubitPureState<Scalar>& state,
                                    const Matrix<Scalar>& u) {
  if (u.rows() != 4) throw DimensionError("pbar: expected a 4x4 unitary");
  require_unitary(u, "U");
  return detail::pbar_from_joint(detail::squared_moduli<Scalar>(u * state.amplitudes()));
}

template <typename Scalar>
CorrelatorDistribution<Scalar> cbar(const TwoQubitPureState<Scalar>& state,
                                    const Matrix<Scalar>& u) {
  if (u.rows() != 4) throw DimensionError("cbar: expected a 4x4 unitary");
  require_unitary(u, "U");
  const auto p = detail::squared_moduli<Scalar>(u * state.amplitudes());
  const auto psep = detail::conjugated_diagonal(separable_reference(state), u);
  return detail::cbar_from(p, psep);
}

}  // namespace twovis
