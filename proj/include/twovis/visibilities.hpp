#pragma once

// Closed-form one- and two-body visibilities of a pure two-qubit state.
//
//   v1       = 2 lambda0 - 1 = sqrt(2 tr rho1^2 - 1) = sqrt(1 - C^2)
//   v12      = C                              (local unitaries)
//   w12~     = 2 sqrt(l0 l1) / (2 l0 l1 + 1/2) = 2C / (C^2 + 1)
//   w12      = (4/3)(l0 l1 + sqrt(l0 l1)) = (4/3)(F^4 - 1/4) = (C^2 + 2C) / 3
//
// Every quantity with several equivalent expressions evaluates all of them
// and throws ConsistencyError if they disagree.

#include <array>
#include <cmath>
#include <sstream>
#include <string_view>

#include "twovis/states.hpp"

namespace twovis {

enum class Method { closed_form, numeric };

inline std::string_view to_string(Method m) {
  return m == Method::closed_form ? "closed_form" : "numeric";
}

template <typename Scalar = double>
struct VisibilityReport {
  Scalar v1 = 0;
  Scalar v12 = 0;
  Scalar w12_tilde = 0;
  Scalar w12 = 0;
  Scalar residual_tilde = 0;  // v1^2 + w12_tilde^2 - 1, nonnegative
  Scalar residual_w = 0;      // v1^2 + w12^2 - 1, nonpositive
  Method method = Method::closed_form;
};

/// Per-measure |a - b| between two reports.
template <typename Scalar = double>
struct VisibilityDeviation {
  Scalar v1 = 0;
  Scalar v12 = 0;
  Scalar w12_tilde = 0;
  Scalar w12 = 0;
  Scalar max() const { return std::max({v1, v12, w12_tilde, w12}); }
};

/// The three equivalent expressions of v1, in the order
/// eigenvalue, normalized purity, concurrence.
template <typename Scalar = double>
using V1Forms = std::array<Scalar, 3>;

namespace detail {

inline constexpr double form_tolerance = 1e-12;
inline constexpr double v1_form_tolerance = 1e-10;

template <typename Scalar, std::size_t N>
void require_agreement(const std::array<Scalar, N>& forms, Scalar tol, const char* what) {
  for (std::size_t i = 1; i < N; ++i) {
    if (std::abs(forms[i] - forms[0]) > tol) {
      std::ostringstream os;
      os.precision(17);
      os << what << ": equivalent forms disagree (" << forms[0] << " vs " << forms[i] << ")";
      throw ConsistencyError(os.str());
    }
  }
}

/// sqrt(x) is ill-conditioned near x = 0, so forms of v1 that pass through a
/// square root of a vanishing quantity are also accepted when their squares
/// agree to 1e-14.
template <typename Scalar>
void require_v1_agreement(const V1Forms<Scalar>& forms) {
  for (std::size_t i = 1; i < forms.size(); ++i) {
    const Scalar d = std::abs(forms[i] - forms[0]);
    const Scalar d2 = std::abs(forms[i] * forms[i] - forms[0] * forms[0]);
    if (d > Scalar(v1_form_tolerance) && d2 > Scalar(1e-14)) {
      std::ostringstream os;
      os.precision(17);
      os << "v1: equivalent forms disagree (" << forms[0] << " vs " << forms[i] << ")";
      throw ConsistencyError(os.str());
    }
  }
}

template <typename Scalar>
Scalar sqrt_clamped(Scalar x) {
  return std::sqrt(std::max(Scalar(0), x));
}

}  // namespace detail

/// eta diag(lambda0, lambda1) eta^dag.
template <typename Scalar>
Matrix<Scalar> reduced_from_schmidt(const SchmidtData<Scalar>& sd) {
  Matrix<Scalar> d = Matrix<Scalar>::Zero(2, 2);
  d(0, 0) = sd.lambda0;
  d(1, 1) = sd.lambda1;
  return sd.basis_eta * d * sd.basis_eta.adjoint();
}

template <typename Scalar>
V1Forms<Scalar> v1_forms(const SchmidtData<Scalar>& sd) {
  const Scalar c = concurrence(sd);
  return {Scalar(2) * sd.lambda0 - Scalar(1),
          detail::sqrt_clamped(Scalar(2) * purity(reduced_from_schmidt(sd)) - Scalar(1)),
          detail::sqrt_clamped(Scalar(1) - c * c)};
}

/// Same three forms, each from a separate route: Schmidt eigenvalue, purity
/// of the partial trace of |psi><psi|, and the spin-flip concurrence.
template <typename Scalar>
V1Forms<Scalar> v1_forms(const TwoQubitPureState<Scalar>& state) {
  const Scalar c = spin_flip_concurrence(state);
  const Matrix<Scalar> rho1 = partial_trace(density(state), Qubit::first);
  return {Scalar(2) * schmidt(state).lambda0 - Scalar(1),
          detail::sqrt_clamped(Scalar(2) * purity(rho1) - Scalar(1)),
          detail::sqrt_clamped(Scalar(1) - c * c)};
}

template <typename Scalar>
Scalar v1_closed(const SchmidtData<Scalar>& sd) {
  const auto forms = v1_forms(sd);
  detail::require_v1_agreement(forms);
  return forms[0];
}

template <typename Scalar>
Scalar v1_closed(const TwoQubitPureState<Scalar>& state) {
  const auto forms = v1_forms(state);
  detail::require_v1_agreement(forms);
  return forms[0];
}

/// Two-body visibility under local unitaries equals the concurrence.
template <typename Scalar>
Scalar v12_closed(const TwoQubitPureState<Scalar>& state) {
  return concurrence(state);
}

/// {lambda form, concurrence form}.
template <typename Scalar>
std::array<Scalar, 2> w12_tilde_forms(const SchmidtData<Scalar>& sd) {
  const Scalar prod = sd.lambda0 * sd.lambda1;
  const Scalar c = concurrence(sd);
  return {Scalar(2) * std::sqrt(prod) / (Scalar(2) * prod + Scalar(0.5)),
          Scalar(2) * c / (c * c + Scalar(1))};
}

template <typename Scalar>
Scalar w12_tilde_closed(const SchmidtData<Scalar>& sd) {
  const auto forms = w12_tilde_forms(sd);
  detail::require_agreement(forms, Scalar(detail::form_tolerance), "w12_tilde");
  return forms[0];
}

/// F(rho1, 1/2) = sum_j sqrt(lambda_j / 2).
template <typename Scalar>
Scalar fidelity_to_mixed(const SchmidtData<Scalar>& sd) {
  return std::sqrt(sd.lambda0 / Scalar(2)) + std::sqrt(sd.lambda1 / Scalar(2));
}

/// {eigenvalue form, fidelity form, concurrence form}.
template <typename Scalar>
std::array<Scalar, 3> w12_forms(const SchmidtData<Scalar>& sd) {
  const Scalar prod = sd.lambda0 * sd.lambda1;
  const Scalar f = fidelity_to_mixed(sd);
  const Scalar f2 = f * f;
  const Scalar c = concurrence(sd);
  return {Scalar(4) / Scalar(3) * (prod + std::sqrt(prod)),
          Scalar(4) / Scalar(3) * (f2 * f2 - Scalar(0.25)),
          (c * c + Scalar(2) * c) / Scalar(3)};
}

template <typename Scalar>
Scalar w12_closed(const SchmidtData<Scalar>& sd) {
  const auto forms = w12_forms(sd);
  detail::require_agreement(forms, Scalar(detail::form_tolerance), "w12");
  return forms[0];
}

/// Spectrum of rho - rho1 (x) rho2, descending:
/// l0 l1 + sqrt(l0 l1), -l0 l1, -l0 l1, l0 l1 - sqrt(l0 l1).
template <typename Scalar>
std::array<Scalar, 4> eigenvalues_diff(const SchmidtData<Scalar>& sd) {
  const Scalar prod = sd.lambda0 * sd.lambda1;
  const Scalar root = std::sqrt(prod);
  return {prod + root, -prod, -prod, prod - root};
}

template <typename Scalar>
VisibilityReport<Scalar> make_report(Scalar v1, Scalar v12, Scalar w12_tilde, Scalar w12,
                                     Method method) {
  VisibilityReport<Scalar> r;
  r.v1 = v1;
  r.v12 = v12;
  r.w12_tilde = w12_tilde;
  r.w12 = w12;
  r.residual_tilde = v1 * v1 + w12_tilde * w12_tilde - Scalar(1);
  r.residual_w = v1 * v1 + w12 * w12 - Scalar(1);
  r.method = method;
  return r;
}

template <typename Scalar>
VisibilityReport<Scalar> report_closed(const TwoQubitPureState<Scalar>& state) {
  const auto sd = schmidt(state);
  return make_report(v1_closed(sd), v12_closed(state), w12_tilde_closed(sd), w12_closed(sd),
                     Method::closed_form);
}

template <typename Scalar>
VisibilityDeviation<Scalar> deviation(const VisibilityReport<Scalar>& a,
                                      const VisibilityReport<Scalar>& b) {
  return {std::abs(a.v1 - b.v1), std::abs(a.v12 - b.v12),
          std::abs(a.w12_tilde - b.w12_tilde), std::abs(a.w12 - b.w12)};
}

}  // namespace twovis
