#pragma once

// Numerical extremization over U(2), U(2) x U(2) and U(4).
//
// Unitaries are charted by the exponential map U = exp(iH), H = sum_k theta_k G_k,
// with the Hermitian generators of an n x n matrix ordered as
//   [0, n)                 diagonal units E_kk
//   n + 2m, n + 2m + 1     E_jk + E_kj and i(E_jk - E_kj) for the m-th pair j < k
//                          in lexicographic order.
// Extrema are found by multi-start Nelder-Mead in parameter space.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "twovis/correlators.hpp"
#include "twovis/linalg.hpp"
#include "twovis/states.hpp"
#include "twovis/visibilities.hpp"

namespace twovis {

using State = TwoQubitPureState<double>;

struct UnitaryParametrization {
  int dimension = 2;
  std::vector<double> params;  // dimension^2 generator coefficients
};

struct OptimizerConfig {
  int restarts = 8;
  int max_iterations = 2000;
  double f_tolerance = 1e-10;
  double simplex_scale = 0.5;
  std::uint64_t seed = 0;
  /// Worker threads for restarts. Results do not depend on this value.
  unsigned threads = 1;
};

struct OptimizationResult {
  double value = 0;
  std::vector<double> params_at_optimum;
  int iterations_used = 0;
  int restarts_agreeing = 0;  // restarts within 1e-6 of the best value
};

using ParamObjective = std::function<double(std::span<const double>)>;
using UnitaryObjective = std::function<double(const ComplexMatrix&)>;

/// exp(i sum_k theta_k G_k), computed through the eigendecomposition of H.
ComplexMatrix realize(const UnitaryParametrization& p);
ComplexMatrix realize(int dimension, std::span<const double> params);

/// Inverse chart: parameters whose realization is u, with the eigenphases of
/// u taken in (-pi, pi].
UnitaryParametrization parametrize(const ComplexMatrix& u);

/// Multi-start Nelder-Mead maximization of an objective of `n_params` reals.
/// Restart r starts from a seeded uniform point in [-pi, pi]^n, except that
/// restart 0 starts at `warm_start` when one is supplied. The winner is the
/// largest value, ties broken by the lowest restart index.
OptimizationResult maximize_params(const ParamObjective& objective, std::size_t n_params,
                                   const OptimizerConfig& cfg,
                                   std::optional<std::vector<double>> warm_start = {});

OptimizationResult maximize(const UnitaryObjective& objective, int dimension,
                            const OptimizerConfig& cfg,
                            std::optional<std::vector<double>> warm_start = {});

/// Maximizes the negated objective; `value` is reported un-negated.
OptimizationResult minimize(const UnitaryObjective& objective, int dimension,
                            const OptimizerConfig& cfg,
                            std::optional<std::vector<double>> warm_start = {});

// ---------------------------------------------------------------------------
// Visibilities by direct optimization

double v1_numeric(const State& state, const OptimizerConfig& cfg = {});
double v12_numeric_local(const State& state, const OptimizerConfig& cfg = {});
double v12_numeric_global(const State& state, const OptimizerConfig& cfg = {});
double w12_tilde_numeric(const State& state, const OptimizerConfig& cfg = {});
/// Restart 0 starts at eigenbasis_aligned_unitary(state); the others are random.
double w12_numeric(const State& state, const OptimizerConfig& cfg = {});

/// v1, v12 (local), w12_tilde and w12, all by optimization.
VisibilityReport<double> report_numeric(const State& state, const OptimizerConfig& cfg = {});

/// (4/3) D(Cbar, Cbar_sep) at a global unitary. The equivalent
/// (4/3) D(P, P_sep) is evaluated alongside; ConsistencyError if they differ
/// by more than 1e-10.
double w12_objective(const State& state, const ComplexMatrix& u);

/// The unitary whose adjoint sends |00>, |01>, |10>, |11> to the eigenvectors
/// of rho - rho1 (x) rho2 in descending eigenvalue order.
ComplexMatrix eigenbasis_aligned_unitary(const State& state);

// ---------------------------------------------------------------------------
// Balanced beam splitter + phase shifter family

/// B P(phi) with B = (1/sqrt2)[[1, i], [i, 1]] and P(phi) = diag(e^{i phi}, 1).
ComplexMatrix beam_splitter_phase(double phi);

struct RestrictedVisibilities {
  double v1 = 0;
  double v12 = 0;
};

/// v1 over phi1 and v12 over (phi1, phi2), each extremum located on a uniform
/// grid of `phase_grid` points per phase and refined by golden-section search.
RestrictedVisibilities restricted_visibilities(const State& state, int phase_grid = 64);

}  // namespace twovis
