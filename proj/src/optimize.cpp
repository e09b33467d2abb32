#include "twovis/optimize.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace twovis {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAgreement = 1e-6;

ComplexMatrix hamiltonian(int n, std::span<const double> params) {
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) h(k, k) = params[static_cast<std::size_t>(k)];
  std::size_t m = static_cast<std::size_t>(n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k, m += 2) {
      h(j, k) = Complex<double>(params[m], params[m + 1]);
      h(k, j) = std::conj(h(j, k));
    }
  return h;
}

struct RunResult {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
};

// Nelder-Mead on g = -objective with dimension-adaptive coefficients.
RunResult nelder_mead(const ParamObjective& objective, std::vector<double> start,
                      const OptimizerConfig& cfg) {
  const std::size_t n = start.size();
  const double nd = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / nd;
  const double contract = 0.75 - 1.0 / (2.0 * nd);
  const double shrink = 1.0 - 1.0 / nd;

  const auto g = [&](const std::vector<double>& x) { return -objective(x); };

  std::vector<std::vector<double>> pts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += cfg.simplex_scale;
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = g(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  const auto along = [&](std::vector<double>& out, const std::vector<double>& from, double t) {
    for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + t * (from[i] - centroid[i]);
  };

  RunResult run;
  int iter = 0;
  for (;; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (vals[worst] - vals[best] <= cfg.f_tolerance) {
      run.converged = true;
      break;
    }
    if (iter >= cfg.max_iterations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[order[k]][i] / nd;

    along(xr, pts[worst], -reflect);
    const double gr = g(xr);
    if (gr < vals[best]) {
      along(xe, pts[worst], -reflect * expand);
      const double ge = g(xe);
      if (ge < gr) {
        pts[worst] = xe;
        vals[worst] = ge;
      } else {
        pts[worst] = xr;
        vals[worst] = gr;
      }
      continue;
    }
    if (gr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = gr;
      continue;
    }
    // Outside contraction if the reflection beat the worst point, inside otherwise.
    const bool outside = gr < vals[worst];
    along(xc, outside ? xr : pts[worst], contract);
    const double gc = g(xc);
    if (gc < (outside ? gr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = gc;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      auto& p = pts[order[k]];
      for (std::size_t i = 0; i < n; ++i) p[i] = pts[best][i] + shrink * (p[i] - pts[best][i]);
      vals[order[k]] = g(p);
    }
  }
  const std::size_t best =
      static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  run.value = -vals[best];
  run.x = pts[best];
  run.iterations = iter;
  return run;
}

std::vector<double> random_start(std::size_t n, std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> dist(-kPi, kPi);
  std::vector<double> x(n);
  for (auto& v : x) v = dist(gen);
  return x;
}

void validate(const OptimizerConfig& cfg) {
  if (cfg.restarts < 1 || cfg.max_iterations < 1 || !(cfg.f_tolerance > 0) ||
      !(cfg.simplex_scale > 0))
    throw ValidationError("optimizer config: restarts, max_iterations, f_tolerance and "
                          "simplex_scale must be positive");
}

ParamObjective unitary_objective(const UnitaryObjective& objective, int dimension) {
  return [objective, dimension](std::span<const double> x) {
    return objective(realize(dimension, x));
  };
}

double contrast(double hi, double lo) { return (hi - lo) / (hi + lo); }

}  // namespace

// ---------------------------------------------------------------------------

ComplexMatrix realize(int dimension, std::span<const double> params) {
  if (dimension != 2 && dimension != 4)
    throw DimensionError("realize: dimension must be 2 or 4");
  if (params.size() != static_cast<std::size_t>(dimension * dimension))
    throw DimensionError("realize: expected dimension^2 parameters");
  const auto eig = eig_hermitian(hamiltonian(dimension, params));
  return spectral_apply(eig, [](double alpha) { return std::polar(1.0, alpha); });
}

ComplexMatrix realize(const UnitaryParametrization& p) {
  return realize(p.dimension, p.params);
}

UnitaryParametrization parametrize(const ComplexMatrix& u) {
  const int n = static_cast<int>(u.rows());
  if ((n != 2 && n != 4) || u.cols() != n)
    throw DimensionError("parametrize: expected a 2x2 or 4x4 unitary");
  require_unitary(u, "U");
  // A unitary is normal, so its complex Schur form is diagonal.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(Eigen::MatrixXcd(u), true);
  const Eigen::MatrixXcd& q = schur.matrixU();
  const Eigen::MatrixXcd& t = schur.matrixT();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) h += std::arg(t(j, j)) * q.col(j) * q.col(j).adjoint();
  h = (h + h.adjoint()).eval() * 0.5;

  UnitaryParametrization p;
  p.dimension = n;
  p.params.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int k = 0; k < n; ++k) p.params[static_cast<std::size_t>(k)] = h(k, k).real();
  std::size_t m = static_cast<std::size_t>(n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k, m += 2) {
      p.params[m] = h(j, k).real();
      p.params[m + 1] = h(j, k).imag();
    }
  return p;
}

OptimizationResult maximize_params(const ParamObjective& objective, std::size_t n_params,
                                   const OptimizerConfig& cfg,
                                   std::optional<std::vector<double>> warm_start) {
  validate(cfg);
  if (warm_start && warm_start->size() != n_params)
    throw DimensionError("maximize: warm start has the wrong number of parameters");

  const auto restarts = static_cast<std::size_t>(cfg.restarts);
  std::vector<RunResult> runs(restarts);
  const auto execute = [&](std::size_t r) {
    auto start = (r == 0 && warm_start) ? *warm_start
                                        : random_start(n_params, cfg.seed, static_cast<int>(r));
    runs[r] = nelder_mead(objective, std::move(start), cfg);
  };

  const std::size_t workers = std::min<std::size_t>(std::max(1u, cfg.threads), restarts);
  if (workers <= 1) {
    for (std::size_t r = 0; r < restarts; ++r) execute(r);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < restarts; r += workers) execute(r);
      });
  }

  std::size_t winner = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (runs[r].value > runs[winner].value) winner = r;
  const bool any_converged =
      std::any_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.converged; });
  if (!any_converged) {
    std::ostringstream os;
    os.precision(12);
    os << "maximize: none of " << restarts << " restarts converged within "
       << cfg.max_iterations << " iterations (best value " << runs[winner].value << ")";
    throw OptimizationError(os.str(), runs[winner].value);
  }

  OptimizationResult out;
  out.value = runs[winner].value;
  out.params_at_optimum = runs[winner].x;
  out.iterations_used = runs[winner].iterations;
  out.restarts_agreeing = static_cast<int>(std::count_if(
      runs.begin(), runs.end(),
      [&](const RunResult& r) { return std::abs(r.value - out.value) <= kAgreement; }));
  return out;
}

OptimizationResult maximize(const UnitaryObjective& objective, int dimension,
                            const OptimizerConfig& cfg,
                            std::optional<std::vector<double>> warm_start) {
  if (dimension != 2 && dimension != 4)
    throw DimensionError("maximize: dimension must be 2 or 4");
  return maximize_params(unitary_objective(objective, dimension),
                         static_cast<std::size_t>(dimension * dimension), cfg,
                         std::move(warm_start));
}

OptimizationResult minimize(const UnitaryObjective& objective, int dimension,
                            const OptimizerConfig& cfg,
                            std::optional<std::vector<double>> warm_start) {
  auto result = maximize([&objective](const ComplexMatrix& u) { return -objective(u); },
                         dimension, cfg, std::move(warm_start));
  result.value = -result.value;
  return result;
}

// ---------------------------------------------------------------------------

double v1_numeric(const State& state, const OptimizerConfig& cfg) {
  const ComplexMatrix rho1 = reduced_density(state, Qubit::first);
  const auto p0 = [&rho1](const ComplexMatrix& u) {
    return (u.row(0) * rho1 * u.row(0).adjoint())(0, 0).real();
  };
  const double hi = maximize(p0, 2, cfg).value;
  const double lo = minimize(p0, 2, cfg).value;
  const double v1 = contrast(hi, lo);
  if (std::abs(v1 - (2.0 * hi - 1.0)) > 1e-6) {
    std::ostringstream os;
    os.precision(12);
    os << "v1_numeric: contrast " << v1 << " disagrees with 2 p_max - 1 = " << 2.0 * hi - 1.0;
    throw ConsistencyError(os.str());
  }
  return v1;
}

double v12_numeric_local(const State& state, const OptimizerConfig& cfg) {
  const ComplexVector psi = state.amplitudes();
  const ParamObjective pbar00 = [psi](std::span<const double> x) {
    const ComplexMatrix u = tensor(realize(2, x.subspan(0, 4)), realize(2, x.subspan(4, 4)));
    return detail::pbar_from_joint(detail::squared_moduli<double>(u * psi))[0];
  };
  const ParamObjective neg = [&pbar00](std::span<const double> x) { return -pbar00(x); };
  const double hi = maximize_params(pbar00, 8, cfg).value;
  const double lo = -maximize_params(neg, 8, cfg).value;
  return contrast(hi, lo);
}

double v12_numeric_global(const State& state, const OptimizerConfig& cfg) {
  const ComplexVector psi = state.amplitudes();
  const auto pbar00 = [psi](const ComplexMatrix& u) {
    return detail::pbar_from_joint(detail::squared_moduli<double>(u * psi))[0];
  };
  return contrast(maximize(pbar00, 4, cfg).value, minimize(pbar00, 4, cfg).value);
}

double w12_tilde_numeric(const State& state, const OptimizerConfig& cfg) {
  const ComplexMatrix rho = density(state);
  const ComplexMatrix rho_sep = separable_reference(state);
  const auto cbar00 = [rho, rho_sep](const ComplexMatrix& u) {
    const auto p = detail::conjugated_diagonal(rho, u);
    const auto psep = detail::conjugated_diagonal(rho_sep, u);
    return detail::cbar_from(p, psep)[0];
  };
  return contrast(maximize(cbar00, 4, cfg).value, minimize(cbar00, 4, cfg).value);
}

namespace {

double w12_objective_impl(const ComplexMatrix& rho, const ComplexMatrix& rho_sep,
                          const ComplexMatrix& u) {
  const auto p = detail::conjugated_diagonal(rho, u);
  const auto psep = detail::conjugated_diagonal(rho_sep, u);
  const auto c = detail::cbar_from(p, psep);
  const double from_c = 4.0 / 3.0 * kolmogorov(c, CorrelatorDistribution<double>::uniform());
  const double from_p = 4.0 / 3.0 * kolmogorov(p, psep);
  if (std::abs(from_c - from_p) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "w12 objective: D(Cbar, Cbar_sep) form " << from_c << " differs from D(P, P_sep) form "
       << from_p;
    throw ConsistencyError(os.str());
  }
  return from_c;
}

}  // namespace

double w12_objective(const State& state, const ComplexMatrix& u) {
  if (u.rows() != 4) throw DimensionError("w12_objective: expected a 4x4 unitary");
  require_unitary(u, "U");
  return w12_objective_impl(density(state), separable_reference(state), u);
}

double w12_numeric(const State& state, const OptimizerConfig& cfg) {
  const ComplexMatrix rho = density(state);
  const ComplexMatrix rho_sep = separable_reference(state);
  const auto objective = [rho, rho_sep](const ComplexMatrix& u) {
    return w12_objective_impl(rho, rho_sep, u);
  };
  // The landscape has a local maximum (4/3) sqrt(l0 l1) behind a kink, and for
  // nearly separable states most random starts end there. Restart 0 starts
  // at the eigenbasis-aligned unitary instead; the rest stay random.
  return maximize(objective, 4, cfg, parametrize(eigenbasis_aligned_unitary(state)).params)
      .value;
}

VisibilityReport<double> report_numeric(const State& state, const OptimizerConfig& cfg) {
  return make_report(v1_numeric(state, cfg), v12_numeric_local(state, cfg),
                     w12_tilde_numeric(state, cfg), w12_numeric(state, cfg), Method::numeric);
}

ComplexMatrix eigenbasis_aligned_unitary(const State& state) {
  const ComplexMatrix diff = density(state) - separable_reference(state);
  return eig_hermitian(diff).eigenvectors.adjoint();
}

// ---------------------------------------------------------------------------

ComplexMatrix beam_splitter_phase(double phi) {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex<double> i(0, 1);
  ComplexMatrix b(2, 2);
  b << h, i * h, i * h, h;
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(0, 0) = std::polar(1.0, phi);
  p(1, 1) = 1.0;
  return b * p;
}

namespace {

// Golden-section search for the maximum of f on [a, b].
template <typename F>
double golden_max(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

constexpr double kPhaseTolerance = 1e-8;

// Maximum of a 2pi-periodic function: grid, then refinement around the best node.
template <typename F>
double periodic_max_1d(F&& f, int grid) {
  const double step = 2.0 * kPi / grid;
  int best = 0;
  double best_val = f(0.0);
  for (int k = 1; k < grid; ++k) {
    const double v = f(k * step);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  const double phi = golden_max(f, best * step - step, best * step + step, kPhaseTolerance);
  return std::max(best_val, f(phi));
}

// Maximum over two periodic phases: grid, then alternating golden-section
// refinement of each coordinate.
template <typename F>
double periodic_max_2d(F&& f, int grid) {
  const double step = 2.0 * kPi / grid;
  double x = 0, y = 0, best_val = f(0.0, 0.0);
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b) {
      const double v = f(a * step, b * step);
      if (v > best_val) {
        best_val = v;
        x = a * step;
        y = b * step;
      }
    }
  for (int round = 0; round < 50; ++round) {
    const double nx = golden_max([&](double t) { return f(t, y); }, x - step, x + step,
                                 kPhaseTolerance);
    const double ny = golden_max([&](double t) { return f(nx, t); }, y - step, y + step,
                                 kPhaseTolerance);
    const double v = f(nx, ny);
    const bool improved = v > best_val;
    if (improved) {
      x = nx;
      y = ny;
    }
    if (!improved || v - best_val < 1e-15) {
      best_val = std::max(best_val, v);
      break;
    }
    best_val = v;
  }
  return best_val;
}

}  // namespace

RestrictedVisibilities restricted_visibilities(const State& state, int phase_grid) {
  if (phase_grid < 16) throw ValidationError("restricted_visibilities: phase_grid must be >= 16");
  const ComplexMatrix rho1 = reduced_density(state, Qubit::first);
  const ComplexVector psi = state.amplitudes();

  const auto p1 = [&rho1](double phi) {
    const ComplexMatrix u = beam_splitter_phase(phi);
    return (u.row(0) * rho1 * u.row(0).adjoint())(0, 0).real();
  };
  const auto pbar00 = [&psi](double phi1, double phi2) {
    const ComplexMatrix u = tensor(beam_splitter_phase(phi1), beam_splitter_phase(phi2));
    return detail::pbar_from_joint(detail::squared_moduli<double>(u * psi))[0];
  };

  RestrictedVisibilities out;
  const double p_hi = periodic_max_1d(p1, phase_grid);
  const double p_lo = -periodic_max_1d([&](double t) { return -p1(t); }, phase_grid);
  out.v1 = contrast(p_hi, p_lo);
  const double c_hi = periodic_max_2d(pbar00, phase_grid);
  const double c_lo =
      -periodic_max_2d([&](double a, double b) { return -pbar00(a, b); }, phase_grid);
  out.v12 = contrast(c_hi, c_lo);
  return out;
}

}  // namespace twovis
