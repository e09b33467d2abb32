// Acceptance suite. One line per criterion, nonzero exit if any fails.
// Every tolerance and time limit is fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "twovis/cli.hpp"
#include "twovis/optimize.hpp"

using namespace twovis;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> body;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

// Rows of the closed-form 101-point sweep, read back from the CLI's CSV.
std::vector<std::vector<double>> sweep_rows() {
  std::istringstream in;
  std::ostringstream out, err;
  const int code = cli::run({"sweep", "--points", "101", "--mode", "closed"}, in, out, err);
  if (code != 0) throw std::runtime_error("sweep exited with " + std::to_string(code));
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  if (line != cli::kSweepHeader) throw std::runtime_error("unexpected CSV header: " + line);
  std::vector<std::vector<double>> rows;
  while (std::getline(lines, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    for (std::string cell; std::getline(cells, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

enum Col { kL0, kV1, kV12, kWt, kW, kSumT, kSumW };

constexpr std::uint64_t kHaarSeed = 20260101;

Outcome sweep_shape() {
  const auto rows = sweep_rows();
  if (rows.size() != 101) return {false, "expected 101 rows"};
  const auto& lo = rows.front();
  const auto& hi = rows.back();
  double endpoint = 0;
  endpoint = std::max({std::abs(lo[kV1]), std::abs(lo[kWt] - 1), std::abs(lo[kW] - 1),
                       std::abs(hi[kV1] - 1), std::abs(hi[kWt]), std::abs(hi[kW])});
  bool ok = lo[kL0] == 0.5 && hi[kL0] == 1.0 && endpoint <= 1e-12;
  int violations = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i][kV1] > rows[i - 1][kV1])) ++violations;
    if (!(rows[i][kWt] < rows[i - 1][kWt])) ++violations;
    if (!(rows[i][kW] < rows[i - 1][kW])) ++violations;
  }
  ok = ok && violations == 0;
  return {ok, "endpoint error " + fmt(endpoint) + ", monotonicity violations " +
                  std::to_string(violations)};
}

Outcome sweep_bounds() {
  const auto rows = sweep_rows();
  double min_t = 1e9, max_w = -1e9, interior_gap = 1e9;
  int violations = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double t = rows[i][kSumT] - 1, w = rows[i][kSumW] - 1;
    min_t = std::min(min_t, t);
    max_w = std::max(max_w, w);
    if (t < -1e-10 || w > 1e-10) ++violations;
    const bool endpoint = i == 0 || i + 1 == rows.size();
    if (endpoint) {
      if (std::abs(t) > 1e-10 || std::abs(w) > 1e-10) ++violations;
    } else {
      interior_gap = std::min({interior_gap, t, -w});
      if (t <= 1e-10 || w >= -1e-10) ++violations;
    }
  }
  return {violations == 0, "min(sum_sq_tilde - 1) " + fmt(min_t) + ", max(sum_sq_w - 1) " +
                               fmt(max_w) + ", smallest interior gap " + fmt(interior_gap)};
}

Outcome spectrum() {
  double worst = 0;
  for (const auto& s : sample_haar<double>(kHaarSeed, 1000)) {
    const auto closed = eigenvalues_diff(schmidt(s));
    const auto num = eig_hermitian(density(s) - separable_reference(s));
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(num.eigenvalues(j) - closed[j]));
  }
  return {worst <= 1e-9, "worst eigenvalue deviation " + fmt(worst)};
}

Outcome identity_suite() {
  double v1_dev = 0, w_dev = 0, wt_dev = 0;
  for (const auto& s : sample_haar<double>(kHaarSeed, 1000)) {
    const auto f1 = v1_forms(s);
    for (std::size_t i = 0; i < f1.size(); ++i)
      for (std::size_t j = i + 1; j < f1.size(); ++j)
        v1_dev = std::max(v1_dev, std::abs(f1[i] - f1[j]));

    const auto sd = schmidt(s);
    const double c_flip = spin_flip_concurrence(s);
    const auto fw = w12_forms(sd);
    const double w_flip = (c_flip * c_flip + 2 * c_flip) / 3;
    for (double x : {fw[1], fw[2], w_flip}) w_dev = std::max(w_dev, std::abs(x - fw[0]));

    const auto ft = w12_tilde_forms(sd);
    const double t_flip = 2 * c_flip / (c_flip * c_flip + 1);
    for (double x : {ft[1], t_flip}) wt_dev = std::max(wt_dev, std::abs(x - ft[0]));
  }
  const bool ok = v1_dev <= 1e-10 && w_dev <= 1e-12 && wt_dev <= 1e-12;
  return {ok, "v1 " + fmt(v1_dev) + ", w12 " + fmt(w_dev) + ", w12_tilde " + fmt(wt_dev)};
}

Outcome numeric_vs_closed() {
  const OptimizerConfig cfg;
  double worst_v1 = 0, worst_wt = 0, worst_w = 0;
  for (const auto& s : sample_haar<double>(kHaarSeed + 5, 100)) {
    const auto sd = schmidt(s);
    worst_v1 = std::max(worst_v1, std::abs(v1_numeric(s, cfg) - v1_closed(sd)));
    worst_wt = std::max(worst_wt, std::abs(w12_tilde_numeric(s, cfg) - w12_tilde_closed(sd)));
    worst_w = std::max(worst_w, std::abs(w12_numeric(s, cfg) - w12_closed(sd)));
  }
  const bool ok = worst_v1 <= 1e-4 && worst_wt <= 1e-4 && worst_w <= 1e-4;
  return {ok, "worst v1 " + fmt(worst_v1) + ", w12_tilde " + fmt(worst_wt) + ", w12 " +
                  fmt(worst_w)};
}

Outcome global_v12() {
  double lowest = 2;
  for (const auto& s : sample_haar<double>(kHaarSeed + 6, 50))
    lowest = std::min(lowest, v12_numeric_global(s, OptimizerConfig{}));
  return {lowest >= 1 - 1e-3, "lowest v12 " + std::to_string(lowest)};
}

Outcome complementarity() {
  double worst = 0;
  for (const auto& s : sample_haar<double>(kHaarSeed + 7, 1000)) {
    const auto r = report_closed(s);
    worst = std::max(worst, std::abs(r.v1 * r.v1 + r.v12 * r.v12 - 1));
  }
  double worst_local = 0;
  for (const auto& s : sample_haar<double>(kHaarSeed + 70, 30))
    worst_local = std::max(worst_local, std::abs(v12_numeric_local(s) - concurrence(s)));
  return {worst <= 1e-10 && worst_local <= 1e-3,
          "closed identity " + fmt(worst) + ", |v12_local - C| " + fmt(worst_local)};
}

Outcome restricted() {
  double worst = -1e9;
  for (const auto& s : sample_haar<double>(kHaarSeed + 8, 50)) {
    const auto r = restricted_visibilities(s);
    worst = std::max(worst, r.v1 * r.v1 + r.v12 * r.v12 - 1);
  }
  return {worst <= 1e-6, "max(v1^2 + v12^2 - 1) " + fmt(worst)};
}

Outcome certificate() {
  double dev_alpha = 0, dev_closed = 0;
  for (const auto& s : sample_haar<double>(kHaarSeed + 9, 100)) {
    const double at = w12_objective(s, eigenbasis_aligned_unitary(s));
    const auto sd = schmidt(s);
    double sum = 0;
    for (double a : eigenvalues_diff(sd)) sum += std::abs(a);
    dev_alpha = std::max(dev_alpha, std::abs(at - 2.0 / 3.0 * sum));
    dev_closed = std::max(dev_closed, std::abs(at - w12_closed(sd)));
  }
  return {dev_alpha <= 1e-9 && dev_closed <= 1e-9,
          "vs (2/3) sum|alpha| " + fmt(dev_alpha) + ", vs w12 closed " + fmt(dev_closed)};
}

Outcome bounds() {
  double margin = 1e9;
  for (const auto& s : sample_haar<double>(kHaarSeed + 10, 1000)) {
    const auto r = report_closed(s);
    const double c = concurrence(s);
    margin = std::min({margin, r.w12_tilde - c, c - r.w12});
  }
  return {margin >= -1e-10, "min margin " + fmt(margin)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed sweep: v1 rises 0 -> 1, w12_tilde and w12 fall 1 -> 0", 1, sweep_shape},
      {2, "closed sweep: sum_sq_tilde >= 1 >= sum_sq_w, equal only at the ends", 1,
       sweep_bounds},
      {3, "spectrum of rho - rho1 (x) rho2 on 1000 Haar states", 5, spectrum},
      {4, "equivalent closed forms agree on 1000 Haar states", 5, identity_suite},
      {5, "numeric v1, w12_tilde, w12 match closed forms on 100 states", 300,
       numeric_vs_closed},
      {6, "global-unitary v12 is 1 on 50 states", 180, global_v12},
      {7, "v1^2 + v12^2 = 1 with v12 = C, closed and local-numeric", 180, complementarity},
      {8, "beam splitter + phase family obeys v1^2 + v12^2 <= 1", 60, restricted},
      {9, "eigenbasis-aligned unitary attains w12 on 100 states", 5, certificate},
      {10, "w12_tilde >= C >= w12 on 1000 states", 60, bounds},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    const bool ok = o.ok && in_time;
    failed += !ok;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << std::setw(2) << c.id << "  " << c.name << "  ("
              << o.detail << "; " << std::fixed << std::setprecision(2) << secs << " s of "
              << c.time_limit_s << " s" << (in_time ? "" : ", TOO SLOW") << ")\n"
              << std::defaultfloat;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
