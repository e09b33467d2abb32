#include "twovis/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

namespace twovis::cli {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// State documents

StateSpec parse_state_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("state document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("state document must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (key != "amplitudes" && key != "schmidt_lambda0")
      throw UsageError("state document: unknown field '" + key + "'");

  const bool has_amps = doc.contains("amplitudes");
  const bool has_lambda = doc.contains("schmidt_lambda0");
  if (has_amps == has_lambda)
    throw UsageError("state document: exactly one of 'amplitudes' or 'schmidt_lambda0' is required");

  StateSpec spec;
  if (has_lambda) {
    const auto& v = doc["schmidt_lambda0"];
    if (!v.is_number()) throw UsageError("state document: 'schmidt_lambda0' must be a number");
    spec.schmidt_lambda0 = v.get<double>();
    if (!(*spec.schmidt_lambda0 >= 0.5 && *spec.schmidt_lambda0 <= 1.0))
      throw UsageError("state document: 'schmidt_lambda0' must lie in [0.5, 1]");
    return spec;
  }
  const auto& amps = doc["amplitudes"];
  if (!amps.is_array() || amps.size() != 4)
    throw UsageError("state document: 'amplitudes' must be an array of 4 [re, im] pairs");
  std::vector<Complex<double>> values;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& pair = amps[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
      throw UsageError("state document: 'amplitudes[" + std::to_string(i) +
                       "]' must be a [re, im] pair of numbers");
    values.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  spec.amplitudes = std::move(values);
  return spec;
}

State to_state(const StateSpec& spec) {
  try {
    if (spec.schmidt_lambda0) return State::from_schmidt_value(*spec.schmidt_lambda0);
    if (!spec.amplitudes || spec.amplitudes->size() != 4)
      throw UsageError("state: 'amplitudes' must hold 4 entries");
    const auto& a = *spec.amplitudes;
    return State::from_amplitudes(a[0], a[1], a[2], a[3]);
  } catch (const ValidationError& e) {
    const char* field = spec.schmidt_lambda0 ? "schmidt_lambda0" : "amplitudes";
    throw UsageError(std::string("state: '") + field + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> lambda0_grid(int n_points) {
  if (n_points < 2) throw UsageError("--points must be at least 2");
  std::vector<double> grid(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    grid[static_cast<std::size_t>(i)] = 0.5 + 0.5 * i / (n_points - 1);
  grid.back() = 1.0;
  return grid;
}

SweepRow sweep_row(const VisibilityReport<double>& r, double lambda0) {
  return {lambda0,  r.v1, r.v12, r.w12_tilde, r.w12, r.v1 * r.v1 + r.w12_tilde * r.w12_tilde,
          r.v1 * r.v1 + r.w12 * r.w12};
}

SweepRow sweep_row(double lambda0) {
  return sweep_row(report_closed(State::from_schmidt_value(lambda0)), lambda0);
}

SweepRow sweep_row(double lambda0, const OptimizerConfig& cfg) {
  return sweep_row(report_numeric(State::from_schmidt_value(lambda0), cfg), lambda0);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  std::ostringstream line;
  line << std::setprecision(12);
  for (const auto& r : rows) {
    line.str("");
    // Adding +0.0 prints negative zero as 0.
    line << r.lambda0 + 0.0 << ',' << r.v1 + 0.0 << ',' << r.v12 + 0.0 << ','
         << r.w12_tilde + 0.0 << ',' << r.w12 + 0.0 << ',' << r.sum_sq_tilde + 0.0 << ','
         << r.sum_sq_w + 0.0 << '\n';
    out << line.str();
  }
}

// ---------------------------------------------------------------------------
// Verification

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kEigenTol = 1e-9;
constexpr double kNumericTol = 1e-4;
constexpr double kNumericV12Tol = 1e-3;

std::string amplitudes_text(const State& s) {
  std::ostringstream os;
  os << std::setprecision(17) << '[';
  for (int i = 0; i < 4; ++i)
    os << (i ? ", " : "") << '[' << s.amplitudes()(i).real() << ", " << s.amplitudes()(i).imag()
       << ']';
  os << ']';
  return os.str();
}

}  // namespace

VerifySummary verify(const VerifyOptions& options) {
  if (options.count < 1) throw UsageError("--count must be at least 1");
  VerifySummary sum;
  sum.min_residual_tilde = std::numeric_limits<double>::infinity();
  sum.max_residual_w = -std::numeric_limits<double>::infinity();
  sum.worst_bound_margin = std::numeric_limits<double>::infinity();

  for (const auto& state : sample_haar<double>(options.seed, options.count)) {
    ++sum.states;
    std::vector<std::string> failed;
    const auto check = [&](bool ok, const char* name) {
      if (ok) {
        ++sum.checks_passed;
      } else {
        ++sum.checks_failed;
        failed.emplace_back(name);
      }
    };
    try {
      const auto sd = schmidt(state);
      const auto closed = report_closed(state);

      const double identity = std::abs(closed.v1 * closed.v1 + closed.v12 * closed.v12 - 1.0);
      sum.worst_identity = std::max(sum.worst_identity, identity);
      check(identity <= kIdentityTol, "v1^2 + v12^2 = 1");

      sum.min_residual_tilde = std::min(sum.min_residual_tilde, closed.residual_tilde);
      check(closed.residual_tilde >= -kIdentityTol, "v1^2 + w12_tilde^2 >= 1");
      sum.max_residual_w = std::max(sum.max_residual_w, closed.residual_w);
      check(closed.residual_w <= kIdentityTol, "v1^2 + w12^2 <= 1");

      const auto spectrum = eig_hermitian(density(state) - separable_reference(state));
      const auto expected = eigenvalues_diff(sd);
      double eig_dev = 0;
      for (int j = 0; j < 4; ++j)
        eig_dev = std::max(eig_dev, std::abs(spectrum.eigenvalues(j) - expected[j]));
      sum.worst_eigenvalues = std::max(sum.worst_eigenvalues, eig_dev);
      check(eig_dev <= kEigenTol, "spectrum of rho - rho_sep");

      const double c = closed.v12;
      const double margin = std::min(closed.w12_tilde - c, c - closed.w12);
      sum.worst_bound_margin = std::min(sum.worst_bound_margin, margin);
      check(margin >= -kIdentityTol, "w12_tilde >= C >= w12");

      if (options.numeric) {
        const auto numeric = report_numeric(state, options.cfg);
        const auto dev = deviation(closed, numeric);
        const double worst = std::max({dev.v1, dev.w12_tilde, dev.w12});
        sum.worst_numeric = std::max(sum.worst_numeric, worst);
        sum.worst_numeric_v12 = std::max(sum.worst_numeric_v12, dev.v12);
        check(worst <= kNumericTol, "closed vs numeric (v1, w12_tilde, w12)");
        check(dev.v12 <= kNumericV12Tol, "closed vs numeric (v12 local)");
      }
    } catch (const ConsistencyError& e) {
      ++sum.checks_failed;
      failed.emplace_back(std::string("consistency: ") + e.what());
    }
    if (!failed.empty()) {
      std::string line = "FAIL amplitudes=" + amplitudes_text(state) + " :";
      for (const auto& f : failed) line += " [" + f + "]";
      sum.failures.push_back(std::move(line));
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Dispatch

namespace {

json report_json(const VisibilityReport<double>& r) {
  return json{{"method", std::string(to_string(r.method))},
              {"v1", r.v1},
              {"v12", r.v12},
              {"w12_tilde", r.w12_tilde},
              {"w12", r.w12},
              {"residual_tilde", r.residual_tilde},
              {"residual_w", r.residual_w}};
}

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Options {
  std::string state_path;
  std::optional<double> lambda0;
  std::string mode = "closed";
  std::string out_path = "-";
  int points = 101;
  std::uint64_t seed = 0;
  std::size_t count = 100;
  int restarts = OptimizerConfig{}.restarts;
};

OptimizerConfig config_from(const Options& o) {
  OptimizerConfig cfg;
  cfg.seed = o.seed;
  cfg.restarts = o.restarts;
  return cfg;
}

int cmd_report(const Options& o, std::istream& in, std::ostream& out) {
  if (o.state_path.empty() == !o.lambda0.has_value())
    throw UsageError("report: give exactly one of --state or --lambda0");
  StateSpec spec;
  if (o.lambda0) {
    if (!(*o.lambda0 >= 0.5 && *o.lambda0 <= 1.0))
      throw UsageError("--lambda0 must lie in [0.5, 1]");
    spec.schmidt_lambda0 = o.lambda0;
  } else if (o.state_path == "-") {
    spec = parse_state_spec(read_all(in));
  } else {
    std::ifstream file(o.state_path);
    if (!file) throw UsageError("cannot read state file '" + o.state_path + "'");
    spec = parse_state_spec(read_all(file));
  }
  const State state = to_state(spec);

  json doc;
  json amps = json::array();
  for (int i = 0; i < 4; ++i)
    amps.push_back({state.amplitudes()(i).real(), state.amplitudes()(i).imag()});
  doc["amplitudes"] = amps;
  doc["lambda0"] = schmidt(state).lambda0;
  std::optional<VisibilityReport<double>> closed, numeric;
  if (o.mode != "numeric") closed = report_closed(state);
  if (o.mode != "closed") numeric = report_numeric(state, config_from(o));
  json reports = json::array();
  if (closed) reports.push_back(report_json(*closed));
  if (numeric) reports.push_back(report_json(*numeric));
  doc["reports"] = reports;
  if (closed && numeric) {
    const auto d = deviation(*closed, *numeric);
    doc["deviation"] = {{"v1", d.v1}, {"v12", d.v12}, {"w12_tilde", d.w12_tilde}, {"w12", d.w12}};
  }
  out << doc.dump(2) << '\n';
  return kSuccess;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.mode == "both") throw UsageError("sweep: --mode must be closed or numeric");
  std::vector<SweepRow> rows;
  const auto cfg = config_from(o);
  for (double l0 : lambda0_grid(o.points))
    rows.push_back(o.mode == "numeric" ? sweep_row(l0, cfg) : sweep_row(l0));
  if (o.out_path == "-") {
    write_sweep_csv(out, rows);
    return kSuccess;
  }
  std::ofstream file(o.out_path);
  if (!file) throw UsageError("cannot write '" + o.out_path + "'");
  write_sweep_csv(file, rows);
  if (!file) throw UsageError("error while writing '" + o.out_path + "'");
  return kSuccess;
}

int cmd_verify(const Options& o, std::ostream& out) {
  VerifyOptions v;
  v.seed = o.seed;
  v.count = o.count;
  v.numeric = o.mode != "closed";
  v.cfg = config_from(o);
  const auto s = verify(v);
  out << std::setprecision(6);
  out << "states: " << s.states << '\n'
      << "checks passed: " << s.checks_passed << '\n'
      << "checks failed: " << s.checks_failed << '\n'
      << "worst |v1^2 + v12^2 - 1|: " << s.worst_identity << '\n'
      << "min (v1^2 + w12_tilde^2 - 1): " << s.min_residual_tilde << '\n'
      << "max (v1^2 + w12^2 - 1): " << s.max_residual_w << '\n'
      << "worst spectrum deviation: " << s.worst_eigenvalues << '\n'
      << "min bound margin (w12_tilde - C, C - w12): " << s.worst_bound_margin << '\n';
  if (v.numeric)
    out << "worst |closed - numeric| (v1, w12_tilde, w12): " << s.worst_numeric << '\n'
        << "worst |C - v12_numeric_local|: " << s.worst_numeric_v12 << '\n';
  for (const auto& f : s.failures) out << f << '\n';
  out << (s.passed() ? "PASS" : "FAIL") << '\n';
  return s.passed() ? kSuccess : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"One- and two-body visibilities of two-qubit pure states", "twovis"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> modes{"closed", "numeric", "both"};

  auto* report = app.add_subcommand("report", "Visibility report for one state");
  report->add_option("--state", o.state_path, "State document (JSON), or - for stdin");
  report->add_option("--lambda0", o.lambda0, "Canonical state with this Schmidt value");
  report->add_option("--mode", o.mode, "closed | numeric | both")->check(CLI::IsMember(modes));

  auto* sweep = app.add_subcommand("sweep", "CSV of all visibilities over a lambda0 grid");
  sweep->add_option("--points", o.points, "Grid size (>= 2)");
  sweep->add_option("--out", o.out_path, "Output CSV path, - for stdout");
  sweep->add_option("--mode", o.mode, "closed | numeric")->check(CLI::IsMember(modes));

  auto* verify_cmd = app.add_subcommand("verify", "Check all relations on Haar-random states");
  verify_cmd->add_option("--count", o.count, "Number of states");
  verify_cmd->add_option("--mode", o.mode, "closed | numeric | both")
      ->check(CLI::IsMember(modes));

  for (auto* sub : {report, sweep, verify_cmd}) {
    sub->add_option("--seed", o.seed, "Seed for sampling and optimizer restarts");
    sub->add_option("--restarts", o.restarts, "Optimizer restarts")
        ->check(CLI::PositiveNumber);
  }

  std::vector<const char*> argv{"twovis"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (report->parsed()) return cmd_report(o, in, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (o.count < 1) throw UsageError("--count must be at least 1");
    return cmd_verify(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const OptimizationError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const ConsistencyError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace twovis::cli
