// Acceptance criteria 1-12, one line each. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "timearrow/arrow_operator.hpp"
#include "timearrow/cli/check_suite.hpp"
#include "timearrow/cli/commands.hpp"
#include "timearrow/cli/run_config.hpp"
#include "timearrow/galapon_bridge.hpp"
#include "timearrow/hardy_oracle.hpp"
#include "timearrow/m_transform.hpp"
#include "timearrow/scattering_equiv.hpp"
#include "timearrow/states.hpp"

using namespace timearrow;
using std::numbers::pi;

namespace {

// Tolerances.
constexpr double kTraceKernel = 2e-4;
constexpr double kTraceOracle = 1e-5;
constexpr double kTraceSeconds = 30.0;
constexpr double kStep = 1e-9;
constexpr double kSymmetryPoint = 1e-3;
constexpr double kCompleteness = 1e-12;
constexpr double kTriangulation = 1e-3;
constexpr double kMDensity = 1e-4;
constexpr double kParseval = 1e-6;
constexpr double kEigenResidual = 1e-2;
constexpr double kFrameMoment = 1e-3;
constexpr double kEquivalence = 1e-10;
constexpr double kOverlap = 0.99;
constexpr double kWitness = 1e-12;
constexpr double kProportionality = 1e-12;
constexpr double kMpcRate = 1e-3;
constexpr double kBackwardRunning = 1e-6;
constexpr double kSuiteSeconds = 300.0;

constexpr std::uint64_t kSeed = 20080217;
constexpr std::size_t kN = 4096;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ChannelState exp_state() {
  return exponential_profile(make_energy_grid(1e-16, 50.0, kN, Spacing::logarithmic));
}

ChannelState gauss_state() {
  GaussianPacketParams p;
  return gaussian_channel_state(p, packet_energy_grid(p, kN));
}

std::vector<ChannelState> random_states(std::size_t count) {
  const auto g = make_energy_grid(1e-12, 1e3, 2048, Spacing::logarithmic);
  std::mt19937_64 rng(kSeed);
  std::vector<ChannelState> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(random_smooth_state(g, {"+", "-"}, rng));
  return out;
}

Verdict closed_form_trace() {
  const auto start = std::chrono::steady_clock::now();
  const auto psi = exp_state();
  const auto times = linspace(-2.0, 2.0, 21);
  const auto k = build_kernel(psi.grid_ptr(), Orientation::forward);
  const auto oracle_values = mf_trace_oracle(psi, times);
  double kernel_err = 0.0, oracle_err = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double exact = oracle::exponential_mf(times[s]);
    kernel_err = std::max(kernel_err, std::abs(mf_expectation(k, psi, times[s]) - exact));
    oracle_err = std::max(oracle_err, std::abs(oracle_values[s] - exact));
  }
  const double secs = seconds_since(start);
  return {kernel_err < kTraceKernel && oracle_err < kTraceOracle && secs < kTraceSeconds,
          "kernel " + fmt(kernel_err) + " < " + fmt(kTraceKernel) + ", oracle " + fmt(oracle_err) +
              " < " + fmt(kTraceOracle) + ", " + fmt(secs) + " s < " + fmt(kTraceSeconds) + " s"};
}

Verdict gaussian_trace() {
  const auto psi = gauss_state();
  const auto times = linspace(-0.5, 0.5, 201);
  const auto tr = lyapunov_trace(psi, times, kStep);
  double largest = -1.0;
  for (std::size_t s = 0; s + 1 < times.size(); ++s)
    largest = std::max(largest, tr.mf_values[s + 1] - tr.mf_values[s]);
  const double mid = std::abs(mf_expectation(psi, 0.0) - 0.5);
  return {tr.monotone() && largest < 0.0 && mid < kSymmetryPoint,
          "largest step " + fmt(largest) + " < 0, |<M_F(0)> - 0.5| " + fmt(mid) + " < " +
              fmt(kSymmetryPoint)};
}

Verdict completeness(const std::vector<ChannelState>& random) {
  const auto f = build_kernel(random.front().grid_ptr(), Orientation::forward);
  const auto b = build_kernel(random.front().grid_ptr(), Orientation::backward);
  double worst = 0.0;
  for (const auto& psi : random)
    for (const double t : {-2.0, -0.5, 0.0, 0.7, 3.0})
      worst = std::max(worst, completeness_defect(f, b, psi, t));
  return {worst < kCompleteness,
          "max defect over 100 states x 5 times " + fmt(worst) + " < " + fmt(kCompleteness)};
}

Verdict triangulation(const std::vector<ChannelState>& random) {
  std::vector<std::pair<ChannelState, std::vector<double>>> cases;
  cases.emplace_back(exp_state(), std::vector<double>{-3.0, -1.0, 0.0, 1.0, 3.0});
  cases.emplace_back(gauss_state(), std::vector<double>{-0.5, -0.2, 0.0, 0.2, 0.5});
  for (std::size_t s = 0; s < 20; ++s)
    cases.emplace_back(random[s], std::vector<double>{-3.0, -1.0, 0.0, 1.0, 3.0});
  double worst = 0.0;
  for (const auto& [psi, times] : cases) {
    const auto k = build_kernel(psi.grid_ptr(), Orientation::forward);
    const auto hardy = mf_trace_oracle(psi, times);
    for (std::size_t s = 0; s < times.size(); ++s) {
      const double direct = mf_expectation(k, psi, times[s]);
      const double via_m = mf_expectation_via_m(psi, times[s]);
      worst = std::max({worst, std::abs(direct - hardy[s]), std::abs(direct - via_m),
                        std::abs(hardy[s] - via_m)});
    }
  }
  return {worst < kTriangulation,
          "max pairwise difference on 2 golden + 20 random states " + fmt(worst) + " < " +
              fmt(kTriangulation)};
}

Verdict m_analytics() {
  const auto psi = exp_state();
  const auto d = to_m_representation(psi);
  double worst = 0.0;
  for (std::size_t k = 0; k < d.grid().size(); ++k) {
    const double m = d.grid().m(k);
    if (m >= 0.05 && m <= 0.95)
      worst = std::max(worst, std::abs(d.density(0, k) - oracle::exponential_m_density(m)));
  }
  const double parseval = std::abs(d.norm_squared() - psi.norm_squared());
  return {worst < kMDensity && parseval < kParseval,
          "density sup error " + fmt(worst) + " < " + fmt(kMDensity) + ", Parseval " + fmt(parseval) +
              " < " + fmt(kParseval)};
}

Verdict eigen_equation() {
  const auto coarse = eigen_test_grid(4096), fine = eigen_test_grid(8192);
  bool ok = true;
  double worst = 0.0;
  for (const double m : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double a = eigen_residual(m, coarse), b = eigen_residual(m, fine);
    worst = std::max(worst, a);
    ok = ok && a < kEigenResidual && b < a;
  }
  return {ok, "max residual at n = 4096 " + fmt(worst) + " < " + fmt(kEigenResidual) +
                  (ok ? ", all decrease at n = 8192" : ", not all below bound and decreasing")};
}

Verdict frames() {
  const auto config = cli::resolve(cli::RunConfig{});
  std::ostringstream out;
  const auto status = cli::cmd_frames(config, out);
  std::istringstream in(out.str());
  std::string line;
  bool in_summary = false;
  std::vector<std::vector<double>> rows;
  std::size_t frame_blocks = 0;
  while (std::getline(in, line)) {
    if (line.rfind("# block: ", 0) == 0) {
      in_summary = line == "# block: summary";
      if (line.rfind("# block: m t=", 0) == 0) ++frame_blocks;
      std::getline(in, line);
      continue;
    }
    if (!in_summary) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  const std::vector<double> expected_times = {-0.3, -0.05, 0.0, 0.05, 0.3};
  bool times_ok = rows.size() == expected_times.size() && frame_blocks == expected_times.size();
  double moment = 0.0;
  for (std::size_t k = 0; times_ok && k < rows.size(); ++k) {
    times_ok = rows[k][0] == expected_times[k];
    moment = std::max(moment, std::abs(rows[k][1] - rows[k][2]));
  }
  const bool shifts = times_ok && rows.back()[2] < rows.front()[2];
  return {status.ok() && times_ok && moment < kFrameMoment && shifts,
          "5 frames emitted, first-moment mismatch " + fmt(moment) + " < " + fmt(kFrameMoment) +
              ", mean m " + (times_ok ? fmt(rows.front()[2]) + " -> " + fmt(rows.back()[2]) : "?")};
}

Verdict scattering() {
  const auto psi = gauss_state();
  const auto times = linspace(-0.3, 0.3, 11);
  double defect = 0.0, overlap = 1.0;
  for (const double lambda : {0.0, 1.0, 2.0}) {
    const auto model = delta_model(lambda);
    defect = std::max(defect, equivalence_defect(psi, model, times));
    overlap = std::min(overlap, asymptotic_overlap(psi, model, -50.0));
  }
  return {defect < kEquivalence && overlap > kOverlap,
          "equivalence defect " + fmt(defect) + " < " + fmt(kEquivalence) +
              ", min overlap at t = -50 " + std::to_string(overlap) + " > " + fmt(kOverlap)};
}

Verdict galapon() {
  const std::vector<double> levels = {0.0, 1.0};
  const std::vector<complex> state(2, complex(1.0 / std::sqrt(2.0)));
  const auto times = linspace(0.0, 2.0 * pi, 1001);
  const auto w = lyapunov_violation_witness(galapon_T(levels), state, times);
  double trace_err = w.max_imaginary;
  for (std::size_t k = 0; k < times.size(); ++k)
    trace_err = std::max(trace_err, std::abs(w.values[k] + std::sin(times[k])));
  double prop = 0.0;
  for (const auto& [lo, hi, n] : std::vector<std::tuple<double, double, std::size_t>>{
           {1.0, 2.0, 64}, {0.1, 5.0, 128}, {3.0, 3.5, 17}}) {
    const auto g = make_energy_grid(lo, hi, n, Spacing::linear);
    prop = std::max(prop, proportionality_defect(discretize_symmetric(*g), galapon_T(g->nodes()),
                                                 g->step() / pi));
  }
  return {trace_err < kWitness && w.non_monotone && prop < kProportionality,
          "|<T(t)> + sin t| " + fmt(trace_err) + " < " + fmt(kWitness) + ", flagged " +
              (w.non_monotone ? "yes" : "no") + ", proportionality " + fmt(prop) + " < " +
              fmt(kProportionality)};
}

Verdict mpc() {
  const auto d = mpc_commutator_defect(exp_state());
  const auto g = make_energy_grid(1e-2, 10.0, 64, Spacing::logarithmic);
  std::vector<complex> v(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) v[i] = std::exp(-g->node(i));
  const auto small = mpc_commutator_defect(ChannelState(g, {"0"}, {v}).normalized());
  const double err = std::abs(d.d_expect - 1.0 / pi);
  return {err < kMpcRate && d.noncommutativity > 0.0 && small.noncommutativity > 0.0,
          "|d_expect - 1/pi| " + fmt(err) + " < " + fmt(kMpcRate) + ", noncommutativity " +
              fmt(d.noncommutativity) + " (n = 4096), " + fmt(small.noncommutativity) +
              " (n = 64) > 0"};
}

Verdict backward_running() {
  const double p = backward_running_probability(gauss_state(), {0.4, 0.6}, {0.7, 0.9}, 0.05);
  return {p > kBackwardRunning, "probability " + fmt(p) + " > " + fmt(kBackwardRunning)};
}

Verdict full_suite() {
  const auto start = std::chrono::steady_clock::now();
  const auto report = cli::run_check_suite(cli::CheckOptions{});
  const double secs = seconds_since(start);
  return {secs < kSuiteSeconds && report.all_passed(),
          std::to_string(report.results.size() - report.failures()) + "/" +
              std::to_string(report.results.size()) + " checks passed in " + fmt(secs) + " s < " +
              fmt(kSuiteSeconds) + " s"};
}

}  // namespace

int main() {
  const auto random = random_states(100);
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"closed-form trace", closed_form_trace},
      {"gaussian trace and symmetry point", gaussian_trace},
      {"completeness", [&] { return completeness(random); }},
      {"oracle triangulation", [&] { return triangulation(random); }},
      {"m-transform analytics", m_analytics},
      {"eigenvalue equation", eigen_equation},
      {"frames", frames},
      {"scattering equivalence", scattering},
      {"T-operator witness", galapon},
      {"commutator rate", mpc},
      {"backward-running probability", backward_running},
      {"full check suite", full_suite},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << "criterion " << k + 1 << ": " << (v.pass ? "PASS" : "FAIL") << "  "
              << criteria[k].first << ": " << v.detail << std::endl;
  }
  return failed;
}
