#include "timearrow/cli/check_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "timearrow/arrow_operator.hpp"
#include "timearrow/galapon_bridge.hpp"
#include "timearrow/hardy_oracle.hpp"
#include "timearrow/m_transform.hpp"
#include "timearrow/scattering_equiv.hpp"
#include "timearrow/states.hpp"

namespace timearrow::cli {

using std::numbers::pi;

bool CheckReport::all_passed() const { return failures() == 0; }

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; }));
}

namespace {

constexpr double kExpEmin = 1e-16;
constexpr double kExpEmax = 50.0;
constexpr double kRandomEmin = 1e-12;
constexpr double kRandomEmax = 1e3;
constexpr std::size_t kRandomN = 2048;
constexpr std::size_t kRandomCount = 100;
constexpr std::size_t kOracleRandomCount = 20;
constexpr double kCorruption = 1e-3;

struct Outcome {
  bool passed;
  double value;
  double bound;
  std::string detail;
};

Outcome below(double value, double bound, std::string detail = {}) {
  return {value < bound, value, bound, std::move(detail)};
}

Outcome above(double value, double bound, std::string detail = {}) {
  return {value > bound, value, bound, std::move(detail)};
}

double closed_form_mf(double t) { return 0.5 - std::atan(t) / pi; }

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  return out;
}

double sup_difference(std::span<const complex> a, std::span<const complex> b, std::size_t lo,
                      std::size_t hi) {
  double worst = 0.0;
  for (std::size_t i = lo; i < hi; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double sup_difference(const ChannelState& a, const ChannelState& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.channel_count(); ++j)
    worst = std::max(worst, sup_difference(a.channel(j), b.channel(j), 0, a.grid().size()));
  return worst;
}

double sup_difference_interior(const ChannelState& a, const ChannelState& b) {
  double worst = 0.0;
  const std::size_t n = a.grid().size();
  for (std::size_t j = 0; j < a.channel_count(); ++j)
    worst = std::max(worst, sup_difference(a.channel(j), b.channel(j), n / 4, n - n / 4));
  return worst;
}

class Context {
 public:
  explicit Context(const CheckOptions& options)
      : options_(options),
        exp_grid_(make_energy_grid(kExpEmin, kExpEmax, options.grid_n, Spacing::logarithmic)),
        exp_state_(exponential_profile(exp_grid_)),
        gauss_grid_(packet_energy_grid(packet_, options.grid_n)),
        gauss_state_(gaussian_channel_state(packet_, gauss_grid_)),
        random_grid_(make_energy_grid(kRandomEmin, kRandomEmax, kRandomN, Spacing::logarithmic)) {
    std::mt19937_64 rng(options.seed);
    for (std::size_t k = 0; k < kRandomCount; ++k)
      random_.push_back(random_smooth_state(random_grid_, {"+", "-"}, rng));
  }

  const CheckOptions& options() const { return options_; }
  const GaussianPacketParams& packet() const { return packet_; }
  const GridPtr& exp_grid() const { return exp_grid_; }
  const ChannelState& exp_state() const { return exp_state_; }
  const GridPtr& gauss_grid() const { return gauss_grid_; }
  const ChannelState& gauss_state() const { return gauss_state_; }
  const GridPtr& random_grid() const { return random_grid_; }
  const std::vector<ChannelState>& random_states() const { return random_; }

  SingularKernel forward_kernel(const GridPtr& grid) const {
    return options_.corrupt_kernel ? build_corrupted_kernel(grid, kCorruption)
                                   : build_kernel(grid, Orientation::forward);
  }

 private:
  CheckOptions options_;
  GaussianPacketParams packet_;
  GridPtr exp_grid_;
  ChannelState exp_state_;
  GridPtr gauss_grid_;
  ChannelState gauss_state_;
  GridPtr random_grid_;
  std::vector<ChannelState> random_;
};

struct Check {
  const char* module;
  const char* name;
  std::function<Outcome(const Context&)> run;
};

// ---------------------------------------------------------------- spectral_core

Outcome log_spacing_uniform(const Context&) {
  const auto g = make_energy_grid(1e-6, 1e3, 4096, Spacing::logarithmic);
  const double expected = std::log(1e9) / 4095.0;
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < g->size(); ++i)
    worst = std::max(worst, std::abs(std::log(g->node(i + 1) / g->node(i)) - expected) / expected);
  return below(worst, 1e-12);
}

double exponential_integral(std::size_t n) {
  const auto g = make_energy_grid(1e-8, 40.0, n, Spacing::logarithmic);
  return integrate(*g, [](double e) { return 2.0 * std::exp(-2.0 * e); });
}

Outcome trapezoid_exponential(const Context&) {
  return below(std::abs(exponential_integral(4096) - 1.0), 1e-8);
}

Outcome quadrature_refinement(const Context&) {
  return below(std::abs(exponential_integral(8192) - exponential_integral(4096)), 1e-9);
}

Outcome momentum_roundtrip(const Context& c) {
  const auto mg = std::make_shared<const MomentumGrid>(c.gauss_grid(), c.packet().mass);
  const auto ms = gaussian_momentum_state(c.packet(), mg);
  const auto back = energy_to_momentum(momentum_to_energy(ms), mg);
  const std::size_t n = mg->half_size();
  const double worst = std::max(sup_difference(ms.positive(), back.positive(), 0, n),
                                sup_difference(ms.negative(), back.negative(), 0, n));
  return below(worst, 1e-10);
}

Outcome inner_product_sesquilinear(const Context& c) {
  const auto& r = c.random_states();
  double worst = 0.0;
  for (std::size_t k = 0; k + 2 < 12; ++k) {
    const auto& a = r[k];
    const auto& b = r[k + 1];
    const auto& d = r[k + 2];
    worst = std::max(worst, std::abs(inner_product(a, b) - std::conj(inner_product(b, a))));
    const complex alpha(0.3, -1.7), beta(-0.8, 0.4);
    std::vector<std::vector<complex>> mix(2, std::vector<complex>(b.grid().size()));
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < b.grid().size(); ++i)
        mix[j][i] = alpha * b.channel(j)[i] + beta * d.channel(j)[i];
    const auto combo = b.with_amplitudes(std::move(mix));
    const complex lhs = inner_product(a, combo);
    const complex rhs = alpha * inner_product(a, b) + beta * inner_product(a, d);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return below(worst, 1e-12);
}

Outcome channel_minus_mass(const Context& c) {
  const double mass = c.gauss_state().restricted_to(1).norm_squared();
  const double expected = 0.5 * std::erfc(c.packet().p0 / c.packet().xi0);
  std::ostringstream d;
  d << "mass " << mass << ", erfc(p0/xi0)/2 = " << expected;
  return below(std::abs(mass - expected), 1e-8, d.str());
}

// ----------------------------------------------------------------------- states

Outcome gaussian_normalized(const Context& c) {
  const auto mg = std::make_shared<const MomentumGrid>(c.gauss_grid(), c.packet().mass);
  const double a = std::abs(gaussian_momentum_state(c.packet(), mg).norm_squared() - 1.0);
  const double b = std::abs(c.gauss_state().norm_squared() - 1.0);
  return below(std::max(a, b), 1e-10);
}

Outcome position_density_integral(const Context& c) {
  const auto& p = c.packet();
  double worst = 0.0;
  for (const double t : {-2.0, -0.3, 0.0, 0.05, 1.0}) {
    const double s = p.position_width(t), x0 = p.centre(t) - 8.0 * s;
    const std::size_t n = 2001;
    const double dx = 16.0 * s / static_cast<double>(n - 1);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      acc += (k == 0 || k + 1 == n ? 0.5 : 1.0) *
             gaussian_position_density(p, x0 + dx * static_cast<double>(k), t) * dx;
    worst = std::max(worst, std::abs(acc - 1.0));
  }
  return below(worst, 1e-8);
}

Outcome evolve_group(const Context& c) {
  const auto& psi = c.random_states().front();
  const auto a = evolve(evolve(psi, 0.37), -1.21);
  const auto b = evolve(psi, 0.37 - 1.21);
  const double norm = std::abs(evolve(psi, 2.5).norm_squared() - psi.norm_squared());
  return below(std::max(sup_difference(a, b), norm), 1e-12);
}

Outcome evolve_commutes_with_restriction(const Context& c) {
  const auto& psi = c.random_states()[1];
  return below(sup_difference(evolve(psi, 0.8).restricted_to(0), evolve(psi.restricted_to(0), 0.8)),
               1e-15);
}

// --------------------------------------------------------------- arrow_operator

Outcome exponential_trace(const Context& c) {
  const auto k = c.forward_kernel(c.exp_grid());
  double worst = 0.0;
  for (const double t : linspace(-2.0, 2.0, 21))
    worst = std::max(worst, std::abs(mf_expectation(k, c.exp_state(), t) - closed_form_mf(t)));
  return below(worst, 2e-4);
}

Outcome gaussian_monotone(const Context& c) {
  const auto k = c.forward_kernel(c.gauss_grid());
  const auto times = linspace(-0.5, 0.5, 201);
  const auto tr = lyapunov_trace(k, c.gauss_state(), times, 1e-9);
  double worst = -1.0;
  for (std::size_t s = 0; s + 1 < times.size(); ++s)
    worst = std::max(worst, tr.mf_values[s + 1] - tr.mf_values[s]);
  std::ostringstream d;
  d << tr.violations.size() << " violations; largest step " << worst;
  return {tr.monotone() && worst < 0.0, worst, 0.0, d.str()};
}

Outcome gaussian_symmetry_point(const Context& c) {
  const auto k = c.forward_kernel(c.gauss_grid());
  return below(std::abs(mf_expectation(k, c.gauss_state(), 0.0) - 0.5), 1e-3);
}

Outcome completeness(const Context& c) {
  const auto f = c.forward_kernel(c.random_grid());
  const auto b = f.transposed();
  double worst = 0.0;
  for (const auto& psi : c.random_states())
    for (const double t : {-2.0, -0.5, 0.0, 0.7, 3.0})
      worst = std::max(worst, completeness_defect(f, b, psi, t));
  return below(worst, 1e-12);
}

Outcome random_monotone_and_bounded(const Context& c, bool bounds) {
  const auto k = c.forward_kernel(c.random_grid());
  const auto times = linspace(-5.0, 5.0, 201);
  double rise = -1.0, excursion = 0.0;
  std::size_t violations = 0;
  for (const auto& psi : c.random_states()) {
    const auto tr = lyapunov_trace(k, psi, times, 1e-9);
    violations += tr.violations.size();
    for (std::size_t s = 0; s + 1 < times.size(); ++s)
      rise = std::max(rise, tr.mf_values[s + 1] - tr.mf_values[s]);
    for (const double v : tr.mf_values)
      excursion = std::max({excursion, -v, v - tr.norm_squared});
  }
  if (bounds) return below(excursion, 1e-8, "largest excursion outside [0, norm^2]");
  std::ostringstream d;
  d << violations << " steps above tolerance";
  return below(rise, 1e-9, d.str());
}

Outcome channel_additivity(const Context& c) {
  const auto k = c.forward_kernel(c.random_grid());
  double worst = 0.0;
  for (std::size_t s = 0; s < 10; ++s) {
    const auto& psi = c.random_states()[s];
    for (const double t : {-1.0, 0.5}) {
      const double whole = mf_expectation(k, psi, t);
      const double parts =
          mf_expectation(k, psi.restricted_to(0), t) + mf_expectation(k, psi.restricted_to(1), t);
      worst = std::max(worst, std::abs(whole - parts));
    }
  }
  return below(worst, 1e-12);
}

Outcome mpc_rate(const Context& c) {
  const auto d = mpc_commutator_defect(c.exp_state());
  return below(std::abs(d.d_expect - 1.0 / pi), 1e-3, "|d_expect - 1/pi|");
}

Outcome mpc_noncommutativity(const Context&) {
  const auto g = make_energy_grid(1e-2, 10.0, 64, Spacing::logarithmic);
  std::vector<complex> v(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) v[i] = std::exp(-g->node(i));
  const ChannelState psi = ChannelState(g, {"0"}, {v}).normalized();
  const auto d = mpc_commutator_defect(psi);
  return above(d.noncommutativity, 1e-3);
}

Outcome derivative_identity(const Context& c) {
  const auto k = c.forward_kernel(c.gauss_grid());
  const HardyOracle oracle(c.gauss_state());
  const double h = 1e-4;
  double worst = 0.0;
  for (const double t : {-0.2, 0.0, 0.1, 0.3}) {
    const double fd =
        (mf_expectation(k, c.gauss_state(), t + h) - mf_expectation(k, c.gauss_state(), t - h)) /
        (2.0 * h);
    worst = std::max(worst, std::abs(fd + oracle.density(-t)));
  }
  return below(worst, 1e-3);
}

// ----------------------------------------------------------------- hardy_oracle

Outcome oracle_closed_form(const Context& c) {
  const auto times = linspace(-2.0, 2.0, 21);
  const auto v = mf_trace_oracle(c.exp_state(), times);
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    worst = std::max(worst, std::abs(v[k] - closed_form_mf(times[k])));
  return below(worst, 1e-5);
}

// The packet grid resolves e^{-iEt} only over the default trace window; the other
// states are smooth on coarser scales and are sampled further out.
std::vector<double> agreement_times(const Context& c, const ChannelState& psi) {
  if (&psi == &c.gauss_state()) return linspace(-0.5, 0.5, 11);
  return linspace(-3.0, 3.0, 11);
}

Outcome oracle_agreement(const Context& c) {
  double worst = 0.0;
  for (const auto* psi : {&c.exp_state(), &c.gauss_state()}) {
    const auto k = c.forward_kernel(psi->grid_ptr());
    const auto times = agreement_times(c, *psi);
    const auto v = mf_trace_oracle(*psi, times);
    for (std::size_t s = 0; s < times.size(); ++s)
      worst = std::max(worst, std::abs(v[s] - mf_expectation(k, *psi, times[s])));
  }
  return below(worst, 5e-4);
}

Outcome oracle_far_past(const Context& c) {
  const double near = std::abs(mf_expectation_oracle(c.exp_state(), -100.0) - closed_form_mf(-100.0));
  const double limit = std::abs(mf_expectation_oracle(c.exp_state(), -1e5) - 1.0);
  std::ostringstream d;
  d << "t = -100 against the closed form: " << near << "; t = -1e5 against norm^2: " << limit;
  return below(std::max(near, limit), 1e-4, d.str());
}

Outcome oracle_far_future(const Context& c) {
  return below(mf_expectation_oracle(c.exp_state(), 100.0), 4e-3);
}

Outcome oracle_channel_modulus(const Context& c) {
  // Two channels with different profiles: the channel-diagonal tail density
  // must reproduce the kernel, the squared sum of components must not.
  const auto& g = c.exp_grid();
  std::vector<complex> a(g->size()), b(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double e = g->node(i);
    a[i] = std::exp(-e);
    b[i] = 2.0 * e * std::exp(-1.5 * e) * std::polar(1.0, 0.7 * e);
  }
  const ChannelState psi = ChannelState(g, {"+", "-"}, {a, b}).normalized();
  const auto k = c.forward_kernel(g);
  const HardyOracle oracle(psi);
  double diagonal = 0.0, summed = 0.0;
  for (const double t : {-0.5, 0.5}) {
    const double direct = mf_expectation(k, psi, t);
    diagonal = std::max(diagonal, std::abs(oracle.mf_expectation(t) - direct));
    // 2 pi int |f_+ + f_-|^2 over the same range, by the same quadrature.
    const auto merged = ChannelState(g, {"0"}, {[&] {
                                       std::vector<complex> s(g->size());
                                       for (std::size_t i = 0; i < s.size(); ++i)
                                         s[i] = psi.channel(0)[i] + psi.channel(1)[i];
                                       return s;
                                     }()});
    summed = std::max(summed, std::abs(HardyOracle(merged).mf_expectation(t) - direct));
  }
  std::ostringstream d;
  d << "sum of moduli: " << diagonal << "; modulus of sum: " << summed;
  return {diagonal < 5e-4 && summed > 1e-3, diagonal, 5e-4, d.str()};
}

// ------------------------------------------------------------------ m_transform

Outcome exponential_m_density(const Context& c) {
  const auto d = to_m_representation(c.exp_state());
  double worst = 0.0;
  for (std::size_t k = 0; k < d.grid().size(); ++k) {
    const double m = d.grid().m(k);
    if (m < 0.05 || m > 0.95) continue;
    worst = std::max(worst, std::abs(d.density(0, k) - 1.0 / (pi * std::sqrt(m * (1.0 - m)))));
  }
  return below(worst, 1e-4);
}

Outcome m_parseval(const Context& c) {
  double worst = std::max(
      std::abs(to_m_representation(c.exp_state()).norm_squared() - c.exp_state().norm_squared()),
      std::abs(to_m_representation(c.gauss_state()).norm_squared() - c.gauss_state().norm_squared()));
  for (std::size_t s = 0; s < kOracleRandomCount; ++s) {
    const auto& psi = c.random_states()[s];
    worst = std::max(worst, std::abs(to_m_representation(psi).norm_squared() - psi.norm_squared()));
  }
  return below(worst, 1e-6);
}

Outcome m_weak_orthonormality(const Context& c) {
  double worst = 0.0;
  for (std::size_t s = 0; s + 1 < 10; ++s) {
    const auto& phi = c.random_states()[s];
    const auto& psi = c.random_states()[s + 1];
    const auto a = to_m_representation(phi), b = to_m_representation(psi);
    complex acc{};
    for (std::size_t j = 0; j < a.channel_count(); ++j)
      for (std::size_t k = 0; k < a.grid().size(); ++k)
        acc += std::conj(a.nu_amplitudes(j)[k]) * b.nu_amplitudes(j)[k] * a.grid().nu_step();
    worst = std::max(worst, std::abs(acc - inner_product(phi, psi)));
  }
  return below(worst, 1e-6);
}

Outcome m_roundtrip(const Context& c) {
  const auto e = from_m_representation(to_m_representation(c.exp_state()), c.exp_grid());
  const auto g = from_m_representation(to_m_representation(c.gauss_state()), c.gauss_grid());
  const double de = sup_difference_interior(e, c.exp_state());
  const double dg = sup_difference_interior(g, c.gauss_state());
  std::ostringstream d;
  d << "exponential " << de << " (bound 1e-6), gaussian " << dg << " (bound 1e-5)";
  return {de < 1e-6 && dg < 1e-5, std::max(de, dg), 1e-6, d.str()};
}

Outcome eigen_residuals(const Context&) {
  const auto coarse = eigen_test_grid(4096), fine = eigen_test_grid(8192);
  double worst = 0.0;
  bool refining = true;
  std::ostringstream d;
  for (const double m : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double a = eigen_residual(m, coarse), b = eigen_residual(m, fine);
    worst = std::max(worst, a);
    refining = refining && b < a;
    d << "m=" << m << ": " << a << " -> " << b << "; ";
  }
  return {worst < 1e-2 && refining, worst, 1e-2, d.str()};
}

Outcome triangulation(const Context& c) {
  std::vector<const ChannelState*> states = {&c.exp_state(), &c.gauss_state()};
  for (std::size_t s = 0; s < kOracleRandomCount; ++s) states.push_back(&c.random_states()[s]);
  double worst = 0.0;
  for (const auto* psi : states) {
    const auto k = c.forward_kernel(psi->grid_ptr());
    const auto all = agreement_times(c, *psi);
    const std::vector<double> times = {all[0], all[3], all[5], all[7], all[10]};
    const auto oracle = mf_trace_oracle(*psi, times);
    for (std::size_t s = 0; s < times.size(); ++s) {
      const double direct = mf_expectation(k, *psi, times[s]);
      const double via_m = mf_expectation_via_m(*psi, times[s]);
      worst = std::max({worst, std::abs(direct - via_m), std::abs(direct - oracle[s]),
                        std::abs(via_m - oracle[s])});
    }
  }
  return below(worst, 1e-3);
}

Outcome backward_running(const Context& c) {
  return above(backward_running_probability(c.gauss_state(), {0.4, 0.6}, {0.7, 0.9}, 0.05), 1e-6);
}

// ------------------------------------------------------------- scattering_equiv

Outcome scattering_unitarity(const Context& c) {
  double worst = 0.0;
  for (const double lambda : {0.0, 1.0, 2.0}) {
    const auto model = delta_model(lambda);
    for (const double e : c.gauss_grid()->nodes())
      worst = std::max(worst, model.unitarity_defect(std::sqrt(2.0 * e)));
  }
  return below(worst, 1e-12);
}

Outcome scattering_equivalence(const Context& c, bool m_representation) {
  const auto times = linspace(-0.3, 0.3, 11);
  double worst = 0.0;
  for (const double lambda : {0.0, 1.0, 2.0}) {
    const auto model = delta_model(lambda);
    worst = std::max(worst, m_representation ? m_distribution_defect(c.gauss_state(), model, times)
                                             : equivalence_defect(c.gauss_state(), model, times));
  }
  return below(worst, 1e-10);
}

Outcome scattering_overlap(const Context& c) {
  double final_worst = 1.0;
  bool increasing = true;
  std::ostringstream d;
  for (const double lambda : {1.0, 2.0}) {
    const auto model = delta_model(lambda);
    double previous = 0.0;
    d << "lambda=" << lambda << ":";
    for (const double t : {-5.0, -10.0, -20.0, -50.0}) {
      const double ov = asymptotic_overlap(c.gauss_state(), model, t);
      increasing = increasing && ov >= previous - 1e-3;
      previous = ov;
      d << ' ' << ov;
    }
    d << "; ";
    final_worst = std::min(final_worst, previous);
  }
  const double free = std::abs(asymptotic_overlap(c.gauss_state(), delta_model(0.0), -50.0) - 1.0);
  d << "free deviation " << free;
  return {final_worst > 0.99 && increasing && free < 1e-10, final_worst, 0.99, d.str()};
}

// --------------------------------------------------------------- galapon_bridge

Outcome two_level_witness(const Context&) {
  const auto times = linspace(0.0, 2.0 * pi, 629);
  const std::vector<complex> state(2, complex(1.0 / std::sqrt(2.0), 0.0));
  double worst = 0.0;
  for (const double gap : {0.5, 1.0, 2.0}) {
    const std::vector<double> levels = {0.0, gap};
    const auto w = lyapunov_violation_witness(galapon_T(levels), state, times);
    const double delta = levels[0] - levels[1];
    for (std::size_t k = 0; k < times.size(); ++k)
      worst = std::max(worst, std::abs(w.values[k] + std::sin(delta * times[k]) / delta));
    worst = std::max(worst, w.max_imaginary);
  }
  return below(worst, 1e-12);
}

Outcome witness_flagged(const Context&) {
  const auto times = linspace(0.0, 2.0 * pi, 629);
  const std::vector<complex> state(2, complex(1.0 / std::sqrt(2.0), 0.0));
  const std::vector<double> levels = {0.0, 1.0};
  const auto w = lyapunov_violation_witness(galapon_T(levels), state, times);
  return {w.non_monotone, w.non_monotone ? 1.0 : 0.0, 1.0, "strict local extremum found"};
}

Outcome galapon_proportionality(const Context&) {
  const auto g = make_energy_grid(1.0, 2.0, 64, Spacing::linear);
  const auto a = discretize_symmetric(*g);
  const auto b = galapon_T(g->nodes());
  return below(proportionality_defect(a, b, g->step() / pi), 1e-12);
}

Outcome galapon_hermitian(const Context&) {
  const auto g = make_energy_grid(0.1, 10.0, 64, Spacing::logarithmic);
  const auto a = discretize_symmetric(*g);
  const auto b = galapon_T(g->nodes());
  return below(std::max(a.hermiticity_defect(), b.hermiticity_defect()), 1e-14);
}

const std::vector<Check>& all_checks() {
  static const std::vector<Check> checks = {
      {"spectral_core", "log_spacing_uniform", log_spacing_uniform},
      {"spectral_core", "trapezoid_exponential", trapezoid_exponential},
      {"spectral_core", "quadrature_refinement", quadrature_refinement},
      {"spectral_core", "momentum_roundtrip", momentum_roundtrip},
      {"spectral_core", "inner_product_sesquilinear", inner_product_sesquilinear},
      {"spectral_core", "channel_minus_mass", channel_minus_mass},
      {"states", "gaussian_normalized", gaussian_normalized},
      {"states", "position_density_integral", position_density_integral},
      {"states", "evolve_group", evolve_group},
      {"states", "evolve_commutes_with_restriction", evolve_commutes_with_restriction},
      {"arrow_operator", "exponential_trace", exponential_trace},
      {"arrow_operator", "gaussian_trace_monotone", gaussian_monotone},
      {"arrow_operator", "gaussian_symmetry_point", gaussian_symmetry_point},
      {"arrow_operator", "completeness_defect", completeness},
      {"arrow_operator", "random_monotonicity",
       [](const Context& c) { return random_monotone_and_bounded(c, false); }},
      {"arrow_operator", "random_bounds",
       [](const Context& c) { return random_monotone_and_bounded(c, true); }},
      {"arrow_operator", "channel_additivity", channel_additivity},
      {"arrow_operator", "mpc_rate", mpc_rate},
      {"arrow_operator", "mpc_noncommutativity", mpc_noncommutativity},
      {"arrow_operator", "derivative_identity", derivative_identity},
      {"hardy_oracle", "exponential_closed_form", oracle_closed_form},
      {"hardy_oracle", "kernel_agreement", oracle_agreement},
      {"hardy_oracle", "far_past_limit", oracle_far_past},
      {"hardy_oracle", "far_future_tail", oracle_far_future},
      {"hardy_oracle", "channel_modulus_placement", oracle_channel_modulus},
      {"m_transform", "exponential_density", exponential_m_density},
      {"m_transform", "parseval", m_parseval},
      {"m_transform", "weak_orthonormality", m_weak_orthonormality},
      {"m_transform", "roundtrip", m_roundtrip},
      {"m_transform", "eigen_residual", eigen_residuals},
      {"m_transform", "triangulation", triangulation},
      {"m_transform", "backward_running_probability", backward_running},
      {"scattering_equiv", "unitarity", scattering_unitarity},
      {"scattering_equiv", "equivalence_defect",
       [](const Context& c) { return scattering_equivalence(c, false); }},
      {"scattering_equiv", "m_distribution_defect",
       [](const Context& c) { return scattering_equivalence(c, true); }},
      {"scattering_equiv", "asymptotic_overlap", scattering_overlap},
      {"galapon_bridge", "two_level_witness", two_level_witness},
      {"galapon_bridge", "non_monotone_flag", witness_flagged},
      {"galapon_bridge", "proportionality", galapon_proportionality},
      {"galapon_bridge", "hermiticity", galapon_hermitian},
  };
  return checks;
}

}  // namespace

CheckReport run_check_suite(const CheckOptions& options, std::ostream* progress) {
  CheckReport report;
  const Context context(options);
  for (const auto& check : all_checks()) {
    const std::string id = std::string(check.module) + "/" + check.name;
    if (!options.filter.empty() && id.find(options.filter) == std::string::npos) continue;
    CheckResult r;
    r.module = check.module;
    r.name = check.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto o = check.run(context);
      r.passed = o.passed && std::isfinite(o.value);
      r.value = o.value;
      r.bound = o.bound;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.value = std::nan("");
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (progress) print_row(r, *progress);
    report.results.push_back(std::move(r));
  }
  return report;
}

void print_row(const CheckResult& r, std::ostream& out) {
  std::ostringstream line;
  line << (r.passed ? "PASS" : "FAIL") << "  " << std::left << std::setw(17) << r.module
       << std::setw(34) << r.name << std::right << std::scientific << std::setprecision(3)
       << std::setw(11) << r.value << "  bound " << std::setw(10) << r.bound << std::fixed
       << std::setprecision(2) << std::setw(8) << r.seconds << "s";
  if (!r.detail.empty()) line << "  " << r.detail;
  out << line.str() << '\n';
}

void print_summary(const CheckReport& report, std::ostream& out) {
  out << report.results.size() - report.failures() << "/" << report.results.size()
      << " checks passed\n";
  for (const auto& r : report.results)
    if (!r.passed) out << "failed: " << r.module << "/" << r.name << '\n';
}

}  // namespace timearrow::cli
