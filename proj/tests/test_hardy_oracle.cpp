#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "timearrow/arrow_operator.hpp"
#include "timearrow/hardy_oracle.hpp"
#include "timearrow/states.hpp"

using namespace timearrow;
using std::numbers::pi;

namespace {

ChannelState exp_state() {
  return exponential_profile(make_energy_grid(1e-16, 50.0, 4096, Spacing::logarithmic));
}

}  // namespace

TEST_CASE("fourier transform of the exponential state") {
  const HardyOracle h(exp_state());
  for (const double tau : {-40.0, -3.0, -1.0, -0.2, 0.0, 0.7, 5.0})
    CHECK(std::abs(h.fourier(tau)[0] - oracle::exponential_fourier(tau)) < 1e-8);
}

TEST_CASE("forward component") {
  const auto psi = exp_state();
  CHECK(forward_component(psi, 0.5)[0] == complex(0.0));
  CHECK(std::abs(forward_component(psi, -1e-12)[0] - std::sqrt(2.0) / (2.0 * pi)) < 1e-6);
  CHECK(std::abs(std::abs(forward_component(psi, -1.0)[0]) - 1.0 / (2.0 * pi)) < 1e-6);

  const HardyOracle h(psi);
  const std::vector<double> taus = {-2.0, -0.5, 0.25};
  const auto fc = h.forward_component(taus);
  CHECK(fc.tau_nodes == taus);
  CHECK(fc.values.size() == 1);
  CHECK(fc.values[0][2] == complex(0.0));
  CHECK(std::abs(fc.values[0][0] - oracle::exponential_fourier(-2.0)) < 1e-8);
}

TEST_CASE("tail density") {
  const auto psi = exp_state();
  CHECK(std::abs(tail_density(psi, 0.0) - 1.0 / pi) < 1e-5);
  CHECK(std::abs(tail_density(psi, -1.0) - 0.5 / pi) < 1e-5);
  CHECK_THROWS_AS(tail_density(psi, 0.1), GridError);
  const auto zero = ChannelState::zero(psi.grid_ptr(), {"0"});
  CHECK(tail_density(zero, -0.3) == 0.0);
}

TEST_CASE("oracle expectation of the exponential state") {
  const auto psi = exp_state();
  CHECK(std::abs(mf_expectation_oracle(psi, 0.0) - 0.5) < 1e-5);
  CHECK(std::abs(mf_expectation_oracle(psi, 1.0) - 0.25) < 1e-5);
  CHECK(std::abs(mf_expectation_oracle(psi, -1.0) - 0.75) < 1e-5);
  CHECK(mf_expectation_oracle(psi, 100.0) < 4e-3);
  CHECK(std::abs(mf_expectation_oracle(psi, 100.0) - oracle::exponential_mf(100.0)) < 1e-6);
  CHECK(mf_expectation_oracle(ChannelState::zero(psi.grid_ptr(), {"0"}), 0.4) == 0.0);
}

TEST_CASE("far past") {
  const auto psi = exp_state();
  // <M_F(-100)> is 1 - 3.2e-3, so the limit is only reached much later.
  CHECK(std::abs(mf_expectation_oracle(psi, -100.0) - oracle::exponential_mf(-100.0)) < 1e-6);
  CHECK(std::abs(mf_expectation_oracle(psi, -1e5) - 1.0) < 1e-4);
}

TEST_CASE("trace over unsorted times matches single evaluations") {
  const auto psi = exp_state();
  const std::vector<double> times = {0.5, -1.5, 2.0, 0.0};
  const auto trace = mf_trace_oracle(psi, times);
  for (std::size_t k = 0; k < times.size(); ++k)
    CHECK(std::abs(trace[k] - oracle::exponential_mf(times[k])) < 1e-5);
}

TEST_CASE("gaussian oracle against the principal-value double integral") {
  GaussianPacketParams p;
  const auto psi = gaussian_channel_state(p, packet_energy_grid(p, 4096));
  const auto amplitude = [&](double q) { return complex(oracle::gaussian_amplitude(q, p.p0, p.xi0)); };
  for (const double t : {-0.5, 0.0, 0.2}) {
    const double reference = oracle::free_mf_double_integral(amplitude, t, p.p0 + 10.0 * p.xi0);
    CHECK(std::abs(mf_expectation_oracle(psi, t) - reference) < 1e-6);
  }
}

TEST_CASE("channels contribute through the sum of squared moduli") {
  const auto g = make_energy_grid(1e-16, 50.0, 4096, Spacing::logarithmic);
  std::vector<complex> a(g->size()), b(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    a[i] = std::exp(-g->node(i));
    b[i] = -std::exp(-g->node(i));
  }
  // The channels cancel in psi_+ + psi_-, but not in |f_+|^2 + |f_-|^2.
  const ChannelState psi = ChannelState(g, {"+", "-"}, {a, b}).normalized();
  for (const double t : {-1.0, 0.0, 1.0}) {
    CHECK(std::abs(mf_expectation_oracle(psi, t) - oracle::exponential_mf(t)) < 1e-5);
    CHECK(std::abs(mf_expectation_oracle(psi, t) - mf_expectation(psi, t)) < 1e-6);
  }
}

TEST_CASE("oracle agrees with the kernel on random states") {
  const auto g = make_energy_grid(1e-12, 1e3, 2048, Spacing::logarithmic);
  std::mt19937_64 rng(31);
  for (int s = 0; s < 3; ++s) {
    const auto psi = random_smooth_state(g, {"+", "-"}, rng);
    for (const double t : {-2.0, 0.0, 2.0})
      CHECK(std::abs(mf_expectation_oracle(psi, t) - mf_expectation(psi, t)) < 5e-4);
  }
}

TEST_CASE("truncated tail integration reports its bound") {
  HardyOptions opts;
  opts.max_log_extent = 2.0;
  try {
    mf_expectation_oracle(exp_state(), 0.0, opts);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(e.achieved_bound() > 0.0);
  }
}
