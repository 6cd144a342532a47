#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "timearrow/arrow_operator.hpp"
#include "timearrow/m_transform.hpp"
#include "timearrow/states.hpp"

using namespace timearrow;
using std::numbers::pi;

namespace {

GridPtr exp_grid() { return make_energy_grid(1e-16, 50.0, 4096, Spacing::logarithmic); }

ChannelState gaussian() {
  GaussianPacketParams p;
  return gaussian_channel_state(p, packet_energy_grid(p, 4096));
}

}  // namespace

TEST_CASE("eigenfunction values") {
  CHECK(std::abs(eigenfunction(0.5, 1.0) - 1.0 / pi) < 1e-15);
  CHECK(std::abs(eigenfunction(0.5, 4.0) - 0.5 / pi) < 1e-15);
  CHECK(std::abs(eigenfunction(0.5, 1.0).imag()) == 0.0);
  CHECK(std::abs(eigenfunction(0.2, 1.0)) == doctest::Approx(1.0 / (2.0 * pi * 0.4)).epsilon(1e-14));
  CHECK_THROWS_AS(eigenfunction(0.0, 1.0), GridError);
  CHECK_THROWS_AS(eigenfunction(1.0, 1.0), GridError);
  CHECK_THROWS_AS(eigenfunction(0.5, 0.0), GridError);
}

TEST_CASE("m and nu are inverse maps") {
  for (const double m : {1e-6, 0.1, 0.5, 0.77, 1.0 - 1e-9})
    CHECK(m_of_nu(nu_of_m(m)) == doctest::Approx(m).epsilon(1e-12));
  CHECK(nu_of_m(0.5) == 0.0);
  // m decreases as nu grows.
  CHECK(m_of_nu(1.0) < m_of_nu(-1.0));
}

TEST_CASE("m-density of the exponential state") {
  const auto d = to_m_representation(exponential_profile(exp_grid()));
  double worst = 0.0;
  for (std::size_t k = 0; k < d.grid().size(); ++k) {
    const double m = d.grid().m(k);
    if (m < 0.05 || m > 0.95) continue;
    worst = std::max(worst, std::abs(d.density(0, k) - oracle::exponential_m_density(m)));
  }
  CHECK(worst < 1e-4);
  CHECK(std::abs(d.density(0, d.grid().centre()) - 2.0 / pi) < 1e-4);
  CHECK(std::abs(d.norm_squared() - 1.0) < 1e-6);
  CHECK(std::abs(d.first_moment() - 0.5) < 1e-4);
  CHECK(std::abs(std::norm(m_amplitude(exponential_profile(exp_grid()), 0.5)[0]) - 2.0 / pi) < 1e-4);
  CHECK(std::abs(std::norm(m_amplitude(exponential_profile(exp_grid()), 0.3)[0]) -
                 oracle::exponential_m_density(0.3)) < 1e-4);
}

TEST_CASE("cell masses sum to the norm and match the m weights") {
  const auto d = to_m_representation(exponential_profile(exp_grid()));
  double cells = 0.0, weights = 0.0;
  for (std::size_t k = 0; k < d.grid().size(); ++k) {
    cells += d.cell_mass(0, k);
    weights += d.grid().m_weight(k);
  }
  CHECK(cells == doctest::Approx(d.norm_squared()).epsilon(1e-14));
  // Trapezoid sum of pi/(2 cosh^2(pi nu)); by Poisson summation the error is
  // dominated by the first alias, omega / sinh(omega / 2) at omega = 2 pi / dnu.
  const double omega = 2.0 * pi / d.grid().nu_step();
  CHECK(std::abs(weights - 1.0) == doctest::Approx(omega / std::sinh(0.5 * omega)).epsilon(1e-2));
}

TEST_CASE("zero state maps to zero") {
  const auto g = exp_grid();
  const auto d = to_m_representation(ChannelState::zero(g, {"0"}));
  for (const auto v : d.nu_amplitudes(0)) CHECK(v == complex(0.0));
  const auto back = from_m_representation(d, g);
  for (const auto v : back.channel(0)) CHECK(v == complex(0.0));
  CHECK(mf_expectation_via_m(ChannelState::zero(g, {"0"}), 0.2) == 0.0);
}

TEST_CASE("round trip") {
  const auto e = exponential_profile(exp_grid());
  const auto back = from_m_representation(to_m_representation(e), e.grid_ptr());
  double worst = 0.0;
  for (std::size_t i = 0; i < e.grid().size(); ++i)
    worst = std::max(worst, std::abs(back.channel(0)[i] - e.channel(0)[i]));
  CHECK(worst < 1e-6);

  const auto g = gaussian();
  const auto gb = from_m_representation(to_m_representation(g), g.grid_ptr());
  const std::size_t n = g.grid().size();
  double interior = 0.0, weighted = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = std::abs(gb.channel(j)[i] - g.channel(j)[i]);
      weighted = std::max(weighted, diff * std::sqrt(g.grid().weight(i)));
      if (i >= n / 4 && i < n - n / 4) interior = std::max(interior, diff);
    }
  CHECK(interior < 1e-5);
  CHECK(weighted < 1e-14);

  CHECK_THROWS_AS(from_m_representation(to_m_representation(e), g.grid_ptr()), GridError);
}

TEST_CASE("parseval and weak orthonormality on random states") {
  const auto grid = make_energy_grid(1e-12, 1e3, 2048, Spacing::logarithmic);
  std::mt19937_64 rng(41);
  std::vector<ChannelState> states;
  for (int s = 0; s < 6; ++s) states.push_back(random_smooth_state(grid, {"+", "-"}, rng));
  for (std::size_t s = 0; s + 1 < states.size(); ++s) {
    const auto a = to_m_representation(states[s]);
    const auto b = to_m_representation(states[s + 1]);
    CHECK(std::abs(a.norm_squared() - states[s].norm_squared()) < 1e-6);
    complex acc{};
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < a.grid().size(); ++k)
        acc += std::conj(a.nu_amplitudes(j)[k]) * b.nu_amplitudes(j)[k] * a.grid().nu_step();
    CHECK(std::abs(acc - inner_product(states[s], states[s + 1])) < 1e-6);
  }
}

TEST_CASE("expectation through the m-representation") {
  const auto e = exponential_profile(exp_grid());
  CHECK(std::abs(mf_expectation_via_m(e, 0.0) - 0.5) < 1e-4);
  CHECK(std::abs(mf_expectation_via_m(e, 1.0) - oracle::exponential_mf(1.0)) < 1e-4);
  const auto g = gaussian();
  CHECK(std::abs(mf_expectation_via_m(g, 0.3) - mf_expectation(g, 0.3)) < 1e-3);
}

TEST_CASE("eigenvalue residuals") {
  const auto coarse = eigen_test_grid(4096), fine = eigen_test_grid(8192);
  for (const double m : {0.1, 0.5, 0.9}) {
    const double a = eigen_residual(m, coarse), b = eigen_residual(m, fine);
    CHECK(a < 1e-2);
    CHECK(b < a);
  }
}

TEST_CASE("spectral projections") {
  const auto g = gaussian();
  const MInterval low{0.4, 0.6};
  const auto once = project(g, low);
  const auto twice = project(once, low);
  // Through the energy representation idempotence holds to rounding.
  double worst = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < g.grid().size(); ++k)
      worst = std::max(worst, std::abs(once.channel(j)[k] - twice.channel(j)[k]) *
                                  std::sqrt(g.grid().weight(k)));
  CHECK(worst < 1e-15);

  const auto d = to_m_representation(g);
  const auto pd = project(d, low), ppd = project(pd, low);
  for (std::size_t k = 0; k < d.grid().size(); ++k) {
    CHECK(pd.nu_amplitudes(0)[k] == ppd.nu_amplitudes(0)[k]);
    if (!low.contains(d.grid().m(k))) CHECK(pd.nu_amplitudes(0)[k] == complex(0.0));
  }
}

TEST_CASE("backward running probability") {
  const auto g = gaussian();
  CHECK(backward_running_probability(g, {0.4, 0.6}, {0.7, 0.9}, 0.05) > 1e-6);
  CHECK_THROWS_AS(backward_running_probability(ChannelState::zero(g.grid_ptr(), {"+", "-"}),
                                               {0.4, 0.6}, {0.7, 0.9}, 0.05),
                  GridError);
  CHECK_THROWS_AS(backward_running_probability(g, {0.4, 0.75}, {0.7, 0.9}, 0.05), GridError);
}

TEST_CASE("linear grids are rejected") {
  const auto lin = make_energy_grid(0.1, 10.0, 64, Spacing::linear);
  std::vector<complex> v(64, complex(1.0));
  CHECK_THROWS_AS(to_m_representation(ChannelState(lin, {"0"}, {v})), GridError);
}
