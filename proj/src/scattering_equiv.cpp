#include "timearrow/scattering_equiv.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "timearrow/arrow_operator.hpp"
#include "timearrow/states.hpp"

namespace timearrow {

using std::numbers::pi;

complex ScatteringModel::transmission(double p) const {
  if (coupling_ == 0.0) return 1.0;
  if (p == 0.0) return 0.0;
  return p / complex(p, mass_ * coupling_);
}

complex ScatteringModel::reflection(double p) const {
  if (coupling_ == 0.0) return 0.0;
  if (p == 0.0) return -1.0;
  return complex(0.0, -mass_ * coupling_) / complex(p, mass_ * coupling_);
}

double ScatteringModel::unitarity_defect(double p) const {
  return std::abs(std::norm(reflection(p)) + std::norm(transmission(p)) - 1.0);
}

ScatteringModel delta_model(double coupling, double mass) {
  if (!(mass > 0.0)) throw ScatteringError("mass must be positive");
  if (!(coupling >= 0.0))
    throw ScatteringError("coupling must be >= 0; an attractive delta binds a state");
  return {coupling, mass};
}

namespace {

void require_scattering_channels(const ChannelState& psi) {
  const auto& l = psi.labels();
  if (l.size() != 2 || l[0] != "+" || l[1] != "-")
    throw ScatteringError("scattering states need channels labelled {+, -}");
}

// Samples of (1/sqrt(2 pi)) sum_k dp a_k exp(i q_k x_j) with
// q_k = (k - N/2) dp and x_j = (j - N/2) 2 pi / (N dp).
std::vector<complex> to_position(std::vector<complex> a, double dp) {
  const std::size_t n = a.size();
  for (std::size_t k = 1; k < n; k += 2) a[k] = -a[k];
  auto psi = detail::shared_fft(n)->backward(a);
  const double scale = dp / std::sqrt(2.0 * pi);
  for (std::size_t j = 0; j < n; ++j) psi[j] *= (j % 2 == 0 ? scale : -scale);
  return psi;
}

struct MomentumSampler {
  ChannelInterpolant plus;
  ChannelInterpolant minus;
  double mass;
  double e_min;

  // psi~(q) = sqrt(|q| / mu) psi_+-(q^2 / 2 mu); below the grid psi~ is held
  // at its value at the smallest grid momentum.
  complex operator()(double q) const {
    const double e = std::max(q * q / (2.0 * mass), e_min);
    const double jac = std::sqrt(std::sqrt(2.0 * mass * e) / mass);
    return jac * (q >= 0.0 ? plus(e) : minus(e));
  }
};

struct BoxStats {
  double mean;
  double spread;
  double mass;
};

BoxStats position_stats(std::span<const complex> psi, double dx, double x0) {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double x = x0 + dx * static_cast<double>(j);
    const double d = std::norm(psi[j]) * dx;
    m0 += d;
    m1 += d * x;
  }
  const double mean = m1 / m0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double x = x0 + dx * static_cast<double>(j) - mean;
    m2 += std::norm(psi[j]) * dx * x * x;
  }
  return {mean, std::sqrt(m2 / m0), m0};
}

std::size_t fft_size(double half_width, double p_max) {
  const double needed = 2.0 * half_width * p_max / pi;
  return std::bit_ceil(static_cast<std::size_t>(std::max(64.0, std::ceil(needed))));
}

}  // namespace

InteractingState moller_map(const ChannelState& psi0, const ScatteringModel& model) {
  require_scattering_channels(psi0);
  return {psi0, model};
}

double mf_expectation(const InteractingState& psi, double t) {
  const auto kernel = build_kernel(psi.coefficients.grid_ptr(), Orientation::forward);
  return mf_expectation(kernel, psi.coefficients, t);
}

MDistribution to_m_representation(const InteractingState& psi, double t) {
  return to_m_representation(evolve(psi.coefficients, t));
}

double equivalence_defect(const ChannelState& psi0, const ScatteringModel& model,
                          std::span<const double> times) {
  const auto interacting = moller_map(psi0, model);
  const auto free_kernel = build_kernel(psi0.grid_ptr(), Orientation::forward);
  double worst = 0.0;
  for (const double t : times) {
    const double free_value = mf_expectation(free_kernel, psi0, t);
    worst = std::max(worst, std::abs(mf_expectation(interacting, t) - free_value));
  }
  return worst;
}

double m_distribution_defect(const ChannelState& psi0, const ScatteringModel& model,
                             std::span<const double> times) {
  const auto interacting = moller_map(psi0, model);
  double worst = 0.0;
  for (const double t : times) {
    const auto a = to_m_representation(evolve(psi0, t));
    const auto b = to_m_representation(interacting, t);
    for (std::size_t j = 0; j < a.channel_count(); ++j) {
      const auto x = a.nu_amplitudes(j), y = b.nu_amplitudes(j);
      for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
    }
  }
  return worst;
}

OverlapReport asymptotic_overlap_report(const ChannelState& psi0, const ScatteringModel& model,
                                        double t) {
  require_scattering_channels(psi0);
  const auto& g = psi0.grid();
  const double mu = model.mass();
  const double norm2 = psi0.norm_squared();
  if (!(norm2 > 0.0)) throw ScatteringError("overlap of the zero state is undefined");
  const double p_max = std::sqrt(2.0 * mu * g.e_max());
  const MomentumSampler sample{ChannelInterpolant(psi0.grid_ptr(), psi0.channel(0)),
                               ChannelInterpolant(psi0.grid_ptr(), psi0.channel(1)), mu,
                               g.e_min()};

  // Momentum moments bound the spread at time t: sigma(t) <= sigma(0) + |t| sigma_p / mu.
  double p1 = 0.0, p2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double p = std::sqrt(2.0 * mu * g.node(i));
    const double a = std::norm(psi0.channel(0)[i]), b = std::norm(psi0.channel(1)[i]);
    p1 += g.weight(i) * p * (a - b);
    p2 += g.weight(i) * p * p * (a + b);
  }
  p1 /= norm2;
  p2 /= norm2;
  const double sigma_p = std::sqrt(std::max(p2 - p1 * p1, 0.0));

  const auto free_amplitudes = [&](std::size_t n, double dp, double time) {
    std::vector<complex> a(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double q = (static_cast<double>(k) - static_cast<double>(n / 2)) * dp;
      a[k] = sample(q) * std::polar(1.0, -q * q * time / (2.0 * mu));
    }
    return a;
  };

  // Initial position statistics on a box sized from the momentum spread.
  const double b0 = 40.0 / std::max(sigma_p, 1e-12);
  std::size_t n = fft_size(b0, p_max);
  double dp = pi / b0;
  auto initial = to_position(free_amplitudes(n, dp, 0.0), dp);
  const double dx0 = 2.0 * pi / (static_cast<double>(n) * dp);
  const auto s0 = position_stats(initial, dx0, -static_cast<double>(n / 2) * dx0);
  if (s0.mass < (1.0 - 1e-6) * norm2)
    throw ScatteringError("initial packet is not localized within the reconstruction box");

  const double reach = std::abs(s0.mean + t * p1 / mu) + 12.0 * (s0.spread + std::abs(t) * sigma_p / mu);
  const double half = 1.05 * reach;
  n = fft_size(half, p_max);
  dp = pi / half;
  const double dx = 2.0 * pi / (static_cast<double>(n) * dp);
  const double x0 = -static_cast<double>(n / 2) * dx;

  const auto a_free = free_amplitudes(n, dp, t);
  std::vector<complex> a_left(n), a_right(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = (static_cast<double>(k) - static_cast<double>(n / 2)) * dp;
    const double p = std::abs(q);
    const complex phase = std::polar(1.0, -q * q * t / (2.0 * mu));
    const complex incoming = sample(q), mirrored = sample(-q);
    const complex tau = model.transmission(p), r = model.reflection(p);
    if (q >= 0.0) {
      a_left[k] = incoming * phase;
      a_right[k] = (tau * incoming + r * mirrored) * phase;
    } else {
      a_left[k] = (r * mirrored + tau * incoming) * phase;
      a_right[k] = incoming * phase;
    }
  }
  const auto psi_free = to_position(a_free, dp);
  const auto psi_left = to_position(a_left, dp);
  const auto psi_right = to_position(a_right, dp);

  const auto s = position_stats(psi_free, dx, x0);
  OverlapReport report{};
  report.window_lo = s.mean - 12.0 * s.spread;
  report.window_hi = s.mean + 12.0 * s.spread;
  complex cross{};
  double nf = 0.0, ni = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = x0 + dx * static_cast<double>(j);
    if (x < report.window_lo || x > report.window_hi) continue;
    const complex pi_x = x < 0.0 ? psi_left[j] : psi_right[j];
    cross += std::conj(psi_free[j]) * pi_x * dx;
    nf += std::norm(psi_free[j]) * dx;
    ni += std::norm(pi_x) * dx;
    ++report.samples;
  }
  report.free_window_mass = nf / norm2;
  report.interacting_window_mass = ni / norm2;
  if (report.free_window_mass < 1.0 - 1e-5 || report.interacting_window_mass < 1.0 - 1e-5) {
    std::ostringstream msg;
    msg << "spatial window [" << report.window_lo << ", " << report.window_hi
        << "] holds only " << std::min(report.free_window_mass, report.interacting_window_mass)
        << " of the norm";
    throw ScatteringError(msg.str());
  }
  report.overlap = std::norm(cross) / (nf * ni);
  return report;
}

double asymptotic_overlap(const ChannelState& psi0, const ScatteringModel& model, double t) {
  return asymptotic_overlap_report(psi0, model, t).overlap;
}

}  // namespace timearrow
