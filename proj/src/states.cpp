#include "timearrow/states.hpp"

#include <cmath>
#include <numbers>

namespace timearrow {

using std::numbers::pi;

void GaussianPacketParams::validate() const {
  if (!(xi0 > 0.0)) throw GridError("packet width xi0 must be > 0");
  if (!(mass > 0.0)) throw GridError("mass must be > 0");
  if (!std::isfinite(p0)) throw GridError("packet momentum p0 must be finite");
}

double GaussianPacketParams::position_width(double t) const {
  const double x2 = xi0 * xi0;
  return std::sqrt((mass * mass + x2 * x2 * t * t) / (2.0 * mass * mass * x2));
}

GridPtr packet_energy_grid(const GaussianPacketParams& params, std::size_t n) {
  params.validate();
  const double reach = std::abs(params.p0) + 8.0 * params.xi0;
  const double e_max = reach * reach / (2.0 * params.mass);
  // |psi_+-(E)|^2 ~ E^{-1/2} near 0, so the mass below E_min grows like
  // sqrt(E_min); 1e-22 E_char keeps it below 1e-12 for packets with
  // |p0| / xi0 up to a few.
  const double e_char = std::max(params.characteristic_energy(), params.xi0 * params.xi0 / (2.0 * params.mass));
  return make_energy_grid(1e-22 * e_char, e_max, n, Spacing::logarithmic);
}

complex gaussian_momentum_amplitude(const GaussianPacketParams& params, double p) {
  const double d = (p - params.p0) / params.xi0;
  return std::pow(pi * params.xi0 * params.xi0, -0.25) * std::exp(-0.5 * d * d);
}

MomentumState gaussian_momentum_state(const GaussianPacketParams& params,
                                      std::shared_ptr<const MomentumGrid> grid) {
  params.validate();
  const double need = std::max(std::abs(params.p0 - 8.0 * params.xi0),
                               std::abs(params.p0 + 8.0 * params.xi0));
  if (grid->p_max() < need * (1.0 - 1e-12))
    throw GridError("momentum grid does not cover [p0 - 8 xi0, p0 + 8 xi0]");
  const auto p = grid->magnitudes();
  std::vector<complex> pos(p.size()), neg(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    pos[k] = gaussian_momentum_amplitude(params, p[k]);
    neg[k] = gaussian_momentum_amplitude(params, -p[k]);
  }
  return {std::move(grid), std::move(pos), std::move(neg)};
}

ChannelState gaussian_channel_state(const GaussianPacketParams& params, GridPtr grid) {
  auto mgrid = std::make_shared<const MomentumGrid>(std::move(grid), params.mass);
  return momentum_to_energy(gaussian_momentum_state(params, std::move(mgrid)));
}

double gaussian_position_density(const GaussianPacketParams& params, double x, double t) {
  params.validate();
  const double mu = params.mass, x2 = params.xi0 * params.xi0;
  // |(mu^2 xi0^2 / (pi (mu + i xi0^2 t)^2))^{1/4}|^2 times |exp(...)|^2
  const double denom = mu * mu + x2 * x2 * t * t;
  const double prefactor = mu * std::sqrt(x2) / std::sqrt(pi * denom);
  const double shift = x - params.p0 * t / mu;
  return prefactor * std::exp(-mu * mu * x2 * shift * shift / denom);
}

ChannelState exponential_profile(GridPtr grid) {
  if (grid->e_min() > 1e-8 || grid->e_max() < 40.0)
    throw GridError("exponential profile needs a grid covering [1e-8, 40]");
  std::vector<complex> amp(grid->size());
  for (std::size_t i = 0; i < amp.size(); ++i)
    amp[i] = std::sqrt(2.0) * std::exp(-grid->node(i));
  return {std::move(grid), {"0"}, {std::move(amp)}};
}

ChannelState evolve(const ChannelState& psi, double t) {
  if (t == 0.0) return psi;
  const auto& g = psi.grid();
  std::vector<complex> phase(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) phase[i] = std::polar(1.0, -g.node(i) * t);
  std::vector<std::vector<complex>> amps(psi.channel_count());
  for (std::size_t j = 0; j < amps.size(); ++j) {
    const auto src = psi.channel(j);
    amps[j].resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) amps[j][i] = phase[i] * src[i];
  }
  return psi.with_amplitudes(std::move(amps));
}

ChannelState random_smooth_state(GridPtr grid, std::vector<std::string> labels,
                                 std::mt19937_64& rng, const RandomStateShape& shape) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const std::size_t n = grid->size();
  std::vector<std::vector<complex>> amps(labels.size(), std::vector<complex>(n));
  for (auto& a : amps) {
    const double channel_weight = in(0.2, 1.0);
    for (int b = 0; b < shape.bumps; ++b) {
      const double centre = in(shape.log_energy_lo, shape.log_energy_hi);
      const double width = in(shape.width_lo, shape.width_hi);
      const double slope = in(-shape.slope, shape.slope);
      const complex c = channel_weight * std::polar(in(0.2, 1.0), in(0.0, 2.0 * pi));
      for (std::size_t i = 0; i < n; ++i) {
        const double e = grid->node(i);
        const double u = std::log(e);
        const double d = (u - centre) / width;
        if (std::abs(d) > 40.0) continue;
        a[i] += c * std::polar(std::exp(-0.5 * d * d), slope * u) / std::sqrt(e);
      }
    }
  }
  return ChannelState(std::move(grid), std::move(labels), std::move(amps)).normalized();
}

}  // namespace timearrow
