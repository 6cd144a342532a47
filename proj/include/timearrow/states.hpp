#pragma once

// Concrete states: the free Gaussian wave-packet, the exponential energy
// profile with closed-form traces, seeded smooth random states, and free
// time evolution in the energy representation.

#include <cstdint>
#include <memory>
#include <random>

#include "timearrow/spectral_core.hpp"

namespace timearrow {

/// Free Gaussian packet centred at x = 0 at t = 0 with mean momentum p0 and
/// momentum-space width xi0 (amplitude exp(-(p-p0)^2 / (2 xi0^2))).
struct GaussianPacketParams {
  double p0 = 6.4;
  double xi0 = 3.0;
  double mass = 1.0;

  void validate() const;
  /// p0^2 / (2 mu)
  double characteristic_energy() const { return p0 * p0 / (2.0 * mass); }
  /// Mean position at time t.
  double centre(double t) const { return p0 * t / mass; }
  /// Standard deviation of |psi(x, t)|^2.
  double position_width(double t) const;
};

/// Logarithmic grid for the packet: E_max covers |p0| + 8 xi0, E_min is
/// small enough that the mass below it is < 1e-12.
GridPtr packet_energy_grid(const GaussianPacketParams& params, std::size_t n);

/// psi~(p, 0) = (pi xi0^2)^{-1/4} exp(-(p - p0)^2 / (2 xi0^2)).
complex gaussian_momentum_amplitude(const GaussianPacketParams& params, double p);

/// Samples the packet on a momentum grid. Throws GridError when the grid does
/// not cover [p0 - 8 xi0, p0 + 8 xi0].
MomentumState gaussian_momentum_state(const GaussianPacketParams& params,
                                      std::shared_ptr<const MomentumGrid> grid);

/// Packet in the energy representation, channels {+, -}.
ChannelState gaussian_channel_state(const GaussianPacketParams& params, GridPtr grid);

/// |psi(x, t)|^2 from the closed-form free evolution.
double gaussian_position_density(const GaussianPacketParams& params, double x, double t);

/// Single channel psi(E) = sqrt(2) exp(-E). Requires the grid to reach
/// below 1e-8 and above 40 (mass outside < 1e-8).
ChannelState exponential_profile(GridPtr grid);

/// psi_j(E) -> exp(-i E t) psi_j(E).
ChannelState evolve(const ChannelState& psi, double t);

/// Shape of the seeded random states: each channel is a sum of Gaussian bumps
/// in ln E with random complex amplitudes and a random phase slope.
struct RandomStateShape {
  double log_energy_lo = -2.0;
  double log_energy_hi = 1.0;
  double width_lo = 0.25;
  double width_hi = 0.5;
  double slope = 2.0;
  int bumps = 3;
};

ChannelState random_smooth_state(GridPtr grid, std::vector<std::string> labels,
                                 std::mt19937_64& rng, const RandomStateShape& shape = {});

}  // namespace timearrow
