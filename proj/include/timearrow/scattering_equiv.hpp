#pragma once

// Free and interacting dynamics related by Moller wave operators, realized
// for the one-dimensional potential V(x) = lambda delta(x) with lambda >= 0.
//
// Channel convention: "+" is the scattering state incident from the left
// (incoming momentum +p), "-" the one incident from the right (-p):
//
//   phi_p^+(x) = exp(ipx) + r exp(-ipx)   (x < 0),  tau exp(ipx)            (x > 0)
//   phi_p^-(x) = tau exp(-ipx)            (x < 0),  exp(-ipx) + r exp(ipx)  (x > 0)
//
// with tau(p) = p / (p + i mu lambda) and r(p) = tau(p) - 1. These are
// Omega_+ applied to the free plane waves, so an interacting state with the
// same energy-channel coefficients as a free one is its Moller image.

#include <span>
#include <stdexcept>
#include <vector>

#include "timearrow/m_transform.hpp"
#include "timearrow/spectral_core.hpp"

namespace timearrow {

class ScatteringError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ScatteringModel {
 public:
  double coupling() const { return coupling_; }
  double mass() const { return mass_; }

  /// tau(p) for p >= 0.
  complex transmission(double p) const;
  /// r(p) for p >= 0.
  complex reflection(double p) const;
  /// | |r|^2 + |tau|^2 - 1 |
  double unitarity_defect(double p) const;

 private:
  friend ScatteringModel delta_model(double coupling, double mass);
  ScatteringModel(double coupling, double mass) : coupling_(coupling), mass_(mass) {}
  double coupling_;
  double mass_;
};

/// Throws ScatteringError unless mass > 0 and coupling >= 0 (an attractive
/// delta has a bound state, outside the purely continuous setting).
ScatteringModel delta_model(double coupling, double mass = 1.0);

/// A state of the interacting system, stored as its coefficients over the
/// interacting scattering eigenstates |E, +->_I.
struct InteractingState {
  ChannelState coefficients;
  ScatteringModel model;
};

/// Omega_+ psi0: same coefficients, interacting eigenbasis. Requires channel
/// labels {"+", "-"}.
InteractingState moller_map(const ChannelState& psi0, const ScatteringModel& model);

/// <psi_I(t)| Omega_+ M_F Omega_+^dagger |psi_I(t)> evaluated in the
/// interacting eigenbasis.
double mf_expectation(const InteractingState& psi, double t);

/// Interacting m-amplitudes <m, j|psi_I(t)>.
MDistribution to_m_representation(const InteractingState& psi, double t);

/// max over times of |<M_F^(I)>(t) - <M_F^(0)>(t)|.
double equivalence_defect(const ChannelState& psi0, const ScatteringModel& model,
                          std::span<const double> times);
/// max over times, channels and nu nodes of |<m|psi_I(t)> - <m|psi_0(t)>|.
double m_distribution_defect(const ChannelState& psi0, const ScatteringModel& model,
                             std::span<const double> times);

struct OverlapReport {
  double overlap;         // |<psi_0(t)|psi_I(t)>|^2 over the window, normalized
  double window_lo;
  double window_hi;
  double free_window_mass;
  double interacting_window_mass;
  std::size_t samples;
};

/// Reconstructs psi_0(x, t) from free plane waves and psi_I(x, t) from the
/// scattering eigenfunctions on [x_c - 12 sigma_x(t), x_c + 12 sigma_x(t)],
/// where x_c and sigma_x are the mean and spread of the free packet. Throws
/// ScatteringError when either wave function leaves more than 1e-5 of its
/// norm outside the window.
OverlapReport asymptotic_overlap_report(const ChannelState& psi0, const ScatteringModel& model,
                                        double t);
double asymptotic_overlap(const ChannelState& psi0, const ScatteringModel& model, double t);

}  // namespace timearrow
