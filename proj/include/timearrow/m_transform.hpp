#pragma once

// The eigenbasis of M_F and the m-representation.
//
// The generalized eigenfunctions are
//
//   g_m(E) = E^{-i nu - 1/2} / (2 pi sqrt(m (1 - m))),  nu = ln((1 - m)/m) / (2 pi),
//
// so psi(m) = <g_m|psi> is, up to the factor 1/sqrt(2 pi m (1 - m)), the
// unitary Fourier transform Phi(nu) of exp(u/2) psi(exp(u)) in u = ln E. On
// a logarithmic grid with n nodes and step h the transform is evaluated on
// nu_k = (k - n/2) dnu, dnu = 2 pi / (n h), by one FFT; in the weighted
// coordinates sqrt(w_i) psi_i it is exactly unitary and exactly invertible.

#include <memory>
#include <span>
#include <vector>

#include "timearrow/arrow_operator.hpp"
#include "timearrow/spectral_core.hpp"

namespace timearrow {

/// Frequency grid dual to a logarithmic energy grid.
class MGrid {
 public:
  explicit MGrid(const EnergyGrid& grid);

  std::size_t size() const { return size_; }
  double nu_step() const { return nu_step_; }
  double nu(std::size_t k) const;
  /// 1 / (1 + exp(2 pi nu)); may round to 0 or 1 at the extreme nodes.
  double m(std::size_t k) const;
  /// Weight of node k for integrals over dm.
  double m_weight(std::size_t k) const;
  std::vector<double> m_nodes() const;
  std::vector<double> nu_nodes() const;

  /// Index of nu = 0.
  std::size_t centre() const { return centre_; }
  /// ln E_0 and the step in ln E of the source grid.
  double log_origin() const { return u0_; }
  double log_step() const { return step_; }

  bool same_as(const MGrid& other) const;

 private:
  std::size_t size_;
  std::size_t centre_;
  double nu_step_;
  double u0_;
  double step_;
};

/// ln((1 - m)/m) / (2 pi). Throws GridError unless 0 < m < 1.
double nu_of_m(double m);
/// 1 / (1 + exp(2 pi nu)).
double m_of_nu(double nu);

/// Per-channel amplitudes in the nu variable, Phi_j(nu_k). The m-amplitude
/// is psi_j(m) = Phi_j(nu) / sqrt(2 pi m (1 - m)).
class MDistribution {
 public:
  MDistribution(MGrid grid, std::vector<std::string> labels,
                std::vector<std::vector<complex>> nu_amplitudes);

  const MGrid& grid() const { return grid_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t channel_count() const { return amplitudes_.size(); }
  std::span<const complex> nu_amplitudes(std::size_t j) const { return amplitudes_[j]; }

  /// psi_j(m_k); infinite where m (1 - m) underflows.
  complex amplitude(std::size_t j, std::size_t k) const;
  /// |psi_j(m_k)|^2
  double density(std::size_t j, std::size_t k) const;
  /// Probability carried by node k of channel j (|Phi|^2 dnu).
  double cell_mass(std::size_t j, std::size_t k) const;

  /// sum_j int |psi_j(m)|^2 dm
  double norm_squared() const;
  /// sum_j int m |psi_j(m)|^2 dm
  double first_moment() const;
  double channel_first_moment(std::size_t j) const;

 private:
  MGrid grid_;
  std::vector<std::string> labels_;
  std::vector<std::vector<complex>> amplitudes_;
};

/// Closed interval [lo, hi] of eigenvalues.
struct MInterval {
  double lo;
  double hi;
  bool contains(double m) const { return m >= lo && m <= hi; }
};

/// g_m(E). Throws GridError unless 0 < m < 1 and E > 0.
complex eigenfunction(double m, double energy);

MDistribution to_m_representation(const ChannelState& psi);
/// Throws GridError when `grid` is not the grid the distribution came from.
ChannelState from_m_representation(const MDistribution& phi, GridPtr grid, double mass = 1.0);

/// psi_j(m) by direct summation, for m between the FFT nodes.
std::vector<complex> m_amplitude(const ChannelState& psi, double m);

double mf_expectation_via_m(const ChannelState& psi, double t);

/// Logarithmic grid on [exp(-60), exp(60)] used for eigenvalue residuals.
GridPtr eigen_test_grid(std::size_t n);

/// ||K g_m - m g_m|| / ||g_m|| over the middle half of the grid in ln E.
double eigen_residual(double m, const GridPtr& grid);

/// Sharp spectral projection onto an interval of m.
MDistribution project(const MDistribution& phi, MInterval interval);
ChannelState project(const ChannelState& psi, MInterval interval);

/// ||P_high evolve(P_low psi, t)||^2 / ||P_low psi||^2.
/// Throws GridError for overlapping or unordered intervals or an empty
/// projection.
double backward_running_probability(const ChannelState& psi, MInterval low, MInterval high,
                                    double t);

}  // namespace timearrow
