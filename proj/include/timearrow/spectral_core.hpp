#pragma once

// Energy grids, multi-channel amplitude containers and the change of
// representation between momentum and energy for a free particle.
//
// Units: hbar = 1, energies and momenta in units of the mass mu.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace timearrow {

using complex = std::complex<double>;

/// Raised when a grid or a state violates the preconditions of an operation.
class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Spacing { linear, logarithmic };

const char* to_string(Spacing s);
Spacing spacing_from_string(const std::string& s);

/// Discretization of the half-line spectrum E > 0.
///
/// Nodes are uniform in the grid coordinate x (x = E for linear spacing,
/// x = ln E for logarithmic spacing). Weights are the composite trapezoid
/// rule in x. For logarithmic grids the sliver [0, E_min] is lumped into the
/// first weight, since the grid coordinate extends to -infinity there.
class EnergyGrid {
 public:
  EnergyGrid(std::vector<double> nodes, std::vector<double> weights,
             Spacing spacing);

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> sqrt_weights() const { return sqrt_weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  Spacing spacing() const { return spacing_; }
  double e_min() const { return nodes_.front(); }
  double e_max() const { return nodes_.back(); }

  /// Uniform step in the grid coordinate.
  double step() const { return step_; }
  /// Grid coordinate of node i.
  double coordinate(std::size_t i) const;
  /// dE/dx at node i.
  double jacobian(std::size_t i) const;

  bool same_as(const EnergyGrid& other) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> sqrt_weights_;
  Spacing spacing_;
  double step_;
};

using GridPtr = std::shared_ptr<const EnergyGrid>;

GridPtr make_energy_grid(double e_min, double e_max, std::size_t n,
                         Spacing spacing);

/// Trapezoid integral of f over the grid.
template <class F>
double integrate(const EnergyGrid& grid, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) acc += grid.weight(i) * f(grid.node(i));
  return acc;
}

/// Complex amplitudes psi_j(E_i) for a finite ordered set of degeneracy
/// channels sharing one grid. Immutable.
class ChannelState {
 public:
  ChannelState(GridPtr grid, std::vector<std::string> labels,
               std::vector<std::vector<complex>> amplitudes, double mass = 1.0);

  /// All-zero state with the given channel labels.
  static ChannelState zero(GridPtr grid, std::vector<std::string> labels,
                           double mass = 1.0);

  const EnergyGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t channel_count() const { return amplitudes_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::span<const complex> channel(std::size_t j) const { return amplitudes_[j]; }
  double mass() const { return mass_; }

  double norm_squared() const;
  bool is_normalized(double tol = 1e-10) const;

  ChannelState scaled(complex factor) const;
  ChannelState normalized() const;
  /// Keeps only channel j; the other channels are zeroed.
  ChannelState restricted_to(std::size_t j) const;
  /// Same labels and grid, new amplitudes.
  ChannelState with_amplitudes(std::vector<std::vector<complex>> amplitudes) const;

  bool compatible_with(const ChannelState& other) const;

 private:
  GridPtr grid_;
  std::vector<std::string> labels_;
  std::vector<std::vector<complex>> amplitudes_;
  double mass_;
};

/// sum_j sum_i w_i conj(phi_j(E_i)) psi_j(E_i)
complex inner_product(const ChannelState& phi, const ChannelState& psi);

/// Symmetric momentum grid {-p_k} u {p_k} with p_k = sqrt(2 mu E_k) taken
/// from an energy grid, so that the change of variables to energy is exact
/// node by node.
class MomentumGrid {
 public:
  MomentumGrid(GridPtr energy_grid, double mass);

  const EnergyGrid& energy_grid() const { return *energy_grid_; }
  const GridPtr& energy_grid_ptr() const { return energy_grid_; }
  double mass() const { return mass_; }
  std::size_t half_size() const { return magnitudes_.size(); }
  /// p_k > 0, increasing.
  std::span<const double> magnitudes() const { return magnitudes_; }
  /// Weights for integrals dp over each half line.
  std::span<const double> weights() const { return weights_; }
  double p_min() const { return magnitudes_.front(); }
  double p_max() const { return magnitudes_.back(); }
  /// Full node list, ascending: -p_{n-1}, ..., -p_0, p_0, ..., p_{n-1}.
  std::vector<double> nodes() const;

 private:
  GridPtr energy_grid_;
  double mass_;
  std::vector<double> magnitudes_;
  std::vector<double> weights_;
};

/// Samples of psi~(p) on a symmetric momentum grid.
class MomentumState {
 public:
  MomentumState(std::shared_ptr<const MomentumGrid> grid,
                std::vector<complex> positive, std::vector<complex> negative);

  const MomentumGrid& grid() const { return *grid_; }
  const std::shared_ptr<const MomentumGrid>& grid_ptr() const { return grid_; }
  double mass() const { return grid_->mass(); }
  /// psi~(+p_k)
  std::span<const complex> positive() const { return positive_; }
  /// psi~(-p_k)
  std::span<const complex> negative() const { return negative_; }

  double norm_squared() const;

 private:
  std::shared_ptr<const MomentumGrid> grid_;
  std::vector<complex> positive_;
  std::vector<complex> negative_;
};

/// psi_+-(E) = (mu/p)^{1/2} psi~(+-p), p = sqrt(2 mu E). Channel labels are
/// {"+", "-"}. Throws GridError when the grid does not resolve the state
/// (even- and odd-node norm estimates differ by more than 1e-8).
ChannelState momentum_to_energy(const MomentumState& state);

/// Inverse of momentum_to_energy. Requires channels labelled {"+", "-"}.
MomentumState energy_to_momentum(const ChannelState& state,
                                 std::shared_ptr<const MomentumGrid> grid);

/// d(values)/dx in the grid coordinate, fourth-order finite differences.
std::vector<complex> grid_derivative(const EnergyGrid& grid,
                                     std::span<const complex> values);

/// Piecewise-cubic Hermite interpolation of one channel in the grid
/// coordinate. Returns 0 outside [E_min, E_max].
class ChannelInterpolant {
 public:
  ChannelInterpolant(GridPtr grid, std::span<const complex> values);
  complex operator()(double energy) const;

 private:
  GridPtr grid_;
  std::vector<complex> values_;
  std::vector<complex> slopes_;
};

}  // namespace timearrow
