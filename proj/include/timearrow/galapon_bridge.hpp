#pragma once

// Finite-dimensional comparison between 2 M_F - 1 and the discrete time
// operator T with off-diagonal entries i / (E_n - E_m) and zero diagonal.

#include <span>
#include <vector>

#include "timearrow/spectral_core.hpp"

namespace timearrow {

/// Dense complex matrix over a set of distinct energies.
class DiscreteOperator {
 public:
  DiscreteOperator(std::vector<double> energies, std::vector<complex> matrix);

  std::size_t size() const { return energies_.size(); }
  std::span<const double> energies() const { return energies_; }
  complex operator()(std::size_t n, std::size_t m) const { return matrix_[n * size() + m]; }
  /// max |A_nm - conj(A_mn)|
  double hermiticity_defect() const;

 private:
  std::vector<double> energies_;
  std::vector<complex> matrix_;
};

/// 2 M_F - 1 in the orthonormal basis of grid cells: zero diagonal and
/// (i / pi) sqrt(dE_n dE_m) / (E_n - E_m) off the diagonal, where dE_n is the
/// cell width (step times dE/dx, without end halving).
DiscreteOperator discretize_symmetric(const EnergyGrid& grid);

/// Zero diagonal and i / (E_n - E_m) off the diagonal. Throws GridError for
/// repeated energies.
DiscreteOperator galapon_T(std::span<const double> energies);

/// max_nm |a_nm - factor b_nm|
double proportionality_defect(const DiscreteOperator& a, const DiscreteOperator& b,
                              double factor);

struct WitnessTrace {
  std::vector<double> times;
  std::vector<double> values;
  /// Largest |Im <T(t)>| seen; the values are the real parts.
  double max_imaginary = 0.0;
  bool non_monotone = false;
  /// First sample that is a strict local extremum, if any.
  std::size_t extremum_index = 0;
};

/// <T(t)> for psi(t)_n = exp(-i E_n t) psi_n. Throws GridError unless the
/// state has unit norm within 1e-10 and matches the operator size.
WitnessTrace lyapunov_violation_witness(const DiscreteOperator& op,
                                        std::span<const complex> state,
                                        std::span<const double> times);

}  // namespace timearrow
