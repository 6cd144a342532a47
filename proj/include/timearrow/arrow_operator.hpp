#pragma once

// Discrete forward (M_F) and backward (M_B) arrow-of-time operators.
//
// The kernel -(1/2 pi i) / (E - E' + i0) is split into its delta part
// (1/2) delta(E - E') and the principal value -(1/2 pi i) P / (E - E').
// In the grid coordinate x the weighted principal value is a translation
// invariant, odd kernel k(x - x'): 1/s on linear grids and 1/(2 sinh(s/2))
// on logarithmic grids. It is discretized as a Toeplitz matrix acting on
// sqrt(w_i) v_i: the 1/s part by the odd-point rule (coefficients 2/k for
// odd k, 0 for even k; exact on band-limited data) and the smooth remainder
// k(s) - 1/s by the trapezoid rule. The matrix is real and antisymmetric, so
// <M_F> is real and M_F + M_B = 1 holds to rounding.

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "timearrow/spectral_core.hpp"

namespace timearrow {

namespace detail {
class Fft;
}

/// Raised when the discrete kernel is not antisymmetric (complex expectation).
class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Orientation { forward, backward };

class SingularKernel {
 public:
  static constexpr double delta_coefficient = 0.5;

  const EnergyGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Orientation orientation() const { return orientation_; }
  std::size_t size() const { return grid_->size(); }

  /// Entry (i, i') of the real weighted principal-value matrix C; the
  /// operator acting on sqrt(w) v is delta_coefficient - (1/2 pi i) C.
  double pv_entry(std::size_t i, std::size_t ip) const;
  /// Row-major dense copy of C. Intended for small grids.
  std::vector<double> dense_pv_matrix() const;

  /// C x for x given in weighted coordinates sqrt(w_i) v_i.
  std::vector<complex> apply_pv_weighted(std::span<const complex> x) const;
  /// (K v)_i for an amplitude vector v.
  std::vector<complex> apply(std::span<const complex> v) const;
  /// sum_i w_i conj(v_i) (K v)_i, complex.
  complex quadratic_form(std::span<const complex> v) const;

  /// Kernel of the other orientation (transpose of C).
  SingularKernel transposed() const;

 private:
  friend SingularKernel build_kernel(GridPtr grid, Orientation orientation);
  friend SingularKernel make_kernel_from_coefficients(GridPtr, Orientation,
                                                      std::vector<double>,
                                                      std::vector<double>);
  SingularKernel(GridPtr grid, Orientation orientation, std::vector<double> lower,
                 std::vector<double> upper);

  GridPtr grid_;
  Orientation orientation_;
  // lower_[k] = C(i, i - k), upper_[k] = C(i, i + k), k >= 0
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::shared_ptr<const detail::Fft> fft_;
  std::vector<complex> symbol_;
};

SingularKernel build_kernel(GridPtr grid, Orientation orientation);

/// Builds a kernel from explicit Toeplitz coefficients. Used to inject
/// faults (broken antisymmetry) in self-checks.
SingularKernel make_kernel_from_coefficients(GridPtr grid, Orientation orientation,
                                             std::vector<double> lower,
                                             std::vector<double> upper);

/// Forward kernel with C(i, i+1) perturbed by `asymmetry`.
SingularKernel build_corrupted_kernel(GridPtr grid, double asymmetry);

double mf_expectation(const SingularKernel& forward, const ChannelState& psi, double t);
double mf_expectation(const ChannelState& psi, double t);
double mb_expectation(const SingularKernel& backward, const ChannelState& psi, double t);
double mb_expectation(const ChannelState& psi, double t);

struct MonotonicityViolation {
  std::size_t step;  // between times[step] and times[step + 1]
  double increase;
};

struct LyapunovTrace {
  std::vector<double> times;
  std::vector<double> mf_values;
  std::vector<double> mb_values;
  double norm_squared = 0.0;
  double tolerance = 1e-9;
  std::vector<MonotonicityViolation> violations;

  bool monotone() const { return violations.empty(); }
  std::size_t size() const { return times.size(); }
};

/// Samples <M_F(t)> and <M_B(t)>; times must be strictly increasing.
/// Increases of mf above `tolerance` are recorded in `violations`.
LyapunovTrace lyapunov_trace(const ChannelState& psi, std::span<const double> times,
                             double tolerance = 1e-9);
LyapunovTrace lyapunov_trace(const SingularKernel& forward, const ChannelState& psi,
                             std::span<const double> times, double tolerance = 1e-9);

/// |<M_F(t)> + <M_B(t)> - norm^2| with both forms taken as complex numbers.
double completeness_defect(const ChannelState& psi, double t);
double completeness_defect(const SingularKernel& forward, const SingularKernel& backward,
                           const ChannelState& psi, double t);

struct MpcDefect {
  double d_expect;           // <psi| -i[H, M_F] |psi>
  double noncommutativity;   // ||[M_F, -i[H, M_F]]|| on the grid
};

MpcDefect mpc_commutator_defect(const ChannelState& psi);

}  // namespace timearrow
