#pragma once

// Independent evaluation of <M_F(t)> from the time-domain tail of the state.
//
// With F_j(tau) = (1/2 pi) int_0^inf exp(i E tau) psi_j(E) dE, the forward
// component of the evolved state is f_j(tau; t) = Theta(-tau) F_j(tau - t),
// and
//
//   <M_F(t)> = 2 pi sum_j int_{-inf}^{-t} |F_j(tau)|^2 dtau,
//
// which is nonnegative and non-increasing in t by construction.
//
// F_j is computed by Filon quadrature: psi_j is interpolated by piecewise
// cubic Hermite polynomials in E and the oscillatory factor is integrated
// exactly on every grid interval. The tau integral is adaptive Gauss-Kronrod
// on the substitution tau = T - sigma (exp(s) - 1), which turns the algebraic
// tail into a geometric one.

#include <span>
#include <stdexcept>
#include <vector>

#include "timearrow/spectral_core.hpp"

namespace timearrow {

/// The tail density did not decay before the integration limit.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved_bound_(achieved_bound) {}
  /// Contribution of the last integrated piece of the tail.
  double achieved_bound() const { return achieved_bound_; }

 private:
  double achieved_bound_;
};

struct HardyOptions {
  /// Stop the tail once a unit step in s contributes less than this.
  double tail_tolerance = 1e-9;
  /// Largest s before giving up.
  double max_log_extent = 120.0;
  double abs_tolerance = 1e-13;
  double rel_tolerance = 1e-11;
  int max_depth = 40;
};

/// Samples of the forward components on a set of tau nodes.
struct ForwardComponent {
  std::vector<double> tau_nodes;
  /// values[j][k] = f_j(tau_nodes[k])
  std::vector<std::vector<complex>> values;
};

class HardyOracle {
 public:
  explicit HardyOracle(const ChannelState& psi, HardyOptions options = {});

  std::size_t channel_count() const { return channels_.size(); }

  /// F_j(tau) for all channels, any real tau.
  std::vector<complex> fourier(double tau) const;
  /// f_j(tau) = Theta(-tau) F_j(tau).
  std::vector<complex> forward_component(double tau) const;
  ForwardComponent forward_component(std::span<const double> taus) const;

  /// 2 pi sum_j |F_j(tau)|^2, any real tau.
  double density(double tau) const;
  /// density restricted to tau <= 0; throws GridError for tau > 0.
  double tail_density(double tau) const;

  double mf_expectation(double t) const;
  /// Values for arbitrary (not necessarily sorted) times, computed
  /// cumulatively from the latest time backwards.
  std::vector<double> mf_trace(std::span<const double> times) const;

 private:
  struct Cubic {
    complex c0, c1, c2, c3;
  };

  double tail_integral(double upper) const;
  double segment_integral(double a, double b) const;

  GridPtr grid_;
  HardyOptions options_;
  std::vector<double> spans_;
  std::vector<std::vector<Cubic>> channels_;
  std::vector<complex> sliver_;
  double scale_ = 1.0;
  bool zero_ = true;
};

std::vector<complex> forward_component(const ChannelState& psi, double tau);
double tail_density(const ChannelState& psi, double tau);
double mf_expectation_oracle(const ChannelState& psi, double t, HardyOptions options = {});
std::vector<double> mf_trace_oracle(const ChannelState& psi, std::span<const double> times,
                                    HardyOptions options = {});

}  // namespace timearrow
