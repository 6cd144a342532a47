#include "timearrow/arrow_operator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"

namespace timearrow {

using std::numbers::pi;

namespace {

constexpr complex kPvFactor{0.0, 1.0 / (2.0 * pi)};  // -1/(2 pi i)

// 1/(2 sinh(s/2)) - 1/s, odd and smooth.
double log_kernel_remainder(double s) {
  const double a = std::abs(s);
  if (a < 1e-3) {
    const double s2 = s * s;
    return s * (-1.0 / 24.0 + s2 * (7.0 / 5760.0));
  }
  if (a > 1400.0) return -1.0 / s;
  return 1.0 / (2.0 * std::sinh(0.5 * s)) - 1.0 / s;
}

std::vector<complex> weighted(const EnergyGrid& g, std::span<const complex> v) {
  const auto sw = g.sqrt_weights();
  std::vector<complex> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = sw[i] * v[i];
  return out;
}

std::vector<complex> weighted_evolved(const EnergyGrid& g, std::span<const complex> v, double t) {
  const auto sw = g.sqrt_weights();
  std::vector<complex> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = t == 0.0 ? sw[i] * v[i] : sw[i] * std::polar(1.0, -g.node(i) * t) * v[i];
  return out;
}

complex weighted_form(const SingularKernel& k, std::span<const complex> x) {
  const auto cx = k.apply_pv_weighted(x);
  double n2 = 0.0;
  complex cross{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    n2 += std::norm(x[i]);
    cross += std::conj(x[i]) * cx[i];
  }
  return SingularKernel::delta_coefficient * n2 + kPvFactor * cross;
}

complex total_form(const SingularKernel& k, const ChannelState& psi, double t) {
  if (!k.grid().same_as(psi.grid())) throw GridError("kernel and state live on different grids");
  complex acc{};
  for (std::size_t j = 0; j < psi.channel_count(); ++j)
    acc += weighted_form(k, weighted_evolved(psi.grid(), psi.channel(j), t));
  return acc;
}

double checked_real(complex value, double norm2, const char* what) {
  if (std::abs(value.imag()) > 1e-8 * std::max(1.0, norm2)) {
    std::ostringstream msg;
    msg << what << " has imaginary part " << value.imag()
        << "; the principal-value matrix is not antisymmetric";
    throw KernelError(msg.str());
  }
  return value.real();
}

}  // namespace

SingularKernel::SingularKernel(GridPtr grid, Orientation orientation,
                               std::vector<double> lower, std::vector<double> upper)
    : grid_(std::move(grid)),
      orientation_(orientation),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {
  const std::size_t n = grid_->size();
  if (lower_.size() != n || upper_.size() != n)
    throw GridError("kernel coefficient count does not match the grid");
  // Circulant embedding of size 2n: column = [c_0..c_{n-1}, 0, c_{-(n-1)}..c_{-1}].
  const std::size_t m = 2 * n;
  fft_ = detail::shared_fft(m);
  std::vector<complex> column(m);
  for (std::size_t k = 0; k < n; ++k) column[k] = lower_[k];
  for (std::size_t k = 1; k < n; ++k) column[m - k] = upper_[k];
  symbol_ = fft_->forward(column);
  const double scale = 1.0 / static_cast<double>(m);
  for (auto& s : symbol_) s *= scale;
}

double SingularKernel::pv_entry(std::size_t i, std::size_t ip) const {
  return i >= ip ? lower_[i - ip] : upper_[ip - i];
}

std::vector<double> SingularKernel::dense_pv_matrix() const {
  const std::size_t n = size();
  std::vector<double> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t ip = 0; ip < n; ++ip) out[i * n + ip] = pv_entry(i, ip);
  return out;
}

std::vector<complex> SingularKernel::apply_pv_weighted(std::span<const complex> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw GridError("vector length does not match the kernel");
  auto spectrum = fft_->forward(x);
  for (std::size_t k = 0; k < spectrum.size(); ++k) spectrum[k] *= symbol_[k];
  auto full = fft_->backward(spectrum);
  full.resize(n);
  return full;
}

std::vector<complex> SingularKernel::apply(std::span<const complex> v) const {
  const auto& g = *grid_;
  const auto cx = apply_pv_weighted(weighted(g, v));
  const auto sw = g.sqrt_weights();
  std::vector<complex> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = delta_coefficient * v[i] + kPvFactor * cx[i] / sw[i];
  return out;
}

complex SingularKernel::quadratic_form(std::span<const complex> v) const {
  return weighted_form(*this, weighted(*grid_, v));
}

SingularKernel SingularKernel::transposed() const {
  const auto other = orientation_ == Orientation::forward ? Orientation::backward
                                                         : Orientation::forward;
  return {grid_, other, upper_, lower_};
}

SingularKernel build_kernel(GridPtr grid, Orientation orientation) {
  const std::size_t n = grid->size();
  const double h = grid->step();
  const bool log_grid = grid->spacing() == Spacing::logarithmic;
  std::vector<double> lower(n, 0.0), upper(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double c = (k % 2 == 1) ? 2.0 / static_cast<double>(k) : 0.0;
    if (log_grid) c += h * log_kernel_remainder(h * static_cast<double>(k));
    lower[k] = c;
    upper[k] = -c;
  }
  SingularKernel forward(std::move(grid), Orientation::forward, std::move(lower), std::move(upper));
  return orientation == Orientation::forward ? forward : forward.transposed();
}

SingularKernel make_kernel_from_coefficients(GridPtr grid, Orientation orientation,
                                             std::vector<double> lower,
                                             std::vector<double> upper) {
  return {std::move(grid), orientation, std::move(lower), std::move(upper)};
}

SingularKernel build_corrupted_kernel(GridPtr grid, double asymmetry) {
  const auto healthy = build_kernel(grid, Orientation::forward);
  const std::size_t n = grid->size();
  std::vector<double> lower(n), upper(n);
  for (std::size_t k = 0; k < n; ++k) {
    lower[k] = healthy.pv_entry(k, 0);
    upper[k] = healthy.pv_entry(0, k);
  }
  upper[1] += asymmetry;
  return make_kernel_from_coefficients(std::move(grid), Orientation::forward,
                                       std::move(lower), std::move(upper));
}

double mf_expectation(const SingularKernel& forward, const ChannelState& psi, double t) {
  return checked_real(total_form(forward, psi, t), psi.norm_squared(), "<M_F>");
}

double mf_expectation(const ChannelState& psi, double t) {
  return mf_expectation(build_kernel(psi.grid_ptr(), Orientation::forward), psi, t);
}

double mb_expectation(const SingularKernel& backward, const ChannelState& psi, double t) {
  return checked_real(total_form(backward, psi, t), psi.norm_squared(), "<M_B>");
}

double mb_expectation(const ChannelState& psi, double t) {
  return mb_expectation(build_kernel(psi.grid_ptr(), Orientation::backward), psi, t);
}

LyapunovTrace lyapunov_trace(const SingularKernel& forward, const ChannelState& psi,
                             std::span<const double> times, double tolerance) {
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw GridError("trace times must be strictly increasing");
  const auto backward = forward.transposed();
  LyapunovTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.norm_squared = psi.norm_squared();
  trace.tolerance = tolerance;
  trace.mf_values.reserve(times.size());
  trace.mb_values.reserve(times.size());
  for (const double t : times) {
    trace.mf_values.push_back(mf_expectation(forward, psi, t));
    trace.mb_values.push_back(mb_expectation(backward, psi, t));
  }
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double rise = trace.mf_values[k + 1] - trace.mf_values[k];
    if (rise > tolerance) trace.violations.push_back({k, rise});
  }
  return trace;
}

LyapunovTrace lyapunov_trace(const ChannelState& psi, std::span<const double> times,
                             double tolerance) {
  return lyapunov_trace(build_kernel(psi.grid_ptr(), Orientation::forward), psi, times,
                        tolerance);
}

double completeness_defect(const SingularKernel& forward, const SingularKernel& backward,
                           const ChannelState& psi, double t) {
  const complex sum = total_form(forward, psi, t) + total_form(backward, psi, t);
  return std::abs(sum - psi.norm_squared());
}

double completeness_defect(const ChannelState& psi, double t) {
  const auto forward = build_kernel(psi.grid_ptr(), Orientation::forward);
  return completeness_defect(forward, forward.transposed(), psi, t);
}

namespace {

// Operators below act on weighted coordinates sqrt(w) v, where the L2(w)
// inner product is the Euclidean one.
struct CommutatorAlgebra {
  const SingularKernel& kernel;
  std::span<const double> energies;

  std::vector<complex> arrow(std::span<const complex> x) const {
    auto cx = kernel.apply_pv_weighted(x);
    for (std::size_t i = 0; i < x.size(); ++i)
      cx[i] = SingularKernel::delta_coefficient * x[i] + kPvFactor * cx[i];
    return cx;
  }

  // D = -i [H, M_F] = (1/2 pi) (E C - C E)
  std::vector<complex> rate(std::span<const complex> x) const {
    std::vector<complex> ex(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ex[i] = energies[i] * x[i];
    auto c_x = kernel.apply_pv_weighted(x);
    const auto c_ex = kernel.apply_pv_weighted(ex);
    for (std::size_t i = 0; i < x.size(); ++i)
      c_x[i] = (energies[i] * c_x[i] - c_ex[i]) / (2.0 * pi);
    return c_x;
  }

  std::vector<complex> commutator(std::span<const complex> x) const {
    auto a = arrow(rate(x));
    const auto b = rate(arrow(x));
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
  }
};

double euclidean_norm(std::span<const complex> x) {
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace

MpcDefect mpc_commutator_defect(const ChannelState& psi) {
  const auto kernel = build_kernel(psi.grid_ptr(), Orientation::forward);
  const CommutatorAlgebra alg{kernel, psi.grid().nodes()};

  double d_expect = 0.0;
  for (std::size_t j = 0; j < psi.channel_count(); ++j) {
    const auto x = weighted(psi.grid(), psi.channel(j));
    const auto dx = alg.rate(x);
    complex acc{};
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * dx[i];
    d_expect += acc.real();
  }

  // Power iteration on X^* X = -X^2 for the anti-Hermitian X = [M_F, D].
  const std::size_t n = psi.grid().size();
  std::vector<complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i));
  double estimate = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double nv = euclidean_norm(v);
    if (nv == 0.0) break;
    for (auto& x : v) x /= nv;
    const auto xv = alg.commutator(v);
    estimate = euclidean_norm(xv);
    v = alg.commutator(xv);
    for (auto& x : v) x = -x;
  }
  return {d_expect, estimate};
}

}  // namespace timearrow
