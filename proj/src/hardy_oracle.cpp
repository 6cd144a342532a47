#include "timearrow/hardy_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>

namespace timearrow {

using std::numbers::pi;

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Estimate {
  double value;
  double error;
};

template <class F>
Estimate gauss_kronrod(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (std::size_t k = 0; k < 7; ++k) {
    const double dx = r * kKronrodNodes[k];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[k] * pair;
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair;
  }
  return {r * kronrod, std::abs(r * (kronrod - gauss))};
}

template <class F>
double adaptive(const F& f, double a, double b, const HardyOptions& opt, int depth = 0) {
  const auto est = gauss_kronrod(f, a, b);
  const double tol = std::max(opt.abs_tolerance, opt.rel_tolerance * std::abs(est.value));
  if (est.error <= tol || depth >= opt.max_depth) return est.value;
  const double m = 0.5 * (a + b);
  return adaptive(f, a, m, opt, depth + 1) + adaptive(f, m, b, opt, depth + 1);
}

// M_k(theta) = int_0^1 x^k exp(i theta x) dx for k = 0..3. `e` is exp(i theta)
// as seen by the caller's node phases.
std::array<complex, 4> oscillatory_moments(double theta, complex e) {
  std::array<complex, 4> m{};
  if (std::abs(theta) < 0.5) {
    const complex z{0.0, theta};
    complex term{1.0, 0.0};
    for (int j = 0; j < 16; ++j) {
      for (int k = 0; k < 4; ++k) m[k] += term / static_cast<double>(j + k + 1);
      term *= z / static_cast<double>(j + 1);
    }
    return m;
  }
  const complex inv = complex{0.0, -1.0} / theta;
  m[0] = (e - 1.0) * inv;
  for (int k = 1; k < 4; ++k) m[k] = (e - static_cast<double>(k) * m[k - 1]) * inv;
  return m;
}

}  // namespace

HardyOracle::HardyOracle(const ChannelState& psi, HardyOptions options)
    : grid_(psi.grid_ptr()), options_(options) {
  const auto& g = *grid_;
  const std::size_t n = g.size();
  spans_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) spans_[i] = g.node(i + 1) - g.node(i);

  double energy = 0.0;
  const double norm2 = psi.norm_squared();
  channels_.resize(psi.channel_count());
  sliver_.resize(psi.channel_count());
  for (std::size_t j = 0; j < psi.channel_count(); ++j) {
    const auto y = psi.channel(j);
    auto dy = grid_derivative(g, y);
    for (std::size_t i = 0; i < n; ++i) {
      dy[i] /= g.jacobian(i);
      energy += g.weight(i) * g.node(i) * std::norm(y[i]);
    }
    auto& cubics = channels_[j];
    cubics.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const complex y0 = y[i], y1 = y[i + 1];
      const complex d0 = dy[i] * spans_[i], d1 = dy[i + 1] * spans_[i];
      cubics[i] = {y0, d0, -3.0 * y0 - 2.0 * d0 + 3.0 * y1 - d1, 2.0 * y0 + d0 - 2.0 * y1 + d1};
    }
    sliver_[j] = g.spacing() == Spacing::logarithmic ? y[0] * g.e_min() : complex{};
  }
  zero_ = !(norm2 > 0.0);
  if (!zero_) scale_ = energy > 0.0 ? norm2 / energy : 1.0;
}

std::vector<complex> HardyOracle::fourier(double tau) const {
  const auto& g = *grid_;
  const std::size_t n = g.size();
  std::vector<complex> out(channels_.size());
  if (zero_) return out;
  std::vector<complex> phase(n);
  for (std::size_t i = 0; i < n; ++i) phase[i] = std::polar(1.0, tau * g.node(i));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double theta = tau * spans_[i];
    const auto m = oscillatory_moments(theta, phase[i + 1] * std::conj(phase[i]));
    const complex factor = spans_[i] * phase[i];
    for (std::size_t j = 0; j < channels_.size(); ++j) {
      const auto& c = channels_[j][i];
      out[j] += factor * (c.c0 * m[0] + c.c1 * m[1] + c.c2 * m[2] + c.c3 * m[3]);
    }
  }
  for (std::size_t j = 0; j < channels_.size(); ++j) out[j] = (out[j] + sliver_[j]) / (2.0 * pi);
  return out;
}

std::vector<complex> HardyOracle::forward_component(double tau) const {
  if (tau > 0.0) return std::vector<complex>(channels_.size());
  return fourier(tau);
}

ForwardComponent HardyOracle::forward_component(std::span<const double> taus) const {
  ForwardComponent out;
  out.tau_nodes.assign(taus.begin(), taus.end());
  out.values.assign(channels_.size(), std::vector<complex>(taus.size()));
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const auto f = forward_component(taus[k]);
    for (std::size_t j = 0; j < f.size(); ++j) out.values[j][k] = f[j];
  }
  return out;
}

double HardyOracle::density(double tau) const {
  double acc = 0.0;
  for (const auto& f : fourier(tau)) acc += std::norm(f);
  return 2.0 * pi * acc;
}

double HardyOracle::tail_density(double tau) const {
  if (tau > 0.0) throw GridError("tail density is defined for tau <= 0");
  return density(tau);
}

double HardyOracle::tail_integral(double upper) const {
  // tau = upper - scale (exp(s) - 1), s in [0, inf)
  const double sigma = scale_;
  const auto integrand = [&](double s) {
    const double es = std::exp(s);
    return density(upper - sigma * (es - 1.0)) * sigma * es;
  };
  double total = 0.0, previous = -1.0, last = 0.0;
  int quiet = 0;
  for (double s = 0.0; s < options_.max_log_extent; s += 1.0) {
    last = adaptive(integrand, s, s + 1.0, options_);
    total += last;
    quiet = last < options_.tail_tolerance ? quiet + 1 : 0;
    if (quiet >= 2 && s >= 3.0) {
      if (previous > 0.0 && last < previous) {
        const double r = last / previous;
        total += last * r / (1.0 - r);
      }
      return total;
    }
    previous = last;
  }
  std::ostringstream msg;
  msg << "tail density has not decayed at s = " << options_.max_log_extent
      << "; last unit step contributed " << last;
  throw TruncationError(msg.str(), last);
}

double HardyOracle::segment_integral(double a, double b) const {
  if (!(b > a)) return 0.0;
  const double piece = 0.25 * scale_;
  const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / piece)));
  const double step = (b - a) / static_cast<double>(pieces);
  const auto integrand = [&](double tau) { return density(tau); };
  double total = 0.0;
  for (std::size_t k = 0; k < pieces; ++k) {
    const double lo = a + step * static_cast<double>(k);
    const double hi = k + 1 == pieces ? b : lo + step;
    total += adaptive(integrand, lo, hi, options_);
  }
  return total;
}

double HardyOracle::mf_expectation(double t) const {
  if (zero_) return 0.0;
  return tail_integral(-t);
}

std::vector<double> HardyOracle::mf_trace(std::span<const double> times) const {
  std::vector<double> out(times.size(), 0.0);
  if (zero_ || times.empty()) return out;
  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return times[a] > times[b]; });
  double running = tail_integral(-times[order.front()]);
  out[order.front()] = running;
  for (std::size_t k = 1; k < order.size(); ++k) {
    running += segment_integral(-times[order[k - 1]], -times[order[k]]);
    out[order[k]] = running;
  }
  return out;
}

std::vector<complex> forward_component(const ChannelState& psi, double tau) {
  return HardyOracle(psi).forward_component(tau);
}

double tail_density(const ChannelState& psi, double tau) {
  return HardyOracle(psi).tail_density(tau);
}

double mf_expectation_oracle(const ChannelState& psi, double t, HardyOptions options) {
  return HardyOracle(psi, options).mf_expectation(t);
}

std::vector<double> mf_trace_oracle(const ChannelState& psi, std::span<const double> times,
                                    HardyOptions options) {
  return HardyOracle(psi, options).mf_trace(times);
}

}  // namespace timearrow
