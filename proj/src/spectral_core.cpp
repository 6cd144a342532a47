#include "timearrow/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace timearrow {

const char* to_string(Spacing s) {
  return s == Spacing::linear ? "linear" : "logarithmic";
}

Spacing spacing_from_string(const std::string& s) {
  if (s == "linear") return Spacing::linear;
  if (s == "logarithmic" || s == "log") return Spacing::logarithmic;
  throw GridError("unknown spacing kind '" + s + "'");
}

EnergyGrid::EnergyGrid(std::vector<double> nodes, std::vector<double> weights,
                       Spacing spacing)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), spacing_(spacing) {
  if (nodes_.size() < 2) throw GridError("energy grid needs at least 2 nodes");
  if (weights_.size() != nodes_.size()) throw GridError("node/weight count mismatch");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > 0.0) || !std::isfinite(nodes_[i]))
      throw GridError("energy nodes must be finite and > 0");
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw GridError("quadrature weights must be finite and > 0");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      throw GridError("energy nodes must be strictly increasing");
  }
  const auto n = static_cast<double>(nodes_.size() - 1);
  step_ = spacing_ == Spacing::linear
              ? (nodes_.back() - nodes_.front()) / n
              : (std::log(nodes_.back()) - std::log(nodes_.front())) / n;
  sqrt_weights_.resize(weights_.size());
  std::transform(weights_.begin(), weights_.end(), sqrt_weights_.begin(),
                 [](double w) { return std::sqrt(w); });
}

double EnergyGrid::coordinate(std::size_t i) const {
  return spacing_ == Spacing::linear ? nodes_[i] : std::log(nodes_[i]);
}

double EnergyGrid::jacobian(std::size_t i) const {
  return spacing_ == Spacing::linear ? 1.0 : nodes_[i];
}

bool EnergyGrid::same_as(const EnergyGrid& other) const {
  return this == &other ||
         (spacing_ == other.spacing_ && nodes_ == other.nodes_ &&
          weights_ == other.weights_);
}

GridPtr make_energy_grid(double e_min, double e_max, std::size_t n,
                         Spacing spacing) {
  if (!(e_min > 0.0))
    throw GridError("E_min must be > 0 (the eigenfunctions are singular at E = 0)");
  if (!(e_max > e_min)) throw GridError("E_max must exceed E_min");
  if (n < 2) throw GridError("grid needs at least 2 nodes");

  std::vector<double> nodes(n), weights(n);
  const double last = static_cast<double>(n - 1);
  if (spacing == Spacing::linear) {
    const double h = (e_max - e_min) / last;
    for (std::size_t i = 0; i < n; ++i) {
      nodes[i] = e_min + h * static_cast<double>(i);
      weights[i] = h;
    }
    nodes.back() = e_max;
    weights.front() *= 0.5;
    weights.back() *= 0.5;
  } else {
    const double u0 = std::log(e_min);
    const double h = (std::log(e_max) - u0) / last;
    for (std::size_t i = 0; i < n; ++i) {
      nodes[i] = std::exp(u0 + h * static_cast<double>(i));
      weights[i] = h * nodes[i];
    }
    nodes.front() = e_min;
    nodes.back() = e_max;
    weights.front() = 0.5 * h * e_min + e_min;
    weights.back() = 0.5 * h * e_max;
  }
  return std::make_shared<const EnergyGrid>(std::move(nodes), std::move(weights), spacing);
}

// ---------------------------------------------------------------------------

ChannelState::ChannelState(GridPtr grid, std::vector<std::string> labels,
                           std::vector<std::vector<complex>> amplitudes, double mass)
    : grid_(std::move(grid)),
      labels_(std::move(labels)),
      amplitudes_(std::move(amplitudes)),
      mass_(mass) {
  if (!grid_) throw GridError("channel state without a grid");
  if (labels_.empty()) throw GridError("channel state needs at least one channel");
  if (labels_.size() != amplitudes_.size())
    throw GridError("channel label/amplitude count mismatch");
  if (!(mass_ > 0.0)) throw GridError("mass must be > 0");
  for (const auto& a : amplitudes_) {
    if (a.size() != grid_->size())
      throw GridError("channel amplitudes do not match the grid size");
  }
}

ChannelState ChannelState::zero(GridPtr grid, std::vector<std::string> labels,
                                double mass) {
  const std::size_t n = grid->size();
  std::vector<std::vector<complex>> amps(labels.size(), std::vector<complex>(n));
  return {std::move(grid), std::move(labels), std::move(amps), mass};
}

double ChannelState::norm_squared() const {
  double acc = 0.0;
  const auto w = grid_->weights();
  for (const auto& a : amplitudes_)
    for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * std::norm(a[i]);
  return acc;
}

bool ChannelState::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

ChannelState ChannelState::scaled(complex factor) const {
  auto amps = amplitudes_;
  for (auto& a : amps)
    for (auto& v : a) v *= factor;
  return with_amplitudes(std::move(amps));
}

ChannelState ChannelState::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw GridError("cannot normalize the zero state");
  return scaled(1.0 / std::sqrt(n2));
}

ChannelState ChannelState::restricted_to(std::size_t j) const {
  if (j >= amplitudes_.size()) throw GridError("restricted_to: no channel " + std::to_string(j));
  auto amps = amplitudes_;
  for (std::size_t k = 0; k < amps.size(); ++k)
    if (k != j) std::fill(amps[k].begin(), amps[k].end(), complex{});
  return with_amplitudes(std::move(amps));
}

ChannelState ChannelState::with_amplitudes(std::vector<std::vector<complex>> amplitudes) const {
  return {grid_, labels_, std::move(amplitudes), mass_};
}

bool ChannelState::compatible_with(const ChannelState& other) const {
  return labels_ == other.labels_ && grid_->same_as(*other.grid_);
}

complex inner_product(const ChannelState& phi, const ChannelState& psi) {
  if (!phi.compatible_with(psi))
    throw GridError("inner product of states on different grids or channel sets");
  const auto w = phi.grid().weights();
  complex acc{};
  for (std::size_t j = 0; j < phi.channel_count(); ++j) {
    const auto a = phi.channel(j);
    const auto b = psi.channel(j);
    for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * std::conj(a[i]) * b[i];
  }
  return acc;
}

// ---------------------------------------------------------------------------

MomentumGrid::MomentumGrid(GridPtr energy_grid, double mass)
    : energy_grid_(std::move(energy_grid)), mass_(mass) {
  if (!(mass_ > 0.0)) throw GridError("mass must be > 0");
  const auto& g = *energy_grid_;
  magnitudes_.resize(g.size());
  weights_.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    magnitudes_[k] = std::sqrt(2.0 * mass_ * g.node(k));
    // dp = (mu / p) dE
    weights_[k] = g.weight(k) * mass_ / magnitudes_[k];
  }
}

std::vector<double> MomentumGrid::nodes() const {
  std::vector<double> out;
  out.reserve(2 * magnitudes_.size());
  for (auto it = magnitudes_.rbegin(); it != magnitudes_.rend(); ++it) out.push_back(-*it);
  out.insert(out.end(), magnitudes_.begin(), magnitudes_.end());
  return out;
}

MomentumState::MomentumState(std::shared_ptr<const MomentumGrid> grid,
                             std::vector<complex> positive, std::vector<complex> negative)
    : grid_(std::move(grid)), positive_(std::move(positive)), negative_(std::move(negative)) {
  if (!grid_) throw GridError("momentum state without a grid");
  if (positive_.size() != grid_->half_size() || negative_.size() != grid_->half_size())
    throw GridError("momentum samples do not match the grid size");
}

double MomentumState::norm_squared() const {
  const auto w = grid_->weights();
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k)
    acc += w[k] * (std::norm(positive_[k]) + std::norm(negative_[k]));
  return acc;
}

namespace {

// Even- and odd-node partial sums each estimate the integral with doubled
// weights; their difference is the Nyquist (aliasing) component.
double aliasing_indicator(std::span<const double> w, std::span<const complex> a,
                          std::span<const complex> b) {
  double even = 0.0, odd = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double v = w[k] * (std::norm(a[k]) + std::norm(b[k]));
    (k % 2 == 0 ? even : odd) += v;
  }
  return std::abs(2.0 * even - 2.0 * odd) / 2.0;
}

}  // namespace

ChannelState momentum_to_energy(const MomentumState& state) {
  const auto& g = state.grid();
  const double mu = g.mass();
  const auto p = g.magnitudes();
  const double alias = aliasing_indicator(g.weights(), state.positive(), state.negative());
  if (alias > 1e-8) {
    std::ostringstream msg;
    msg << "momentum grid too coarse: even/odd norm estimates differ by " << alias;
    throw GridError(msg.str());
  }
  std::vector<std::vector<complex>> amps(2, std::vector<complex>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double jac = std::sqrt(mu / p[k]);
    amps[0][k] = jac * state.positive()[k];
    amps[1][k] = jac * state.negative()[k];
  }
  return {g.energy_grid_ptr(), {"+", "-"}, std::move(amps), mu};
}

MomentumState energy_to_momentum(const ChannelState& state,
                                 std::shared_ptr<const MomentumGrid> grid) {
  if (state.labels() != std::vector<std::string>{"+", "-"})
    throw GridError("energy_to_momentum needs channels {+, -}");
  if (!grid->energy_grid().same_as(state.grid()))
    throw GridError("momentum grid was not built from the state's energy grid");
  const auto p = grid->magnitudes();
  const double mu = grid->mass();
  std::vector<complex> pos(p.size()), neg(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double jac = std::sqrt(p[k] / mu);
    pos[k] = jac * state.channel(0)[k];
    neg[k] = jac * state.channel(1)[k];
  }
  return {std::move(grid), std::move(pos), std::move(neg)};
}

std::vector<complex> grid_derivative(const EnergyGrid& grid,
                                     std::span<const complex> f) {
  const std::size_t n = f.size();
  const double h = grid.step();
  std::vector<complex> d(n);
  if (n < 5) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == n ? i : i + 1;
      d[i] = (f[hi] - f[lo]) / (h * static_cast<double>(hi - lo));
    }
    return d;
  }
  const double c = 1.0 / (12.0 * h);
  d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  const std::size_t m = n - 1;
  d[m] = c * (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]);
  d[m - 1] = c * (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]);
  return d;
}

ChannelInterpolant::ChannelInterpolant(GridPtr grid, std::span<const complex> values)
    : grid_(std::move(grid)), values_(values.begin(), values.end()) {
  if (values_.size() != grid_->size()) throw GridError("interpolant size mismatch");
  slopes_ = grid_derivative(*grid_, values_);
}

complex ChannelInterpolant::operator()(double energy) const {
  const auto& g = *grid_;
  if (!(energy >= g.e_min()) || !(energy <= g.e_max())) return {};
  const double x = g.spacing() == Spacing::linear ? energy : std::log(energy);
  const double h = g.step();
  const double pos = (x - g.coordinate(0)) / h;
  auto i = static_cast<std::size_t>(std::max(0.0, std::floor(pos)));
  i = std::min(i, g.size() - 2);
  const double s = pos - static_cast<double>(i);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] +
         h11 * h * slopes_[i + 1];
}

}  // namespace timearrow
