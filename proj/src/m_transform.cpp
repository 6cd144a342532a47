#include "timearrow/m_transform.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "timearrow/states.hpp"

namespace timearrow {

using std::numbers::pi;

namespace {

// psi(m) = Phi(nu) * sqrt(2 / pi) cosh(pi nu)
double amplitude_factor(double nu) { return std::sqrt(2.0 / pi) * std::cosh(pi * nu); }

void require_logarithmic(const EnergyGrid& grid) {
  if (grid.spacing() != Spacing::logarithmic)
    throw GridError("the m-representation requires a logarithmic energy grid");
}

}  // namespace

double nu_of_m(double m) {
  if (!(m > 0.0 && m < 1.0)) throw GridError("m must lie strictly inside (0, 1)");
  return std::log((1.0 - m) / m) / (2.0 * pi);
}

double m_of_nu(double nu) {
  const double x = 2.0 * pi * nu;
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

MGrid::MGrid(const EnergyGrid& grid)
    : size_(grid.size()),
      centre_(grid.size() / 2),
      nu_step_(0.0),
      u0_(0.0),
      step_(grid.step()) {
  require_logarithmic(grid);
  nu_step_ = 2.0 * pi / (static_cast<double>(size_) * step_);
  u0_ = std::log(grid.e_min());
}

double MGrid::nu(std::size_t k) const {
  return (static_cast<double>(k) - static_cast<double>(centre_)) * nu_step_;
}

double MGrid::m(std::size_t k) const { return m_of_nu(nu(k)); }

double MGrid::m_weight(std::size_t k) const {
  const double c = std::cosh(pi * nu(k));
  return pi * nu_step_ / (2.0 * c * c);
}

std::vector<double> MGrid::m_nodes() const {
  std::vector<double> out(size_);
  for (std::size_t k = 0; k < size_; ++k) out[k] = m(k);
  return out;
}

std::vector<double> MGrid::nu_nodes() const {
  std::vector<double> out(size_);
  for (std::size_t k = 0; k < size_; ++k) out[k] = nu(k);
  return out;
}

bool MGrid::same_as(const MGrid& other) const {
  return size_ == other.size_ && centre_ == other.centre_ && nu_step_ == other.nu_step_ &&
         u0_ == other.u0_ && step_ == other.step_;
}

MDistribution::MDistribution(MGrid grid, std::vector<std::string> labels,
                             std::vector<std::vector<complex>> nu_amplitudes)
    : grid_(grid), labels_(std::move(labels)), amplitudes_(std::move(nu_amplitudes)) {
  if (labels_.size() != amplitudes_.size())
    throw GridError("channel label count does not match the amplitude count");
  for (const auto& a : amplitudes_)
    if (a.size() != grid_.size()) throw GridError("m-amplitude length does not match the grid");
}

complex MDistribution::amplitude(std::size_t j, std::size_t k) const {
  return amplitudes_[j][k] * amplitude_factor(grid_.nu(k));
}

double MDistribution::density(std::size_t j, std::size_t k) const {
  return std::norm(amplitude(j, k));
}

double MDistribution::cell_mass(std::size_t j, std::size_t k) const {
  return std::norm(amplitudes_[j][k]) * grid_.nu_step();
}

double MDistribution::norm_squared() const {
  double acc = 0.0;
  for (std::size_t j = 0; j < amplitudes_.size(); ++j)
    for (std::size_t k = 0; k < grid_.size(); ++k) acc += cell_mass(j, k);
  return acc;
}

double MDistribution::channel_first_moment(std::size_t j) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < grid_.size(); ++k) acc += grid_.m(k) * cell_mass(j, k);
  return acc;
}

double MDistribution::first_moment() const {
  double acc = 0.0;
  for (std::size_t j = 0; j < amplitudes_.size(); ++j) acc += channel_first_moment(j);
  return acc;
}

complex eigenfunction(double m, double energy) {
  if (!(energy > 0.0)) throw GridError("eigenfunctions are defined for E > 0");
  const double nu = nu_of_m(m);
  const double modulus = 1.0 / (2.0 * pi * std::sqrt(m * (1.0 - m)) * std::sqrt(energy));
  return std::polar(modulus, -nu * std::log(energy));
}

MDistribution to_m_representation(const ChannelState& psi) {
  const auto& g = psi.grid();
  MGrid mg(g);
  const std::size_t n = g.size();
  const auto fft = detail::shared_fft(n);
  const auto sw = g.sqrt_weights();
  const double scale = std::sqrt(g.step() / (2.0 * pi));
  const double c = static_cast<double>(mg.centre());
  const double dn = static_cast<double>(n);

  std::vector<complex> twist(n), shift(n);
  for (std::size_t i = 0; i < n; ++i)
    twist[i] = std::polar(1.0, -2.0 * pi * std::fmod(c * static_cast<double>(i), dn) / dn);
  for (std::size_t k = 0; k < n; ++k) shift[k] = std::polar(scale, mg.nu(k) * mg.log_origin());

  std::vector<std::vector<complex>> out;
  out.reserve(psi.channel_count());
  for (std::size_t j = 0; j < psi.channel_count(); ++j) {
    const auto v = psi.channel(j);
    std::vector<complex> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = sw[i] * v[i] * twist[i];
    auto y = fft->backward(x);
    for (std::size_t k = 0; k < n; ++k) y[k] *= shift[k];
    out.push_back(std::move(y));
  }
  return {mg, psi.labels(), std::move(out)};
}

ChannelState from_m_representation(const MDistribution& phi, GridPtr grid, double mass) {
  const auto& g = *grid;
  require_logarithmic(g);
  const MGrid mg(g);
  if (!mg.same_as(phi.grid())) throw GridError("m-distribution does not belong to this grid");
  const std::size_t n = g.size();
  const auto fft = detail::shared_fft(n);
  const auto sw = g.sqrt_weights();
  const double scale = std::sqrt(g.step() / (2.0 * pi));
  const double c = static_cast<double>(mg.centre());
  const double dn = static_cast<double>(n);

  std::vector<std::vector<complex>> channels;
  channels.reserve(phi.channel_count());
  for (std::size_t j = 0; j < phi.channel_count(); ++j) {
    const auto a = phi.nu_amplitudes(j);
    std::vector<complex> y(n);
    for (std::size_t k = 0; k < n; ++k)
      y[k] = a[k] * std::polar(1.0 / scale, -mg.nu(k) * mg.log_origin());
    auto x = fft->forward(y);
    for (std::size_t i = 0; i < n; ++i) {
      const complex untwist =
          std::polar(1.0, 2.0 * pi * std::fmod(c * static_cast<double>(i), dn) / dn);
      x[i] *= untwist / (dn * sw[i]);
    }
    channels.push_back(std::move(x));
  }
  return {std::move(grid), phi.labels(), std::move(channels), mass};
}

std::vector<complex> m_amplitude(const ChannelState& psi, double m) {
  const auto& g = psi.grid();
  require_logarithmic(g);
  const double nu = nu_of_m(m);
  const auto sw = g.sqrt_weights();
  const double scale = std::sqrt(g.step() / (2.0 * pi)) * amplitude_factor(nu);
  std::vector<complex> phase(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) phase[i] = std::polar(sw[i], nu * g.coordinate(i));
  std::vector<complex> out(psi.channel_count());
  for (std::size_t j = 0; j < psi.channel_count(); ++j) {
    const auto v = psi.channel(j);
    complex acc{};
    for (std::size_t i = 0; i < g.size(); ++i) acc += phase[i] * v[i];
    out[j] = scale * acc;
  }
  return out;
}

double mf_expectation_via_m(const ChannelState& psi, double t) {
  return to_m_representation(evolve(psi, t)).first_moment();
}

GridPtr eigen_test_grid(std::size_t n) {
  return make_energy_grid(std::exp(-60.0), std::exp(60.0), n, Spacing::logarithmic);
}

double eigen_residual(double m, const GridPtr& grid) {
  const auto& g = *grid;
  const std::size_t n = g.size();
  std::vector<complex> gm(n);
  for (std::size_t i = 0; i < n; ++i) gm[i] = eigenfunction(m, g.node(i));
  const auto kg = build_kernel(grid, Orientation::forward).apply(gm);
  double num = 0.0, den = 0.0;
  for (std::size_t i = n / 4; i < n - n / 4; ++i) {
    num += g.weight(i) * std::norm(kg[i] - m * gm[i]);
    den += g.weight(i) * std::norm(gm[i]);
  }
  return std::sqrt(num / den);
}

MDistribution project(const MDistribution& phi, MInterval interval) {
  std::vector<std::vector<complex>> out;
  out.reserve(phi.channel_count());
  for (std::size_t j = 0; j < phi.channel_count(); ++j) {
    const auto a = phi.nu_amplitudes(j);
    std::vector<complex> b(a.begin(), a.end());
    for (std::size_t k = 0; k < b.size(); ++k)
      if (!interval.contains(phi.grid().m(k))) b[k] = 0.0;
    out.push_back(std::move(b));
  }
  return {phi.grid(), phi.labels(), std::move(out)};
}

ChannelState project(const ChannelState& psi, MInterval interval) {
  return from_m_representation(project(to_m_representation(psi), interval), psi.grid_ptr(),
                               psi.mass());
}

double backward_running_probability(const ChannelState& psi, MInterval low, MInterval high,
                                    double t) {
  if (!(low.lo <= low.hi && high.lo <= high.hi && low.hi <= high.lo))
    throw GridError("m-intervals must be ordered and disjoint (low.hi <= high.lo)");
  const auto low_part = project(to_m_representation(psi), low);
  const double low_mass = low_part.norm_squared();
  if (!(low_mass > 0.0)) throw GridError("the state has no weight in the lower m-interval");
  const auto prepared = from_m_representation(low_part, psi.grid_ptr(), psi.mass());
  const auto later = project(to_m_representation(evolve(prepared, t)), high);
  return later.norm_squared() / low_mass;
}

}  // namespace timearrow
