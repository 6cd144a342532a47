#include "timearrow/galapon_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace timearrow {

using std::numbers::pi;

DiscreteOperator::DiscreteOperator(std::vector<double> energies, std::vector<complex> matrix)
    : energies_(std::move(energies)), matrix_(std::move(matrix)) {
  if (matrix_.size() != energies_.size() * energies_.size())
    throw GridError("operator matrix must be n x n for n energies");
}

double DiscreteOperator::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t n = 0; n < size(); ++n)
    for (std::size_t m = n; m < size(); ++m)
      worst = std::max(worst, std::abs((*this)(n, m) - std::conj((*this)(m, n))));
  return worst;
}

DiscreteOperator discretize_symmetric(const EnergyGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> cell(n);
  for (std::size_t i = 0; i < n; ++i) cell[i] = grid.step() * grid.jacobian(i);
  std::vector<complex> a(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (r != c)
        a[r * n + c] = complex(0.0, std::sqrt(cell[r] * cell[c]) / pi) /
                       (grid.node(r) - grid.node(c));
  return {std::vector<double>(grid.nodes().begin(), grid.nodes().end()), std::move(a)};
}

DiscreteOperator galapon_T(std::span<const double> energies) {
  const std::size_t n = energies.size();
  std::vector<double> sorted(energies.begin(), energies.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw GridError("energies must be distinct");
  std::vector<complex> a(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (r != c) a[r * n + c] = complex(0.0, 1.0) / (energies[r] - energies[c]);
  return {std::vector<double>(energies.begin(), energies.end()), std::move(a)};
}

double proportionality_defect(const DiscreteOperator& a, const DiscreteOperator& b,
                              double factor) {
  if (a.size() != b.size()) throw GridError("operators have different sizes");
  double worst = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n)
    for (std::size_t m = 0; m < a.size(); ++m)
      worst = std::max(worst, std::abs(a(n, m) - factor * b(n, m)));
  return worst;
}

WitnessTrace lyapunov_violation_witness(const DiscreteOperator& op,
                                        std::span<const complex> state,
                                        std::span<const double> times) {
  const std::size_t n = op.size();
  if (state.size() != n) throw GridError("state size does not match the operator");
  double norm2 = 0.0;
  for (const auto& c : state) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > 1e-10) throw GridError("witness state must be normalized");

  WitnessTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.values.reserve(times.size());
  std::vector<complex> psi(n);
  for (const double t : times) {
    for (std::size_t k = 0; k < n; ++k) psi[k] = std::polar(1.0, -op.energies()[k] * t) * state[k];
    complex acc{};
    for (std::size_t r = 0; r < n; ++r) {
      complex row{};
      for (std::size_t c = 0; c < n; ++c) row += op(r, c) * psi[c];
      acc += std::conj(psi[r]) * row;
    }
    trace.values.push_back(acc.real());
    trace.max_imaginary = std::max(trace.max_imaginary, std::abs(acc.imag()));
  }

  constexpr double flat = 1e-12;
  for (std::size_t k = 1; k + 1 < trace.values.size(); ++k) {
    const double before = trace.values[k] - trace.values[k - 1];
    const double after = trace.values[k + 1] - trace.values[k];
    if (std::abs(before) > flat && std::abs(after) > flat && before * after < 0.0) {
      trace.non_monotone = true;
      trace.extremum_index = k;
      break;
    }
  }
  return trace;
}

}  // namespace timearrow
