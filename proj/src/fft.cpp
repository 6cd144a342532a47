#include "fft.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace timearrow::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using Buffer = std::unique_ptr<fftw_complex[], FftwFree>;

Buffer allocate(std::size_t n) {
  Buffer b(fftw_alloc_complex(n));
  if (!b) throw std::bad_alloc();
  return b;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FFT size must be positive");
  auto in = allocate(n);
  auto out = allocate(n);
  std::lock_guard lock(planner_mutex());
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(len, in.get(), out.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_plan_ || !backward_plan_) throw std::runtime_error("FFTW planning failed");
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(forward_plan_);
  if (backward_plan_) fftw_destroy_plan(backward_plan_);
}

std::vector<std::complex<double>> Fft::forward(std::span<const std::complex<double>> in) const {
  return run(forward_plan_, in);
}

std::vector<std::complex<double>> Fft::backward(std::span<const std::complex<double>> in) const {
  return run(backward_plan_, in);
}

std::vector<std::complex<double>> Fft::run(fftw_plan plan,
                                           std::span<const std::complex<double>> in) const {
  if (in.size() > n_) throw std::invalid_argument("FFT input longer than the plan");
  auto a = allocate(n_);
  auto b = allocate(n_);
  auto* src = reinterpret_cast<std::complex<double>*>(a.get());
  std::copy(in.begin(), in.end(), src);
  std::fill(src + in.size(), src + n_, std::complex<double>{});
  fftw_execute_dft(plan, a.get(), b.get());
  const auto* dst = reinterpret_cast<const std::complex<double>*>(b.get());
  return {dst, dst + n_};
}

}  // namespace timearrow::detail

#include <map>

namespace timearrow::detail {

std::shared_ptr<const Fft> shared_fft(std::size_t n) {
  static std::mutex m;
  static std::map<std::size_t, std::shared_ptr<const Fft>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const Fft>(n);
  return slot;
}

}  // namespace timearrow::detail
