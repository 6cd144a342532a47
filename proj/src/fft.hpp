#pragma once

// Complex 1D DFT backed by FFTW. Plans are built once (the planner is
// serialized by a global mutex) and executed with the new-array interface,
// so one Fft may be shared across threads.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <fftw3.h>

namespace timearrow::detail {

class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }

  /// out_k = sum_j in_j exp(-2 pi i j k / n)
  std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) const;
  /// out_k = sum_j in_j exp(+2 pi i j k / n), unnormalized
  std::vector<std::complex<double>> backward(std::span<const std::complex<double>> in) const;

 private:
  std::vector<std::complex<double>> run(fftw_plan plan,
                                        std::span<const std::complex<double>> in) const;

  std::size_t n_;
  fftw_plan forward_plan_ = nullptr;
  fftw_plan backward_plan_ = nullptr;
};

}  // namespace timearrow::detail

#include <memory>

namespace timearrow::detail {

/// Process-wide plan cache keyed by transform size.
std::shared_ptr<const Fft> shared_fft(std::size_t n);

}  // namespace timearrow::detail
