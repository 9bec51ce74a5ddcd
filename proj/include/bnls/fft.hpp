#pragma once

#include <complex>
#include <cstddef>

namespace bnls {

using cplx = std::complex<double>;

// Complex DFT of fixed length backed by FFTW (FFTW_ESTIMATE plans, so results
// do not depend on timing measurements). Transforms are unnormalized:
//   forward:  X_k = sum_j x_j e^{-2 pi i jk/n}
//   backward: x_j = sum_k X_k e^{+2 pi i jk/n}
// Input and output may alias. A plan object must not be used by two threads at
// once; fft_plan() hands out one cached plan per thread and length.
class FftPlan {
public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  [[nodiscard]] std::size_t size() const { return n_; }
  void forward(const cplx* in, cplx* out);
  void backward(const cplx* in, cplx* out);

private:
  std::size_t n_;
  void* buffer_;
  void* forward_plan_;
  void* backward_plan_;
};

FftPlan& fft_plan(std::size_t n);

} // namespace bnls
