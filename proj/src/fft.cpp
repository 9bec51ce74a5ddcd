#include "bnls/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace bnls {
namespace {

// FFTW planner calls are not thread safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

} // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FftPlan: length must be positive");
  std::lock_guard lock(planner_mutex());
  auto* buf = fftw_alloc_complex(n);
  if (!buf) throw std::bad_alloc();
  buffer_ = buf;
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(buffer_);
}

void FftPlan::forward(const cplx* in, cplx* out) {
  auto* buf = static_cast<cplx*>(buffer_);
  std::copy(in, in + n_, buf);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(buf, buf + n_, out);
}

void FftPlan::backward(const cplx* in, cplx* out) {
  auto* buf = static_cast<cplx*>(buffer_);
  std::copy(in, in + n_, buf);
  fftw_execute(static_cast<fftw_plan>(backward_plan_));
  std::copy(buf, buf + n_, out);
}

FftPlan& fft_plan(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

} // namespace bnls
