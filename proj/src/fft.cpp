#include "dampns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace dampns {

namespace {
// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FourierTransform::FourierTransform(int n, int dim) : size_(1) {
  int shape[3] = {n, n, n};
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto* buf = fftw_alloc_complex(size_);
  buffer_ = buf;
  forward_plan_ = fftw_plan_dft(dim, shape, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft(dim, shape, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FourierTransform::~FourierTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(buffer_);
}

void FourierTransform::forward(std::span<const double> in, std::span<cplx> out) {
  auto* buf = static_cast<fftw_complex*>(buffer_);
  for (std::size_t i = 0; i < size_; ++i) {
    buf[i][0] = in[i];
    buf[i][1] = 0.0;
  }
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = cplx(buf[i][0] * scale, buf[i][1] * scale);
}

void FourierTransform::forward(std::span<const cplx> in, std::span<cplx> out) {
  auto* buf = static_cast<fftw_complex*>(buffer_);
  for (std::size_t i = 0; i < size_; ++i) {
    buf[i][0] = in[i].real();
    buf[i][1] = in[i].imag();
  }
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = cplx(buf[i][0] * scale, buf[i][1] * scale);
}

void FourierTransform::inverse(std::span<const cplx> in, std::span<double> out) {
  auto* buf = static_cast<fftw_complex*>(buffer_);
  for (std::size_t i = 0; i < size_; ++i) {
    buf[i][0] = in[i].real();
    buf[i][1] = in[i].imag();
  }
  fftw_execute(static_cast<fftw_plan>(backward_plan_));
  for (std::size_t i = 0; i < size_; ++i) out[i] = buf[i][0];
}

FourierTransform& transform_for(const GridSpec& grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<FourierTransform>> cache;
  auto key = std::make_pair(grid.n, grid.dim);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<FourierTransform>(grid.n, grid.dim)).first;
  }
  return *it->second;
}

}  // namespace dampns
