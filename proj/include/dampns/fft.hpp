#pragma once

#include <complex>
#include <span>

#include "dampns/spectral_core.hpp"

namespace dampns {

// In-place FFTW plans over an owned aligned buffer for one grid shape.
// Instances are not shared between threads; use transform_for().
class FourierTransform {
 public:
  FourierTransform(int n, int dim);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  std::size_t size() const { return size_; }

  // out = DFT(in) / N
  void forward(std::span<const double> in, std::span<cplx> out);
  void forward(std::span<const cplx> in, std::span<cplx> out);
  // out = Re(inverse DFT(in)), no scaling
  void inverse(std::span<const cplx> in, std::span<double> out);

 private:
  std::size_t size_;
  void* buffer_;
  void* forward_plan_;
  void* backward_plan_;
};

// Thread-local cached transform for the grid's shape.
FourierTransform& transform_for(const GridSpec& grid);

}  // namespace dampns
