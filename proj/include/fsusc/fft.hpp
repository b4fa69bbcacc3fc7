// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_FFT_HPP
#define FSUSC_FFT_HPP

#include <span>
#include "fsusc/mesh.hpp"
#include "fsusc/vec3.hpp"

namespace fsusc
{

//
// In-place 3D complex transform over a grid laid out like Mesh (x fastest).
// Plans are created once; execution is reentrant, so one instance may be
// shared by concurrent callers that each own their buffers. backward() is
// unnormalized: backward(forward(x)) = size() * x. With batch > 1 the buffer
// holds batch interleaved grids (entry batch * cell + b).
//
class Fft3d
{
public:
  explicit Fft3d(Dims dims, int batch = 1);
  ~Fft3d();
  Fft3d(const Fft3d &) = delete;
  Fft3d &operator=(const Fft3d &) = delete;

  const Dims &dims() const { return dims_; }
  int batch() const { return batch_; }
  // Buffer length expected by forward() and backward().
  std::size_t size() const { return dims_.count() * static_cast<std::size_t>(batch_); }

  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;

private:
  Dims dims_;
  int batch_;
  void *forward_plan_ = nullptr;
  void *backward_plan_ = nullptr;
};

}  // namespace fsusc

#endif  // FSUSC_FFT_HPP
