// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/fft.hpp"

#include <fftw3.h>
#include <mutex>
#include <vector>
#include "fsusc/error.hpp"

namespace fsusc
{

namespace
{

// FFTW's planner is not thread safe; plan execution is.
std::mutex &planner_mutex()
{
  static std::mutex m;
  return m;
}

fftw_complex *as_fftw(cplx *p) { return reinterpret_cast<fftw_complex *>(p); }

}  // namespace

Fft3d::Fft3d(Dims dims, int batch) : dims_(dims), batch_(batch)
{
  if (batch < 1)
    throw Error(ErrorCode::InvalidArgument, "FFT batch must be >= 1");
  std::vector<cplx> scratch(size());
  const int n[3] = {dims.nz, dims.ny, dims.nx};
  std::lock_guard lock(planner_mutex());
  // Unaligned plans so that any caller-owned buffer can be passed to
  // fftw_execute_dft; ESTIMATE keeps the plan (and the bits) reproducible.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_many_dft(3, n, batch, as_fftw(scratch.data()), nullptr, batch, 1,
                                     as_fftw(scratch.data()), nullptr, batch, 1, FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_many_dft(3, n, batch, as_fftw(scratch.data()), nullptr, batch, 1,
                                      as_fftw(scratch.data()), nullptr, batch, 1, FFTW_BACKWARD, flags);
  if (!forward_plan_ || !backward_plan_)
    throw Error(ErrorCode::Internal, "FFT planning failed");
}

Fft3d::~Fft3d()
{
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void Fft3d::forward(std::span<cplx> data) const
{
  if (data.size() != size())
    throw Error(ErrorCode::InvalidArgument, "FFT buffer size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()),
                   as_fftw(data.data()));
}

void Fft3d::backward(std::span<cplx> data) const
{
  if (data.size() != size())
    throw Error(ErrorCode::InvalidArgument, "FFT buffer size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data.data()),
                   as_fftw(data.data()));
}

}  // namespace fsusc
