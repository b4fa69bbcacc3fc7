// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_DEMAG_HPP
#define FSUSC_DEMAG_HPP

#include <array>
#include <memory>
#include <vector>
#include "fsusc/fft.hpp"
#include "fsusc/field.hpp"

namespace fsusc
{

// Symmetric 3x3 tensor.
struct SymTensor3
{
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  double trace() const { return xx + yy + zz; }

  template <class T>
  Vec3<T> apply(const Vec3<T> &v) const
  {
    return {xx * v.x + xy * v.y + xz * v.z, xy * v.x + yy * v.y + yz * v.z,
            xz * v.x + yz * v.y + zz * v.z};
  }
};

// Cell-averaged demagnetizing field produced in a cube cell by a uniformly
// magnetized cube cell (unit magnetization) displaced by the integer offset
// (dx, dy, dz) in cell units. Analytic cuboid (Newell) formulas evaluated in
// extended precision; the result is scale invariant, so h does not enter.
// The self term is diag(-1/3, -1/3, -1/3).
SymTensor3 demag_interaction(int dx, int dy, int dz);

//
// Block-Toeplitz demagnetizing operator of a mesh, applied by zero-padded FFT
// convolution on a (2nx, 2ny, 2nz) grid. Immutable after construction.
//
class DemagKernel
{
public:
  explicit DemagKernel(std::shared_ptr<const Mesh> mesh);

  const Mesh &mesh() const { return *mesh_; }
  const Dims &padded_dims() const { return fft_->dims(); }

  // Real-space kernel entry for target-minus-source offset, |d_a| < n_a.
  const SymTensor3 &tensor(int dx, int dy, int dz) const;

  template <class T>
  Field<T> apply(const Field<T> &m) const;

private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<SymTensor3> table_;
  std::unique_ptr<Fft3d> fft_;
  // Transformed kernel components in the order xx, yy, zz, xy, xz, yz.
  std::array<std::vector<cplx>, 6> spectrum_;
};

extern template Field<double> DemagKernel::apply(const Field<double> &) const;
extern template Field<cplx> DemagKernel::apply(const Field<cplx> &) const;

}  // namespace fsusc

#endif  // FSUSC_DEMAG_HPP
