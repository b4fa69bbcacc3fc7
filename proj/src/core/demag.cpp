// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/demag.hpp"

#include <cmath>
#include <numbers>

namespace fsusc
{

namespace
{

using real = long double;

real asinh_ratio(real num, real den2)
{
  return den2 > 0 ? std::asinh(num / std::sqrt(den2)) : 0;
}

// Newell's f: its second mixed difference gives the diagonal coefficients.
real newell_f(real x, real y, real z)
{
  x = std::fabs(x);
  y = std::fabs(y);
  z = std::fabs(z);
  const real x2 = x * x, y2 = y * y, z2 = z * z;
  const real r = std::sqrt(x2 + y2 + z2);
  real f = (2 * x2 - y2 - z2) * r / 6;
  if (y > 0)
    f += 0.5L * y * (z2 - x2) * asinh_ratio(y, x2 + z2);
  if (z > 0)
    f += 0.5L * z * (y2 - x2) * asinh_ratio(z, x2 + y2);
  if (x > 0 && y > 0 && z > 0)
    f -= x * y * z * std::atan(y * z / (x * r));
  return f;
}

// Newell's g (odd in x and y, even in z) for the off-diagonal coefficients.
real newell_g(real x, real y, real z)
{
  real sign = 1;
  if (x < 0)
  {
    sign = -sign;
    x = -x;
  }
  if (y < 0)
  {
    sign = -sign;
    y = -y;
  }
  z = std::fabs(z);
  const real x2 = x * x, y2 = y * y, z2 = z * z;
  const real r = std::sqrt(x2 + y2 + z2);
  real g = -x * y * r / 3;
  if (z > 0)
    g += x * y * z * asinh_ratio(z, x2 + y2);
  if (x > 0)
    g += y / 6 * (3 * z2 - y2) * asinh_ratio(x, y2 + z2);
  if (y > 0)
    g += x / 6 * (3 * z2 - x2) * asinh_ratio(y, x2 + z2);
  if (x > 0 && y > 0 && z > 0)
  {
    g -= z2 * z / 6 * std::atan(x * y / (z * r));
    g -= z * y2 / 2 * std::atan(x * z / (y * r));
    g -= z * x2 / 2 * std::atan(y * z / (x * r));
  }
  return sign * g;
}

// 27-point second difference with weights (2, -1, -1) per axis, for unit
// cubes. Returns the (positive trace) demagnetizing factor.
template <class F>
real mixed_difference(F &&fn, real x, real y, real z)
{
  static constexpr int offs[3] = {0, -1, 1};
  static constexpr real w[3] = {2, -1, -1};
  real sum = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        sum += w[i] * w[j] * w[k] * fn(x + offs[i], y + offs[j], z + offs[k]);
  return sum / (4 * std::numbers::pi_v<real>);
}

std::size_t wrap(int d, int n) { return static_cast<std::size_t>(d < 0 ? d + n : d); }

}  // namespace

SymTensor3 demag_interaction(int dx, int dy, int dz)
{
  const real x = dx, y = dy, z = dz;
  auto nxx = [](real a, real b, real c) { return mixed_difference(newell_f, a, b, c); };
  auto nxy = [](real a, real b, real c) { return mixed_difference(newell_g, a, b, c); };
  SymTensor3 t;
  // The field operator is minus the demagnetizing tensor.
  t.xx = -static_cast<double>(nxx(x, y, z));
  t.yy = -static_cast<double>(nxx(y, x, z));
  t.zz = -static_cast<double>(nxx(z, y, x));
  t.xy = -static_cast<double>(nxy(x, y, z));
  t.xz = -static_cast<double>(nxy(x, z, y));
  t.yz = -static_cast<double>(nxy(y, z, x));
  return t;
}

DemagKernel::DemagKernel(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh))
{
  const Dims n = mesh_->dims();
  const Dims p{2 * n.nx, 2 * n.ny, 2 * n.nz};
  const int tx = 2 * n.nx - 1, ty = 2 * n.ny - 1, tz = 2 * n.nz - 1;
  table_.resize(static_cast<std::size_t>(tx) * ty * tz);
  for (int dz = -(n.nz - 1); dz < n.nz; ++dz)
    for (int dy = -(n.ny - 1); dy < n.ny; ++dy)
      for (int dx = -(n.nx - 1); dx < n.nx; ++dx)
      {
        const std::size_t k = static_cast<std::size_t>(dx + n.nx - 1) +
                              static_cast<std::size_t>(tx) *
                                (static_cast<std::size_t>(dy + n.ny - 1) +
                                 static_cast<std::size_t>(ty) * (dz + n.nz - 1));
        table_[k] = demag_interaction(dx, dy, dz);
      }

  fft_ = std::make_unique<Fft3d>(p);
  for (auto &s : spectrum_)
    s.assign(p.count(), cplx{});
  for (int dz = -(n.nz - 1); dz < n.nz; ++dz)
    for (int dy = -(n.ny - 1); dy < n.ny; ++dy)
      for (int dx = -(n.nx - 1); dx < n.nx; ++dx)
      {
        const SymTensor3 &t = tensor(dx, dy, dz);
        const std::size_t k =
          wrap(dx, p.nx) + static_cast<std::size_t>(p.nx) *
                             (wrap(dy, p.ny) + static_cast<std::size_t>(p.ny) * wrap(dz, p.nz));
        spectrum_[0][k] = t.xx;
        spectrum_[1][k] = t.yy;
        spectrum_[2][k] = t.zz;
        spectrum_[3][k] = t.xy;
        spectrum_[4][k] = t.xz;
        spectrum_[5][k] = t.yz;
      }
  for (auto &s : spectrum_)
    fft_->forward(s);
}

const SymTensor3 &DemagKernel::tensor(int dx, int dy, int dz) const
{
  const Dims n = mesh_->dims();
  const int tx = 2 * n.nx - 1, ty = 2 * n.ny - 1;
  return table_[static_cast<std::size_t>(dx + n.nx - 1) +
                static_cast<std::size_t>(tx) *
                  (static_cast<std::size_t>(dy + n.ny - 1) +
                   static_cast<std::size_t>(ty) * (dz + n.nz - 1))];
}

template <class T>
Field<T> DemagKernel::apply(const Field<T> &m) const
{
  const Dims p = fft_->dims();
  const std::size_t np = p.count();
  std::array<std::vector<cplx>, 3> buf;
  for (auto &b : buf)
    b.assign(np, cplx{});

  const auto mv = m.values();
  for (std::size_t c : mesh_->interior_cells())
  {
    const auto [ix, iy, iz] = mesh_->coords(c);
    const std::size_t k =
      ix + static_cast<std::size_t>(p.nx) * (iy + static_cast<std::size_t>(p.ny) * iz);
    for (int a = 0; a < 3; ++a)
      buf[a][k] = mv[3 * c + a];
  }
  for (auto &b : buf)
    fft_->forward(b);
  for (std::size_t k = 0; k < np; ++k)
  {
    const cplx x = buf[0][k], y = buf[1][k], z = buf[2][k];
    buf[0][k] = spectrum_[0][k] * x + spectrum_[3][k] * y + spectrum_[4][k] * z;
    buf[1][k] = spectrum_[3][k] * x + spectrum_[1][k] * y + spectrum_[5][k] * z;
    buf[2][k] = spectrum_[4][k] * x + spectrum_[5][k] * y + spectrum_[2][k] * z;
  }
  for (auto &b : buf)
    fft_->backward(b);

  Field<T> out(m.mesh_ptr());
  auto ov = out.values();
  const double scale = 1.0 / static_cast<double>(np);
  for (std::size_t c : mesh_->interior_cells())
  {
    const auto [ix, iy, iz] = mesh_->coords(c);
    const std::size_t k =
      ix + static_cast<std::size_t>(p.nx) * (iy + static_cast<std::size_t>(p.ny) * iz);
    for (int a = 0; a < 3; ++a)
    {
      if constexpr (std::is_same_v<T, double>)
        ov[3 * c + a] = buf[a][k].real() * scale;
      else
        ov[3 * c + a] = buf[a][k] * scale;
    }
  }
  return out;
}

template Field<double> DemagKernel::apply(const Field<double> &) const;
template Field<cplx> DemagKernel::apply(const Field<cplx> &) const;

}  // namespace fsusc
