// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/mesh.hpp"

#include "fsusc/error.hpp"

namespace fsusc
{

Mesh::Mesh(Dims dims, double h, std::vector<std::uint8_t> mask)
  : dims_(dims), h_(h), mask_(std::move(mask))
{
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1)
    throw Error(ErrorCode::InvalidArgument, "mesh dimensions must be positive");
  if (!(h > 0.0))
    throw Error(ErrorCode::InvalidArgument, "cell size h must be positive");
  if (mask_.size() != dims.count())
    throw Error(ErrorCode::InvalidArgument, "mask size does not match mesh dimensions");
  for (std::size_t c = 0; c < mask_.size(); ++c)
    if (mask_[c])
      interior_.push_back(c);
  if (interior_.empty())
    throw Error(ErrorCode::EmptyDomain, "empty domain");
}

std::shared_ptr<const Mesh> make_mesh(Dims dims, double h, ShapeSpec shape)
{
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1)
    throw Error(ErrorCode::InvalidArgument, "mesh dimensions must be positive");
  std::vector<std::uint8_t> mask(dims.count(), 1);
  if (shape.kind == ShapeKind::CylinderZ)
  {
    const double x0 = 0.5 * dims.nx, y0 = 0.5 * dims.ny;
    const double r2 = shape.radius * shape.radius;
    std::size_t c = 0;
    for (int iz = 0; iz < dims.nz; ++iz)
      for (int iy = 0; iy < dims.ny; ++iy)
        for (int ix = 0; ix < dims.nx; ++ix, ++c)
        {
          const double dx = ix + 0.5 - x0, dy = iy + 0.5 - y0;
          mask[c] = (dx * dx + dy * dy <= r2) ? 1 : 0;
        }
  }
  return std::make_shared<const Mesh>(dims, h, std::move(mask));
}

}  // namespace fsusc
