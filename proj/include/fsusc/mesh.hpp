// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_MESH_HPP
#define FSUSC_MESH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fsusc
{

struct Dims
{
  int nx = 1, ny = 1, nz = 1;

  std::size_t count() const
  {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  int operator[](int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
  friend bool operator==(const Dims &, const Dims &) = default;
};

enum class ShapeKind
{
  Box,
  CylinderZ
};

// Rasterization rule for the magnetic body inside the bounding box. The
// cylinder axis runs along z through the box centre; radius is in cells.
struct ShapeSpec
{
  ShapeKind kind = ShapeKind::Box;
  double radius = 0.0;
};

//
// Regular cubic grid over the bounding box with an interior-cell mask. Cell
// (ix, iy, iz) has linear index ix + nx * (iy + ny * iz).
//
class Mesh
{
public:
  Mesh(Dims dims, double h, std::vector<std::uint8_t> mask);

  const Dims &dims() const { return dims_; }
  double h() const { return h_; }
  double cell_volume() const { return h_ * h_ * h_; }
  std::size_t cell_count() const { return mask_.size(); }
  std::size_t interior_count() const { return interior_.size(); }
  bool is_interior(std::size_t cell) const { return mask_[cell] != 0; }
  bool is_full_box() const { return interior_.size() == mask_.size(); }
  std::span<const std::size_t> interior_cells() const { return interior_; }
  std::span<const std::uint8_t> mask() const { return mask_; }

  std::size_t index(int ix, int iy, int iz) const
  {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(dims_.nx) *
             (static_cast<std::size_t>(iy) +
              static_cast<std::size_t>(dims_.ny) * static_cast<std::size_t>(iz));
  }
  std::array<int, 3> coords(std::size_t cell) const
  {
    const auto nx = static_cast<std::size_t>(dims_.nx);
    const auto ny = static_cast<std::size_t>(dims_.ny);
    return {static_cast<int>(cell % nx), static_cast<int>((cell / nx) % ny),
            static_cast<int>(cell / (nx * ny))};
  }

private:
  Dims dims_;
  double h_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> interior_;
};

// Builds the mesh and its mask by cell-centre inclusion. Throws
// ErrorCode::EmptyDomain when no cell is inside the shape.
std::shared_ptr<const Mesh> make_mesh(Dims dims, double h, ShapeSpec shape = {});

}  // namespace fsusc

#endif  // FSUSC_MESH_HPP
