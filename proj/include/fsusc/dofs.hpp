// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_DOFS_HPP
#define FSUSC_DOFS_HPP

#include <Eigen/Dense>
#include "fsusc/field.hpp"

namespace fsusc
{

// Interior degrees of freedom: entry 3 * r + a is component a of the r-th
// interior cell (interior cells in increasing linear index order).

inline std::size_t interior_dof_count(const Mesh &mesh) { return 3 * mesh.interior_count(); }

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> gather_interior(const Field<T> &f)
{
  const auto cells = f.mesh().interior_cells();
  Eigen::Matrix<T, Eigen::Dynamic, 1> v(3 * cells.size());
  const auto fv = f.values();
  for (std::size_t r = 0; r < cells.size(); ++r)
    for (int a = 0; a < 3; ++a)
      v[3 * r + a] = fv[3 * cells[r] + a];
  return v;
}

template <class T>
Field<T> scatter_interior(const std::shared_ptr<const Mesh> &mesh,
                          const Eigen::Matrix<T, Eigen::Dynamic, 1> &v)
{
  Field<T> f(mesh);
  const auto cells = mesh->interior_cells();
  auto fv = f.values();
  for (std::size_t r = 0; r < cells.size(); ++r)
    for (int a = 0; a < 3; ++a)
      fv[3 * cells[r] + a] = v[3 * r + a];
  return f;
}

}  // namespace fsusc

#endif  // FSUSC_DOFS_HPP
