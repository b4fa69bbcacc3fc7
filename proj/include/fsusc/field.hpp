// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_FIELD_HPP
#define FSUSC_FIELD_HPP

#include <algorithm>
#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>
#include "fsusc/error.hpp"
#include "fsusc/mesh.hpp"
#include "fsusc/vec3.hpp"

namespace fsusc
{

//
// One 3-vector per cell of the bounding box, stored interleaved
// (x0, y0, z0, x1, ...). Cells outside the mask hold the zero vector: set()
// ignores them and the arithmetic below preserves the invariant.
//
template <class T>
class Field
{
public:
  using value_type = T;

  explicit Field(std::shared_ptr<const Mesh> mesh)
    : mesh_(std::move(mesh)), data_(3 * mesh_->cell_count(), T{})
  {
  }

  static Field uniform(std::shared_ptr<const Mesh> mesh, const Vec3<T> &v)
  {
    Field f(std::move(mesh));
    for (std::size_t c : f.mesh().interior_cells())
      f.set(c, v);
    return f;
  }

  const Mesh &mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh> &mesh_ptr() const { return mesh_; }
  std::size_t cell_count() const { return mesh_->cell_count(); }

  Vec3<T> get(std::size_t cell) const
  {
    return {data_[3 * cell], data_[3 * cell + 1], data_[3 * cell + 2]};
  }
  void set(std::size_t cell, const Vec3<T> &v)
  {
    if (!mesh_->is_interior(cell))
      return;
    data_[3 * cell] = v.x;
    data_[3 * cell + 1] = v.y;
    data_[3 * cell + 2] = v.z;
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  // Zeroes every exterior cell; used after writing raw values().
  void restrict_to_mask()
  {
    for (std::size_t c = 0; c < cell_count(); ++c)
      if (!mesh_->is_interior(c))
        data_[3 * c] = data_[3 * c + 1] = data_[3 * c + 2] = T{};
  }

  Field &operator+=(const Field &o)
  {
    check_same_mesh(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      data_[k] += o.data_[k];
    return *this;
  }
  Field &operator-=(const Field &o)
  {
    check_same_mesh(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      data_[k] -= o.data_[k];
    return *this;
  }
  Field &operator*=(const T &s)
  {
    for (auto &v : data_)
      v *= s;
    return *this;
  }
  // this += s * o
  Field &axpy(const T &s, const Field &o)
  {
    check_same_mesh(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      data_[k] += s * o.data_[k];
    return *this;
  }
  friend Field operator+(Field a, const Field &b) { return a += b; }
  friend Field operator-(Field a, const Field &b) { return a -= b; }
  friend Field operator*(const T &s, Field a) { return a *= s; }

  void check_same_mesh(const Field &o) const
  {
    if (o.mesh_ != mesh_ && !(o.mesh_->dims() == mesh_->dims() &&
                              o.mesh_->h() == mesh_->h() &&
                              std::equal(o.mesh_->mask().begin(), o.mesh_->mask().end(),
                                         mesh_->mask().begin())))
      throw Error(ErrorCode::InvalidArgument, "field mesh mismatch");
  }

private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<T> data_;
};

using VectorField = Field<double>;
using ComplexVectorField = Field<cplx>;

inline double conj_if(double v) { return v; }
inline cplx conj_if(const cplx &v) { return std::conj(v); }

// L2 product h^3 sum_i a_i . conj(b_i) over interior cells.
template <class T>
T dot(const Field<T> &a, const Field<T> &b)
{
  a.check_same_mesh(b);
  T sum{};
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t c : a.mesh().interior_cells())
    for (std::size_t k = 3 * c; k < 3 * c + 3; ++k)
      sum += av[k] * conj_if(bv[k]);
  return a.mesh().cell_volume() * sum;
}

// Euclidean norm of the raw interior values (no h^3 weight).
template <class T>
double l2_norm(const Field<T> &a)
{
  double s = 0.0;
  for (const auto &v : a.values())
    s += std::norm(v);
  return std::sqrt(s);
}

template <class T>
double max_norm(const Field<T> &a)
{
  double m = 0.0;
  for (std::size_t c : a.mesh().interior_cells())
    m = std::max(m, norm(a.get(c)));
  return m;
}

inline ComplexVectorField to_complex(const VectorField &f)
{
  ComplexVectorField out(f.mesh_ptr());
  auto src = f.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < src.size(); ++k)
    dst[k] = src[k];
  return out;
}

}  // namespace fsusc

#endif  // FSUSC_FIELD_HPP
