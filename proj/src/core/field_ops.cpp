// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/field_ops.hpp"

#include <cmath>
#include <sstream>

namespace fsusc
{

MaterialParams MaterialParams::uniform(const std::shared_ptr<const Mesh> &mesh, double A,
                                       double K, double alpha, Vec3d u, Vec3d ell,
                                       AnisotropyForm form)
{
  MaterialParams p{A, K, alpha, form, std::vector<Vec3d>(mesh->cell_count(), u),
                   VectorField::uniform(mesh, ell)};
  return p;
}

void MaterialParams::validate() const
{
  if (!(alpha > 0.0))
    throw Error(ErrorCode::InvalidArgument, "alpha must be > 0");
  if (!(A >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "A must be >= 0");
  if (!(K >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "K must be >= 0");
  if (easy_axis.size() != ell.cell_count())
    throw Error(ErrorCode::InvalidArgument, "easy axis size does not match mesh");
  for (std::size_t c : ell.mesh().interior_cells())
    if (std::abs(norm(easy_axis[c]) - 1.0) > 1e-12)
      throw Error(ErrorCode::InvalidArgument, "easy axis u must be a unit vector");
}

template <class T>
Field<T> apply_laplacian(const Field<T> &m)
{
  const Mesh &mesh = m.mesh();
  const Dims d = mesh.dims();
  const double inv_h2 = 1.0 / (mesh.h() * mesh.h());
  Field<T> out(m.mesh_ptr());
  for (std::size_t c : mesh.interior_cells())
  {
    const auto [ix, iy, iz] = mesh.coords(c);
    const Vec3<T> mc = m.get(c);
    Vec3<T> acc{};
    auto visit = [&](int jx, int jy, int jz) {
      if (jx < 0 || jy < 0 || jz < 0 || jx >= d.nx || jy >= d.ny || jz >= d.nz)
        return;
      const std::size_t j = mesh.index(jx, jy, jz);
      if (mesh.is_interior(j))
        acc += m.get(j) - mc;
    };
    visit(ix - 1, iy, iz);
    visit(ix + 1, iy, iz);
    visit(ix, iy - 1, iz);
    visit(ix, iy + 1, iz);
    visit(ix, iy, iz - 1);
    visit(ix, iy, iz + 1);
    out.set(c, inv_h2 * acc);
  }
  return out;
}

template <class T>
Field<T> apply_anisotropy(const Field<T> &m, const MaterialParams &params)
{
  Field<T> out(m.mesh_ptr());
  for (std::size_t c : m.mesh().interior_cells())
  {
    const Vec3<T> mc = m.get(c);
    const Vec3d &u = params.easy_axis[c];
    const T mu = dot(u, mc);
    if (params.anisotropy_form == AnisotropyForm::Printed)
      out.set(c, params.K * (mc - mu * u));
    else
      out.set(c, (params.K * mu) * u);
  }
  return out;
}

EffectiveField::EffectiveField(std::shared_ptr<const Mesh> mesh, MaterialParams params,
                               std::shared_ptr<const DemagKernel> kernel)
  : mesh_(std::move(mesh)), params_(std::move(params)), kernel_(std::move(kernel))
{
  params_.validate();
  if (!(kernel_->mesh().dims() == mesh_->dims()))
    throw Error(ErrorCode::InvalidArgument, "demag kernel built for another mesh");
}

template <class T>
Field<T> EffectiveField::apply(const Field<T> &m) const
{
  Field<T> out = kernel_->apply(m);
  if (params_.A != 0.0)
    out.axpy(T(params_.A), apply_laplacian(m));
  if (params_.K != 0.0)
    out += apply_anisotropy(m, params_);
  return out;
}

double EffectiveField::field_scale() const
{
  return params_.A / (mesh_->h() * mesh_->h()) + 1.0 + params_.K;
}

EquilibriumDiagonal build_B(const VectorField &m, const EffectiveField &field, double tol_eq)
{
  VectorField g = field.apply(m);
  g += field.params().ell;
  EquilibriumDiagonal diag;
  diag.beta.assign(m.cell_count(), 0.0);
  for (std::size_t c : m.mesh().interior_cells())
  {
    const Vec3d mc = m.get(c), gc = g.get(c);
    const double beta = dot(mc, gc);
    diag.beta[c] = beta;
    diag.max_residual = std::max(diag.max_residual, norm(gc - beta * mc));
  }
  if (diag.max_residual > tol_eq)
  {
    std::ostringstream msg;
    msg << "not an equilibrium state (residual " << diag.max_residual << " > " << tol_eq << ")";
    throw Error(ErrorCode::NotEquilibrium, msg.str(), diag.max_residual);
  }
  return diag;
}

template Field<double> apply_laplacian(const Field<double> &);
template Field<cplx> apply_laplacian(const Field<cplx> &);
template Field<double> apply_anisotropy(const Field<double> &, const MaterialParams &);
template Field<cplx> apply_anisotropy(const Field<cplx> &, const MaterialParams &);
template Field<double> EffectiveField::apply(const Field<double> &) const;
template Field<cplx> EffectiveField::apply(const Field<cplx> &) const;

}  // namespace fsusc
