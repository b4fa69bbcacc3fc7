// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/linear_system.hpp"

namespace fsusc
{

template <class T>
Field<T> apply_D1(const Field<T> &w, const VectorField &m, double alpha)
{
  Field<T> out(w.mesh_ptr());
  for (std::size_t c : w.mesh().interior_cells())
  {
    const Vec3d mc = m.get(c);
    const Vec3<T> t = cross(mc, w.get(c));
    out.set(c, -t - alpha * cross(mc, t));
  }
  return out;
}

template <class T>
Field<T> apply_D1_adjoint(const Field<T> &w, const VectorField &m, double alpha)
{
  Field<T> out(w.mesh_ptr());
  for (std::size_t c : w.mesh().interior_cells())
  {
    const Vec3d mc = m.get(c);
    const Vec3<T> t = cross(mc, w.get(c));
    out.set(c, t - alpha * cross(mc, t));
  }
  return out;
}

template <class T>
Field<T> project_tangent(const Field<T> &w, const VectorField &m)
{
  Field<T> out(w.mesh_ptr());
  for (std::size_t c : w.mesh().interior_cells())
  {
    const Vec3d mc = m.get(c);
    const Vec3<T> wc = w.get(c);
    out.set(c, wc - dot(mc, wc) * mc);
  }
  return out;
}

FrequencySystem::FrequencySystem(double omega, std::shared_ptr<const EquilibriumState> eq,
                                 std::shared_ptr<const EffectiveField> field)
  : omega_(omega), eq_(std::move(eq)), field_(std::move(field))
{
  if (!(omega > 0.0))
    throw Error(ErrorCode::InvalidArgument, "omega must be > 0");
}

ComplexVectorField FrequencySystem::apply_shifted_field(const ComplexVectorField &u) const
{
  ComplexVectorField out = field_->apply(u);
  const auto &beta = eq_->diagonal.beta;
  for (std::size_t c : u.mesh().interior_cells())
    out.set(c, out.get(c) - beta[c] * u.get(c));
  return out;
}

ComplexVectorField FrequencySystem::apply_M(const ComplexVectorField &u) const
{
  ComplexVectorField out = apply_D1(apply_shifted_field(u), eq_->m, alpha());
  out *= cplx(-1.0);
  out.axpy(cplx(0.0, omega_), u);
  return out;
}

ComplexVectorField FrequencySystem::apply_M_adjoint(const ComplexVectorField &u) const
{
  ComplexVectorField out = apply_shifted_field(apply_D1_adjoint(u, eq_->m, alpha()));
  out *= cplx(-1.0);
  out.axpy(cplx(0.0, -omega_), u);
  return out;
}

ComplexVectorField FrequencySystem::build_rhs(const Vec3d &zeta) const
{
  const VectorField y = VectorField::uniform(field_->mesh_ptr(), zeta);
  return to_complex(apply_D1(y, eq_->m, alpha()));
}

template Field<double> apply_D1(const Field<double> &, const VectorField &, double);
template Field<cplx> apply_D1(const Field<cplx> &, const VectorField &, double);
template Field<cplx> apply_D1_adjoint(const Field<cplx> &, const VectorField &, double);
template Field<double> project_tangent(const Field<double> &, const VectorField &);
template Field<cplx> project_tangent(const Field<cplx> &, const VectorField &);

}  // namespace fsusc
