// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_LINEAR_SYSTEM_HPP
#define FSUSC_LINEAR_SYSTEM_HPP

#include <memory>
#include "fsusc/equilibrium.hpp"

namespace fsusc
{

// D1 w = -m x w - alpha m x (m x w), cellwise with real coefficients.
template <class T>
Field<T> apply_D1(const Field<T> &w, const VectorField &m, double alpha);

// D1^H w = m x w - alpha m x (m x w).
template <class T>
Field<T> apply_D1_adjoint(const Field<T> &w, const VectorField &m, double alpha);

// w_i - (m_i . w_i) m_i: orthogonal projection on the tangent space [m]^perp.
template <class T>
Field<T> project_tangent(const Field<T> &w, const VectorField &m);

//
// Frequency-domain operator of the linearized dynamics around an equilibrium:
//
//   M u = i omega u - D1((H_h - B) u)
//
// with B the diagonal of equilibrium coefficients beta_i. Immutable; the
// apply functions may be called concurrently.
//
class FrequencySystem
{
public:
  FrequencySystem(double omega, std::shared_ptr<const EquilibriumState> eq,
                  std::shared_ptr<const EffectiveField> field);

  double omega() const { return omega_; }
  double alpha() const { return field_->params().alpha; }
  const EquilibriumState &eq() const { return *eq_; }
  const EffectiveField &field() const { return *field_; }
  const Mesh &mesh() const { return field_->mesh(); }
  const std::shared_ptr<const EquilibriumState> &eq_ptr() const { return eq_; }
  const std::shared_ptr<const EffectiveField> &field_ptr() const { return field_; }

  // (H_h - B) u
  ComplexVectorField apply_shifted_field(const ComplexVectorField &u) const;
  ComplexVectorField apply_M(const ComplexVectorField &u) const;
  ComplexVectorField apply_M_adjoint(const ComplexVectorField &u) const;

  // D1 applied to the uniform excitation zeta on the interior cells.
  ComplexVectorField build_rhs(const Vec3d &zeta) const;

private:
  double omega_;
  std::shared_ptr<const EquilibriumState> eq_;
  std::shared_ptr<const EffectiveField> field_;
};

extern template Field<double> apply_D1(const Field<double> &, const VectorField &, double);
extern template Field<cplx> apply_D1(const Field<cplx> &, const VectorField &, double);
extern template Field<cplx> apply_D1_adjoint(const Field<cplx> &, const VectorField &, double);
extern template Field<double> project_tangent(const Field<double> &, const VectorField &);
extern template Field<cplx> project_tangent(const Field<cplx> &, const VectorField &);

}  // namespace fsusc

#endif  // FSUSC_LINEAR_SYSTEM_HPP
