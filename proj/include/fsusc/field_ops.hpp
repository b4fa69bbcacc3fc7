// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_FIELD_OPS_HPP
#define FSUSC_FIELD_OPS_HPP

#include <memory>
#include <vector>
#include "fsusc/demag.hpp"
#include "fsusc/field.hpp"

namespace fsusc
{

// Printed: K (m - (m.u) u). EasyAxis: K (m.u) u.
enum class AnisotropyForm
{
  Printed,
  EasyAxis
};

//
// Material constants of a homogeneous body. The easy axis is stored per cell
// and the applied field ell is time independent.
//
struct MaterialParams
{
  double A = 0.0;
  double K = 0.0;
  double alpha = 0.5;
  AnisotropyForm anisotropy_form = AnisotropyForm::Printed;
  std::vector<Vec3d> easy_axis;
  VectorField ell;

  static MaterialParams uniform(const std::shared_ptr<const Mesh> &mesh, double A, double K,
                                double alpha, Vec3d u, Vec3d ell,
                                AnisotropyForm form = AnisotropyForm::Printed);

  // Throws InvalidArgument unless alpha > 0, A, K >= 0 and |u_i| = 1.
  void validate() const;
};

// 7-point Laplacian with mirror ghost cells at mask boundaries: a missing
// neighbour contributes the centre value, so constants are in the kernel.
template <class T>
Field<T> apply_laplacian(const Field<T> &m);

template <class T>
Field<T> apply_anisotropy(const Field<T> &m, const MaterialParams &params);

//
// Effective field H_h(m) = A lap_h m + H_d(m) + H_a(m). Linear and self
// adjoint under dot(). Does not include the applied field ell.
//
class EffectiveField
{
public:
  EffectiveField(std::shared_ptr<const Mesh> mesh, MaterialParams params,
                 std::shared_ptr<const DemagKernel> kernel);

  const Mesh &mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh> &mesh_ptr() const { return mesh_; }
  const MaterialParams &params() const { return params_; }
  const DemagKernel &kernel() const { return *kernel_; }

  template <class T>
  Field<T> apply(const Field<T> &m) const;

  // Upper estimate A/h^2 + 1 + K of the field magnitude per unit m.
  double field_scale() const;

private:
  std::shared_ptr<const Mesh> mesh_;
  MaterialParams params_;
  std::shared_ptr<const DemagKernel> kernel_;
};

// Diagonal coefficients beta_i of the equilibrium relation; zero outside the
// mask.
struct EquilibriumDiagonal
{
  std::vector<double> beta;
  double max_residual = 0.0;
};

// beta_i = m_i . (H_h(m) + ell)_i. Throws NotEquilibrium (carrying the
// residual max_i |(H_h(m) + ell)_i - beta_i m_i|) when that exceeds tol_eq.
EquilibriumDiagonal build_B(const VectorField &m, const EffectiveField &field, double tol_eq);

extern template Field<double> apply_laplacian(const Field<double> &);
extern template Field<cplx> apply_laplacian(const Field<cplx> &);
extern template Field<double> apply_anisotropy(const Field<double> &, const MaterialParams &);
extern template Field<cplx> apply_anisotropy(const Field<cplx> &, const MaterialParams &);
extern template Field<double> EffectiveField::apply(const Field<double> &) const;
extern template Field<cplx> EffectiveField::apply(const Field<cplx> &) const;

}  // namespace fsusc

#endif  // FSUSC_FIELD_OPS_HPP
