// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_EQUILIBRIUM_HPP
#define FSUSC_EQUILIBRIUM_HPP

#include <functional>
#include "fsusc/field_ops.hpp"

namespace fsusc
{

struct EquilibriumState
{
  VectorField m;
  EquilibriumDiagonal diagonal;
  double residual = 0.0;
  long steps = 0;
};

struct RelaxOptions
{
  double tol_eq = 1e-9;
  long max_steps = 500000;
  // 0 selects 0.01 / (A/h^2 + 1 + K).
  double initial_dt = 0.0;
  // Called after every accepted step with (step, residual, dt).
  std::function<void(long, double, double)> on_step;
};

// Landau-Lifshitz right-hand side -m x G - alpha m x (m x G), G = H_h(m) + ell.
VectorField ll_rhs(const VectorField &m, const EffectiveField &field);

// max_i |m_i x (H_h(m) + ell)_i|
double equilibrium_residual(const VectorField &m, const EffectiveField &field);

// Explicit Heun integration with cellwise renormalization until the residual
// drops to tol_eq. Throws MaxStepsExceeded or BlowUp (both carrying the last
// residual).
EquilibriumState relax(const VectorField &m0, const EffectiveField &field,
                       const RelaxOptions &options = {});

// Wraps an already relaxed magnetization (e.g. read from a checkpoint).
EquilibriumState make_equilibrium_state(VectorField m, const EffectiveField &field,
                                        double tol_eq, long steps = 0);

}  // namespace fsusc

#endif  // FSUSC_EQUILIBRIUM_HPP
