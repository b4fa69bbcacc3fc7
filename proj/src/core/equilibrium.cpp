// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fsusc
{

namespace
{

VectorField total_field(const VectorField &m, const EffectiveField &field)
{
  VectorField g = field.apply(m);
  g += field.params().ell;
  return g;
}

VectorField rhs_from_field(const VectorField &m, const VectorField &g, double alpha)
{
  VectorField f(m.mesh_ptr());
  for (std::size_t c : m.mesh().interior_cells())
  {
    const Vec3d mc = m.get(c);
    const Vec3d t = cross(mc, g.get(c));
    f.set(c, -t - alpha * cross(mc, t));
  }
  return f;
}

double torque(const VectorField &m, const VectorField &g)
{
  double r = 0.0;
  for (std::size_t c : m.mesh().interior_cells())
    r = std::max(r, norm(cross(m.get(c), g.get(c))));
  return r;
}

void renormalize(VectorField &m)
{
  for (std::size_t c : m.mesh().interior_cells())
    m.set(c, normalized(m.get(c)));
}

}  // namespace

VectorField ll_rhs(const VectorField &m, const EffectiveField &field)
{
  return rhs_from_field(m, total_field(m, field), field.params().alpha);
}

double equilibrium_residual(const VectorField &m, const EffectiveField &field)
{
  return torque(m, total_field(m, field));
}

EquilibriumState relax(const VectorField &m0, const EffectiveField &field,
                       const RelaxOptions &options)
{
  if (!(options.tol_eq > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tol_eq must be > 0");
  for (std::size_t c : m0.mesh().interior_cells())
    if (std::abs(norm(m0.get(c)) - 1.0) > 1e-12)
      throw Error(ErrorCode::InvalidArgument, "initial magnetization must have unit norm");

  const double alpha = field.params().alpha;
  const double dt0 = options.initial_dt > 0.0 ? options.initial_dt : 0.01 / field.field_scale();
  double dt = dt0;

  VectorField m = m0;
  VectorField g = total_field(m, field);
  double residual = torque(m, g);
  long steps = 0;
  int calm_steps = 0;

  while (residual > options.tol_eq)
  {
    if (steps >= options.max_steps)
    {
      std::ostringstream msg;
      msg << "max_steps exceeded (residual " << residual << ")";
      throw Error(ErrorCode::MaxStepsExceeded, msg.str(), residual);
    }

    const VectorField k1 = rhs_from_field(m, g, alpha);
    VectorField predictor = m;
    predictor.axpy(dt, k1);
    renormalize(predictor);
    const VectorField k2 = rhs_from_field(predictor, total_field(predictor, field), alpha);

    VectorField next = m;
    next.axpy(0.5 * dt, k1);
    next.axpy(0.5 * dt, k2);

    double max_step = 0.0, max_dev = 0.0;
    for (std::size_t c : m.mesh().interior_cells())
    {
      const Vec3d v = next.get(c);
      max_dev = std::max(max_dev, std::abs(norm(v) - 1.0));
      max_step = std::max(max_step, norm(v - m.get(c)));
    }
    if (max_dev > 0.5)
    {
      std::ostringstream msg;
      msg << "blow-up: |m| deviates from 1 by " << max_dev << " (residual " << residual << ")";
      throw Error(ErrorCode::BlowUp, msg.str(), residual);
    }
    if (max_step > 0.1)
    {
      dt *= 0.5;
      calm_steps = 0;
      continue;
    }

    renormalize(next);
    m = std::move(next);
    g = total_field(m, field);
    const double new_residual = torque(m, g);
    ++steps;
    if (new_residual > residual)
    {
      // The torque is not monotone along damped trajectories; never shrink
      // below the initial step on this rule alone.
      dt = std::max(0.5 * dt, std::min(dt, dt0));
      calm_steps = 0;
    }
    else if (++calm_steps >= 10)
    {
      dt *= 1.25;
      calm_steps = 0;
    }
    residual = new_residual;
    if (options.on_step)
      options.on_step(steps, residual, dt);
  }

  EquilibriumState state{m, build_B(m, field, options.tol_eq), residual, steps};
  return state;
}

EquilibriumState make_equilibrium_state(VectorField m, const EffectiveField &field,
                                        double tol_eq, long steps)
{
  EquilibriumDiagonal diag = build_B(m, field, tol_eq);
  const double residual = equilibrium_residual(m, field);
  return EquilibriumState{std::move(m), std::move(diag), residual, steps};
}

}  // namespace fsusc
