// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/cgn.hpp"

#include <chrono>
#include <limits>
#include "fsusc/diagnostics.hpp"
#include "fsusc/dofs.hpp"

namespace fsusc
{

std::string_view to_string(StopReason reason)
{
  switch (reason)
  {
    case StopReason::ZeroRhs:
      return "zero_rhs";
    case StopReason::NormalResidual:
      return "normal_residual";
    case StopReason::TrueResidual:
      return "true_residual";
    case StopReason::MaxIter:
      return "max_iter exceeded";
    case StopReason::Breakdown:
      return "breakdown";
    case StopReason::Failed:
      return "failed";
  }
  return "failed";
}

CgnrResult cgnr(const LinearOperator &op, const Eigen::VectorXcd &b, const CgnOptions &options,
                const std::function<double(const Eigen::VectorXcd &)> &true_residual)
{
  if (!(options.tol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
  const auto start = std::chrono::steady_clock::now();
  CgnrResult out{Eigen::VectorXcd::Zero(b.size()), {}};
  SolveReport &rep = out.report;
  auto finish = [&](StopReason reason, bool converged) {
    rep.stop = reason;
    rep.converged = converged;
    if (reason == StopReason::MaxIter)
      rep.error = "max_iter exceeded";
    else if (reason == StopReason::Breakdown)
      rep.error = "breakdown";
    if (reason != StopReason::ZeroRhs && true_residual)
      rep.final_true_residual = true_residual(out.x);
    rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(out);
  };

  const double b_norm = b.norm();
  if (b_norm <= options.zero_rhs_floor || b_norm == 0.0)
  {
    rep.residual_history = {0.0};
    rep.residual_norm_history = {0.0};
    return finish(StopReason::ZeroRhs, true);
  }

  Eigen::VectorXcd r = b;
  Eigen::VectorXcd s = op.apply_adjoint(r);
  Eigen::VectorXcd p = s;
  double gamma = s.squaredNorm();
  const double s0 = std::sqrt(gamma);
  rep.residual_history.push_back(1.0);
  rep.residual_norm_history.push_back(1.0);
  if (s0 == 0.0)
    return finish(StopReason::Breakdown, false);

  const double eps = std::numeric_limits<double>::epsilon();
  double op_norm2 = 0.0;
  for (long k = 1; k <= options.max_iter; ++k)
  {
    const Eigen::VectorXcd q = op.apply(p);
    const double delta = q.squaredNorm();
    const double p2 = p.squaredNorm();
    op_norm2 = std::max(op_norm2, delta / p2);
    if (!(delta > eps * eps * p2 * op_norm2))
      return finish(StopReason::Breakdown, false);
    const double a = gamma / delta;
    out.x += a * p;
    r -= a * q;
    s = op.apply_adjoint(r);
    const double gamma_next = s.squaredNorm();
    rep.iterations = k;
    rep.residual_history.push_back(std::sqrt(gamma_next) / s0);
    rep.residual_norm_history.push_back(r.norm() / b_norm);
    if (rep.residual_history.back() <= options.tol)
      return finish(StopReason::NormalResidual, true);
    if (true_residual && options.true_residual_every > 0 && k % options.true_residual_every == 0 &&
        true_residual(out.x) <= options.tol)
      return finish(StopReason::TrueResidual, true);
    p = s + (gamma_next / gamma) * p;
    gamma = gamma_next;
  }
  return finish(StopReason::MaxIter, false);
}

LinearOperator system_operator(const FrequencySystem &sys, const Preconditioner &precond)
{
  const auto mesh = sys.field().mesh_ptr();
  const VectorField &m = sys.eq().m;
  LinearOperator op;
  op.apply = [&sys, &precond, mesh, &m](const Eigen::VectorXcd &v) {
    ComplexVectorField u = scatter_interior<cplx>(mesh, v);
    if (precond.project)
      u = project_tangent(u, m);
    u = sys.apply_M(u);
    if (precond.left)
      u = precond.left->solve(u);
    return Eigen::VectorXcd(gather_interior(u));
  };
  op.apply_adjoint = [&sys, &precond, mesh, &m](const Eigen::VectorXcd &v) {
    ComplexVectorField u = scatter_interior<cplx>(mesh, v);
    if (precond.left)
      u = precond.left->solve_adjoint(u);
    u = sys.apply_M_adjoint(u);
    if (precond.project)
      u = project_tangent(u, m);
    return Eigen::VectorXcd(gather_interior(u));
  };
  return op;
}

CgnSolution solve_cgn(const FrequencySystem &sys, const ComplexVectorField &rhs,
                      const Preconditioner &precond, const CgnOptions &options)
{
  const auto mesh = sys.field().mesh_ptr();
  const VectorField &m = sys.eq().m;
  const ComplexVectorField rhs_t = project_tangent(rhs, m);
  const double rhs_norm = l2_norm(rhs_t);

  Eigen::VectorXcd b;
  if (precond.left)
    b = gather_interior(precond.left->solve(rhs_t));
  else
    b = gather_interior(rhs_t);

  CgnOptions opts = options;
  if (rhs_norm <= options.zero_rhs_floor)
    opts.zero_rhs_floor = std::numeric_limits<double>::infinity();
  else
    opts.zero_rhs_floor = 0.0;

  auto true_residual = [&](const Eigen::VectorXcd &z) {
    const ComplexVectorField mu = project_tangent(scatter_interior<cplx>(mesh, z), m);
    return l2_norm(sys.apply_M(mu) - rhs_t) / rhs_norm;
  };
  auto result = cgnr(system_operator(sys, precond), b, opts, true_residual);
  return {project_tangent(scatter_interior<cplx>(mesh, result.x), m), std::move(result.report)};
}

double estimate_cond(const FrequencySystem &sys, const Preconditioner &precond,
                     std::size_t dense_limit)
{
  return condition_number(singular_values(restricted_operator(sys, precond, dense_limit)));
}

}  // namespace fsusc
