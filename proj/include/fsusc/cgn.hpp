// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_CGN_HPP
#define FSUSC_CGN_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>
#include "fsusc/preconditioners.hpp"

namespace fsusc
{

// Square operator on C^n with its adjoint.
struct LinearOperator
{
  std::function<Eigen::VectorXcd(const Eigen::VectorXcd &)> apply;
  std::function<Eigen::VectorXcd(const Eigen::VectorXcd &)> apply_adjoint;
};

struct CgnOptions
{
  double tol = 1e-5;
  long max_iter = 2000;
  long true_residual_every = 10;
  // Right-hand sides with norm at or below this are treated as zero.
  double zero_rhs_floor = 0.0;
};

enum class StopReason
{
  ZeroRhs,
  NormalResidual,
  TrueResidual,
  MaxIter,
  Breakdown,
  Failed
};

std::string_view to_string(StopReason reason);

struct SolveReport
{
  long iterations = 0;
  // ||A^H r_k|| / ||A^H r_0||, entry 0 is 1.
  std::vector<double> residual_history;
  // ||r_k|| / ||b|| of the preconditioned system.
  std::vector<double> residual_norm_history;
  bool converged = false;
  StopReason stop = StopReason::MaxIter;
  // ||M mu - rhs|| / ||rhs||; 0 for a zero right-hand side.
  double final_true_residual = 0.0;
  double wall_time = 0.0;
  std::string error;
};

//
// CG on the normal equations A^H A x = A^H b. true_residual(x), when given,
// is evaluated every true_residual_every iterations and at the end; the
// iteration also stops once it drops to tol.
//
struct CgnrResult
{
  Eigen::VectorXcd x;
  SolveReport report;
};

CgnrResult cgnr(const LinearOperator &op, const Eigen::VectorXcd &b, const CgnOptions &options,
                const std::function<double(const Eigen::VectorXcd &)> &true_residual = {});

struct CgnSolution
{
  ComplexVectorField mu;
  SolveReport report;
};

// Solves P_L^-1 M P z = P_L^-1 rhs (P the tangent projection when the
// preconditioner asks for it) and returns mu = P_perp z.
CgnSolution solve_cgn(const FrequencySystem &sys, const ComplexVectorField &rhs,
                      const Preconditioner &precond, const CgnOptions &options = {});

// The operator solved by solve_cgn over the interior degrees of freedom.
LinearOperator system_operator(const FrequencySystem &sys, const Preconditioner &precond);

// sigma_max / sigma_min of the system operator restricted to [m]^perp.
double estimate_cond(const FrequencySystem &sys, const Preconditioner &precond,
                     std::size_t dense_limit = default_dense_limit());

}  // namespace fsusc

#endif  // FSUSC_CGN_HPP
