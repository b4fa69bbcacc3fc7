// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_DIAGNOSTICS_HPP
#define FSUSC_DIAGNOSTICS_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>
#include "fsusc/preconditioners.hpp"

namespace fsusc
{

// Column j is apply(e_j). Throws DenseLimit when n > dense_limit.
Eigen::MatrixXcd assemble_dense(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd &)> &apply,
                                std::size_t n, std::size_t dense_limit = default_dense_limit());

// Descending singular values. Throws Internal when the SVD does not converge.
std::vector<double> singular_values(const Eigen::MatrixXcd &op);

double condition_number(const std::vector<double> &sigma);

// Share of singular values in [sigma_max / ratio, sigma_max].
double clustered_fraction(const std::vector<double> &sigma, double ratio = 10.0);

// 3n x 2n matrix whose columns 2r, 2r+1 are an orthonormal basis of the plane
// orthogonal to m at the r-th interior cell.
Eigen::MatrixXd tangent_basis(const VectorField &m);

// Dense matrix of the operator solved by solve_cgn (3 * interior cells).
Eigen::MatrixXcd assemble_system(const FrequencySystem &sys, const Preconditioner &precond,
                                 std::size_t dense_limit = default_dense_limit());

// The system operator composed with tangent_basis: 3n x 2n.
Eigen::MatrixXcd restricted_operator(const FrequencySystem &sys, const Preconditioner &precond,
                                     std::size_t dense_limit = default_dense_limit());

// Scale X = (1 + 1/h^3)(A/h^2 + 1 + K) shared by both bounds.
double field_bound_scale(double h, double A, double K);

// sqrt((omega^2 + (1 + alpha^2) X) / omega^2)
double theorem2_bound(double omega, double alpha, double h, double A, double K);

// sqrt((2 + alpha^2) X^2 / (omega^2 + X^2))
double theorem3_g(double omega, double alpha, double h, double A, double K);

// sqrt(1 + g (2 + g^2))
double theorem3_bound(double omega, double alpha, double h, double A, double K);

struct BoundCheck
{
  double omega = 0.0;
  double cond_m = 0.0;
  double bound2 = 0.0;
  double margin2 = 0.0;
  double cond_pre = 0.0;
  double bound3 = 0.0;
  double margin3 = 0.0;
};

// Dense restricted condition numbers of M and of the exactly preconditioned
// projected operator, against the two printed bounds. margin = (bound -
// measured) / bound.
std::vector<BoundCheck> check_theorem_bounds(std::shared_ptr<const EquilibriumState> eq,
                                             std::shared_ptr<const EffectiveField> field,
                                             const std::vector<double> &omegas,
                                             std::size_t dense_limit = default_dense_limit());

}  // namespace fsusc

#endif  // FSUSC_DIAGNOSTICS_HPP
