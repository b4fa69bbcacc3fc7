// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/diagnostics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <sstream>
#include "fsusc/cgn.hpp"
#include "fsusc/dofs.hpp"

namespace fsusc
{

Eigen::MatrixXcd assemble_dense(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd &)> &apply,
                                std::size_t n, std::size_t dense_limit)
{
  if (n > dense_limit)
  {
    std::ostringstream msg;
    msg << "dense_limit exceeded (" << n << " > " << dense_limit << ")";
    throw Error(ErrorCode::DenseLimit, msg.str());
  }
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd out(size, size);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(size);
  for (Eigen::Index j = 0; j < size; ++j)
  {
    e[j] = 1.0;
    out.col(j) = apply(e);
    e[j] = 0.0;
  }
  return out;
}

std::vector<double> singular_values(const Eigen::MatrixXcd &op)
{
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(op);
  if (svd.info() != Eigen::Success)
    throw Error(ErrorCode::Internal, "SVD did not converge");
  const auto &sv = svd.singularValues();
  std::vector<double> sigma(sv.data(), sv.data() + sv.size());
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

double condition_number(const std::vector<double> &sigma)
{
  if (sigma.empty())
    throw Error(ErrorCode::InvalidArgument, "empty spectrum");
  return sigma.front() / sigma.back();
}

double clustered_fraction(const std::vector<double> &sigma, double ratio)
{
  if (sigma.empty())
    return 0.0;
  const double cut = sigma.front() / ratio;
  const auto inside = std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s >= cut; });
  return static_cast<double>(inside) / static_cast<double>(sigma.size());
}

Eigen::MatrixXd tangent_basis(const VectorField &m)
{
  const auto cells = m.mesh().interior_cells();
  const auto n = static_cast<Eigen::Index>(cells.size());
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(3 * n, 2 * n);
  for (Eigen::Index r = 0; r < n; ++r)
  {
    const Vec3d mi = normalized(m.get(cells[r]));
    // Pick the coordinate axis least aligned with m_i.
    Vec3d seed{1.0, 0.0, 0.0};
    if (std::abs(mi.y) <= std::abs(mi.x) && std::abs(mi.y) <= std::abs(mi.z))
      seed = {0.0, 1.0, 0.0};
    else if (std::abs(mi.z) <= std::abs(mi.x) && std::abs(mi.z) <= std::abs(mi.y))
      seed = {0.0, 0.0, 1.0};
    const Vec3d t1 = normalized(cross(mi, seed));
    const Vec3d t2 = cross(mi, t1);
    for (int a = 0; a < 3; ++a)
    {
      e(3 * r + a, 2 * r) = t1[a];
      e(3 * r + a, 2 * r + 1) = t2[a];
    }
  }
  return e;
}

Eigen::MatrixXcd assemble_system(const FrequencySystem &sys, const Preconditioner &precond,
                                 std::size_t dense_limit)
{
  const LinearOperator op = system_operator(sys, precond);
  return assemble_dense(op.apply, interior_dof_count(sys.mesh()), dense_limit);
}

Eigen::MatrixXcd restricted_operator(const FrequencySystem &sys, const Preconditioner &precond,
                                     std::size_t dense_limit)
{
  const LinearOperator op = system_operator(sys, precond);
  const std::size_t n = interior_dof_count(sys.mesh());
  if (n > dense_limit)
  {
    std::ostringstream msg;
    msg << "dense_limit exceeded (" << n << " > " << dense_limit << ")";
    throw Error(ErrorCode::DenseLimit, msg.str());
  }
  const Eigen::MatrixXd e = tangent_basis(sys.eq().m);
  Eigen::MatrixXcd out(e.rows(), e.cols());
  for (Eigen::Index j = 0; j < e.cols(); ++j)
    out.col(j) = op.apply(e.col(j).cast<cplx>());
  return out;
}

double field_bound_scale(double h, double A, double K)
{
  return (1.0 + 1.0 / (h * h * h)) * (A / (h * h) + 1.0 + K);
}

double theorem2_bound(double omega, double alpha, double h, double A, double K)
{
  const double x = field_bound_scale(h, A, K);
  return std::sqrt((omega * omega + (1.0 + alpha * alpha) * x) / (omega * omega));
}

double theorem3_g(double omega, double alpha, double h, double A, double K)
{
  const double x = field_bound_scale(h, A, K);
  return std::sqrt((2.0 + alpha * alpha) * x * x / (omega * omega + x * x));
}

double theorem3_bound(double omega, double alpha, double h, double A, double K)
{
  const double g = theorem3_g(omega, alpha, h, A, K);
  return std::sqrt(1.0 + g * (2.0 + g * g));
}

std::vector<BoundCheck> check_theorem_bounds(std::shared_ptr<const EquilibriumState> eq,
                                             std::shared_ptr<const EffectiveField> field,
                                             const std::vector<double> &omegas,
                                             std::size_t dense_limit)
{
  const MaterialParams &p = field->params();
  const double h = field->mesh().h();
  std::vector<BoundCheck> out;
  for (double omega : omegas)
  {
    const FrequencySystem sys(omega, eq, field);
    BoundCheck row;
    row.omega = omega;
    const Preconditioner none = make_preconditioner(PreconditionerKind::None, sys);
    row.cond_m = condition_number(singular_values(restricted_operator(sys, none, dense_limit)));
    row.bound2 = theorem2_bound(omega, p.alpha, h, p.A, p.K);
    row.margin2 = (row.bound2 - row.cond_m) / row.bound2;
    PrecondOptions opts;
    opts.dense_limit = dense_limit;
    const Preconditioner exact = make_preconditioner(PreconditionerKind::ExactDense, sys, opts);
    row.cond_pre = condition_number(singular_values(restricted_operator(sys, exact, dense_limit)));
    row.bound3 = theorem3_bound(omega, p.alpha, h, p.A, p.K);
    row.margin3 = (row.bound3 - row.cond_pre) / row.bound3;
    out.push_back(row);
  }
  return out;
}

}  // namespace fsusc
