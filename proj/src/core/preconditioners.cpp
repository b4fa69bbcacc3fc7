// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/preconditioners.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>
#include "fsusc/dofs.hpp"

namespace fsusc
{

std::string_view to_string(PreconditionerKind kind)
{
  switch (kind)
  {
    case PreconditionerKind::None:
      return "none";
    case PreconditionerKind::ProjectionOnly:
      return "projection";
    case PreconditionerKind::ExactDense:
      return "exact";
    case PreconditionerKind::LaplacianBand:
      return "laplacian";
    case PreconditionerKind::CirculantApprox:
      return "circulant";
  }
  return "none";
}

std::optional<PreconditionerKind> parse_preconditioner(std::string_view name)
{
  for (auto k : {PreconditionerKind::None, PreconditionerKind::ProjectionOnly,
                 PreconditionerKind::ExactDense, PreconditionerKind::LaplacianBand,
                 PreconditionerKind::CirculantApprox})
    if (to_string(k) == name)
      return k;
  return std::nullopt;
}

std::size_t default_dense_limit()
{
  if (const char *env = std::getenv("FSUSC_DENSE_LIMIT"))
  {
    char *end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return static_cast<std::size_t>(v);
  }
  return 3000;
}

namespace
{

std::vector<long> interior_rank(const Mesh &mesh)
{
  std::vector<long> rank(mesh.cell_count(), -1);
  const auto cells = mesh.interior_cells();
  for (std::size_t r = 0; r < cells.size(); ++r)
    rank[cells[r]] = static_cast<long>(r);
  return rank;
}

// Calls visit(neighbour) for every interior face neighbour of interior cell c.
template <class F>
void for_each_interior_neighbour(const Mesh &mesh, std::size_t c, F &&visit)
{
  const Dims d = mesh.dims();
  const auto [ix, iy, iz] = mesh.coords(c);
  const int nb[6][3] = {{ix - 1, iy, iz}, {ix + 1, iy, iz}, {ix, iy - 1, iz},
                        {ix, iy + 1, iz}, {ix, iy, iz - 1}, {ix, iy, iz + 1}};
  for (const auto &q : nb)
  {
    if (q[0] < 0 || q[1] < 0 || q[2] < 0 || q[0] >= d.nx || q[1] >= d.ny || q[2] >= d.nz)
      continue;
    const std::size_t j = mesh.index(q[0], q[1], q[2]);
    if (mesh.is_interior(j))
      visit(j);
  }
}

int wrap(int d, int n) { return ((d % n) + n) % n; }

std::array<int, 3> wrapped_offset(const Mesh &mesh, std::size_t from, std::size_t to)
{
  const auto a = mesh.coords(from), b = mesh.coords(to);
  const Dims d = mesh.dims();
  return {wrap(b[0] - a[0], d.nx), wrap(b[1] - a[1], d.ny), wrap(b[2] - a[2], d.nz)};
}

}  // namespace

Eigen::MatrixXd assemble_shifted_field(const FrequencySystem &sys)
{
  const Mesh &mesh = sys.mesh();
  const auto cells = mesh.interior_cells();
  const std::size_t n = 3 * cells.size();
  const auto &beta = sys.eq().diagonal.beta;
  Eigen::MatrixXd dense(n, n);
  VectorField unit(sys.field().mesh_ptr());
  for (std::size_t r = 0; r < cells.size(); ++r)
    for (int a = 0; a < 3; ++a)
    {
      unit.values()[3 * cells[r] + a] = 1.0;
      VectorField col = sys.field().apply(unit);
      col.values()[3 * cells[r] + a] -= beta[cells[r]];
      dense.col(static_cast<Eigen::Index>(3 * r + a)) = gather_interior(col);
      unit.values()[3 * cells[r] + a] = 0.0;
    }
  return dense;
}

// -- Exact ---------------------------------------------------------------------

ExactPreconditioner::ExactPreconditioner(const FrequencySystem &sys, std::size_t dense_limit)
  : mesh_(sys.field().mesh_ptr())
{
  const std::size_t n = interior_dof_count(*mesh_);
  if (n > dense_limit)
  {
    std::ostringstream msg;
    msg << "dense_limit exceeded (" << n << " > " << dense_limit << ")";
    throw Error(ErrorCode::DenseLimit, msg.str());
  }
  matrix_ = (-sys.alpha() * assemble_shifted_field(sys)).cast<cplx>();
  matrix_.diagonal().array() += cplx(0.0, sys.omega());
  lu_.compute(matrix_);
  if (!(lu_.rcond() > 1e-14))
    throw Error(ErrorCode::SingularFactorization, "singular factorization");
}

ComplexVectorField ExactPreconditioner::apply(const ComplexVectorField &x) const
{
  return scatter_interior<cplx>(mesh_, matrix_ * gather_interior(x));
}

ComplexVectorField ExactPreconditioner::solve(const ComplexVectorField &r) const
{
  return scatter_interior<cplx>(mesh_, lu_.solve(gather_interior(r)));
}

ComplexVectorField ExactPreconditioner::solve_adjoint(const ComplexVectorField &r) const
{
  Eigen::VectorXcd b = gather_interior(r);
  Eigen::VectorXcd x = lu_.adjoint().solve(b);
  return scatter_interior<cplx>(mesh_, x);
}

// -- Laplacian band ------------------------------------------------------------

LaplacianBandPreconditioner::LaplacianBandPreconditioner(const FrequencySystem &sys,
                                                         bool alpha_scaled)
  : mesh_(sys.field().mesh_ptr())
{
  const Mesh &mesh = *mesh_;
  const double s = alpha_scaled ? sys.alpha() : 1.0;
  const double a_h2 = sys.field().params().A / (mesh.h() * mesh.h());
  const auto &beta = sys.eq().diagonal.beta;
  const auto rank = interior_rank(mesh);
  const auto cells = mesh.interior_cells();

  std::vector<Eigen::Triplet<cplx>> triplets;
  for (std::size_t r = 0; r < cells.size(); ++r)
  {
    const std::size_t c = cells[r];
    double lap_diag = 0.0;
    for_each_interior_neighbour(mesh, c, [&](std::size_t j) {
      lap_diag -= a_h2;
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(rank[j]), cplx(-s * a_h2));
    });
    triplets.emplace_back(static_cast<int>(r), static_cast<int>(r),
                          cplx(-s * (lap_diag - beta[c]), sys.omega()));
  }
  const auto n = static_cast<Eigen::Index>(cells.size());
  matrix_.resize(n, n);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();
  lu_.compute(matrix_);
  if (lu_.info() != Eigen::Success)
    throw Error(ErrorCode::InnerSolve, "Laplacian band factorization failed: " + lu_.lastErrorMessage());
}

ComplexVectorField LaplacianBandPreconditioner::per_component(const ComplexVectorField &x,
                                                              bool inverse, bool adjoint) const
{
  const auto cells = mesh_->interior_cells();
  const auto n = static_cast<Eigen::Index>(cells.size());
  Eigen::MatrixXcd rhs(n, 3);
  const auto xv = x.values();
  for (Eigen::Index r = 0; r < n; ++r)
    for (int a = 0; a < 3; ++a)
      rhs(r, a) = xv[3 * cells[r] + a];
  Eigen::MatrixXcd out;
  if (!inverse)
    out = matrix_ * rhs;
  else if (!adjoint)
    out = lu_.solve(rhs);
  else
    // The matrix is complex symmetric, so P^-H r = conj(P^-1 conj(r)).
    out = lu_.solve(rhs.conjugate()).conjugate();
  if (inverse && lu_.info() != Eigen::Success)
    throw Error(ErrorCode::InnerSolve, "Laplacian band solve failed");
  ComplexVectorField y(mesh_);
  auto yv = y.values();
  for (Eigen::Index r = 0; r < n; ++r)
    for (int a = 0; a < 3; ++a)
      yv[3 * cells[r] + a] = out(r, a);
  return y;
}

ComplexVectorField LaplacianBandPreconditioner::apply(const ComplexVectorField &x) const
{
  return per_component(x, false, false);
}

ComplexVectorField LaplacianBandPreconditioner::solve(const ComplexVectorField &r) const
{
  return per_component(r, true, false);
}

ComplexVectorField LaplacianBandPreconditioner::solve_adjoint(const ComplexVectorField &r) const
{
  return per_component(r, true, true);
}

// -- Circulant -----------------------------------------------------------------

std::vector<Block3> chan_project_1d(const Block3 &t_minus, const Block3 &t0,
                                    const Block3 &t_plus, int n)
{
  if (n < 1)
    throw Error(ErrorCode::InvalidArgument, "level size must be >= 1");
  std::vector<Block3> c(static_cast<std::size_t>(n), Block3::Zero());
  c[0] = t0;
  if (n == 1)
    return c;
  // Stripe p averages the n - p entries of diagonal p and the p entries of
  // diagonal p - n; only p = 1 and p = n - 1 meet a nonzero Toeplitz diagonal.
  const double w = static_cast<double>(n - 1) / n;
  c[1] += w * t_plus;
  c[static_cast<std::size_t>(n - 1)] += w * t_minus;
  return c;
}

std::vector<CirculantTap> project_to_circulant(const Eigen::MatrixXcd &op, Dims dims)
{
  const std::size_t n = dims.count();
  if (op.rows() != static_cast<Eigen::Index>(3 * n) || op.cols() != op.rows())
    throw Error(ErrorCode::InvalidArgument, "operator size does not match dims");
  const Mesh box(dims, 1.0, std::vector<std::uint8_t>(n, 1));
  std::vector<CirculantTap> taps(n);
  for (std::size_t p = 0; p < n; ++p)
  {
    const auto c = box.coords(p);
    taps[p].offset = {c[0], c[1], c[2]};
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
    {
      const auto off = wrapped_offset(box, i, j);
      taps[box.index(off[0], off[1], off[2])].block +=
        op.block<3, 3>(static_cast<Eigen::Index>(3 * i), static_cast<Eigen::Index>(3 * j));
    }
  for (auto &t : taps)
    t.block /= static_cast<double>(n);
  return taps;
}

Eigen::MatrixXcd circulant_dense(const std::vector<CirculantTap> &taps, Dims dims)
{
  const std::size_t n = dims.count();
  const Mesh box(dims, 1.0, std::vector<std::uint8_t>(n, 1));
  std::vector<Block3> by_offset(n, Block3::Zero());
  for (const auto &t : taps)
    by_offset[box.index(wrap(t.offset[0], dims.nx), wrap(t.offset[1], dims.ny),
                        wrap(t.offset[2], dims.nz))] += t.block;
  Eigen::MatrixXcd dense(3 * n, 3 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
    {
      const auto off = wrapped_offset(box, i, j);
      dense.block<3, 3>(static_cast<Eigen::Index>(3 * i), static_cast<Eigen::Index>(3 * j)) =
        by_offset[box.index(off[0], off[1], off[2])];
    }
  return dense;
}

std::vector<CirculantTap> laplacian_circulant_generator(const FrequencySystem &sys,
                                                        bool alpha_scaled)
{
  const Mesh &mesh = sys.mesh();
  const double s = alpha_scaled ? sys.alpha() : 1.0;
  const double a_h2 = sys.field().params().A / (mesh.h() * mesh.h());
  const double n = static_cast<double>(mesh.cell_count());

  double beta_mean = 0.0;
  for (std::size_t c : mesh.interior_cells())
    beta_mean += sys.eq().diagonal.beta[c];
  beta_mean /= static_cast<double>(mesh.interior_count());

  // Accumulate every nonzero of the operator on its wrapped diagonal.
  std::map<std::array<int, 3>, cplx> stripes;
  double lap_diag_sum = 0.0;
  for (std::size_t c : mesh.interior_cells())
    for_each_interior_neighbour(mesh, c, [&](std::size_t j) {
      lap_diag_sum -= a_h2;
      stripes[wrapped_offset(mesh, c, j)] += -s * a_h2;
    });
  stripes[{0, 0, 0}] += cplx(-s * (lap_diag_sum / n - beta_mean), sys.omega()) * n;

  std::vector<CirculantTap> taps;
  for (const auto &[off, v] : stripes)
    taps.push_back({off, Block3::Identity() * (v / n)});
  return taps;
}

CirculantPreconditioner::CirculantPreconditioner(const FrequencySystem &sys, bool alpha_scaled)
  : CirculantPreconditioner(sys.field().mesh_ptr(), laplacian_circulant_generator(sys, alpha_scaled))
{
}

CirculantPreconditioner::CirculantPreconditioner(std::shared_ptr<const Mesh> mesh,
                                                 std::vector<CirculantTap> taps)
  : mesh_(std::move(mesh)), taps_(std::move(taps)), fft_(std::make_unique<Fft3d>(mesh_->dims(), 3))
{
  const Dims d = mesh_->dims();
  const std::size_t n = d.count();
  blocks_.assign(n, Block3::Zero());
  inverses_.resize(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < n; ++k)
  {
    const auto kc = mesh_->coords(k);
    for (const auto &t : taps_)
    {
      const double phase = two_pi * (static_cast<double>(kc[0]) * t.offset[0] / d.nx +
                                     static_cast<double>(kc[1]) * t.offset[1] / d.ny +
                                     static_cast<double>(kc[2]) * t.offset[2] / d.nz);
      blocks_[k] += std::polar(1.0, phase) * t.block;
    }
  }
  double scale = 0.0;
  std::vector<double> smallest(n);
  for (std::size_t k = 0; k < n; ++k)
  {
    const Eigen::Vector3d sv = Eigen::JacobiSVD<Block3>(blocks_[k]).singularValues();
    scale = std::max(scale, sv[0]);
    smallest[k] = sv[2];
  }
  for (std::size_t k = 0; k < n; ++k)
  {
    if (!(smallest[k] > 1e-14 * scale))
      throw Error(ErrorCode::SingularFactorization, "singular Fourier block");
    inverses_[k] = blocks_[k].inverse();
  }
}

ComplexVectorField CirculantPreconditioner::transform(const ComplexVectorField &x, Op op) const
{
  const std::size_t n = mesh_->cell_count();
  // Raw write: the full-box result is not restricted here.
  ComplexVectorField out = x;
  auto buf = out.values();
  fft_->forward(buf);
  for (std::size_t k = 0; k < n; ++k)
  {
    Eigen::Map<Eigen::Vector3cd> v(buf.data() + 3 * k);
    switch (op)
    {
      case Op::Apply:
        v = (blocks_[k] * v).eval();
        break;
      case Op::Solve:
        v = (inverses_[k] * v).eval();
        break;
      case Op::SolveAdjoint:
        v = (inverses_[k].adjoint() * v).eval();
        break;
    }
  }
  fft_->backward(buf);
  out *= cplx(1.0 / static_cast<double>(n));
  return out;
}

ComplexVectorField CirculantPreconditioner::apply_full(const ComplexVectorField &x) const
{
  return transform(x, Op::Apply);
}

ComplexVectorField CirculantPreconditioner::solve_full(const ComplexVectorField &r) const
{
  return transform(r, Op::Solve);
}

ComplexVectorField CirculantPreconditioner::solve_adjoint_full(const ComplexVectorField &r) const
{
  return transform(r, Op::SolveAdjoint);
}

ComplexVectorField CirculantPreconditioner::apply(const ComplexVectorField &x) const
{
  ComplexVectorField y = apply_full(x);
  y.restrict_to_mask();
  return y;
}

ComplexVectorField CirculantPreconditioner::solve(const ComplexVectorField &r) const
{
  ComplexVectorField y = solve_full(r);
  y.restrict_to_mask();
  return y;
}

ComplexVectorField CirculantPreconditioner::solve_adjoint(const ComplexVectorField &r) const
{
  ComplexVectorField y = solve_adjoint_full(r);
  y.restrict_to_mask();
  return y;
}

// -- Factory -------------------------------------------------------------------

Preconditioner make_preconditioner(PreconditionerKind kind, const FrequencySystem &sys,
                                   const PrecondOptions &options)
{
  Preconditioner p;
  p.kind = kind;
  p.project = kind != PreconditionerKind::None;
  switch (kind)
  {
    case PreconditionerKind::None:
    case PreconditionerKind::ProjectionOnly:
      break;
    case PreconditionerKind::ExactDense:
      p.left = std::make_shared<ExactPreconditioner>(sys, options.dense_limit);
      break;
    case PreconditionerKind::LaplacianBand:
      p.left = std::make_shared<LaplacianBandPreconditioner>(sys, options.band_alpha);
      break;
    case PreconditionerKind::CirculantApprox:
      p.left = std::make_shared<CirculantPreconditioner>(sys, options.band_alpha);
      break;
  }
  return p;
}

}  // namespace fsusc
