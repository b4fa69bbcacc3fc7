// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_PRECONDITIONERS_HPP
#define FSUSC_PRECONDITIONERS_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <array>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>
#include "fsusc/fft.hpp"
#include "fsusc/linear_system.hpp"

namespace fsusc
{

using Block3 = Eigen::Matrix3cd;

enum class PreconditionerKind
{
  None,
  ProjectionOnly,
  ExactDense,
  LaplacianBand,
  CirculantApprox
};

std::string_view to_string(PreconditionerKind kind);
// Accepts none, projection, exact, laplacian, circulant.
std::optional<PreconditionerKind> parse_preconditioner(std::string_view name);

// 3000 unknowns unless FSUSC_DENSE_LIMIT is set.
std::size_t default_dense_limit();

struct PrecondOptions
{
  // true: i omega - alpha (A lap - B). false: i omega - (A lap - B).
  bool band_alpha = true;
  std::size_t dense_limit = default_dense_limit();
};

//
// Left preconditioner P acting on complex fields; solve() applies P^-1 and
// solve_adjoint() applies P^-H. Implementations are immutable and safe for
// concurrent use.
//
class LeftPreconditioner
{
public:
  virtual ~LeftPreconditioner() = default;
  virtual ComplexVectorField apply(const ComplexVectorField &x) const = 0;
  virtual ComplexVectorField solve(const ComplexVectorField &r) const = 0;
  virtual ComplexVectorField solve_adjoint(const ComplexVectorField &r) const = 0;
};

// Dense matrix of (H_h - B) over the interior degrees of freedom.
Eigen::MatrixXd assemble_shifted_field(const FrequencySystem &sys);

// i omega I - alpha (H_h - B), assembled densely and LU factorized.
class ExactPreconditioner final : public LeftPreconditioner
{
public:
  ExactPreconditioner(const FrequencySystem &sys, std::size_t dense_limit);

  ComplexVectorField apply(const ComplexVectorField &x) const override;
  ComplexVectorField solve(const ComplexVectorField &r) const override;
  ComplexVectorField solve_adjoint(const ComplexVectorField &r) const override;
  const Eigen::MatrixXcd &matrix() const { return matrix_; }

private:
  std::shared_ptr<const Mesh> mesh_;
  Eigen::MatrixXcd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

// i omega I - s (A lap_h - B), s = alpha or 1, the same scalar operator on
// each component. Sparse LU over the interior cells.
class LaplacianBandPreconditioner final : public LeftPreconditioner
{
public:
  LaplacianBandPreconditioner(const FrequencySystem &sys, bool alpha_scaled);

  ComplexVectorField apply(const ComplexVectorField &x) const override;
  ComplexVectorField solve(const ComplexVectorField &r) const override;
  ComplexVectorField solve_adjoint(const ComplexVectorField &r) const override;
  const Eigen::SparseMatrix<cplx> &matrix() const { return matrix_; }

private:
  ComplexVectorField per_component(const ComplexVectorField &x, bool inverse,
                                   bool adjoint) const;

  std::shared_ptr<const Mesh> mesh_;
  Eigen::SparseMatrix<cplx> matrix_;
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu_;
};

// One term of a 3-level block circulant: C_{i,j} = block when
// (j - i) mod dims equals offset componentwise.
struct CirculantTap
{
  std::array<int, 3> offset{};
  Block3 block = Block3::Zero();
};

// Frobenius-optimal circulant generator of a tridiagonal block Toeplitz level
// of size n with sub-, main and super-diagonal blocks t_minus, t0, t_plus.
// Entry p of the result is c_p with C_{i,j} = c_{(j - i) mod n}.
std::vector<Block3> chan_project_1d(const Block3 &t_minus, const Block3 &t0,
                                    const Block3 &t_plus, int n);

// Frobenius projection of a dense box operator (3 * cells square, cell-major
// interleaved components) onto 3-level block circulants: each generator block
// is the mean of the blocks on its wrapped diagonal.
std::vector<CirculantTap> project_to_circulant(const Eigen::MatrixXcd &op, Dims dims);

// Dense 3 * cells square matrix of a block circulant.
Eigen::MatrixXcd circulant_dense(const std::vector<CirculantTap> &taps, Dims dims);

// Circulant projection of i omega I - s (A lap_h - beta_mean I) on the box,
// with lap_h the masked Neumann Laplacian (zero rows outside the mask).
std::vector<CirculantTap> laplacian_circulant_generator(const FrequencySystem &sys,
                                                        bool alpha_scaled);

//
// Block circulant preconditioner, diagonalized by the 3D FFT into one 3x3
// block per Fourier mode. The *_full variants act on the whole box; the
// LeftPreconditioner interface restricts results to the mask.
//
class CirculantPreconditioner final : public LeftPreconditioner
{
public:
  CirculantPreconditioner(std::shared_ptr<const Mesh> mesh, std::vector<CirculantTap> taps);
  CirculantPreconditioner(const FrequencySystem &sys, bool alpha_scaled);

  ComplexVectorField apply(const ComplexVectorField &x) const override;
  ComplexVectorField solve(const ComplexVectorField &r) const override;
  ComplexVectorField solve_adjoint(const ComplexVectorField &r) const override;

  ComplexVectorField apply_full(const ComplexVectorField &x) const;
  ComplexVectorField solve_full(const ComplexVectorField &r) const;
  ComplexVectorField solve_adjoint_full(const ComplexVectorField &r) const;

  const std::vector<CirculantTap> &generator() const { return taps_; }
  const Block3 &mode_block(std::size_t mode) const { return blocks_[mode]; }

private:
  enum class Op
  {
    Apply,
    Solve,
    SolveAdjoint
  };
  ComplexVectorField transform(const ComplexVectorField &x, Op op) const;

  std::shared_ptr<const Mesh> mesh_;
  std::vector<CirculantTap> taps_;
  std::unique_ptr<Fft3d> fft_;
  std::vector<Block3> blocks_;
  std::vector<Block3> inverses_;
};

// Left preconditioner plus the right tangent projection flag. left == null
// means identity.
struct Preconditioner
{
  PreconditionerKind kind = PreconditionerKind::None;
  bool project = false;
  std::shared_ptr<const LeftPreconditioner> left;
};

Preconditioner make_preconditioner(PreconditionerKind kind, const FrequencySystem &sys,
                                   const PrecondOptions &options = {});

}  // namespace fsusc

#endif  // FSUSC_PRECONDITIONERS_HPP
