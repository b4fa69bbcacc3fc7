// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/SparseCore>
#include <algorithm>
#include <chrono>
#include <random>
#include "doctest.h"
#include "fsusc/diagnostics.hpp"
#include "fsusc/preconditioners.hpp"
#include "oracles.hpp"

using namespace fsusc;

namespace
{

oracle::Problem problem(Dims dims, ShapeSpec shape = {})
{
  auto cfg = oracle::small_config(dims, 1.0, 0.8, 0.2, 0.5);
  cfg.mesh.shape = shape;
  cfg.material.ell = {0.0, 0.2, 1.0};
  return oracle::relaxed(cfg);
}

Block3 random_block(std::mt19937 &rng)
{
  std::normal_distribution<double> g;
  Block3 b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      b(i, j) = {g(rng), g(rng)};
  return b;
}

Eigen::MatrixXcd dense_of(const std::shared_ptr<const Mesh> &mesh,
                          const std::function<ComplexVectorField(const ComplexVectorField &)> &f)
{
  return assemble_dense(
    [&](const Eigen::VectorXcd &x) { return gather_interior(f(scatter_interior(mesh, x))); },
    interior_dof_count(*mesh));
}

}  // namespace

TEST_CASE("preconditioner names")
{
  for (auto k : {PreconditionerKind::None, PreconditionerKind::ProjectionOnly, PreconditionerKind::ExactDense,
                 PreconditionerKind::LaplacianBand, PreconditionerKind::CirculantApprox})
    CHECK(parse_preconditioner(to_string(k)) == k);
  CHECK_FALSE(parse_preconditioner("ilu").has_value());
}

TEST_CASE("exact preconditioner matches its dense definition")
{
  const auto pb = problem({2, 2, 2});
  const FrequencySystem sys(0.3, pb.eq, pb.field);
  const ExactPreconditioner p(sys, 1000);
  const auto mesh = pb.field->mesh_ptr();
  const Eigen::MatrixXd s = oracle::field_dense(*mesh, pb.field->params()) - oracle::beta_dense(*pb.eq);
  Eigen::MatrixXcd want = (-sys.alpha() * s).cast<cplx>();
  want.diagonal().array() += cplx(0.0, sys.omega());
  CHECK(oracle::max_column_error(p.matrix(), want) < 1e-12);
  CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.apply(x); }), want) < 1e-12);
  const Eigen::MatrixXcd inv = want.inverse();
  CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.solve(x); }), inv) < 1e-12);
  CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.solve_adjoint(x); }),
                                 inv.adjoint()) < 1e-12);
}

TEST_CASE("exact preconditioner respects the dense limit")
{
  const auto pb = problem({2, 2, 2});
  const FrequencySystem sys(0.3, pb.eq, pb.field);
  try
  {
    ExactPreconditioner p(sys, 10);
    FAIL("expected DenseLimit");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::DenseLimit);
  }
}

TEST_CASE("Laplacian band matches its dense definition")
{
  const auto pb = problem({5, 5, 2}, {ShapeKind::CylinderZ, 2.5});
  const auto mesh = pb.field->mesh_ptr();
  for (bool scaled : {true, false})
  {
    const FrequencySystem sys(0.8, pb.eq, pb.field);
    const LaplacianBandPreconditioner p(sys, scaled);
    const double s = scaled ? sys.alpha() : 1.0;
    const auto cells = mesh->interior_cells();
    Eigen::MatrixXcd scalar = (-s * oracle::laplacian_scalar_dense(*mesh, pb.field->params().A)).cast<cplx>();
    for (std::size_t r = 0; r < cells.size(); ++r)
      scalar(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) +=
        cplx(s * pb.eq->diagonal.beta[cells[r]], sys.omega());
    CHECK(oracle::max_column_error(Eigen::MatrixXcd(p.matrix()), scalar) < 1e-12);
    const Eigen::MatrixXcd want = oracle::kron_identity(scalar);
    CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.apply(x); }), want) < 1e-12);
    const Eigen::MatrixXcd inv = want.inverse();
    CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.solve(x); }), inv) < 1e-12);
    CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.solve_adjoint(x); }),
                                   inv.adjoint()) < 1e-12);
  }
}

TEST_CASE("Laplacian band round trip")
{
  const auto pb = problem({8, 8, 3}, {ShapeKind::CylinderZ, 4.0});
  const FrequencySystem sys(0.05, pb.eq, pb.field);
  const LaplacianBandPreconditioner p(sys, true);
  std::mt19937 rng(12);
  const auto x = oracle::random_field(pb.field->mesh_ptr(), rng);
  CHECK(l2_norm(p.solve(p.apply(x)) - x) <= 1e-10 * l2_norm(x));
  CHECK(l2_norm(p.apply(p.solve(x)) - x) <= 1e-10 * l2_norm(x));
}

TEST_CASE("one-level circulant projection examples")
{
  std::mt19937 rng(4);
  const Block3 tm = random_block(rng), t0 = random_block(rng), tp = random_block(rng);
  const auto c1 = chan_project_1d(tm, t0, tp, 1);
  REQUIRE(c1.size() == 1);
  CHECK((c1[0] - t0).norm() == 0.0);
  const auto c2 = chan_project_1d(tm, t0, tp, 2);
  REQUIRE(c2.size() == 2);
  CHECK((c2[0] - t0).norm() == 0.0);
  CHECK((c2[1] - 0.5 * (tm + tp)).norm() < 1e-15);
  const auto c5 = chan_project_1d(tm, t0, tp, 5);
  CHECK((c5[1] - 0.8 * tp).norm() < 1e-15);
  CHECK((c5[4] - 0.8 * tm).norm() < 1e-15);
  CHECK(c5[2].norm() == 0.0);
  CHECK_THROWS_AS(chan_project_1d(tm, t0, tp, 0), Error);
}

TEST_CASE("one-level projection is Frobenius optimal")
{
  std::mt19937 rng(99);
  const int n = 5;
  const Dims dims{n, 1, 1};
  const Block3 tm = random_block(rng), t0 = random_block(rng), tp = random_block(rng);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
  for (int i = 0; i < n; ++i)
  {
    t.block<3, 3>(3 * i, 3 * i) = t0;
    if (i + 1 < n)
    {
      t.block<3, 3>(3 * i, 3 * (i + 1)) = tp;
      t.block<3, 3>(3 * (i + 1), 3 * i) = tm;
    }
  }
  const auto gen = chan_project_1d(tm, t0, tp, n);
  std::vector<CirculantTap> taps;
  for (int p = 0; p < n; ++p)
    taps.push_back({{p, 0, 0}, gen[static_cast<std::size_t>(p)]});
  const Eigen::MatrixXcd c = circulant_dense(taps, dims);
  const double best = (t - c).norm();

  // Residual is orthogonal to every circulant: wrapped diagonal sums vanish.
  for (int p = 0; p < n; ++p)
  {
    Block3 sum = Block3::Zero();
    for (int i = 0; i < n; ++i)
      sum += (t - c).block<3, 3>(3 * i, 3 * ((i + p) % n));
    CHECK(sum.norm() < 1e-13);
  }

  for (int trial = 0; trial < 1000; ++trial)
  {
    std::vector<CirculantTap> other = taps;
    const double scale = trial < 500 ? 1e-3 : 1.0;
    for (auto &tap : other)
      tap.block += scale * random_block(rng);
    CHECK((t - circulant_dense(other, dims)).norm() > best);
  }
}

TEST_CASE("multilevel projection of a Kronecker sum factors by level")
{
  std::mt19937 rng(7);
  for (Dims dims : {Dims{2, 2, 2}, Dims{4, 3, 5}})
  {
    std::array<std::array<Block3, 3>, 3> levels;
    for (auto &l : levels)
      for (auto &b : l)
        b = random_block(rng);
    const Mesh box(dims, 1.0, std::vector<std::uint8_t>(dims.count(), 1));
    const auto n = static_cast<Eigen::Index>(dims.count());
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    std::array<std::vector<Block3>, 3> gens;
    for (int a = 0; a < 3; ++a)
      gens[static_cast<std::size_t>(a)] = chan_project_1d(levels[a][0], levels[a][1], levels[a][2], dims[a]);
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
      {
        const auto ci = box.coords(static_cast<std::size_t>(i));
        const auto cj = box.coords(static_cast<std::size_t>(j));
        for (int a = 0; a < 3; ++a)
        {
          bool others_equal = true;
          for (int b = 0; b < 3; ++b)
            if (b != a && ci[static_cast<std::size_t>(b)] != cj[static_cast<std::size_t>(b)])
              others_equal = false;
          if (!others_equal)
            continue;
          const int d = cj[static_cast<std::size_t>(a)] - ci[static_cast<std::size_t>(a)];
          if (d >= -1 && d <= 1)
            t.block<3, 3>(3 * i, 3 * j) += levels[a][static_cast<std::size_t>(d + 1)];
          const int w = ((d % dims[a]) + dims[a]) % dims[a];
          c.block<3, 3>(3 * i, 3 * j) += gens[static_cast<std::size_t>(a)][static_cast<std::size_t>(w)];
        }
      }
    const Eigen::MatrixXcd direct = circulant_dense(project_to_circulant(t, dims), dims);
    CHECK((direct - c).norm() < 1e-12 * c.norm());
  }
}

TEST_CASE("circulants are fixed points of the projection")
{
  std::mt19937 rng(3);
  const Dims dims{3, 2, 4};
  std::vector<CirculantTap> taps;
  for (int k = 0; k < 6; ++k)
    taps.push_back({{k % 3, k % 2, (k * 3) % 4}, random_block(rng)});
  const Eigen::MatrixXcd c = circulant_dense(taps, dims);
  const Eigen::MatrixXcd again = circulant_dense(project_to_circulant(c, dims), dims);
  CHECK((again - c).norm() < 1e-13 * c.norm());
}

TEST_CASE("Laplacian generator equals the projected box operator")
{
  for (auto shape : {ShapeSpec{}, ShapeSpec{ShapeKind::CylinderZ, 2.0}})
  {
    const auto pb = problem({4, 4, 2}, shape);
    const FrequencySystem sys(0.6, pb.eq, pb.field);
    const Dims dims = sys.mesh().dims();
    for (bool scaled : {true, false})
    {
      const Eigen::MatrixXcd want =
        circulant_dense(project_to_circulant(oracle::box_operator(sys, scaled ? sys.alpha() : 1.0), dims), dims);
      const Eigen::MatrixXcd got = circulant_dense(laplacian_circulant_generator(sys, scaled), dims);
      CHECK((got - want).norm() < 1e-12 * want.norm());
    }
  }
}

TEST_CASE("periodic Laplacian is its own projection")
{
  const Dims dims{4, 3, 5};
  const Mesh box(dims, 1.0, std::vector<std::uint8_t>(dims.count(), 1));
  const auto n = static_cast<Eigen::Index>(dims.count());
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const auto c = box.coords(static_cast<std::size_t>(i));
    for (int a = 0; a < 3; ++a)
      for (int step : {-1, 1})
      {
        auto d = c;
        d[static_cast<std::size_t>(a)] = (d[static_cast<std::size_t>(a)] + step + dims[a]) % dims[a];
        l(i, static_cast<Eigen::Index>(box.index(d[0], d[1], d[2]))) += 1.0;
        l(i, i) -= 1.0;
      }
  }
  const Eigen::MatrixXcd full = oracle::kron_identity(l);
  CHECK((circulant_dense(project_to_circulant(full, dims), dims) - full).norm() < 1e-12);
}

TEST_CASE("circulant FFT application matches the dense circulant")
{
  const auto pb = problem({3, 4, 2});
  const FrequencySystem sys(0.4, pb.eq, pb.field);
  const CirculantPreconditioner p(sys, true);
  const Eigen::MatrixXcd c = circulant_dense(p.generator(), sys.mesh().dims());
  const auto mesh = pb.field->mesh_ptr();
  CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.apply_full(x); }), c) < 1e-12);
  const Eigen::MatrixXcd inv = c.inverse();
  CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.solve_full(x); }), inv) < 1e-12);
  CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.solve_adjoint_full(x); }),
                                 inv.adjoint()) < 1e-12);
}

TEST_CASE("circulant with general blocks")
{
  std::mt19937 rng(31);
  const Dims dims{4, 2, 3};
  auto mesh = make_mesh(dims, 1.0);
  std::vector<CirculantTap> taps{{{0, 0, 0}, 8.0 * Block3::Identity() + random_block(rng)},
                                 {{1, 0, 0}, random_block(rng)},
                                 {{0, 1, 2}, random_block(rng)}};
  const CirculantPreconditioner p(mesh, taps);
  const Eigen::MatrixXcd c = circulant_dense(taps, dims);
  CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.apply_full(x); }), c) < 1e-12);
  CHECK(oracle::max_column_error(dense_of(mesh, [&](const auto &x) { return p.solve_full(x); }), c.inverse()) <
        1e-12);
}

TEST_CASE("circulant round trip on a full box")
{
  const auto pb = problem({4, 4, 4});
  const FrequencySystem sys(0.02, pb.eq, pb.field);
  const CirculantPreconditioner p(sys, true);
  std::mt19937 rng(2);
  const auto x = oracle::random_field(pb.field->mesh_ptr(), rng);
  CHECK(l2_norm(p.solve_full(p.apply_full(x)) - x) <= 1e-12 * l2_norm(x));
  CHECK(l2_norm(p.solve(p.apply(x)) - x) <= 1e-12 * l2_norm(x));
}

TEST_CASE("singular Fourier blocks are reported")
{
  auto mesh = make_mesh({2, 2, 1}, 1.0);
  std::vector<CirculantTap> taps{{{0, 0, 0}, Block3::Identity()}, {{1, 0, 0}, Block3::Identity()}};
  try
  {
    CirculantPreconditioner p(mesh, taps);
    FAIL("expected SingularFactorization");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::SingularFactorization);
  }
}

TEST_CASE("single-cell circulant equals the band preconditioner")
{
  auto cfg = oracle::small_config({1, 1, 1}, 1.0, 0.5, 0.3, 0.2);
  cfg.material.ell = {0.0, 0.0, 1.0};
  const auto pb = oracle::relaxed(cfg);
  const FrequencySystem sys(0.9, pb.eq, pb.field);
  const CirculantPreconditioner c(sys, true);
  const LaplacianBandPreconditioner b(sys, true);
  std::mt19937 rng(5);
  const auto x = oracle::random_field(pb.field->mesh_ptr(), rng);
  CHECK(l2_norm(c.apply(x) - b.apply(x)) < 1e-14 * l2_norm(b.apply(x)));
  CHECK(l2_norm(c.solve(x) - b.solve(x)) < 1e-14 * l2_norm(b.solve(x)));
}

TEST_CASE("exact preconditioning approaches the tangent projector at high frequency")
{
  const auto pb = problem({2, 2, 2});
  const FrequencySystem sys(1e12, pb.eq, pb.field);
  const auto pc = make_preconditioner(PreconditionerKind::ExactDense, sys);
  const Eigen::MatrixXcd a = assemble_system(sys, pc);
  CHECK((a - oracle::tangent_projector_dense(pb.eq->m).cast<cplx>()).norm() < 1e-4);
}

TEST_CASE("factory")
{
  const auto pb = problem({2, 2, 1});
  const FrequencySystem sys(1.0, pb.eq, pb.field);
  CHECK_FALSE(make_preconditioner(PreconditionerKind::None, sys).project);
  CHECK(make_preconditioner(PreconditionerKind::ProjectionOnly, sys).project);
  CHECK(make_preconditioner(PreconditionerKind::ProjectionOnly, sys).left == nullptr);
  for (auto k : {PreconditionerKind::ExactDense, PreconditionerKind::LaplacianBand,
                 PreconditionerKind::CirculantApprox})
  {
    const auto p = make_preconditioner(k, sys);
    CHECK(p.project);
    CHECK(p.left != nullptr);
    CHECK(p.kind == k);
  }
}

TEST_CASE("circulant cost grows like N log N")
{
  struct Case
  {
    std::shared_ptr<const EffectiveField> field;
    std::unique_ptr<CirculantPreconditioner> p;
    std::unique_ptr<ComplexVectorField> x;
    int batch = 1;
    double best = 1e300;
  };
  auto make = [](int n, int batch) {
    Case c;
    auto cfg = oracle::small_config({n, n, n}, 1.0, 0.5, 0.0, 0.5);
    c.field = build_field(cfg);
    auto m = VectorField::uniform(c.field->mesh_ptr(), {0.0, 0.0, 1.0});
    auto eq = std::make_shared<const EquilibriumState>(make_equilibrium_state(m, *c.field, 1.0));
    c.p = std::make_unique<CirculantPreconditioner>(FrequencySystem(1.0, eq, c.field), true);
    std::mt19937 rng(1);
    c.x = std::make_unique<ComplexVectorField>(oracle::random_field(c.field->mesh_ptr(), rng));
    c.batch = batch;
    return c;
  };
  auto time = [](Case &c) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < c.batch; ++k)
    {
      const auto y = c.p->solve_full(c.p->apply_full(*c.x));
      REQUIRE(l2_norm(y) > 0.0);
    }
    c.best = std::min(c.best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / c.batch);
  };
  Case small = make(16, 40), large = make(32, 5);
  // Interleaved so that both sizes see the same machine load.
  for (int rep = 0; rep < 15; ++rep)
  {
    time(small);
    time(large);
  }
  CAPTURE(small.best);
  CAPTURE(large.best);
  CHECK(large.best <= 12.0 * small.best);
}
