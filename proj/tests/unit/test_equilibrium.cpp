// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "fsusc/equilibrium.hpp"
#include "oracles.hpp"

using namespace fsusc;

namespace
{

std::shared_ptr<const EffectiveField> make_field(std::shared_ptr<const Mesh> mesh, double A,
                                                 double K, Vec3d ell)
{
  auto kernel = std::make_shared<const DemagKernel>(mesh);
  return std::make_shared<const EffectiveField>(
    mesh, MaterialParams::uniform(mesh, A, K, 0.5, {0, 0, 1}, ell), kernel);
}

}  // namespace

TEST_CASE("single cell aligns with the applied field")
{
  auto mesh = make_mesh({1, 1, 1}, 1.0);
  const auto field = make_field(mesh, 0.0, 0.0, {0.0, 0.0, 1.0});
  const auto m0 = VectorField::uniform(mesh, normalized({1.0, 0.3, 1.0}));
  long callbacks = 0;
  RelaxOptions opt;
  opt.tol_eq = 1e-10;
  opt.on_step = [&](long, double r, double dt) {
    ++callbacks;
    CHECK(r >= 0.0);
    CHECK(dt > 0.0);
  };
  const auto eq = relax(m0, *field, opt);
  CHECK(eq.residual <= 1e-10);
  CHECK(eq.steps == callbacks);
  CHECK(eq.m.get(0).z == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eq.diagonal.beta[0] == doctest::Approx(1.0 - 1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("relaxation keeps unit length and reaches tolerance")
{
  auto mesh = make_mesh({3, 3, 2}, 1.0);
  const auto field = make_field(mesh, 0.5, 0.2, {0.0, 0.0, 0.3});
  const auto eq = relax(VectorField::uniform(mesh, normalized({0.2, 0.1, 1.0})), *field);
  CHECK(eq.residual <= 1e-9);
  CHECK(equilibrium_residual(eq.m, *field) == doctest::Approx(eq.residual));
  for (std::size_t c : mesh->interior_cells())
    CHECK(norm(eq.m.get(c)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(eq.diagonal.max_residual <= 1e-9);
}

TEST_CASE("Landau-Lifshitz right-hand side is tangent")
{
  auto mesh = make_mesh({4, 2, 2}, 1.0);
  const auto field = make_field(mesh, 0.3, 0.5, {0.1, 0.2, 0.3});
  const auto m = VectorField::uniform(mesh, normalized({1.0, 2.0, 2.0}));
  const auto rhs = ll_rhs(m, *field);
  for (std::size_t c : mesh->interior_cells())
    CHECK(std::abs(dot(rhs.get(c), m.get(c))) < 1e-14);
}

TEST_CASE("step budget exhaustion reports the residual")
{
  auto mesh = make_mesh({2, 2, 1}, 1.0);
  const auto field = make_field(mesh, 0.1, 0.0, {0.0, 0.0, 1.0});
  RelaxOptions opt;
  opt.max_steps = 3;
  try
  {
    relax(VectorField::uniform(mesh, normalized({1.0, 0.0, 1.0})), *field, opt);
    FAIL("expected MaxStepsExceeded");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::MaxStepsExceeded);
    REQUIRE(e.value().has_value());
    CHECK(*e.value() > opt.tol_eq);
  }
}

TEST_CASE("initial state must be unit length")
{
  auto mesh = make_mesh({1, 1, 1}, 1.0);
  const auto field = make_field(mesh, 0.0, 0.0, {});
  CHECK_THROWS_AS(relax(VectorField::uniform(mesh, {0.0, 0.0, 2.0}), *field), Error);
}

TEST_CASE("wrapping a relaxed state recomputes beta")
{
  auto mesh = make_mesh({2, 1, 1}, 1.0);
  const auto field = make_field(mesh, 0.2, 0.0, {0.0, 0.0, 1.0});
  const auto eq = relax(VectorField::uniform(mesh, normalized({0.3, 0.0, 1.0})), *field);
  const auto again = make_equilibrium_state(eq.m, *field, 1e-9, eq.steps);
  CHECK(again.diagonal.beta == eq.diagonal.beta);
  CHECK(again.steps == eq.steps);
}
