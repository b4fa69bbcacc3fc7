// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_CONFIG_HPP
#define FSUSC_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include "fsusc/equilibrium.hpp"
#include "fsusc/sweep.hpp"

namespace fsusc
{

struct MeshConfig
{
  Dims dims;
  double h = 1.0;
  ShapeSpec shape;
};

struct MaterialConfig
{
  double A = 0.0;
  double K = 0.0;
  double alpha = 0.5;
  Vec3d u{0.0, 0.0, 1.0};
  Vec3d ell{0.0, 0.0, 0.0};
  AnisotropyForm anisotropy_form = AnisotropyForm::Printed;
};

struct EquilibriumConfig
{
  Vec3d m0{0.0, 0.0, 1.0};
  double tol_eq = 1e-9;
  long max_steps = 500000;
};

struct SweepConfig
{
  std::optional<double> omega_min;
  std::optional<double> omega_max;
  int count = 50;
  // Overrides the log-spaced grid when present; kept sorted descending.
  std::optional<std::vector<double>> omegas;
  std::vector<int> directions{0, 1, 2};
  double tol = 5e-2;
  long max_iter = 2000;
  PreconditionerKind precond = PreconditionerKind::CirculantApprox;
  int workers = 1;
  double chi_scale = 1.0;
  bool band_alpha = true;
};

struct OutputConfig
{
  std::string dir = "out";
};

struct RunConfig
{
  MeshConfig mesh;
  MaterialConfig material;
  EquilibriumConfig equilibrium;
  SweepConfig sweep;
  OutputConfig output;

  friend bool operator==(const RunConfig &a, const RunConfig &b);
};

// Throws ErrorCode::Config naming the offending key (and line for syntax
// errors). Unknown keys are rejected.
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::string &path);

// Canonical JSON with every field spelled out.
std::string to_json(const RunConfig &config);

// FNV-1a 64 of the canonical mesh and material sections.
std::uint64_t param_hash(const RunConfig &config);

std::shared_ptr<const Mesh> build_mesh(const RunConfig &config);
MaterialParams build_material(const RunConfig &config, const std::shared_ptr<const Mesh> &mesh);
VectorField build_initial_m(const RunConfig &config, const std::shared_ptr<const Mesh> &mesh);
SweepPlan build_plan(const RunConfig &config);

// Mesh, demag kernel and effective field of a configuration.
std::shared_ptr<const EffectiveField> build_field(const RunConfig &config);

}  // namespace fsusc

#endif  // FSUSC_CONFIG_HPP
