// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_BENCH_HPP
#define FSUSC_BENCH_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>
#include "fsusc/config.hpp"

namespace fsusc
{

// 4x4x4 cube of edge 1e-6 with A = 0.88e-10, K = 0.57e-2, alpha = 0.5,
// relaxed from m0 = e_z with u = e_z and no applied field. Frequencies
// 0.452e5 and 0.452e3, tol 1e-5, excitation along x.
RunConfig bench_config();

struct BenchIterations
{
  long at_min = 0;
  long at_max = 0;
  bool converged = false;
};

struct BenchCheck
{
  std::string name;
  bool passed = false;
  std::string detail;
};

struct BenchReport
{
  double relax_residual = 0.0;
  long relax_steps = 0;
  std::map<PreconditionerKind, BenchIterations> iterations;
  // Restricted to the tangent space at omega_min.
  double cond_none = 0.0;
  double clustered_none = 0.0;
  double clustered_circulant = 0.0;
  double clustered_laplacian = 0.0;
  double wall_time = 0.0;
  std::vector<BenchCheck> checks;

  bool all_passed() const;
};

// Ordering Exact <= Laplacian <= Circulant <= Projection <= None with at most
// one adjacent inversion, itself within 20 %.
bool ordering_holds(const std::vector<long> &iterations);

BenchReport run_bench(int workers = 1, const std::function<void(const std::string &)> &log = {});

}  // namespace fsusc

#endif  // FSUSC_BENCH_HPP
