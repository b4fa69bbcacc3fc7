// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include "fsusc/diagnostics.hpp"

namespace fsusc
{

namespace
{

constexpr double kOmegaMin = 0.452e3;
constexpr double kOmegaMax = 0.452e5;

std::string range_detail(const char *what, long v_min, long v_max)
{
  std::ostringstream s;
  s << what << " " << v_min << " at omega_min, " << v_max << " at omega_max";
  return s.str();
}

}  // namespace

RunConfig bench_config()
{
  RunConfig c;
  c.mesh.dims = {4, 4, 4};
  c.mesh.h = 1e-6 / 4;
  c.material.A = 0.88e-10;
  c.material.K = 0.57e-2;
  c.material.alpha = 0.5;
  c.material.u = {0.0, 0.0, 1.0};
  c.material.ell = {0.0, 0.0, 0.0};
  c.equilibrium.m0 = {0.0, 0.0, 1.0};
  c.equilibrium.tol_eq = 1e-9;
  c.sweep.omegas = std::vector<double>{kOmegaMax, kOmegaMin};
  c.sweep.directions = {0};
  c.sweep.tol = 1e-5;
  c.sweep.max_iter = 2000;
  c.sweep.precond = PreconditionerKind::CirculantApprox;
  c.output.dir = "bench_out";
  return c;
}

bool BenchReport::all_passed() const
{
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const BenchCheck &c) { return c.passed; });
}

bool ordering_holds(const std::vector<long> &its)
{
  int inversions = 0;
  for (std::size_t i = 0; i + 1 < its.size(); ++i)
    if (its[i] > its[i + 1])
    {
      ++inversions;
      if (static_cast<double>(its[i]) > 1.2 * static_cast<double>(its[i + 1]))
        return false;
    }
  return inversions <= 1;
}

BenchReport run_bench(int workers, const std::function<void(const std::string &)> &log)
{
  const auto start = std::chrono::steady_clock::now();
  auto say = [&](const std::string &s) {
    if (log)
      log(s);
  };
  BenchReport rep;
  const RunConfig cfg = bench_config();
  const auto field = build_field(cfg);
  RelaxOptions ro;
  ro.tol_eq = cfg.equilibrium.tol_eq;
  ro.max_steps = cfg.equilibrium.max_steps;
  const auto eq = std::make_shared<const EquilibriumState>(
    relax(build_initial_m(cfg, field->mesh_ptr()), *field, ro));
  rep.relax_residual = eq->residual;
  rep.relax_steps = eq->steps;
  {
    std::ostringstream s;
    s << "relaxed in " << eq->steps << " steps, residual " << eq->residual;
    say(s.str());
  }

  const PreconditionerKind kinds[] = {PreconditionerKind::ExactDense, PreconditionerKind::LaplacianBand,
                                      PreconditionerKind::CirculantApprox,
                                      PreconditionerKind::ProjectionOnly, PreconditionerKind::None};
  SweepPlan plan = build_plan(cfg);
  plan.workers = workers;
  for (PreconditionerKind k : kinds)
  {
    plan.precond = k;
    const auto rows = run_sweep(plan, eq, field);
    BenchIterations it;
    it.converged = true;
    for (const auto &row : rows)
    {
      const auto &r = row.reports[0];
      const long n = r ? r->iterations : -1;
      it.converged = it.converged && row.converged() && r && r->converged;
      (row.omega == kOmegaMin ? it.at_min : it.at_max) = n;
    }
    rep.iterations[k] = it;
    std::ostringstream s;
    s << to_string(k) << ": " << it.at_min << " iterations at omega_min, " << it.at_max
      << " at omega_max" << (it.converged ? "" : " (not converged)");
    say(s.str());
  }

  const FrequencySystem sys(kOmegaMin, eq, field);
  const auto sigma_of = [&](PreconditionerKind k) {
    return singular_values(restricted_operator(sys, make_preconditioner(k, sys)));
  };
  const auto s_none = sigma_of(PreconditionerKind::None);
  rep.cond_none = condition_number(s_none);
  rep.clustered_none = clustered_fraction(s_none);
  rep.clustered_circulant = clustered_fraction(sigma_of(PreconditionerKind::CirculantApprox));
  rep.clustered_laplacian = clustered_fraction(sigma_of(PreconditionerKind::LaplacianBand));
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto &none = rep.iterations[PreconditionerKind::None];
  const auto &proj = rep.iterations[PreconditionerKind::ProjectionOnly];
  const auto &lap = rep.iterations[PreconditionerKind::LaplacianBand];
  const auto &circ = rep.iterations[PreconditionerKind::CirculantApprox];
  const auto &exact = rep.iterations[PreconditionerKind::ExactDense];
  auto within = [](long v, long lo, long hi) { return v >= lo && v <= hi; };

  rep.checks.push_back({"1a unpreconditioned iterations in [40,85] / [35,70]",
                        none.converged && within(none.at_min, 40, 85) && within(none.at_max, 35, 70),
                        range_detail("none", none.at_min, none.at_max)});
  rep.checks.push_back({"1b projection-only iterations in [35,70] / [20,40]",
                        proj.converged && within(proj.at_min, 35, 70) && within(proj.at_max, 20, 40),
                        range_detail("projection", proj.at_min, proj.at_max)});
  rep.checks.push_back({"1c Laplacian-band iterations <= 15 / 15",
                        lap.converged && lap.at_min <= 15 && lap.at_max <= 15,
                        range_detail("laplacian", lap.at_min, lap.at_max)});
  rep.checks.push_back({"1d circulant iterations <= 45 / 40",
                        circ.converged && circ.at_min <= 45 && circ.at_max <= 40,
                        range_detail("circulant", circ.at_min, circ.at_max)});
  {
    std::ostringstream s;
    s << "cond " << rep.cond_none;
    rep.checks.push_back({"1e restricted cond in [3000, 15000]",
                          rep.cond_none >= 3000.0 && rep.cond_none <= 15000.0, s.str()});
  }
  {
    std::ostringstream s;
    s << rep.wall_time << " s";
    rep.checks.push_back({"1 runtime under 30 s", rep.wall_time < 30.0, s.str()});
  }
  {
    const std::vector<long> order{exact.at_min, lap.at_min, circ.at_min, proj.at_min, none.at_min};
    std::ostringstream s;
    s << "exact " << order[0] << ", laplacian " << order[1] << ", circulant " << order[2]
      << ", projection " << order[3] << ", none " << order[4];
    rep.checks.push_back({"2 preconditioner ordering at omega_min", ordering_holds(order), s.str()});
  }
  {
    std::ostringstream s;
    s << "none " << rep.clustered_none << ", circulant " << rep.clustered_circulant
      << ", laplacian " << rep.clustered_laplacian;
    rep.checks.push_back({"9 clustered fraction strictly increasing",
                          rep.clustered_none < rep.clustered_circulant &&
                            rep.clustered_circulant < rep.clustered_laplacian,
                          s.str()});
  }
  return rep;
}

}  // namespace fsusc
