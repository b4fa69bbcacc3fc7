// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

namespace fsusc
{

void SweepPlan::validate() const
{
  if (frequencies.empty())
    throw Error(ErrorCode::InvalidArgument, "frequency list is empty");
  for (std::size_t i = 0; i < frequencies.size(); ++i)
  {
    if (!(frequencies[i] > 0.0) || !std::isfinite(frequencies[i]))
      throw Error(ErrorCode::InvalidArgument, "frequencies must be finite and > 0");
    if (i > 0 && !(frequencies[i] < frequencies[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "frequencies must be strictly descending");
  }
  if (directions.empty())
    throw Error(ErrorCode::InvalidArgument, "direction list is empty");
  for (std::size_t i = 0; i < directions.size(); ++i)
    if (directions[i] < 0 || directions[i] > 2 || (i > 0 && directions[i] <= directions[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "directions must be distinct axes in x, y, z order");
  if (!(tol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
  if (max_iter < 1)
    throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (workers < 1)
    throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
  if (!std::isfinite(chi_scale))
    throw Error(ErrorCode::InvalidArgument, "chi_scale must be finite");
}

std::vector<double> log_spaced_descending(double omega_min, double omega_max, int count)
{
  if (!(omega_min > 0.0) || !(omega_max >= omega_min) || count < 1)
    throw Error(ErrorCode::InvalidArgument, "need 0 < omega_min <= omega_max and count >= 1");
  if (count == 1)
    return {omega_max};
  if (omega_max == omega_min)
    throw Error(ErrorCode::InvalidArgument, "omega_min == omega_max with count > 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double lo = std::log(omega_min), hi = std::log(omega_max);
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = std::exp(hi + (lo - hi) * i / (count - 1));
  out.front() = omega_max;
  out.back() = omega_min;
  return out;
}

bool SusceptibilityRow::converged() const
{
  if (!error.empty())
    return false;
  for (const auto &r : reports)
    if (r && !r->converged)
      return false;
  return true;
}

CgnOptions sweep_solver_options(const SweepPlan &plan, const FrequencySystem &sys)
{
  const double n_int = static_cast<double>(sys.mesh().interior_count());
  const double alpha = sys.alpha();
  CgnOptions opts;
  opts.tol = plan.tol;
  opts.max_iter = plan.max_iter;
  // A rhs within tol of the full unit excitation scale needs no solve.
  opts.zero_rhs_floor = plan.tol * std::sqrt((1.0 + alpha * alpha) * n_int);
  return opts;
}

SusceptibilityRow solve_row(double omega, const SweepPlan &plan,
                            std::shared_ptr<const EquilibriumState> eq,
                            std::shared_ptr<const EffectiveField> field)
{
  const auto start = std::chrono::steady_clock::now();
  SusceptibilityRow row;
  row.omega = omega;
  try
  {
    const FrequencySystem sys(omega, eq, field);
    const Preconditioner precond = make_preconditioner(plan.precond, sys, plan.precond_options);
    const Mesh &mesh = sys.mesh();
    const double n_int = static_cast<double>(mesh.interior_count());
    const CgnOptions opts = sweep_solver_options(plan, sys);
    for (int k : plan.directions)
    {
      Vec3d zeta{0.0, 0.0, 0.0};
      zeta[k] = 1.0;
      try
      {
        CgnSolution sol = solve_cgn(sys, sys.build_rhs(zeta), precond, opts);
        Vec3c sum{};
        for (std::size_t c : mesh.interior_cells())
          sum += sol.mu.get(c);
        for (int l = 0; l < 3; ++l)
          row.chi(l, k) = plan.chi_scale * sum[l] / n_int;
        row.solved[static_cast<std::size_t>(k)] = true;
        row.reports[static_cast<std::size_t>(k)] = std::move(sol.report);
      }
      catch (const std::exception &e)
      {
        SolveReport rep;
        rep.stop = StopReason::Failed;
        rep.error = e.what();
        row.reports[static_cast<std::size_t>(k)] = std::move(rep);
      }
    }
  }
  catch (const std::exception &e)
  {
    row.error = e.what();
  }
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<SusceptibilityRow> run_sweep(const SweepPlan &plan,
                                         std::shared_ptr<const EquilibriumState> eq,
                                         std::shared_ptr<const EffectiveField> field,
                                         const SweepControl &control)
{
  plan.validate();
  const std::size_t n = plan.frequencies.size();
  std::vector<SusceptibilityRow> rows(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;)
    {
      const std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      if (control.cancel && control.cancel->load())
      {
        rows[i].omega = plan.frequencies[i];
        rows[i].error = "cancelled";
        continue;
      }
      rows[i] = solve_row(plan.frequencies[i], plan, eq, field);
      if (control.on_row)
        control.on_row(i, rows[i]);
    }
  };
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(plan.workers), n));
  if (workers <= 1)
  {
    work();
    return rows;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back(work);
  for (auto &t : pool)
    t.join();
  return rows;
}

std::string_view to_string(PeakFlag flag)
{
  switch (flag)
  {
    case PeakFlag::Resolved:
      return "resolved";
    case PeakFlag::NoResonance:
      return "no_resonance";
    case PeakFlag::Unresolved:
      return "unresolved";
  }
  return "unresolved";
}

ResonancePeak locate_peak(const std::vector<double> &omega, const std::vector<double> &value)
{
  if (omega.size() != value.size() || omega.size() < 3)
    throw Error(ErrorCode::InvalidArgument, "peak search needs at least 3 samples");
  std::vector<std::size_t> order(omega.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return omega[a] < omega[b]; });
  std::vector<double> x, y;
  for (auto i : order)
  {
    x.push_back(omega[i]);
    y.push_back(value[i]);
  }

  ResonancePeak peak;
  const auto it = std::max_element(y.begin(), y.end());
  const auto j = static_cast<std::size_t>(it - y.begin());
  peak.omega = x[j];
  peak.value = y[j];
  if (!(*it > 0.0))
  {
    peak.flag = PeakFlag::NoResonance;
    return peak;
  }
  if (j == 0 || j + 1 == x.size())
  {
    peak.flag = PeakFlag::Unresolved;
    return peak;
  }
  peak.flag = PeakFlag::Resolved;
  // Slopes at the two neighbouring midpoints; their linear zero crossing.
  const double xl = 0.5 * (x[j - 1] + x[j]), xr = 0.5 * (x[j] + x[j + 1]);
  const double dl = (y[j] - y[j - 1]) / (x[j] - x[j - 1]);
  const double dr = (y[j + 1] - y[j]) / (x[j + 1] - x[j]);
  if (dl > 0.0 && dr < 0.0)
  {
    const double xs = xl + dl * (xr - xl) / (dl - dr);
    peak.omega = xs;
  }
  return peak;
}

std::vector<ResonancePeak> resonance_report(const std::vector<SusceptibilityRow> &rows)
{
  if (rows.size() < 3)
    throw Error(ErrorCode::InvalidArgument, "resonance report needs at least 3 rows");
  std::vector<ResonancePeak> out;
  for (int k = 0; k < 3; ++k)
  {
    bool any = false;
    for (const auto &r : rows)
      any = any || r.solved[static_cast<std::size_t>(k)];
    if (!any)
      continue;
    for (int l = 0; l < 3; ++l)
    {
      std::vector<double> omega, value;
      for (const auto &r : rows)
        if (r.solved[static_cast<std::size_t>(k)])
        {
          omega.push_back(r.omega);
          value.push_back(std::abs(r.chi(l, k).imag()));
        }
      ResonancePeak p;
      if (omega.size() >= 3)
        p = locate_peak(omega, value);
      p.row = l;
      p.col = k;
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace fsusc
