// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_SWEEP_HPP
#define FSUSC_SWEEP_HPP

#include <array>
#include <atomic>
#include <functional>
#include <optional>
#include <vector>
#include "fsusc/cgn.hpp"

namespace fsusc
{

struct SweepPlan
{
  // Strictly positive, sorted descending.
  std::vector<double> frequencies;
  // Subset of {0, 1, 2} (x, y, z), increasing.
  std::vector<int> directions{0, 1, 2};
  double tol = 5e-2;
  long max_iter = 2000;
  PreconditionerKind precond = PreconditionerKind::CirculantApprox;
  PrecondOptions precond_options;
  int workers = 1;
  double chi_scale = 1.0;

  // Throws InvalidArgument on an empty or unsorted grid, bad directions, tol
  // <= 0, max_iter < 1 or workers < 1.
  void validate() const;
};

// count log-spaced values from omega_max down to omega_min.
std::vector<double> log_spaced_descending(double omega_min, double omega_max, int count);

struct SusceptibilityRow
{
  double omega = 0.0;
  // Column k holds the response to excitation along axis k.
  Eigen::Matrix3cd chi = Eigen::Matrix3cd::Zero();
  std::array<bool, 3> solved{};
  std::array<std::optional<SolveReport>, 3> reports;
  // Set when the row failed before any solve (preconditioner build, ...).
  std::string error;
  double wall_time = 0.0;

  bool converged() const;
};

struct SweepControl
{
  // Checked before each row; rows not started are returned with error
  // "cancelled".
  const std::atomic<bool> *cancel = nullptr;
  // Called from worker threads as rows complete (completion order).
  std::function<void(std::size_t, const SusceptibilityRow &)> on_row;
};

// Rows follow plan.frequencies. Row failures are recorded, never thrown.
std::vector<SusceptibilityRow> run_sweep(const SweepPlan &plan,
                                         std::shared_ptr<const EquilibriumState> eq,
                                         std::shared_ptr<const EffectiveField> field,
                                         const SweepControl &control = {});

// Solver options used for every solve of the plan at this frequency.
CgnOptions sweep_solver_options(const SweepPlan &plan, const FrequencySystem &sys);

// One frequency, all planned directions.
SusceptibilityRow solve_row(double omega, const SweepPlan &plan,
                            std::shared_ptr<const EquilibriumState> eq,
                            std::shared_ptr<const EffectiveField> field);

enum class PeakFlag
{
  Resolved,
  NoResonance,
  Unresolved
};

std::string_view to_string(PeakFlag flag);

struct ResonancePeak
{
  int row = 0;
  int col = 0;
  PeakFlag flag = PeakFlag::NoResonance;
  double omega = 0.0;
  double value = 0.0;
};

// Peak of |Im chi| for each solved tensor entry, refined between grid points
// by the zero crossing of the interpolated slope. Needs at least 3 rows.
std::vector<ResonancePeak> resonance_report(const std::vector<SusceptibilityRow> &rows);

// Same search on raw samples (omega need not be sorted).
ResonancePeak locate_peak(const std::vector<double> &omega, const std::vector<double> &value);

}  // namespace fsusc

#endif  // FSUSC_SWEEP_HPP
