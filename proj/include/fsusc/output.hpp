// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FSUSC_OUTPUT_HPP
#define FSUSC_OUTPUT_HPP

#include <string>
#include <vector>
#include "fsusc/config.hpp"
#include "fsusc/sweep.hpp"

namespace fsusc
{

// 17 significant digits.
std::string format_number(double v);

// omega, iterations_x, error_x, ... for the planned directions.
std::string iterations_csv(const std::vector<SusceptibilityRow> &rows, const std::vector<int> &directions);
// omega, then re/im of each chi entry; columns of unsolved directions are empty.
std::string chi_csv(const std::vector<SusceptibilityRow> &rows);
// omega, direction, iteration, normal_residual, residual_norm.
std::string residuals_csv(const std::vector<SusceptibilityRow> &rows);

std::string sweep_metadata_json(const RunConfig &config, const SweepPlan &plan,
                                const std::vector<SusceptibilityRow> &rows, double wall_time);

void write_text(const std::string &path, const std::string &text);

// Writes iterations.csv, chi.csv, residuals.csv and metadata.json into dir.
void write_sweep_outputs(const std::string &dir, const RunConfig &config, const SweepPlan &plan,
                         const std::vector<SusceptibilityRow> &rows, double wall_time);

}  // namespace fsusc

#endif  // FSUSC_OUTPUT_HPP
