// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include "json.hpp"

namespace fsusc
{

std::string format_number(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace
{

char axis(int k) { return static_cast<char>('x' + k); }

}  // namespace

std::string iterations_csv(const std::vector<SusceptibilityRow> &rows, const std::vector<int> &directions)
{
  std::ostringstream out;
  out << "omega";
  for (int k : directions)
    out << ",iterations_" << axis(k) << ",error_" << axis(k);
  out << "\n";
  for (const auto &r : rows)
  {
    out << format_number(r.omega);
    for (int k : directions)
    {
      const auto &rep = r.reports[static_cast<std::size_t>(k)];
      if (rep && r.solved[static_cast<std::size_t>(k)])
        out << "," << rep->iterations << "," << format_number(rep->final_true_residual);
      else
        out << ",,";
    }
    out << "\n";
  }
  return out.str();
}

std::string chi_csv(const std::vector<SusceptibilityRow> &rows)
{
  std::ostringstream out;
  out << "omega";
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 3; ++k)
      out << ",chi_" << axis(l) << axis(k) << "_re,chi_" << axis(l) << axis(k) << "_im";
  out << "\n";
  for (const auto &r : rows)
  {
    out << format_number(r.omega);
    for (int l = 0; l < 3; ++l)
      for (int k = 0; k < 3; ++k)
      {
        if (r.solved[static_cast<std::size_t>(k)])
          out << "," << format_number(r.chi(l, k).real()) << "," << format_number(r.chi(l, k).imag());
        else
          out << ",,";
      }
    out << "\n";
  }
  return out.str();
}

std::string residuals_csv(const std::vector<SusceptibilityRow> &rows)
{
  std::ostringstream out;
  out << "omega,direction,iteration,normal_residual,residual_norm\n";
  for (const auto &r : rows)
    for (int k = 0; k < 3; ++k)
    {
      const auto &rep = r.reports[static_cast<std::size_t>(k)];
      if (!rep)
        continue;
      for (std::size_t i = 0; i < rep->residual_history.size(); ++i)
      {
        out << format_number(r.omega) << "," << axis(k) << "," << i << ","
            << format_number(rep->residual_history[i]) << ",";
        if (i < rep->residual_norm_history.size())
          out << format_number(rep->residual_norm_history[i]);
        out << "\n";
      }
    }
  return out.str();
}

std::string sweep_metadata_json(const RunConfig &config, const SweepPlan &plan,
                                const std::vector<SusceptibilityRow> &rows, double wall_time)
{
  using nlohmann::json;
  json row_info = json::array();
  for (const auto &r : rows)
  {
    json solves = json::object();
    for (int k = 0; k < 3; ++k)
    {
      const auto &rep = r.reports[static_cast<std::size_t>(k)];
      if (!rep)
        continue;
      solves[std::string(1, axis(k))] = {{"iterations", rep->iterations},
                                         {"converged", rep->converged},
                                         {"stop", std::string(to_string(rep->stop))},
                                         {"true_residual", rep->final_true_residual},
                                         {"wall_time", rep->wall_time},
                                         {"error", rep->error}};
    }
    row_info.push_back({{"omega", r.omega},
                        {"wall_time", r.wall_time},
                        {"converged", r.converged()},
                        {"error", r.error},
                        {"solves", solves}});
  }
  const json meta = {{"config", json::parse(to_json(config))},
                     {"preconditioner", std::string(to_string(plan.precond))},
                     {"band_alpha", plan.precond_options.band_alpha},
                     {"tol", plan.tol},
                     {"max_iter", plan.max_iter},
                     {"workers", plan.workers},
                     {"param_hash", param_hash(config)},
                     {"rows", row_info},
                     {"total_wall_time", wall_time}};
  return meta.dump(2) + "\n";
}

void write_text(const std::string &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out)
    throw Error(ErrorCode::Io, "cannot write " + path);
}

void write_sweep_outputs(const std::string &dir, const RunConfig &config, const SweepPlan &plan,
                         const std::vector<SusceptibilityRow> &rows, double wall_time)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorCode::Io, "cannot create output directory " + dir + ": " + ec.message());
  const std::filesystem::path d(dir);
  write_text((d / "iterations.csv").string(), iterations_csv(rows, plan.directions));
  write_text((d / "chi.csv").string(), chi_csv(rows));
  write_text((d / "residuals.csv").string(), residuals_csv(rows));
  write_text((d / "metadata.json").string(), sweep_metadata_json(config, plan, rows, wall_time));
}

}  // namespace fsusc
