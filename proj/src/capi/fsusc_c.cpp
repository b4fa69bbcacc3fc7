// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fsusc/fsusc.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include "fsusc/bench.hpp"
#include "fsusc/checkpoint.hpp"
#include "fsusc/diagnostics.hpp"
#include "fsusc/output.hpp"

struct fsusc_config
{
  fsusc::RunConfig config;
};

struct fsusc_state
{
  fsusc::RunConfig config;
  std::shared_ptr<const fsusc::EffectiveField> field;
  std::shared_ptr<const fsusc::EquilibriumState> eq;
};

struct fsusc_sweep
{
  fsusc::RunConfig config;
  fsusc::SweepPlan plan;
  std::vector<fsusc::SusceptibilityRow> rows;
  double wall_time = 0.0;
};

namespace
{

thread_local std::string last_error;
std::atomic<bool> cancel_flag{false};

fsusc_status map_code(fsusc::ErrorCode code)
{
  using fsusc::ErrorCode;
  switch (code)
  {
    case ErrorCode::InvalidArgument:
      return FSUSC_ERR_INVALID_ARGUMENT;
    case ErrorCode::Config:
      return FSUSC_ERR_CONFIG;
    case ErrorCode::Io:
      return FSUSC_ERR_IO;
    case ErrorCode::CheckpointCorrupt:
      return FSUSC_ERR_CHECKPOINT_CORRUPT;
    case ErrorCode::StaleCheckpoint:
      return FSUSC_ERR_STALE_CHECKPOINT;
    case ErrorCode::EmptyDomain:
      return FSUSC_ERR_EMPTY_DOMAIN;
    case ErrorCode::NotEquilibrium:
      return FSUSC_ERR_NOT_EQUILIBRIUM;
    case ErrorCode::MaxStepsExceeded:
    case ErrorCode::BlowUp:
      return FSUSC_ERR_RELAX_FAILED;
    case ErrorCode::DenseLimit:
      return FSUSC_ERR_DENSE_LIMIT;
    case ErrorCode::SingularFactorization:
    case ErrorCode::InnerSolve:
      return FSUSC_ERR_NUMERICAL;
    case ErrorCode::Internal:
      return FSUSC_ERR_INTERNAL;
  }
  return FSUSC_ERR_INTERNAL;
}

fsusc_status fail(fsusc_status status, const std::string &message)
{
  last_error = message;
  return status;
}

template <class F>
fsusc_status guarded(F &&body)
{
  try
  {
    last_error.clear();
    return body();
  }
  catch (const fsusc::Error &e)
  {
    return fail(map_code(e.code()), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return fail(FSUSC_ERR_INTERNAL, "out of memory");
  }
  catch (const std::exception &e)
  {
    return fail(FSUSC_ERR_INTERNAL, e.what());
  }
}

char *copy_string(const std::string &s)
{
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

double *copy_doubles(const std::vector<double> &values)
{
  auto *buf = static_cast<double *>(std::malloc(std::max<std::size_t>(1, values.size()) * sizeof(double)));
  if (!buf)
    throw std::bad_alloc();
  std::copy(values.begin(), values.end(), buf);
  return buf;
}

#define FSUSC_REQUIRE(cond, what)                                                                  \
  if (!(cond))                                                                                     \
  return fail(FSUSC_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char *fsusc_version(void) { return "0.1.0"; }

const char *fsusc_last_error(void) { return last_error.c_str(); }

const char *fsusc_status_name(fsusc_status status)
{
  switch (status)
  {
    case FSUSC_OK:
      return "ok";
    case FSUSC_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case FSUSC_ERR_CONFIG:
      return "config error";
    case FSUSC_ERR_IO:
      return "I/O error";
    case FSUSC_ERR_CHECKPOINT_CORRUPT:
      return "checkpoint corrupt";
    case FSUSC_ERR_STALE_CHECKPOINT:
      return "stale checkpoint";
    case FSUSC_ERR_EMPTY_DOMAIN:
      return "empty domain";
    case FSUSC_ERR_NOT_EQUILIBRIUM:
      return "not an equilibrium";
    case FSUSC_ERR_RELAX_FAILED:
      return "relaxation failed";
    case FSUSC_ERR_DENSE_LIMIT:
      return "dense limit exceeded";
    case FSUSC_ERR_NUMERICAL:
      return "numerical failure";
    case FSUSC_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void fsusc_string_free(char *s) { std::free(s); }

void fsusc_doubles_free(double *values) { std::free(values); }

fsusc_status fsusc_config_load(const char *path, fsusc_config **out)
{
  FSUSC_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new fsusc_config{fsusc::load_config(path)};
    return FSUSC_OK;
  });
}

fsusc_status fsusc_config_parse(const char *json_text, fsusc_config **out)
{
  FSUSC_REQUIRE(json_text && out, "null argument");
  return guarded([&] {
    *out = new fsusc_config{fsusc::parse_config(json_text)};
    return FSUSC_OK;
  });
}

fsusc_status fsusc_config_to_json(const fsusc_config *config, char **out)
{
  FSUSC_REQUIRE(config && out, "null argument");
  return guarded([&] {
    *out = copy_string(fsusc::to_json(config->config));
    return FSUSC_OK;
  });
}

fsusc_status fsusc_config_set_workers(fsusc_config *config, int workers)
{
  FSUSC_REQUIRE(config, "null argument");
  FSUSC_REQUIRE(workers >= 1 && workers <= 1024, "workers must be in [1, 1024]");
  config->config.sweep.workers = workers;
  return FSUSC_OK;
}

fsusc_status fsusc_config_set_precond(fsusc_config *config, const char *kind)
{
  FSUSC_REQUIRE(config && kind, "null argument");
  const auto k = fsusc::parse_preconditioner(kind);
  FSUSC_REQUIRE(k, "unknown preconditioner (expected none, projection, exact, laplacian, circulant)");
  config->config.sweep.precond = *k;
  return FSUSC_OK;
}

fsusc_status fsusc_config_set_tol(fsusc_config *config, double tol)
{
  FSUSC_REQUIRE(config, "null argument");
  FSUSC_REQUIRE(tol > 0.0 && tol < 1.0, "tol must be in (0, 1)");
  config->config.sweep.tol = tol;
  return FSUSC_OK;
}

fsusc_status fsusc_config_frequencies(const fsusc_config *config, double **omegas, size_t *count)
{
  FSUSC_REQUIRE(config && omegas && count, "null argument");
  return guarded([&] {
    const auto plan = fsusc::build_plan(config->config);
    *omegas = copy_doubles(plan.frequencies);
    *count = plan.frequencies.size();
    return FSUSC_OK;
  });
}

fsusc_status fsusc_config_output_dir(const fsusc_config *config, char **out)
{
  FSUSC_REQUIRE(config && out, "null argument");
  return guarded([&] {
    *out = copy_string(config->config.output.dir);
    return FSUSC_OK;
  });
}

fsusc_status fsusc_config_set_output_dir(fsusc_config *config, const char *dir)
{
  FSUSC_REQUIRE(config && dir && *dir, "output directory must be nonempty");
  config->config.output.dir = dir;
  return FSUSC_OK;
}

void fsusc_config_free(fsusc_config *config) { delete config; }

fsusc_status fsusc_relax(const fsusc_config *config, fsusc_relax_callback on_step, void *user,
                         fsusc_state **out)
{
  FSUSC_REQUIRE(config && out, "null argument");
  return guarded([&] {
    const auto &cfg = config->config;
    auto field = fsusc::build_field(cfg);
    fsusc::RelaxOptions opts;
    opts.tol_eq = cfg.equilibrium.tol_eq;
    opts.max_steps = cfg.equilibrium.max_steps;
    if (on_step)
      opts.on_step = [on_step, user](long step, double residual, double dt) {
        on_step(step, residual, dt, user);
      };
    auto eq = std::make_shared<const fsusc::EquilibriumState>(
      fsusc::relax(fsusc::build_initial_m(cfg, field->mesh_ptr()), *field, opts));
    *out = new fsusc_state{cfg, std::move(field), std::move(eq)};
    return FSUSC_OK;
  });
}

fsusc_status fsusc_state_save(const fsusc_state *state, const char *path)
{
  FSUSC_REQUIRE(state && path, "null argument");
  return guarded([&] {
    fsusc::write_checkpoint(path, fsusc::make_checkpoint(state->config, *state->eq));
    return FSUSC_OK;
  });
}

fsusc_status fsusc_state_load(const fsusc_config *config, const char *path, fsusc_state **out)
{
  FSUSC_REQUIRE(config && path && out, "null argument");
  return guarded([&] {
    const auto &cfg = config->config;
    auto field = fsusc::build_field(cfg);
    auto eq = std::make_shared<const fsusc::EquilibriumState>(
      fsusc::load_equilibrium(path, cfg, *field));
    *out = new fsusc_state{cfg, std::move(field), std::move(eq)};
    return FSUSC_OK;
  });
}

fsusc_status fsusc_state_info_get(const fsusc_state *state, fsusc_state_info *info)
{
  FSUSC_REQUIRE(state && info, "null argument");
  const auto &mesh = state->field->mesh();
  info->dims[0] = static_cast<uint32_t>(mesh.dims().nx);
  info->dims[1] = static_cast<uint32_t>(mesh.dims().ny);
  info->dims[2] = static_cast<uint32_t>(mesh.dims().nz);
  info->interior_cells = mesh.interior_count();
  info->residual = state->eq->residual;
  info->steps = state->eq->steps;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t c : mesh.interior_cells())
  {
    const double b = state->eq->diagonal.beta[c];
    lo = first ? b : std::min(lo, b);
    hi = first ? b : std::max(hi, b);
    first = false;
  }
  info->beta_min = lo;
  info->beta_max = hi;
  return FSUSC_OK;
}

void fsusc_state_free(fsusc_state *state) { delete state; }

fsusc_status fsusc_sweep_run(const fsusc_config *config, const fsusc_state *state,
                             fsusc_row_callback on_row, void *user, fsusc_sweep **out)
{
  FSUSC_REQUIRE(config && state && out, "null argument");
  FSUSC_REQUIRE(fsusc::param_hash(config->config) == fsusc::param_hash(state->config),
                "state was built for different mesh or material parameters");
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    auto sweep = std::make_unique<fsusc_sweep>();
    sweep->config = config->config;
    sweep->plan = fsusc::build_plan(config->config);
    fsusc::SweepControl control;
    cancel_flag.store(false);
    control.cancel = &cancel_flag;
    if (on_row)
      control.on_row = [on_row, user](std::size_t i, const fsusc::SusceptibilityRow &row) {
        on_row(i, row.omega, user);
      };
    sweep->rows = fsusc::run_sweep(sweep->plan, state->eq, state->field, control);
    sweep->wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    *out = sweep.release();
    return FSUSC_OK;
  });
}

void fsusc_request_cancel(void) { cancel_flag.store(true); }

size_t fsusc_sweep_row_count(const fsusc_sweep *sweep) { return sweep ? sweep->rows.size() : 0; }

fsusc_status fsusc_sweep_row(const fsusc_sweep *sweep, size_t index, fsusc_row_info *out)
{
  FSUSC_REQUIRE(sweep && out, "null argument");
  FSUSC_REQUIRE(index < sweep->rows.size(), "row index out of range");
  const auto &row = sweep->rows[index];
  *out = fsusc_row_info{};
  out->omega = row.omega;
  out->converged = row.converged() ? 1 : 0;
  out->wall_time = row.wall_time;
  for (int k = 0; k < 3; ++k)
  {
    out->solved[k] = row.solved[static_cast<std::size_t>(k)] ? 1 : 0;
    const auto &rep = row.reports[static_cast<std::size_t>(k)];
    out->iterations[k] = rep ? rep->iterations : -1;
    out->error[k] = rep ? rep->final_true_residual : 0.0;
    for (int l = 0; l < 3; ++l)
    {
      out->chi_re[3 * l + k] = row.chi(l, k).real();
      out->chi_im[3 * l + k] = row.chi(l, k).imag();
    }
  }
  return FSUSC_OK;
}

int fsusc_sweep_all_converged(const fsusc_sweep *sweep)
{
  if (!sweep)
    return 0;
  return std::all_of(sweep->rows.begin(), sweep->rows.end(),
                     [](const fsusc::SusceptibilityRow &r) { return r.converged(); })
           ? 1
           : 0;
}

fsusc_status fsusc_sweep_write(const fsusc_sweep *sweep, const char *dir)
{
  FSUSC_REQUIRE(sweep && dir, "null argument");
  return guarded([&] {
    fsusc::write_sweep_outputs(dir, sweep->config, sweep->plan, sweep->rows, sweep->wall_time);
    return FSUSC_OK;
  });
}

void fsusc_sweep_free(fsusc_sweep *sweep) { delete sweep; }

fsusc_status fsusc_svd(const fsusc_config *config, const fsusc_state *state, double omega,
                       const char *precond, int restricted, double **sigma, size_t *count)
{
  FSUSC_REQUIRE(config && state && precond && sigma && count, "null argument");
  FSUSC_REQUIRE(omega > 0.0, "omega must be > 0");
  const auto kind = fsusc::parse_preconditioner(precond);
  FSUSC_REQUIRE(kind, "unknown preconditioner (expected none, projection, exact, laplacian, circulant)");
  return guarded([&] {
    const fsusc::FrequencySystem sys(omega, state->eq, state->field);
    fsusc::PrecondOptions opts;
    opts.band_alpha = config->config.sweep.band_alpha;
    const auto p = fsusc::make_preconditioner(*kind, sys, opts);
    const auto values = fsusc::singular_values(restricted ? fsusc::restricted_operator(sys, p)
                                                          : fsusc::assemble_system(sys, p));
    *sigma = copy_doubles(values);
    *count = values.size();
    return FSUSC_OK;
  });
}

fsusc_status fsusc_bench_run(int workers, fsusc_line_callback on_line, void *user, int *all_passed)
{
  FSUSC_REQUIRE(workers >= 1, "workers must be >= 1");
  return guarded([&] {
    auto log = [&](const std::string &s) {
      if (on_line)
        on_line(s.c_str(), user);
    };
    const auto report = fsusc::run_bench(workers, log);
    for (const auto &c : report.checks)
      log(std::string(c.passed ? "PASS  " : "FAIL  ") + c.name + "  (" + c.detail + ")");
    if (all_passed)
      *all_passed = report.all_passed() ? 1 : 0;
    return FSUSC_OK;
  });
}

}  // extern "C"
