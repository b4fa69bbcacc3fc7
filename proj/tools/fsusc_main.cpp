// Copyright The fsusc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <string>
#include "CLI11.hpp"
#include "fsusc/fsusc.h"

namespace
{

constexpr int kUsageError = 2;
constexpr int kFailure = 1;

int report(fsusc_status status)
{
  std::fprintf(stderr, "fsusc: %s: %s\n", fsusc_status_name(status), fsusc_last_error());
  return status == FSUSC_ERR_CONFIG || status == FSUSC_ERR_INVALID_ARGUMENT ? kUsageError : kFailure;
}

struct Options
{
  std::string config;
  std::string checkpoint;
  std::string out;
  int workers = 0;
  std::string precond;
  double tol = 0.0;
  double omega = 0.0;
  bool restricted = false;
};

// Owns a config handle with the command-line overrides applied.
struct Config
{
  fsusc_config *handle = nullptr;
  ~Config() { fsusc_config_free(handle); }

  fsusc_status load(const Options &o)
  {
    fsusc_status s = fsusc_config_load(o.config.c_str(), &handle);
    if (s == FSUSC_OK && o.workers > 0)
      s = fsusc_config_set_workers(handle, o.workers);
    if (s == FSUSC_OK && !o.precond.empty())
      s = fsusc_config_set_precond(handle, o.precond.c_str());
    if (s == FSUSC_OK && o.tol > 0.0)
      s = fsusc_config_set_tol(handle, o.tol);
    if (s == FSUSC_OK && !o.out.empty())
      s = fsusc_config_set_output_dir(handle, o.out.c_str());
    return s;
  }

  std::string output_dir() const
  {
    char *dir = nullptr;
    if (fsusc_config_output_dir(handle, &dir) != FSUSC_OK)
      return ".";
    std::string s(dir);
    fsusc_string_free(dir);
    return s;
  }
};

struct State
{
  fsusc_state *handle = nullptr;
  ~State() { fsusc_state_free(handle); }
};

void on_sigint(int) { fsusc_request_cancel(); }

int cmd_relax(const Options &o)
{
  Config cfg;
  if (auto s = cfg.load(o); s != FSUSC_OK)
    return report(s);
  const std::string dir = cfg.output_dir();
  const std::string path = o.checkpoint.empty() ? (std::filesystem::path(dir) / "equilibrium.chk").string()
                                                : o.checkpoint;
  State st;
  if (auto s = fsusc_relax(cfg.handle, nullptr, nullptr, &st.handle); s != FSUSC_OK)
    return report(s);
  std::error_code ec;
  if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent, ec);
  if (auto s = fsusc_state_save(st.handle, path.c_str()); s != FSUSC_OK)
    return report(s);
  fsusc_state_info info;
  fsusc_state_info_get(st.handle, &info);
  std::printf("residual   %.6e\n", info.residual);
  std::printf("steps      %lld\n", static_cast<long long>(info.steps));
  std::printf("beta min   %.17g\n", info.beta_min);
  std::printf("beta max   %.17g\n", info.beta_max);
  std::printf("checkpoint %s\n", path.c_str());
  return 0;
}

int cmd_sweep(const Options &o)
{
  Config cfg;
  if (auto s = cfg.load(o); s != FSUSC_OK)
    return report(s);
  State st;
  if (auto s = fsusc_state_load(cfg.handle, o.checkpoint.c_str(), &st.handle); s != FSUSC_OK)
    return report(s);
  std::signal(SIGINT, on_sigint);
  fsusc_sweep *sweep = nullptr;
  auto progress = [](size_t i, double omega, void *) {
    std::fprintf(stderr, "row %zu omega %.6g done\n", i, omega);
  };
  const fsusc_status s = fsusc_sweep_run(cfg.handle, st.handle, progress, nullptr, &sweep);
  std::signal(SIGINT, SIG_DFL);
  if (s != FSUSC_OK)
    return report(s);
  const std::string dir = cfg.output_dir();
  const fsusc_status w = fsusc_sweep_write(sweep, dir.c_str());
  const bool ok = fsusc_sweep_all_converged(sweep) != 0;
  const size_t rows = fsusc_sweep_row_count(sweep);
  for (size_t i = 0; i < rows; ++i)
  {
    fsusc_row_info r;
    fsusc_sweep_row(sweep, i, &r);
    std::printf("omega %-14.6g", r.omega);
    for (int k = 0; k < 3; ++k)
      if (r.solved[k])
        std::printf("  %c: %4lld its err %.3e", "xyz"[k], static_cast<long long>(r.iterations[k]),
                    r.error[k]);
    std::printf("%s\n", r.converged ? "" : "  FAILED");
  }
  fsusc_sweep_free(sweep);
  if (w != FSUSC_OK)
    return report(w);
  std::printf("results in %s\n", dir.c_str());
  if (!ok)
  {
    std::fprintf(stderr, "fsusc: some rows did not converge\n");
    return kFailure;
  }
  return 0;
}

int cmd_svd(const Options &o)
{
  Config cfg;
  if (auto s = cfg.load(o); s != FSUSC_OK)
    return report(s);
  State st;
  if (auto s = fsusc_state_load(cfg.handle, o.checkpoint.c_str(), &st.handle); s != FSUSC_OK)
    return report(s);
  std::vector<double> omegas;
  if (o.omega > 0.0)
    omegas.push_back(o.omega);
  else
  {
    double *w = nullptr;
    size_t n = 0;
    if (auto s = fsusc_config_frequencies(cfg.handle, &w, &n); s != FSUSC_OK)
      return report(s);
    omegas.assign(w, w + n);
    fsusc_doubles_free(w);
  }
  const std::string kind = o.precond.empty() ? "none" : o.precond;
  const std::string dir = cfg.output_dir();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string path = (std::filesystem::path(dir) / "sigma.csv").string();
  std::FILE *f = std::fopen(path.c_str(), "wb");
  if (!f)
  {
    std::fprintf(stderr, "fsusc: cannot write %s\n", path.c_str());
    return kFailure;
  }
  std::fprintf(f, "omega,index,sigma\n");
  for (double omega : omegas)
  {
    double *sigma = nullptr;
    size_t n = 0;
    const fsusc_status s =
      fsusc_svd(cfg.handle, st.handle, omega, kind.c_str(), o.restricted ? 1 : 0, &sigma, &n);
    if (s != FSUSC_OK)
    {
      std::fclose(f);
      return report(s);
    }
    for (size_t i = 0; i < n; ++i)
      std::fprintf(f, "%.17g,%zu,%.17g\n", omega, i, sigma[i]);
    std::printf("omega %.6g: %zu singular values, cond %.6g\n", omega, n, n ? sigma[0] / sigma[n - 1] : 0.0);
    fsusc_doubles_free(sigma);
  }
  std::fclose(f);
  std::printf("spectrum in %s\n", path.c_str());
  return 0;
}

int cmd_bench(const Options &o)
{
  int passed = 0;
  auto line = [](const char *s, void *) { std::printf("%s\n", s); };
  if (auto s = fsusc_bench_run(o.workers > 0 ? o.workers : 1, line, nullptr, &passed); s != FSUSC_OK)
    return report(s);
  std::printf("%s\n", passed ? "bench: all checks passed" : "bench: some checks failed");
  return passed ? 0 : kFailure;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Microwave susceptibility of discretized ferromagnets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fsusc_version()));
  Options o;
  const std::vector<std::string> kinds{"none", "projection", "exact", "laplacian", "circulant"};

  auto *relax = app.add_subcommand("relax", "Relax to equilibrium and write a checkpoint");
  relax->add_option("--config", o.config, "Run configuration (JSON)")->required();
  relax->add_option("--checkpoint", o.checkpoint, "Checkpoint path (default OUT/equilibrium.chk)");
  relax->add_option("--out", o.out, "Output directory");

  auto *sweep = app.add_subcommand("sweep", "Solve the frequency sweep from a checkpoint");
  sweep->add_option("--config", o.config, "Run configuration (JSON)")->required();
  sweep->add_option("--checkpoint", o.checkpoint, "Checkpoint from relax")->required();
  sweep->add_option("--out", o.out, "Output directory");
  sweep->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1, 1024));
  sweep->add_option("--precond", o.precond, "Preconditioner")->check(CLI::IsMember(kinds));
  sweep->add_option("--tol", o.tol, "Relative tolerance")->check(CLI::Range(1e-300, 1.0));

  auto *svd = app.add_subcommand("svd", "Write the singular values of the system operator");
  svd->add_option("--config", o.config, "Run configuration (JSON)")->required();
  svd->add_option("--checkpoint", o.checkpoint, "Checkpoint from relax")->required();
  svd->add_option("--out", o.out, "Output directory");
  svd->add_option("--precond", o.precond, "Preconditioner (default none)")->check(CLI::IsMember(kinds));
  svd->add_option("--omega", o.omega, "Single frequency instead of the configured grid")
    ->check(CLI::PositiveNumber);
  svd->add_flag("--restricted", o.restricted, "Restrict to the tangent space");

  auto *bench = app.add_subcommand("bench", "Run the 4x4x4 bench and print a pass/fail table");
  bench->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1, 1024));

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForVersion &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return kUsageError;
  }

  if (*relax)
    return cmd_relax(o);
  if (*sweep)
    return cmd_sweep(o);
  if (*svd)
    return cmd_svd(o);
  return cmd_bench(o);
}
