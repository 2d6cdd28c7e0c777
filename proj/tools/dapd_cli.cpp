// Command-line front end: single runs, EXTRA tuning and experiment suites.
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "dapd/errors.hpp"
#include "dapd/runner.hpp"
#include "dapd/suites.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBudget = 2;
constexpr int kExitConfig = 3;
constexpr int kExitDiverged = 4;

int exit_code(dapd::RunStatus status) {
  switch (status) {
    case dapd::RunStatus::converged: return kExitOk;
    case dapd::RunStatus::budget_exhausted: return kExitBudget;
    case dapd::RunStatus::diverged: return kExitDiverged;
    case dapd::RunStatus::running: break;
  }
  return kExitFailure;
}

void emit(const dapd::RunTrace& trace, const dapd::RunConfig& cfg, const std::string& out) {
  const std::string target = out.empty() ? cfg.output : out;
  if (target.empty() || target == "-")
    dapd::write_csv(trace, std::cout, dapd::describe(cfg));
  else
    dapd::write_csv(trace, std::filesystem::path(target), dapd::describe(cfg));
  std::fprintf(stderr, "%s: %s, k=%ld, vector_rounds=%zu, scalar_rounds=%zu, %.3f s\n",
               dapd::to_string(cfg.algorithm.kind).c_str(), dapd::to_string(trace.status).c_str(),
               trace.iterations, trace.vector_rounds, trace.scalar_rounds, trace.wall_seconds);
  if (!trace.message.empty()) std::fprintf(stderr, "  %s\n", trace.message.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized adaptive primal-dual experiments"};
  app.require_subcommand(1);

  std::string config_path, out;
  auto* run_cmd = app.add_subcommand("run", "Run one configured experiment");
  run_cmd->add_option("--config", config_path, "JSON run config")->required();
  run_cmd->add_option("--out", out, "Trace CSV (overrides config 'output'; '-' for stdout)");

  auto* tune_cmd = app.add_subcommand("tune-extra", "Grid-search the EXTRA stepsize");
  tune_cmd->add_option("--config", config_path, "JSON run config")->required();
  tune_cmd->add_option("--out", out, "Trace CSV of the best stepsize");

  std::string suite_name, data;
  dapd::SuiteOptions suite;
  std::string suite_out = "out";
  auto* suite_cmd = app.add_subcommand("suite", "Run an experiment suite");
  suite_cmd->add_option("name", suite_name, "quadratic_graphs | condition_sweep | diameter_sweep | logistic_graphs")
      ->required();
  suite_cmd->add_option("--out", suite_out, "Output directory")->required();
  suite_cmd->add_option("--data", data, "libsvm data file (logistic_graphs)");
  suite_cmd->add_flag("--surrogate", suite.surrogate, "Synthetic data when no file is available");
  suite_cmd->add_flag("--quick", suite.quick, "Reduced grids and budgets");
  suite_cmd->add_option("--jobs", suite.jobs, "Parallel runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) {
      const dapd::RunConfig cfg = dapd::load_run_config(config_path);
      const dapd::RunTrace trace = dapd::run(cfg);
      emit(trace, cfg, out);
      return exit_code(trace.status);
    }
    if (*tune_cmd) {
      dapd::RunConfig cfg = dapd::load_run_config(config_path);
      auto grid = cfg.algorithm.extra_alpha_grid.empty() ? dapd::default_extra_grid()
                                                         : cfg.algorithm.extra_alpha_grid;
      const dapd::TuneResult best = dapd::tune_extra(cfg, grid);
      for (const auto& [alpha, status] : best.attempts)
        std::fprintf(stderr, "  alpha=%.6g %s\n", alpha, dapd::to_string(status).c_str());
      std::printf("best alpha %.9g\n", best.alpha);
      cfg.algorithm.kind = dapd::AlgorithmKind::extra;
      cfg.algorithm.extra_alpha = best.alpha;
      emit(best.trace, cfg, out);
      return kExitOk;
    }
    suite.out = suite_out;
    if (!data.empty()) suite.data = data;
    const auto result = dapd::run_suite(dapd::parse_suite_kind(suite_name), suite);
    std::printf("%zu traces, summary at %s\n", result.traces.size(), result.summary.string().c_str());
    return kExitOk;
  } catch (const dapd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const dapd::ParseError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitConfig;
  } catch (const dapd::ConvergenceError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitBudget;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
}
