#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dapd/config.hpp"
#include "dapd/gossip.hpp"
#include "dapd/metrics.hpp"

namespace dapd {

enum class RunStatus { running, converged, budget_exhausted, diverged };
std::string to_string(RunStatus status);

/// One trace row. Fields that do not apply to an algorithm are NaN.
struct MeritRow {
  long k = 0;
  std::size_t vector_rounds = 0;
  std::size_t scalar_rounds = 0;
  double err_rel = 0.0;
  double V = 0.0;
  double M_erg = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double pi_min = 0.0;
  double pi_max = 0.0;
  double d_max = 0.0;
  RunStatus status = RunStatus::running;
};

struct RunTrace {
  std::vector<MeritRow> rows;
  RunStatus status = RunStatus::running;
  long iterations = 0;
  std::size_t vector_rounds = 0;
  std::size_t scalar_rounds = 0;
  double wall_seconds = 0.0;
  double extra_alpha = 0.0;  // stepsize used when the algorithm is EXTRA
  std::string message;       // diagnostic for diverged runs
};

/// Everything a run needs besides the algorithm: topology, mixing, data and
/// the fixed point anchoring the metrics.
struct Experiment {
  Graph graph{1};
  GossipMatrix gossip;
  SpectralData spectral;
  LossFamily family;
  FixedPoint fixed;
  std::size_t diameter = 0;
  Matrix x0;
};

Experiment build_experiment(const RunConfig& config);
/// Same, around a caller-supplied loss family.
Experiment build_experiment(const RunConfig& config, LossFamily family);

/// Runs one algorithm until the stop criterion, a budget, or divergence.
/// Deterministic for a fixed config.
RunTrace run(const RunConfig& config);
RunTrace run(const RunConfig& config, const Experiment& experiment);

struct TuneResult {
  double alpha = 0.0;
  RunTrace trace;
  std::vector<std::pair<double, RunStatus>> attempts;
};

/// Grid search over EXTRA stepsizes: fewest vector rounds to the target
/// among converged runs, ties to the smaller alpha. Throws ConvergenceError
/// listing every attempt when nothing converges.
TuneResult tune_extra(const RunConfig& config, const Experiment& experiment,
                      std::vector<double> grid);
TuneResult tune_extra(const RunConfig& config, std::vector<double> grid);

inline constexpr const char* kCsvHeader =
    "k,vector_rounds,scalar_rounds,err_rel,V,M_erg,theta_min,theta_max,pi_min,pi_max,d_max,status";

/// `comment` becomes a leading "# ..." line.
void write_csv(const RunTrace& trace, std::ostream& out, const std::string& comment);
void write_csv(const RunTrace& trace, const std::filesystem::path& path, const std::string& comment);

/// "# algorithm=... graph=... seed=..." description of a config.
std::string describe(const RunConfig& config);

}  // namespace dapd
