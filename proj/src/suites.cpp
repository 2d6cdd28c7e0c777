#include "dapd/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "dapd/errors.hpp"
#include "dapd/runner.hpp"

namespace dapd {

SuiteKind parse_suite_kind(const std::string& name) {
  if (name == "quadratic_graphs") return SuiteKind::quadratic_graphs;
  if (name == "condition_sweep") return SuiteKind::condition_sweep;
  if (name == "diameter_sweep") return SuiteKind::diameter_sweep;
  if (name == "logistic_graphs") return SuiteKind::logistic_graphs;
  throw ConfigError("unknown suite '" + name + "'");
}

std::string to_string(SuiteKind kind) {
  switch (kind) {
    case SuiteKind::quadratic_graphs: return "quadratic_graphs";
    case SuiteKind::condition_sweep: return "condition_sweep";
    case SuiteKind::diameter_sweep: return "diameter_sweep";
    case SuiteKind::logistic_graphs: return "logistic_graphs";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kGraphSeed = 7;
constexpr std::uint64_t kProblemSeed = 11;

constexpr AlgorithmKind kAlgorithms[] = {AlgorithmKind::adaptive, AlgorithmKind::nips_global,
                                         AlgorithmKind::nips_local, AlgorithmKind::extra};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> quick_extra_grid() {
  std::vector<double> grid;
  for (int e = -4; e <= 0; ++e) {
    grid.push_back(std::pow(10.0, e));
    if (e < 0) grid.push_back(3.0 * std::pow(10.0, e));
  }
  return grid;
}

std::vector<GraphSpec> suite_graphs() {
  return {{GraphKind::line, 20, 0.0, kGraphSeed},
          {GraphKind::erdos_renyi, 20, 0.1, kGraphSeed},
          {GraphKind::erdos_renyi, 20, 0.5, kGraphSeed}};
}

RunConfig base_config(const SuiteOptions& opt) {
  RunConfig cfg;
  cfg.seed = kProblemSeed;
  cfg.problem.seed = kProblemSeed;
  if (opt.quick) {
    cfg.max_iterations = 10000;
    cfg.max_vector_rounds = 20000;
  }
  return cfg;
}

/// One planned run: its config, which shared experiment to use, and where
/// the trace goes. Results land in fixed slots so order never depends on
/// scheduling.
struct Job {
  RunConfig config;
  std::size_t experiment = 0;
  std::string name;
  std::vector<double> grid;  // EXTRA only
  RunTrace trace;
  std::string note;
};

void execute(std::vector<Job>& jobs, const std::vector<Experiment>& experiments,
             const SuiteOptions& opt) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      Job& job = jobs[i];
      const Experiment& ex = experiments[job.experiment];
      if (job.config.algorithm.kind == AlgorithmKind::extra && !job.config.algorithm.extra_alpha) {
        try {
          TuneResult best = tune_extra(job.config, ex, job.grid);
          job.config.algorithm.extra_alpha = best.alpha;
          job.trace = std::move(best.trace);
        } catch (const ConvergenceError& e) {
          // Nothing converged: keep the smallest stepsize's run for the plot.
          job.note = e.what();
          job.config.algorithm.extra_alpha = *std::min_element(job.grid.begin(), job.grid.end());
          job.trace = run(job.config, ex);
        }
      } else {
        job.trace = run(job.config, ex);
      }
      const auto path = opt.out / (job.name + ".csv");
      write_csv(job.trace, path, describe(job.config) + " suite_seeds=" +
                                     std::to_string(kGraphSeed) + "/" +
                                     std::to_string(kProblemSeed));
      std::ostringstream log;
      log << job.name << ": " << to_string(job.trace.status) << " after "
          << job.trace.vector_rounds << " vector rounds (" << num(job.trace.wall_seconds)
          << " s)\n";
      std::cerr << log.str();
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

std::vector<Job> algorithm_jobs(const RunConfig& cfg, std::size_t experiment,
                                const std::string& prefix, const std::vector<double>& grid) {
  std::vector<Job> jobs;
  for (AlgorithmKind a : kAlgorithms) {
    Job job;
    job.config = cfg;
    job.config.algorithm.kind = a;
    job.experiment = experiment;
    job.name = prefix + "_" + to_string(a);
    job.grid = grid;
    jobs.push_back(std::move(job));
  }
  return jobs;
}

std::string final_metric(const Job& job) {
  const MeritRow& last = job.trace.rows.back();
  return num(job.config.stop_criterion() == StopCriterion::merit_cvx ? last.M_erg : last.err_rel);
}

/// summary.csv holds one row per experiment; each algorithm contributes
/// status, iterations, vector rounds and the final stopping metric, and
/// EXTRA adds its tuned stepsize.
SuiteResult finish(const std::vector<Job>& jobs, const SuiteOptions& opt, const std::string& header,
                   const std::function<std::string(std::size_t)>& prefix) {
  SuiteResult result;
  result.summary = opt.out / "summary.csv";
  std::ofstream out(result.summary, std::ios::binary);
  if (!out) throw Error("cannot write '" + result.summary.string() + "'");
  out << header;
  for (AlgorithmKind a : kAlgorithms) {
    const std::string n = to_string(a);
    out << ',' << n << "_status," << n << "_iterations," << n << "_vector_rounds," << n
        << "_final_metric";
  }
  out << ",extra_alpha\n";
  for (std::size_t first = 0; first < jobs.size(); first += std::size(kAlgorithms)) {
    out << prefix(jobs[first].experiment);
    std::string alpha = "nan";
    for (std::size_t j = first; j < first + std::size(kAlgorithms); ++j) {
      const Job& job = jobs[j];
      out << ',' << to_string(job.trace.status) << ',' << job.trace.iterations << ','
          << job.trace.vector_rounds << ',' << final_metric(job);
      if (job.config.algorithm.kind == AlgorithmKind::extra)
        alpha = num(*job.config.algorithm.extra_alpha);
    }
    out << ',' << alpha << '\n';
  }
  for (const Job& job : jobs) result.traces.push_back(opt.out / (job.name + ".csv"));
  return result;
}

SuiteResult quadratic_graphs(const SuiteOptions& opt) {
  const auto grid = opt.quick ? quick_extra_grid() : default_extra_grid();
  std::vector<Experiment> experiments;
  std::vector<Job> jobs;
  const auto specs = suite_graphs();
  for (const GraphSpec& g : specs) {
    RunConfig cfg = base_config(opt);
    cfg.graph = g;
    experiments.push_back(build_experiment(cfg));
    auto more = algorithm_jobs(cfg, experiments.size() - 1, graph_label(g), grid);
    jobs.insert(jobs.end(), more.begin(), more.end());
  }
  execute(jobs, experiments, opt);
  return finish(jobs, opt, "graph", [&](std::size_t e) { return graph_label(specs[e]); });
}

SuiteResult condition_sweep(const SuiteOptions& opt) {
  const auto grid = opt.quick ? quick_extra_grid() : default_extra_grid();
  const std::vector<double> lambdas =
      opt.quick ? std::vector<double>{1.0, 100.0} : std::vector<double>{0.0, 1.0, 10.0, 100.0, 1000.0};
  std::vector<Experiment> experiments;
  std::vector<double> kappas;
  std::vector<Job> jobs;
  for (const GraphSpec& g : suite_graphs()) {
    for (double lambda : lambdas) {
      RunConfig cfg = base_config(opt);
      cfg.graph = g;
      cfg.problem.lambda = lambda;
      experiments.push_back(build_experiment(cfg));
      kappas.push_back(max_agent_condition_number(experiments.back().family));
      auto more = algorithm_jobs(cfg, experiments.size() - 1,
                                 graph_label(g) + "_lambda" + num(lambda), grid);
      jobs.insert(jobs.end(), more.begin(), more.end());
    }
  }
  execute(jobs, experiments, opt);
  return finish(jobs, opt, "graph,lambda,kappa", [&](std::size_t e) {
    const RunConfig& cfg = jobs[e * std::size(kAlgorithms)].config;
    return graph_label(cfg.graph) + ',' + num(cfg.problem.lambda) + ',' + num(kappas[e]);
  });
}

SuiteResult diameter_sweep(const SuiteOptions& opt) {
  const auto grid = opt.quick ? quick_extra_grid() : default_extra_grid();
  const std::vector<std::size_t> sizes =
      opt.quick ? std::vector<std::size_t>{5, 10} : std::vector<std::size_t>{5, 10, 20, 40};
  std::vector<Experiment> experiments;
  std::vector<Job> jobs;
  for (std::size_t m : sizes) {
    RunConfig cfg = base_config(opt);
    cfg.graph = {GraphKind::line, m, 0.0, kGraphSeed};
    cfg.problem.h = 1;
    cfg.problem.n = 100;
    experiments.push_back(build_experiment(cfg));
    auto more = algorithm_jobs(cfg, experiments.size() - 1, "line_m" + std::to_string(m), grid);
    jobs.insert(jobs.end(), more.begin(), more.end());
  }
  execute(jobs, experiments, opt);
  return finish(jobs, opt, "m,diameter", [&](std::size_t e) {
    return std::to_string(experiments[e].graph.size()) + ',' +
           std::to_string(experiments[e].diameter);
  });
}

SuiteResult logistic_graphs(const SuiteOptions& opt) {
  if (!opt.data && !opt.surrogate)
    throw ConfigError("logistic_graphs needs --data <libsvm file> or --surrogate");
  const auto grid = opt.quick ? quick_extra_grid() : default_extra_grid();
  std::vector<Experiment> experiments;
  std::vector<Job> jobs;
  const auto specs = suite_graphs();
  for (const GraphSpec& g : specs) {
    RunConfig cfg = base_config(opt);
    cfg.graph = g;
    cfg.problem.kind = ProblemKind::logistic;
    cfg.problem.surrogate = !opt.data;
    if (opt.data) cfg.problem.dataset = opt.data->string();
    cfg.criterion = StopCriterion::merit_cvx;
    cfg.epsilon = 1e-3;
    cfg.max_vector_rounds = opt.quick ? 3000 : 100000;
    experiments.push_back(build_experiment(cfg));
    auto more = algorithm_jobs(cfg, experiments.size() - 1, "logistic_" + graph_label(g), grid);
    jobs.insert(jobs.end(), more.begin(), more.end());
  }
  execute(jobs, experiments, opt);
  return finish(jobs, opt, "graph", [&](std::size_t e) { return graph_label(specs[e]); });
}

}  // namespace

SuiteResult run_suite(SuiteKind kind, const SuiteOptions& opt) {
  std::filesystem::create_directories(opt.out);
  switch (kind) {
    case SuiteKind::quadratic_graphs: return quadratic_graphs(opt);
    case SuiteKind::condition_sweep: return condition_sweep(opt);
    case SuiteKind::diameter_sweep: return diameter_sweep(opt);
    case SuiteKind::logistic_graphs: return logistic_graphs(opt);
  }
  throw ConfigError("unknown suite");
}

}  // namespace dapd
