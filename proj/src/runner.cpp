#include "dapd/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "dapd/baseline.hpp"
#include "dapd/errors.hpp"
#include "dapd/extra.hpp"
#include "dapd/libsvm.hpp"

namespace dapd {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::running: return "running";
    case RunStatus::converged: return "converged";
    case RunStatus::budget_exhausted: return "budget_exhausted";
    case RunStatus::diverged: return "diverged";
  }
  return "?";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Surrogate shape: a3a has 3185 samples over 123 binary features, about 14
// active per row.
constexpr std::size_t kSurrogateSamples = 3185;
constexpr std::size_t kSurrogateFeatures = 123;
constexpr double kSurrogateDensity = 14.0 / 123.0;

struct Stats {
  double theta_min = kNaN, theta_max = kNaN, pi_min = kNaN, pi_max = kNaN, d_max = kNaN;
};

std::pair<double, double> min_max(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

/// Uniform driver over the three algorithm families.
class Method {
 public:
  virtual ~Method() = default;
  virtual void step() = 0;
  virtual const Matrix& x() const = 0;
  virtual const Matrix* y() const = 0;
  virtual double theta_min_prev() const = 0;
  virtual Stats stats() const = 0;
  virtual const NeighborExchange& net() const = 0;
};

class AdaptiveDriver final : public Method {
 public:
  AdaptiveDriver(const Experiment& ex, AdaptiveOptions opts)
      : ex_(ex), opts_(std::move(opts)), net_(ex.graph), state_(make_adaptive_state(ex.x0, opts_)) {}
  void step() override { adaptive_step(state_, ex_.gossip, ex_.family, opts_, net_); }
  const Matrix& x() const override { return state_.x; }
  const Matrix* y() const override { return &state_.y; }
  double theta_min_prev() const override { return min_max(state_.theta).first; }
  Stats stats() const override {
    Stats s;
    std::tie(s.theta_min, s.theta_max) = min_max(state_.theta);
    std::tie(s.pi_min, s.pi_max) = min_max(state_.pi);
    s.d_max = static_cast<double>(*std::max_element(state_.horizon.begin(), state_.horizon.end()));
    return s;
  }
  const NeighborExchange& net() const override { return net_; }

 private:
  const Experiment& ex_;
  AdaptiveOptions opts_;
  NeighborExchange net_;
  AdaptiveState state_;
};

class BaselineDriver final : public Method {
 public:
  BaselineDriver(const Experiment& ex, BaselineOptions opts)
      : ex_(ex), opts_(std::move(opts)), net_(ex.graph), state_(make_baseline_state(ex.x0, opts_)) {}
  void step() override { baseline_adaptive_step(state_, ex_.gossip, ex_.family, opts_, net_); }
  const Matrix& x() const override { return state_.x; }
  const Matrix* y() const override { return &state_.y; }
  double theta_min_prev() const override { return min_max(state_.theta).first; }
  Stats stats() const override {
    Stats s;
    std::tie(s.theta_min, s.theta_max) = min_max(state_.theta);
    return s;
  }
  const NeighborExchange& net() const override { return net_; }

 private:
  const Experiment& ex_;
  BaselineOptions opts_;
  NeighborExchange net_;
  BaselineState state_;
};

class ExtraDriver final : public Method {
 public:
  ExtraDriver(const Experiment& ex, double alpha)
      : ex_(ex), alpha_(alpha), net_(ex.graph), state_(make_extra_state(ex.x0)) {}
  void step() override { extra_step(state_, ex_.gossip, ex_.family, alpha_, net_); }
  const Matrix& x() const override { return state_.x; }
  const Matrix* y() const override { return nullptr; }
  double theta_min_prev() const override { return alpha_; }
  Stats stats() const override {
    Stats s;
    s.theta_min = s.theta_max = alpha_;
    return s;
  }
  const NeighborExchange& net() const override { return net_; }

 private:
  const Experiment& ex_;
  double alpha_;
  NeighborExchange net_;
  ExtraState state_;
};

std::unique_ptr<Method> make_method(const RunConfig& cfg, const Experiment& ex) {
  const auto& a = cfg.algorithm;
  switch (a.kind) {
    case AlgorithmKind::adaptive: {
      AdaptiveOptions o;
      o.delta = a.delta;
      o.theta_init = a.theta0;
      o.d_init = a.d0;
      o.gamma = a.gamma;
      o.safeguard = a.safeguard;
      return std::make_unique<AdaptiveDriver>(ex, o);
    }
    case AlgorithmKind::nips_global:
    case AlgorithmKind::nips_local: {
      BaselineOptions o;
      o.delta = a.delta;
      o.theta_init = a.theta0;
      o.gamma = a.gamma;
      o.mode = a.kind == AlgorithmKind::nips_global ? ConsensusMode::global : ConsensusMode::local;
      o.flood_rounds = std::max<std::size_t>(ex.diameter, 1);
      return std::make_unique<BaselineDriver>(ex, o);
    }
    case AlgorithmKind::extra:
      if (!a.extra_alpha) throw ConfigError("EXTRA run needs algorithm.extra_alpha (or use tune-extra)");
      return std::make_unique<ExtraDriver>(ex, *a.extra_alpha);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace

Experiment build_experiment(const RunConfig& cfg) {
  validate(cfg);
  const auto& p = cfg.problem;
  if (p.kind == ProblemKind::quadratic)
    return build_experiment(cfg, generate_quadratic(cfg.graph.m, p.h, p.n, p.lambda, p.seed));
  const Dataset data =
      p.surrogate ? generate_logistic_dataset(kSurrogateSamples, kSurrogateFeatures,
                                              kSurrogateDensity, p.seed)
                  : parse_libsvm(std::filesystem::path(p.dataset));
  return build_experiment(cfg, partition_logistic(data, cfg.graph.m, p.samples_per_agent, p.seed));
}

Experiment build_experiment(const RunConfig& cfg, LossFamily family) {
  if (family.size() != cfg.graph.m) throw ConfigError("loss family size differs from graph.m");
  Experiment ex;
  ex.graph = build_graph(cfg.graph);
  ex.gossip = gossip_matrix(metropolis_weights(ex.graph), cfg.c);
  ex.spectral = spectral_data(ex.gossip);
  ex.diameter = diameter(ex.graph);
  ex.family = std::move(family);
  ex.fixed = fixed_point(ex.family, cfg.fixed_point_tol);
  ex.x0 = Matrix::Zero(static_cast<Eigen::Index>(cfg.graph.m),
                       static_cast<Eigen::Index>(ex.family.dim()));
  return ex;
}

RunTrace run(const RunConfig& cfg) { return run(cfg, build_experiment(cfg)); }

RunTrace run(const RunConfig& cfg, const Experiment& ex) {
  const auto started = std::chrono::steady_clock::now();
  auto method = make_method(cfg, ex);
  const StopCriterion criterion = cfg.stop_criterion();
  const double delta = cfg.algorithm.delta;

  RunTrace trace;
  if (cfg.algorithm.kind == AlgorithmKind::extra) trace.extra_alpha = *cfg.algorithm.extra_alpha;
  ErgodicAverage average;

  auto make_row = [&](long k) {
    MeritRow row;
    row.k = k;
    row.vector_rounds = method->net().vector_rounds();
    row.scalar_rounds = method->net().scalar_rounds();
    row.err_rel = relative_error(method->x(), ex.x0, ex.fixed);
    row.V = method->y() ? merit_sc(method->x(), *method->y(), method->theta_min_prev(), ex.fixed,
                                   ex.spectral.merit)
                        : kNaN;
    const Matrix& erg = average.count() > 0 ? average.mean() : method->x();
    row.M_erg = merit_cvx(erg, ex.fixed, ex.family, ex.gossip, delta);
    const Stats s = method->stats();
    row.theta_min = s.theta_min;
    row.theta_max = s.theta_max;
    row.pi_min = s.pi_min;
    row.pi_max = s.pi_max;
    row.d_max = s.d_max;
    return row;
  };
  auto met = [&](const MeritRow& row) {
    return criterion == StopCriterion::relative_error ? row.err_rel <= cfg.epsilon
                                                      : row.M_erg <= cfg.epsilon;
  };

  trace.rows.push_back(make_row(0));
  RunStatus status = RunStatus::running;
  long k = 0;
  while (status == RunStatus::running) {
    try {
      method->step();
    } catch (const DivergenceError& e) {
      status = RunStatus::diverged;
      trace.message = e.what();
      break;
    } catch (const ConvergenceError& e) {
      status = RunStatus::diverged;
      trace.message = e.what();
      break;
    }
    ++k;
    average.add(method->x());
    MeritRow row = make_row(k);
    if (!std::isfinite(row.err_rel)) {
      status = RunStatus::diverged;
      trace.message = "non-finite iterate";
    } else if (met(row)) {
      status = RunStatus::converged;
    } else if (k >= cfg.max_iterations || row.vector_rounds >= cfg.max_vector_rounds) {
      status = RunStatus::budget_exhausted;
    }
    if (status != RunStatus::running || k % cfg.stride == 0) trace.rows.push_back(row);
  }
  if (status == RunStatus::diverged) {
    // The failed step produced no row; re-tag the last recorded one.
    if (trace.rows.back().k != k) trace.rows.push_back(trace.rows.back());
  }
  trace.rows.back().status = status;
  trace.status = status;
  trace.iterations = k;
  trace.vector_rounds = method->net().vector_rounds();
  trace.scalar_rounds = method->net().scalar_rounds();
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return trace;
}

TuneResult tune_extra(const RunConfig& cfg, std::vector<double> grid) {
  return tune_extra(cfg, build_experiment(cfg), std::move(grid));
}

TuneResult tune_extra(const RunConfig& cfg, const Experiment& ex, std::vector<double> grid) {
  if (grid.empty()) throw ParameterError("EXTRA grid is empty");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  TuneResult best;
  bool found = false;
  // Largest alpha first; later (smaller) candidates only need to match the
  // best round count, so their budget is capped there.
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    RunConfig trial = cfg;
    trial.algorithm.kind = AlgorithmKind::extra;
    trial.algorithm.extra_alpha = *it;
    if (found) trial.max_vector_rounds = std::min(trial.max_vector_rounds, best.trace.vector_rounds);
    RunTrace t = run(trial, ex);
    best.attempts.emplace_back(*it, t.status);
    if (t.status == RunStatus::converged &&
        (!found || t.vector_rounds <= best.trace.vector_rounds)) {
      best.alpha = *it;
      best.trace = std::move(t);
      found = true;
    }
  }
  std::reverse(best.attempts.begin(), best.attempts.end());
  if (!found) {
    std::ostringstream msg;
    msg << "no EXTRA stepsize reached the target:";
    for (auto [alpha, status] : best.attempts) msg << " " << alpha << "=" << to_string(status);
    throw ConvergenceError(msg.str());
  }
  return best;
}

namespace {

void put_number(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "nan";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  out << buf;
}

}  // namespace

void write_csv(const RunTrace& trace, std::ostream& out, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << kCsvHeader << "\n";
  for (const auto& r : trace.rows) {
    out << r.k << ',' << r.vector_rounds << ',' << r.scalar_rounds << ',';
    for (double v : {r.err_rel, r.V, r.M_erg, r.theta_min, r.theta_max, r.pi_min, r.pi_max, r.d_max}) {
      put_number(out, v);
      out << ',';
    }
    out << to_string(r.status) << "\n";
  }
}

void write_csv(const RunTrace& trace, const std::filesystem::path& path, const std::string& comment) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_csv(trace, out, comment);
}

std::string describe(const RunConfig& cfg) {
  std::ostringstream os;
  os << "algorithm=" << to_string(cfg.algorithm.kind) << " graph=" << graph_label(cfg.graph)
     << " m=" << cfg.graph.m << " graph_seed=" << cfg.graph.seed;
  if (cfg.problem.kind == ProblemKind::quadratic)
    os << " problem=quadratic h=" << cfg.problem.h << " n=" << cfg.problem.n
       << " lambda=" << cfg.problem.lambda;
  else
    os << " problem=logistic h=" << cfg.problem.samples_per_agent
       << (cfg.problem.surrogate ? " data=surrogate" : " data=" + cfg.problem.dataset);
  os << " problem_seed=" << cfg.problem.seed << " c=" << cfg.c << " delta=" << cfg.algorithm.delta
     << " epsilon=" << cfg.epsilon;
  if (cfg.algorithm.extra_alpha) os << " extra_alpha=" << *cfg.algorithm.extra_alpha;
  return os.str();
}

}  // namespace dapd
