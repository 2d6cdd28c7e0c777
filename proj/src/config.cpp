#include "dapd/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "dapd/errors.hpp"

namespace dapd {

using nlohmann::json;

AlgorithmKind parse_algorithm_kind(const std::string& name) {
  if (name == "adaptive") return AlgorithmKind::adaptive;
  if (name == "nips_global") return AlgorithmKind::nips_global;
  if (name == "nips_local") return AlgorithmKind::nips_local;
  if (name == "extra") return AlgorithmKind::extra;
  throw ConfigError("unknown algorithm '" + name + "'");
}

std::string to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::adaptive: return "adaptive";
    case AlgorithmKind::nips_global: return "nips_global";
    case AlgorithmKind::nips_local: return "nips_local";
    case AlgorithmKind::extra: return "extra";
  }
  return "?";
}

StopCriterion RunConfig::stop_criterion() const {
  if (criterion) return *criterion;
  return problem.kind == ProblemKind::quadratic ? StopCriterion::relative_error
                                                : StopCriterion::merit_cvx;
}

std::vector<double> default_extra_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 25; ++i) grid.push_back(std::pow(10.0, -6.0 + 6.0 * i / 24.0));
  return grid;
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!obj.at(key).is_number_unsigned())
      throw ConfigError(std::string("'") + key + "' in " + where + " must be a nonnegative integer");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("wrong type for '") + key + "' in " + where);
  }
}

GraphSpec parse_graph(const json& j, std::uint64_t seed) {
  reject_unknown(j, {"kind", "m", "p", "seed"}, "graph");
  GraphSpec g;
  g.kind = parse_graph_kind(get<std::string>(j, "kind", "line", "graph"));
  g.m = get<std::size_t>(j, "m", 20, "graph");
  g.p = get<double>(j, "p", 0.1, "graph");
  g.seed = get<std::uint64_t>(j, "seed", seed, "graph");
  return g;
}

ProblemSpec parse_problem(const json& j, std::uint64_t seed, std::optional<std::size_t>& m) {
  reject_unknown(j, {"kind", "m", "h", "n", "lambda", "seed", "dataset", "surrogate"}, "problem");
  ProblemSpec p;
  const auto kind = get<std::string>(j, "kind", "quadratic", "problem");
  if (kind == "quadratic") {
    p.kind = ProblemKind::quadratic;
    p.h = get<std::size_t>(j, "h", 110, "problem");
    p.n = get<std::size_t>(j, "n", 100, "problem");
    p.lambda = get<double>(j, "lambda", 0.0, "problem");
  } else if (kind == "logistic") {
    p.kind = ProblemKind::logistic;
    p.samples_per_agent = get<std::size_t>(j, "h", 159, "problem");
    p.dataset = get<std::string>(j, "dataset", "", "problem");
    p.surrogate = get<bool>(j, "surrogate", false, "problem");
  } else {
    throw ConfigError("unknown problem kind '" + kind + "'");
  }
  p.seed = get<std::uint64_t>(j, "seed", seed, "problem");
  if (j.contains("m")) m = get<std::size_t>(j, "m", 0, "problem");
  return p;
}

AlgorithmSpec parse_algorithm(const json& j) {
  reject_unknown(j,
                 {"name", "delta", "theta0", "d0", "gamma", "safeguard", "extra_alpha",
                  "extra_alpha_grid"},
                 "algorithm");
  AlgorithmSpec a;
  a.kind = parse_algorithm_kind(get<std::string>(j, "name", "adaptive", "algorithm"));
  a.delta = get<double>(j, "delta", 1.0, "algorithm");
  a.theta0 = get<double>(j, "theta0", 1.0, "algorithm");
  a.d0 = get<std::size_t>(j, "d0", 1, "algorithm");
  if (j.contains("gamma")) {
    const json& g = j.at("gamma");
    reject_unknown(g, {"beta1", "beta2", "constant"}, "algorithm.gamma");
    try {
      if (g.contains("constant")) {
        if (g.contains("beta1") || g.contains("beta2"))
          throw ConfigError("gamma takes either {beta1, beta2} or {constant}");
        a.gamma = GammaSchedule::constant(get<double>(g, "constant", 1.0, "algorithm.gamma"));
      } else {
        a.gamma = GammaSchedule::polynomial(get<double>(g, "beta1", 2.0, "algorithm.gamma"),
                                            get<double>(g, "beta2", 1.0, "algorithm.gamma"));
      }
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("safeguard")) {
    const json& s = j.at("safeguard");
    reject_unknown(s, {"enabled", "R_tilde"}, "algorithm.safeguard");
    a.safeguard.enabled = get<bool>(s, "enabled", false, "algorithm.safeguard");
    a.safeguard.radius = get<double>(s, "R_tilde", a.safeguard.radius, "algorithm.safeguard");
  }
  if (j.contains("extra_alpha")) a.extra_alpha = get<double>(j, "extra_alpha", 0.0, "algorithm");
  a.extra_alpha_grid = get<std::vector<double>>(j, "extra_alpha_grid", {}, "algorithm");
  return a;
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root,
                 {"graph", "problem", "algorithm", "c", "epsilon", "max_iterations",
                  "max_vector_rounds", "stride", "criterion", "fixed_point_tol", "output", "seed"},
                 "config");
  RunConfig cfg;
  cfg.seed = get<std::uint64_t>(root, "seed", 1, "config");
  if (!root.contains("graph")) throw ConfigError("config needs a 'graph' section");
  if (!root.contains("problem")) throw ConfigError("config needs a 'problem' section");
  cfg.graph = parse_graph(root.at("graph"), cfg.seed);
  std::optional<std::size_t> problem_m;
  cfg.problem = parse_problem(root.at("problem"), cfg.seed, problem_m);
  if (problem_m && *problem_m != cfg.graph.m)
    throw ConfigError("problem.m disagrees with graph.m");
  if (root.contains("algorithm")) cfg.algorithm = parse_algorithm(root.at("algorithm"));
  cfg.c = get<double>(root, "c", 0.5, "config");
  cfg.epsilon = get<double>(root, "epsilon", 1e-5, "config");
  cfg.max_iterations = get<long>(root, "max_iterations", 50000, "config");
  cfg.max_vector_rounds = get<std::size_t>(root, "max_vector_rounds", 200000, "config");
  cfg.stride = get<long>(root, "stride", 1, "config");
  cfg.fixed_point_tol = get<double>(root, "fixed_point_tol", 1e-8, "config");
  cfg.output = get<std::string>(root, "output", "", "config");
  if (root.contains("criterion")) {
    const auto c = get<std::string>(root, "criterion", "", "config");
    if (c == "relative_error") cfg.criterion = StopCriterion::relative_error;
    else if (c == "merit_cvx") cfg.criterion = StopCriterion::merit_cvx;
    else throw ConfigError("unknown criterion '" + c + "'");
  }
  validate(cfg);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

void validate(const RunConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(cfg.graph.m >= 1, "graph.m must be >= 1");
  if (cfg.graph.kind == GraphKind::erdos_renyi)
    require(cfg.graph.p > 0.0 && cfg.graph.p <= 1.0, "graph.p must lie in (0, 1]");
  require(cfg.c > 0.0 && cfg.c <= 0.5, "c must lie in (0, 1/2]");
  require(cfg.epsilon > 0.0, "epsilon must be positive");
  require(cfg.max_iterations >= 1, "max_iterations must be >= 1");
  require(cfg.max_vector_rounds >= 1, "max_vector_rounds must be >= 1");
  require(cfg.stride >= 1, "stride must be >= 1");
  require(cfg.fixed_point_tol > 0.0, "fixed_point_tol must be positive");
  const auto& a = cfg.algorithm;
  require(a.delta > 0.0 && a.delta <= 1.0, "algorithm.delta must lie in (0, 1]");
  require(a.theta0 > 0.0, "algorithm.theta0 must be positive");
  require(a.d0 >= 1, "algorithm.d0 must be >= 1");
  require(!a.safeguard.enabled || a.safeguard.radius > 0.0, "safeguard.R_tilde must be positive");
  if (a.extra_alpha) require(*a.extra_alpha > 0.0, "extra_alpha must be positive");
  for (double alpha : a.extra_alpha_grid) require(alpha > 0.0, "extra_alpha_grid entries must be positive");
  const auto& p = cfg.problem;
  if (p.kind == ProblemKind::quadratic) {
    require(p.h >= 1 && p.n >= 1, "problem.h and problem.n must be >= 1");
    require(p.lambda >= 0.0, "problem.lambda must be nonnegative");
  } else {
    require(p.samples_per_agent >= 1, "problem.h must be >= 1");
    if (!p.surrogate) {
      require(!p.dataset.empty(), "logistic problem needs problem.dataset or surrogate: true");
      if (!std::filesystem::exists(p.dataset))
        throw ConfigError("dataset '" + p.dataset + "' does not exist");
    }
  }
}

}  // namespace dapd
