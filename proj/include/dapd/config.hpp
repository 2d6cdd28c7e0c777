#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dapd/adaptive.hpp"
#include "dapd/graph.hpp"
#include "dapd/schedule.hpp"

namespace dapd {

enum class AlgorithmKind { adaptive, nips_global, nips_local, extra };
enum class ProblemKind { quadratic, logistic };
enum class StopCriterion { relative_error, merit_cvx };

AlgorithmKind parse_algorithm_kind(const std::string& name);
std::string to_string(AlgorithmKind kind);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::quadratic;
  // quadratic
  std::size_t h = 110;
  std::size_t n = 100;
  double lambda = 0.0;
  // logistic
  std::string dataset;          // libsvm path
  bool surrogate = false;       // synthetic a3a-shaped data instead of a file
  std::size_t samples_per_agent = 159;
  // shared
  std::uint64_t seed = 1;
};

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::adaptive;
  double delta = 1.0;
  double theta0 = 1.0;
  std::size_t d0 = 1;
  GammaSchedule gamma = GammaSchedule::polynomial(2.0, 1.0);
  SafeguardOptions safeguard;
  std::optional<double> extra_alpha;
  std::vector<double> extra_alpha_grid;
};

struct RunConfig {
  GraphSpec graph;
  ProblemSpec problem;
  AlgorithmSpec algorithm;
  double c = 0.5;
  double epsilon = 1e-5;
  long max_iterations = 50000;
  std::size_t max_vector_rounds = 200000;
  long stride = 1;
  std::optional<StopCriterion> criterion;  // default follows the problem kind
  double fixed_point_tol = 1e-8;
  std::string output;
  std::uint64_t seed = 1;

  StopCriterion stop_criterion() const;
};

/// Parses the JSON run-config format documented in README.md. Throws
/// ConfigError on unknown keys, wrong types, or out-of-range values.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Checks ranges and file existence; throws ConfigError.
void validate(const RunConfig& config);

/// 25-point logarithmic grid from 1e-6 to 1.
std::vector<double> default_extra_grid();

}  // namespace dapd
