#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dapd {

enum class SuiteKind { quadratic_graphs, condition_sweep, diameter_sweep, logistic_graphs };

SuiteKind parse_suite_kind(const std::string& name);
std::string to_string(SuiteKind kind);

struct SuiteOptions {
  std::filesystem::path out = "out";
  std::optional<std::filesystem::path> data;  // libsvm file for logistic_graphs
  bool surrogate = false;                     // synthetic data in place of `data`
  bool quick = false;                         // reduced graphs, grids and budgets
  unsigned jobs = 1;
};

struct SuiteResult {
  std::vector<std::filesystem::path> traces;
  std::filesystem::path summary;
};

/// Runs every member of the suite and writes one trace CSV per run plus
/// summary.csv into `out`. Output is byte-identical across reruns.
SuiteResult run_suite(SuiteKind kind, const SuiteOptions& options);

}  // namespace dapd
