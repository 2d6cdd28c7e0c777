#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>

#include "dapd/losses.hpp"

namespace dapd {

/// Labeled samples densified to the largest feature index in the source.
struct Dataset {
  Matrix features;  // samples x max_index; column k holds feature index k+1
  Vector labels;    // each -1 or +1
  std::size_t max_index = 0;

  std::size_t samples() const noexcept { return static_cast<std::size_t>(labels.size()); }
};

/// Reads `<label> <idx>:<val> ...` lines (1-based indices). Positive labels
/// map to +1, everything else (0, -1) to -1. Blank lines are skipped.
Dataset parse_libsvm(std::istream& in);
Dataset parse_libsvm(const std::filesystem::path& path);

/// Seeded shuffle, then contiguous blocks of `samples_per_agent` rows per
/// agent. Leftover samples are discarded.
LossFamily partition_logistic(const Dataset& data, std::size_t m, std::size_t samples_per_agent,
                              std::uint64_t seed);

/// Synthetic stand-in with the a3a shape: sparse binary features, labels
/// drawn from a noisy logistic model so the data are not separable.
Dataset generate_logistic_dataset(std::size_t samples, std::size_t features,
                                  double density, std::uint64_t seed);

}  // namespace dapd
