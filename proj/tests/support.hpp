// Shared fixtures for the unit tests.
#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "dapd/graph.hpp"
#include "dapd/gossip.hpp"
#include "dapd/libsvm.hpp"
#include "dapd/losses.hpp"

namespace dapd::test {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n;
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = n(rng);
  return a;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  return random_matrix(rng, n, 1).col(0);
}

/// f(x) = (L/2) ||x||^2 through the ridge term alone, so hand examples stay
/// exact in floating point.
inline std::shared_ptr<const Loss> scaled_norm(double L, Eigen::Index d) {
  return std::make_shared<QuadraticLoss>(Matrix::Zero(1, d), Vector::Zero(1), L);
}

/// Random connected graph: ER with a size-dependent edge probability.
inline Graph random_connected_graph(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> u(0.15, 0.8);
  const double p = u(rng);
  const std::uint64_t seed = rng();
  return m == 1 ? build_line_graph(1) : build_erdos_renyi(m, p, seed);
}

inline LossFamily small_logistic_family(std::size_t m, std::size_t h, std::size_t d,
                                        std::uint64_t seed) {
  const Dataset data = generate_logistic_dataset(m * h, d, 0.5, seed);
  return partition_logistic(data, m, h, seed);
}

/// Every connected labelled graph on m nodes (edge subsets of K_m).
inline std::vector<Graph> all_connected_graphs(std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    Graph g(m);
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (mask >> e & 1) g.add_edge(pairs[e].first, pairs[e].second);
    if (g.is_connected()) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace dapd::test
