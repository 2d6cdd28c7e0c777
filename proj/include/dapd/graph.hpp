#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dapd {

/// Undirected, static communication graph over agents 0..m-1.
///
/// Every agent's closed neighborhood contains the agent itself; consensus
/// and gossip code reads neighborhoods exclusively through this class.
class Graph {
 public:
  explicit Graph(std::size_t m);

  /// Adds the undirected edge {i, j}; duplicates are ignored.
  void add_edge(std::size_t i, std::size_t j);

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }
  bool has_edge(std::size_t i, std::size_t j) const;

  /// Neighbors of i excluding i, sorted ascending.
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_.at(i); }

  /// N_i: neighbors of i plus i itself, sorted ascending.
  const std::vector<std::size_t>& neighborhood(std::size_t i) const { return closed_.at(i); }

  /// Edges as (i, j) pairs with i < j, lexicographically sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  bool is_connected() const;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::vector<std::size_t>> closed_;
  std::size_t edge_count_ = 0;
};

Graph build_line_graph(std::size_t m);
Graph build_cycle_graph(std::size_t m);
Graph build_complete_graph(std::size_t m);

/// G(m, p) with resampling until connected. Draw `a` uses seed + a, so the
/// result is a deterministic function of (m, p, seed).
Graph build_erdos_renyi(std::size_t m, double p, std::uint64_t seed);

inline constexpr int kErdosRenyiMaxDraws = 1000;

/// Hop distances from `source`; unreachable nodes get SIZE_MAX.
std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t source);

/// Exact diameter via BFS from every node. Throws ConnectivityError when g
/// is disconnected.
std::size_t diameter(const Graph& g);

enum class GraphKind { line, cycle, complete, erdos_renyi };

struct GraphSpec {
  GraphKind kind = GraphKind::line;
  std::size_t m = 20;
  double p = 0.1;
  std::uint64_t seed = 1;
};

Graph build_graph(const GraphSpec& spec);
GraphKind parse_graph_kind(const std::string& name);
std::string to_string(GraphKind kind);
/// Short label such as "line", "er0.1".
std::string graph_label(const GraphSpec& spec);

}  // namespace dapd
