#include "dapd/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include "dapd/errors.hpp"

namespace dapd {

Graph::Graph(std::size_t m) : adjacency_(m), closed_(m) {
  if (m == 0) throw ParameterError("graph needs at least one agent");
  for (std::size_t i = 0; i < m; ++i) closed_[i].push_back(i);
}

void Graph::add_edge(std::size_t i, std::size_t j) {
  if (i >= size() || j >= size()) throw ParameterError("edge endpoint out of range");
  if (i == j) throw ParameterError("self-loops are implicit and cannot be added");
  if (has_edge(i, j)) return;
  auto insert_sorted = [](std::vector<std::size_t>& v, std::size_t x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  };
  insert_sorted(adjacency_[i], j);
  insert_sorted(adjacency_[j], i);
  insert_sorted(closed_[i], j);
  insert_sorted(closed_[j], i);
  ++edge_count_;
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  const auto& n = adjacency_.at(i);
  return std::binary_search(n.begin(), n.end(), j);
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j : adjacency_[i])
      if (i < j) out.emplace_back(i, j);
  return out;
}

bool Graph::is_connected() const {
  const auto dist = bfs_distances(*this, 0);
  return std::none_of(dist.begin(), dist.end(), [](std::size_t d) {
    return d == std::numeric_limits<std::size_t>::max();
  });
}

Graph build_line_graph(std::size_t m) {
  Graph g(m);
  for (std::size_t i = 0; i + 1 < m; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph build_cycle_graph(std::size_t m) {
  if (m < 3) throw ParameterError("cycle needs m >= 3");
  Graph g(m);
  for (std::size_t i = 0; i < m; ++i) g.add_edge(i, (i + 1) % m);
  return g;
}

Graph build_complete_graph(std::size_t m) {
  Graph g(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) g.add_edge(i, j);
  return g;
}

Graph build_erdos_renyi(std::size_t m, double p, std::uint64_t seed) {
  if (m < 2) throw ParameterError("Erdos-Renyi graph needs m >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("edge probability must lie in [0, 1]");
  if (p > 0.0) {
    for (int draw = 0; draw < kErdosRenyiMaxDraws; ++draw) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(draw));
      std::bernoulli_distribution coin(p);
      Graph g(m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
          if (coin(rng)) g.add_edge(i, j);
      if (g.is_connected()) return g;
    }
  }
  std::ostringstream msg;
  msg << "no connected G(" << m << ", " << p << ") draw in " << kErdosRenyiMaxDraws
      << " attempts; p is too small for m";
  throw ConnectivityError(msg.str());
}

std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t source) {
  constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.size(), kUnreached);
  std::queue<std::size_t> frontier;
  dist.at(source) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : g.neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

std::size_t diameter(const Graph& g) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    for (std::size_t d : bfs_distances(g, s)) {
      if (d == std::numeric_limits<std::size_t>::max())
        throw ConnectivityError("diameter of a disconnected graph");
      best = std::max(best, d);
    }
  }
  return best;
}

Graph build_graph(const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphKind::line: return build_line_graph(spec.m);
    case GraphKind::cycle: return build_cycle_graph(spec.m);
    case GraphKind::complete: return build_complete_graph(spec.m);
    case GraphKind::erdos_renyi: return build_erdos_renyi(spec.m, spec.p, spec.seed);
  }
  throw ParameterError("unknown graph kind");
}

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "line") return GraphKind::line;
  if (name == "cycle") return GraphKind::cycle;
  if (name == "complete") return GraphKind::complete;
  if (name == "erdos_renyi") return GraphKind::erdos_renyi;
  throw ConfigError("unknown graph kind '" + name + "'");
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::line: return "line";
    case GraphKind::cycle: return "cycle";
    case GraphKind::complete: return "complete";
    case GraphKind::erdos_renyi: return "erdos_renyi";
  }
  return "?";
}

std::string graph_label(const GraphSpec& spec) {
  if (spec.kind != GraphKind::erdos_renyi) return to_string(spec.kind);
  std::ostringstream os;
  os << "er" << spec.p;
  return os.str();
}

}  // namespace dapd
