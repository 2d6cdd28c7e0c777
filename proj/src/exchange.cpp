#include "dapd/exchange.hpp"

#include <algorithm>
#include <sstream>

#include "dapd/errors.hpp"

namespace dapd {

namespace {

template <typename Pick>
std::vector<double> neighborhood_reduce(std::span<const double> v, const Graph& g, Pick pick) {
  if (v.size() != g.size()) throw ParameterError("consensus vector must have one entry per agent");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double best = v[i];
    for (std::size_t j : g.neighbors(i)) best = pick(best, v[j]);
    out[i] = best;
  }
  return out;
}

}  // namespace

std::vector<double> local_min_consensus(std::span<const double> v, const Graph& g) {
  return neighborhood_reduce(v, g, [](double a, double b) { return std::min(a, b); });
}

std::vector<double> local_max_consensus(std::span<const double> v, const Graph& g) {
  return neighborhood_reduce(v, g, [](double a, double b) { return std::max(a, b); });
}

NeighborExchange::NeighborExchange(const Graph& g) : graph_(&g) {}

void NeighborExchange::send(std::size_t sender, std::size_t receiver, std::size_t payload) {
  if (sender >= graph_->size() || receiver >= graph_->size())
    throw LocalityError("message endpoint outside the agent set");
  if (sender != receiver && !graph_->has_edge(sender, receiver)) {
    std::ostringstream msg;
    msg << "agent " << sender << " cannot reach non-neighbor " << receiver;
    throw LocalityError(msg.str());
  }
  scalars_sent_ += payload;
  if (recording_) log_.push_back({sender, receiver, payload});
}

void NeighborExchange::broadcast(std::size_t payload) {
  for (std::size_t i = 0; i < graph_->size(); ++i)
    for (std::size_t j : graph_->neighbors(i)) send(i, j, payload);
}

Matrix NeighborExchange::gossip(const Matrix& mixing, const Matrix& x) {
  const auto m = static_cast<Eigen::Index>(graph_->size());
  if (mixing.rows() != m || mixing.cols() != m || x.rows() != m)
    throw ParameterError("gossip operands do not match the agent count");
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (i != j && mixing(i, j) != 0.0 && !graph_->has_edge(i, j)) {
        std::ostringstream msg;
        msg << "mixing weight (" << i << ", " << j << ") lies off the graph";
        throw LocalityError(msg.str());
      }
  broadcast(static_cast<std::size_t>(x.cols()));
  ++vector_rounds_;
  return mixing * x;
}

void NeighborExchange::scalar_round(std::size_t payload) {
  broadcast(payload);
  ++scalar_rounds_;
}

void NeighborExchange::charge_flood(std::size_t rounds) {
  for (std::size_t r = 0; r < rounds; ++r) scalar_round(1);
}

}  // namespace dapd
