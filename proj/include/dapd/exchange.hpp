#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dapd/graph.hpp"
#include "dapd/types.hpp"

namespace dapd {

/// out_i = min over j in N_i of v_j
std::vector<double> local_min_consensus(std::span<const double> v, const Graph& g);
/// out_i = max over j in N_i of v_j
std::vector<double> local_max_consensus(std::span<const double> v, const Graph& g);

struct Message {
  std::size_t sender;
  std::size_t receiver;
  std::size_t payload;  // scalars
};

/// Synchronous neighbor-to-neighbor communication layer. Every exchange is
/// audited against the graph and counted; a message across a non-edge
/// throws LocalityError.
class NeighborExchange {
 public:
  explicit NeighborExchange(const Graph& g);

  const Graph& graph() const noexcept { return *graph_; }

  /// One vector gossip round: returns mixing * x after checking that every
  /// off-diagonal nonzero of `mixing` is an edge.
  Matrix gossip(const Matrix& mixing, const Matrix& x);

  /// One scalar round in which every agent sends `payload` scalars to each
  /// neighbor. Local computations after it may only read N_i.
  void scalar_round(std::size_t payload = 1);

  /// Charges `rounds` scalar rounds for a simulated network-wide flood.
  void charge_flood(std::size_t rounds);

  /// Point-to-point send; throws LocalityError unless sender == receiver or
  /// {sender, receiver} is an edge.
  void send(std::size_t sender, std::size_t receiver, std::size_t payload);

  std::size_t vector_rounds() const noexcept { return vector_rounds_; }
  std::size_t scalar_rounds() const noexcept { return scalar_rounds_; }
  std::size_t scalars_sent() const noexcept { return scalars_sent_; }

  /// Keeps every Message in memory; off by default.
  void set_recording(bool on) { recording_ = on; }
  const std::vector<Message>& log() const noexcept { return log_; }

 private:
  void broadcast(std::size_t payload);

  const Graph* graph_;
  std::size_t vector_rounds_ = 0;
  std::size_t scalar_rounds_ = 0;
  std::size_t scalars_sent_ = 0;
  bool recording_ = false;
  std::vector<Message> log_;
};

}  // namespace dapd
