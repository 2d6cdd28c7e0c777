#pragma once

#include "dapd/graph.hpp"
#include "dapd/types.hpp"

namespace dapd {

/// Mixing matrices used by all algorithms: the graph-compliant doubly
/// stochastic `base` (W tilde) and the lazy `mixing` W = (1-c) I + c base.
struct GossipMatrix {
  Matrix base;
  double c = 0.5;
  Matrix mixing;
};

inline constexpr double kDefaultMixing = 0.5;

/// Metropolis-Hastings weights: 1 / (1 + max(deg_i, deg_j)) on edges, the
/// remainder on the diagonal.
Matrix metropolis_weights(const Graph& g);

/// Throws ParameterError unless 0 < c <= 1/2.
GossipMatrix gossip_matrix(const Matrix& base, double c = kDefaultMixing);

/// Unchecked W = (1-c) I + c base, for limit arguments outside (0, 1/2].
Matrix lazy_mixing(const Matrix& base, double c);

struct SpectralData {
  double lambda2 = 1.0;     // second largest eigenvalue of base
  double lambda_min = 1.0;  // smallest eigenvalue of base
  Matrix merit;             // c^{-1} (I - base)^+ - I
};

/// Eigenvalues at or below this magnitude are treated as zero by the
/// pseudoinverse.
inline constexpr double kPseudoinverseCutoff = 1e-10;

SpectralData spectral_data(const GossipMatrix& gm);

/// Largest deviation from the GossipMatrix invariants (row sums, symmetry,
/// sparsity pattern) over both `base` and `mixing`; +inf if a pattern check
/// fails.
double gossip_invariant_violation(const GossipMatrix& gm, const Graph& g);

}  // namespace dapd
