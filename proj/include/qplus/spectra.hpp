// The collinearity graph as a strongly regular graph: parameter checks from
// the closed forms, and the eigenvector identities attached to weights and
// to noncollinear point pairs.
#pragma once

#include "qplus/tight.hpp"

#include <optional>
#include <string>

namespace qplus {

// Adjacency = collinearity minus the diagonal.
struct CollinearityGraph {
  int n = 0;
  int words = 0;
  BitMatrix adj;
};

CollinearityGraph build_graph(const HyperbolicQuadric& Q);

// Exhaustive srg(v, k, lambda, mu) verification plus the spectral bookkeeping:
// sigma1 and sigma2 must solve z^2 - (lambda - mu) z - (k - mu) = 0, and the
// multiplicities from the trace identities must be nonnegative integers.
struct SrgReport {
  bool ok = false;
  long long v = 0, k = 0, lambda = -1, mu = -1;
  long long sigma0 = 0, sigma1 = 0, sigma2 = 0;
  long long m1 = 0, m2 = 0;
  std::string first_fail;
};
SrgReport srg_verify(const HyperbolicQuadric& Q, int threads = 1);

// Adjacency-sum form of the point identity: infers x and confirms
//   sum over neighbors of mu = sigma1 * mu(P) + x * theta_{r-2}  for all P,
// which makes (sigma1 - sigma0) mu + x theta_{r-2} 1 a sigma1-eigenvector.
// Agrees with property_star by construction; returns the witness.
std::optional<long long> star_eigenvector_check(const WeightedSet& mu);

// For a noncollinear pair, the vector
//   W = theta_{r-1} [in common perp] - theta_{r-3}
//       - q^{r-2} theta_{r-1} ([P = P1] + [P = P2])
// is a sigma2-eigenvector of the adjacency matrix. Requires rank >= 2;
// throws CollinearPair when the pair is collinear (or equal).
bool pair_eigenvector_check(const HyperbolicQuadric& Q, int p1, int p2);

// <V, W> = 0 for V = (sigma1 - sigma0) mu + x theta_{r-2} 1 built from a
// weight with the point identity and W from a noncollinear pair.
bool pair_orthogonality_check(const WeightedSet& mu, int p1, int p2);

}  // namespace qplus
