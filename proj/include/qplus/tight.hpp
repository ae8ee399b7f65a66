// Tight sets and integer weight functions on the quadric: the averaging
// bound, the per-point parameter identities, quotient weights, line-pencil
// moments, congruence audits, and exhaustive search.
#pragma once

#include "qplus/census.hpp"
#include "qplus/polar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qplus {

// Integer weights indexed by quadric point. A 0/1 weight vector is a point
// set; several operations require that and say so.
struct WeightedSet {
  const HyperbolicQuadric* quadric = nullptr;
  std::vector<long long> w;

  long long total() const;
  bool zero_one() const;
  std::vector<int> support() const;  // indices with nonzero weight, ascending
};

WeightedSet weighted_from_weights(const HyperbolicQuadric& Q, std::vector<long long> w);
// Characteristic vector of a set of point indices; rejects bad or duplicate indices.
WeightedSet weighted_from_indices(const HyperbolicQuadric& Q, const std::vector<int>& idx);

// Average over T of |P-perp ∩ T \ {P}| (exclusive of the center) against the
// bound |T| (q^{r-1} - 1)/(q^r - 1) + q^{r-1}. Each member contributes one
// extra for itself under the inclusive convention the identities use, so
// equality holds exactly when kappa + 1 == bound; that is the flag.
struct TightnessReport {
  long long size = 0;
  Rational kappa;
  Rational bound;
  bool equality = false;
};
TightnessReport tightness_bound(const WeightedSet& T);

// The defining per-point identity on weights: for every P,
//   sum over P1 in P-perp of mu(P1) = x * theta_{r-2} + q^{r-1} * mu(P).
// Returns the unique witness x, or nothing. At rank 1 the identity holds
// vacuously and the total weight is returned.
std::optional<long long> property_star(const WeightedSet& mu);

// The pair identity implied by the point identity: for every noncollinear
// P1, P2, sum over their common perp of mu = x * theta_{r-3} +
// q^{r-2} * (mu(P1) + mu(P2)). Requires rank >= 2.
struct PairPropertyReport {
  bool ok = false;
  long long pairs_checked = 0;
  std::string first_fail;
};
PairPropertyReport property_star_star(const WeightedSet& mu, long long x);

// Weight pushed to the quotient by P0: each line through P0 gets the sum of
// mu over the line minus P0. Satisfies the point identity there with
// parameter (q - 1) * mu(P0) + x; both are verified before returning.
struct WeightQuotient {
  Quotient quot;
  std::vector<long long> weights;  // per quotient point
  long long x_tilde = 0;
};
WeightQuotient quotient_weight(const WeightedSet& mu, int p0);

// Exact square identity at P0 for a weight satisfying the point identity:
//   sum_P mu(P)^2 = mu(P0)^2 + (x - mu(P0))^2
//                 + (q + 1) * sum_{P1 in P0-perp \ P0} mu(P1)^2
//                 - sum_{lines L through P0} (sum_{P2 in L \ P0} mu(P2))^2.
bool sum_squares_identity(const WeightedSet& mu, int p0);

// For a 0/1 set: the witness x with |P-perp ∩ T| = q^{r-1} [P in T] +
// x * theta_{r-2} for every point P, or nothing when T is not tight.
std::optional<long long> tight_parameter(const WeightedSet& T);

// |S-perp ∩ T| = q^{r-1-s} |S ∩ T| + x * theta_{r-s-2} for an s-dimensional
// subspace of the ambient space, s <= r-1. Throws NotTight.
bool check_subspace_identity(const WeightedSet& T, const Subspace& S);

// Line moments at P0 not in T: with m_L = |L ∩ T| over the lines through P0,
//   sum m_L = x * theta_{r-2},
//   sum m_L^2 = x * (theta_{r-2} - 1 + x),
//   sum m_L (q^{r-1} + q^{r-2} (x - m_L)) = x q^{r-1} (q^{r-2} + x theta_{r-3}).
struct PencilReport {
  bool ok = false;
  long long x = 0;
  std::vector<long long> m;
  long long sum_m = 0, sum_m2 = 0, e_lhs = 0, e_rhs = 0;
  std::string first_fail;
};
PencilReport line_pencil_check(const WeightedSet& T, int p0);

// Per-generator residue test plus the pencil congruence. With w = |G ∩ T|
// and c = (r-1) mod 2: for odd rank, x(x-1)/2 + w(w-x) must vanish mod q+1;
// for even rank, w(w-x) must. For every P0 not in T on a generator G,
//   sum m_L^2 = x (theta_{r-2} - c) + (-1)^c 2 w (x - w) + c x^2  mod 2(q+1).
struct GeneratorCongruence {
  int generator = 0;
  long long w = 0;
  bool ok = false;
};
struct CongruenceAudit {
  long long x = 0;
  int parity_c = 0;
  std::vector<GeneratorCongruence> generator_rows;
  long long pencil_rows = 0;
  long long pencil_failures = 0;
  std::vector<long long> observed_residues;  // distinct w mod (q+1), ascending
  bool ok = false;
  std::string first_fail;
};
CongruenceAudit congruence_audit(const WeightedSet& T, const std::vector<Subspace>& gens);

// First pairwise-disjoint union of x generators in index order, as a 0/1
// weighted set, or nothing when no such union exists.
std::optional<WeightedSet> build_disjoint_generators(const HyperbolicQuadric& Q, long long x,
                                                     const std::vector<Subspace>& gens);

// Complement of a tight set; checks the resulting parameter q^{r-1} + 1 - x.
WeightedSet complement(const WeightedSet& T);

// All tight sets with the given parameter, by exhaustive branch-and-prune
// over point indices. Sets are emitted in ascending lex order of their
// sorted index vectors. exhausted is false when the time budget ran out.
struct SearchResult {
  std::vector<std::vector<int>> sets;
  bool exhausted = true;
  long long nodes = 0;
};
SearchResult exhaustive_search(const HyperbolicQuadric& Q, long long x,
                               double budget_seconds = 300.0);

// The standard battery: empty set, one generator, maximal disjoint unions,
// the full point set, and complements of all of those (duplicates dropped).
struct CorpusEntry {
  std::string name;
  WeightedSet set;
  long long x = 0;
};
std::vector<CorpusEntry> standard_corpus(const HyperbolicQuadric& Q,
                                         const std::vector<Subspace>& gens);

}  // namespace qplus
