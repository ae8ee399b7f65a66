// Closed-form point and incidence counts for the quadric, and exhaustive
// verification of those counts against a materialized instance.
#pragma once

#include "qplus/polar.hpp"

#include <string>
#include <vector>

namespace qplus {

// theta_k = (q^{k+1} - 1)/(q - 1); theta_{-1} = 0, theta_0 = 1.
// Throws BadIndex for k < -1 and ResourceLimit past the 64-bit range.
long long theta(int k, long long q);

// k_m = (q^m + 1) * theta_m, the point count of a rank-(m+1) quadric;
// k_{-1} = 0 by convention so cone counts degenerate cleanly.
long long k_count(int m, long long q);

// Every count the verifier pins, straight from the closed forms.
struct CountTable {
  int rank = 0;
  long long q = 0;
  std::vector<long long> theta_values;  // theta_values[k+1] = theta_k, k in [-1, 2r]
  long long points = 0;          // k_{r-1}
  long long perp_size = 0;       // |P-perp on Q| = 1 + q * k_{r-2}, the point included
  long long noncollinear = 0;    // per point: q^{2(r-1)}
  long long common_noncollinear = 0;  // |{P,P'}-perp on Q| = k_{r-2}, P,P' noncollinear
  long long one_perp = 0;        // |P-perp \ P'-perp on Q| = q^{2r-3}, P,P' collinear
  long long lambda = 0;          // q^{2r-4} for r >= 2, the three-point count
  long long sigma0 = 0;          // q * k_{r-2}
  long long sigma1 = 0;          // q^{r-1} - 1
  long long sigma2 = 0;          // -(q^{r-2} + 1) for r >= 2
};

CountTable count_table(int rank, long long q);

// Exhaustive check of the per-point and per-pair counts on a built quadric.
struct CountsReport {
  bool ok = false;
  long long points_expected = 0, points_actual = 0;
  long long pairs_collinear = 0, pairs_noncollinear = 0;
  std::string first_fail;  // empty when ok
};

CountsReport verify_counts(const HyperbolicQuadric& Q, int threads = 1);

// For a fixed P0, classifies every pair P, P' in P0-perp \ {P0} and checks
// |P-perp ∩ P'-perp \ P0-perp| on the quadric: 0 when P0 lies on the
// (singular) line PP', q^{2r-4} otherwise.
struct LemmaLmReport {
  bool ok = false;
  long long pairs_on_line = 0;        // singular line through P0: count must be 0
  long long pairs_off_line = 0;       // singular line avoiding P0
  long long pairs_noncollinear = 0;   // P, P' not collinear
  std::string first_fail;
};

LemmaLmReport verify_lemma_lm(const HyperbolicQuadric& Q, int p0);

}  // namespace qplus
