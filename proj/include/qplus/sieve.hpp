// Modular admissibility of tight-set parameters: which generator meeting
// sizes w (mod q+1) are compatible with a given x, which x values are ruled
// out entirely, and what fraction of a parameter range dies this way.
#pragma once

#include "qplus/galois.hpp"
#include "qplus/util.hpp"

#include <vector>

namespace qplus {

// Residues w in [0, q] that pass the generator test for parameter x on a
// rank-r quadric: for odd rank, x(x-1)/2 + w(w-x) = 0 mod q+1; for even
// rank, w(w-x) = 0 mod q+1.
std::vector<long long> admissible_residues(long long x, long long q, int rank);

// Parameters x in [1, x_max] whose admissible residue set is empty: no
// tight set with that parameter can exist.
std::vector<long long> excluded_parameters(long long q, int rank, long long x_max);

// Upper end of the canonical scan range: floor((q^{r-1} + 1)/2), by
// complementation the larger half carries no new information.
long long default_x_max(long long q, int rank);

// |excluded in [3, default_x_max]| / |[3, default_x_max]| as an exact
// fraction. Throws RangeEmpty when the range has no integers.
Rational exclusion_fraction(long long q, int rank);

}  // namespace qplus
