#include "qplus/sieve.hpp"

#include "qplus/galois.hpp"

namespace qplus {

namespace {

long long pmod(int128 v, long long m) {
  long long r = (long long)(v % m);
  return r < 0 ? r + m : r;
}

}  // namespace

std::vector<long long> admissible_residues(long long x, long long q, int rank) {
  if (rank < 2) throw Error(Errc::BadIndex, "sieve needs rank >= 2");
  if (x < 0) throw Error(Errc::BadInput, "parameter must be nonnegative");
  long long m = q + 1;
  bool odd_rank = rank % 2 == 1;
  std::vector<long long> out;
  for (long long w = 0; w <= q; ++w) {
    int128 v = (int128)w * (w - x);
    if (odd_rank) v += (int128)x * (x - 1) / 2;
    if (pmod(v, m) == 0) out.push_back(w);
  }
  return out;
}

std::vector<long long> excluded_parameters(long long q, int rank, long long x_max) {
  std::vector<long long> out;
  for (long long x = 1; x <= x_max; ++x)
    if (admissible_residues(x, q, rank).empty()) out.push_back(x);
  return out;
}

long long default_x_max(long long q, int rank) {
  return (ipow(q, rank - 1) + 1) / 2;
}

Rational exclusion_fraction(long long q, int rank) {
  long long hi = default_x_max(q, rank);
  if (hi < 3) throw Error(Errc::RangeEmpty, "parameter range [3, " + std::to_string(hi) +
                                                "] is empty");
  long long excluded = 0;
  for (long long x = 3; x <= hi; ++x)
    if (admissible_residues(x, q, rank).empty()) ++excluded;
  return Rational(excluded, hi - 2);
}

}  // namespace qplus
