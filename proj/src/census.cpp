#include "qplus/census.hpp"

#include <algorithm>

namespace qplus {

namespace {

constexpr long long kInt64Max = 0x7fffffffffffffffLL;

long long checked(int128 v, const char* what) {
  if (v > (int128)kInt64Max || v < -(int128)kInt64Max)
    throw Error(Errc::ResourceLimit, std::string(what) + " exceeds the 64-bit range");
  return (long long)v;
}

int128 ipow128(long long q, int e) {
  int128 r = 1;
  for (int i = 0; i < e; ++i) r *= q;
  return r;
}

}  // namespace

long long theta(int k, long long q) {
  if (k < -1) throw Error(Errc::BadIndex, "theta index below -1");
  int128 t = 0;
  for (int i = 0; i <= k; ++i) t = checked(t * q + 1, "theta");
  return (long long)t;
}

long long k_count(int m, long long q) {
  if (m < -1) throw Error(Errc::BadIndex, "k index below -1");
  if (m == -1) return 0;
  return checked((ipow128(q, m) + 1) * theta(m, q), "point count");
}

CountTable count_table(int rank, long long q) {
  if (rank < 1) throw Error(Errc::BadIndex, "rank must be >= 1");
  CountTable t;
  t.rank = rank;
  t.q = q;
  for (int k = -1; k <= 2 * rank; ++k) t.theta_values.push_back(theta(k, q));
  t.points = k_count(rank - 1, q);
  t.perp_size = checked(1 + (int128)q * k_count(rank - 2, q), "perp size");
  t.noncollinear = checked(ipow128(q, 2 * (rank - 1)), "noncollinear count");
  t.common_noncollinear = k_count(rank - 2, q);
  t.one_perp = rank >= 2 ? checked(ipow128(q, 2 * rank - 3), "one-sided perp") : 0;
  t.lambda = rank >= 2 ? checked(ipow128(q, 2 * rank - 4), "lambda") : 0;
  t.sigma0 = checked((int128)q * k_count(rank - 2, q), "sigma0");
  t.sigma1 = checked(ipow128(q, rank - 1) - 1, "sigma1");
  t.sigma2 = rank >= 2 ? -checked(ipow128(q, rank - 2) + 1, "sigma2") : 0;
  return t;
}

CountsReport verify_counts(const HyperbolicQuadric& Q, int threads) {
  const CountTable t = count_table(Q.rank(), Q.field().q);
  CountsReport rep;
  rep.points_expected = t.points;
  rep.points_actual = Q.size();
  if (rep.points_actual != rep.points_expected) {
    rep.first_fail = "point total " + std::to_string(rep.points_actual) + " != " +
                     std::to_string(rep.points_expected);
    return rep;
  }
  int N = Q.size(), words = Q.words();

  struct Part {
    long long coll = 0, noncoll = 0;
    std::string fail;
  };
  int n_chunks = std::min(N, 64);
  std::vector<Part> parts(n_chunks);
  parallel_chunks(N, threads, n_chunks, [&](int chunk, long long lo, long long hi) {
    Part& p = parts[chunk];
    for (long long i = lo; i < hi && p.fail.empty(); ++i) {
      const std::uint64_t* ri = Q.perp_row((int)i);
      long long deg = popcount_row(ri, words);
      if (deg != t.perp_size) {
        p.fail = "point " + std::to_string(i) + ": perp size " + std::to_string(deg) +
                 " != " + std::to_string(t.perp_size);
        break;
      }
      if (N - deg != t.noncollinear) {
        p.fail = "point " + std::to_string(i) + ": noncollinear " + std::to_string(N - deg) +
                 " != " + std::to_string(t.noncollinear);
        break;
      }
      for (int j = (int)i + 1; j < N; ++j) {
        const std::uint64_t* rj = Q.perp_row(j);
        if (Q.collinear((int)i, j)) {
          long long a = popcount_row(ri, words) - popcount_and(ri, rj, words);
          long long b = popcount_row(rj, words) - popcount_and(ri, rj, words);
          if (a != t.one_perp || b != t.one_perp) {
            p.fail = "collinear pair (" + std::to_string(i) + "," + std::to_string(j) +
                     "): one-sided perp " + std::to_string(a) + "/" + std::to_string(b) +
                     " != " + std::to_string(t.one_perp);
            break;
          }
          ++p.coll;
        } else {
          long long c = popcount_and(ri, rj, words);
          if (c != t.common_noncollinear) {
            p.fail = "noncollinear pair (" + std::to_string(i) + "," + std::to_string(j) +
                     "): common perp " + std::to_string(c) + " != " +
                     std::to_string(t.common_noncollinear);
            break;
          }
          ++p.noncoll;
        }
      }
    }
  });
  for (const auto& p : parts) {
    rep.pairs_collinear += p.coll;
    rep.pairs_noncollinear += p.noncoll;
    if (rep.first_fail.empty() && !p.fail.empty()) rep.first_fail = p.fail;
  }
  rep.ok = rep.first_fail.empty();
  return rep;
}

LemmaLmReport verify_lemma_lm(const HyperbolicQuadric& Q, int p0) {
  if (p0 < 0 || p0 >= Q.size()) throw Error(Errc::BadIndex, "bad point index");
  const FieldSpec& f = Q.field();
  const long long lambda = count_table(Q.rank(), f.q).lambda;
  int words = Q.words();
  LemmaLmReport rep;

  std::vector<int> nbr;
  for_each_bit(Q.perp_row(p0), words, [&](int j) {
    if (j != p0) nbr.push_back(j);
  });
  std::vector<std::vector<Fel>> pair_basis(2);
  const std::uint64_t* r0 = Q.perp_row(p0);
  for (size_t a = 0; a < nbr.size() && rep.first_fail.empty(); ++a) {
    for (size_t b = a + 1; b < nbr.size(); ++b) {
      int i = nbr[a], j = nbr[b];
      long long got = popcount_and_andnot(Q.perp_row(i), Q.perp_row(j), r0, words);
      if (Q.collinear(i, j)) {
        pair_basis[0] = Q.point(i).coords;
        pair_basis[1] = Q.point(j).coords;
        bool through = solve_in_span(pair_basis, Q.point(p0).coords, f).has_value();
        long long want = through ? 0 : lambda;
        if (got != want) {
          rep.first_fail = "pair (" + std::to_string(i) + "," + std::to_string(j) +
                           ") through=" + std::to_string(through) + ": " + std::to_string(got) +
                           " != " + std::to_string(want);
          break;
        }
        ++(through ? rep.pairs_on_line : rep.pairs_off_line);
      } else {
        if (got != lambda) {
          rep.first_fail = "noncollinear pair (" + std::to_string(i) + "," + std::to_string(j) +
                           "): " + std::to_string(got) + " != " + std::to_string(lambda);
          break;
        }
        ++rep.pairs_noncollinear;
      }
    }
  }
  rep.ok = rep.first_fail.empty();
  return rep;
}

}  // namespace qplus
