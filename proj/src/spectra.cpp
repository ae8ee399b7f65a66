#include "qplus/spectra.hpp"

namespace qplus {

CollinearityGraph build_graph(const HyperbolicQuadric& Q) {
  CollinearityGraph g;
  g.n = Q.size();
  g.words = Q.words();
  g.adj = BitMatrix(g.n, g.n);
  for (int i = 0; i < g.n; ++i) {
    const std::uint64_t* src = Q.perp_row(i);
    std::uint64_t* dst = g.adj.row(i);
    for (int w = 0; w < g.words; ++w) dst[w] = src[w];
    g.adj.clear(i, i);
  }
  return g;
}

SrgReport srg_verify(const HyperbolicQuadric& Q, int threads) {
  const CountTable t = count_table(Q.rank(), Q.field().q);
  CollinearityGraph g = build_graph(Q);
  SrgReport rep;
  rep.v = g.n;
  rep.sigma0 = t.sigma0;
  rep.sigma1 = t.sigma1;
  rep.sigma2 = t.sigma2;
  rep.k = t.sigma0;
  rep.mu = t.sigma0 + t.sigma1 * t.sigma2;
  rep.lambda = rep.mu + t.sigma1 + t.sigma2;

  if (rep.v != t.points) {
    rep.first_fail = "vertex count mismatch";
    return rep;
  }

  struct Part { std::string fail; };
  int n_chunks = std::min(g.n, 64);
  std::vector<Part> parts(n_chunks);
  parallel_chunks(g.n, threads, n_chunks, [&](int chunk, long long lo, long long hi) {
    Part& p = parts[chunk];
    for (long long i = lo; i < hi && p.fail.empty(); ++i) {
      const std::uint64_t* ri = g.adj.row((int)i);
      if (popcount_row(ri, g.words) != rep.k) {
        p.fail = "vertex " + std::to_string(i) + " has degree " +
                 std::to_string(popcount_row(ri, g.words)) + " != " + std::to_string(rep.k);
        break;
      }
      for (int j = (int)i + 1; j < g.n; ++j) {
        long long common = popcount_and(ri, g.adj.row(j), g.words);
        long long want = g.adj.get((int)i, j) ? rep.lambda : rep.mu;
        if (common != want) {
          p.fail = "pair (" + std::to_string(i) + "," + std::to_string(j) + "): " +
                   std::to_string(common) + " common neighbors != " + std::to_string(want);
          break;
        }
      }
    }
  });
  for (const auto& p : parts)
    if (rep.first_fail.empty() && !p.fail.empty()) rep.first_fail = p.fail;
  if (!rep.first_fail.empty()) return rep;

  // sigma1, sigma2 solve z^2 - (lambda - mu) z - (k - mu) = 0.
  auto quad = [&](long long z) {
    return z * z - (rep.lambda - rep.mu) * z - (rep.k - rep.mu);
  };
  if (quad(rep.sigma1) != 0 || quad(rep.sigma2) != 0) {
    rep.first_fail = "formula eigenvalues do not solve the srg quadratic";
    return rep;
  }
  // m1 + m2 = v - 1 and k + m1 sigma1 + m2 sigma2 = 0 (trace).
  long long num = (rep.v - 1) * (-rep.sigma2) - rep.k;
  long long den = rep.sigma1 - rep.sigma2;
  if (den == 0 || num % den != 0) {
    rep.first_fail = "multiplicities are not integral";
    return rep;
  }
  rep.m1 = num / den;
  rep.m2 = rep.v - 1 - rep.m1;
  if (rep.m1 < 0 || rep.m2 < 0 ||
      rep.k + rep.m1 * rep.sigma1 + rep.m2 * rep.sigma2 != 0) {
    rep.first_fail = "trace identity fails";
    return rep;
  }
  rep.ok = true;
  return rep;
}

std::optional<long long> star_eigenvector_check(const WeightedSet& mu) {
  const HyperbolicQuadric& Q = *mu.quadric;
  long long q = Q.field().q;
  int r = Q.rank();
  if (r == 1) return mu.total();  // adjacency is empty; matches the point-identity convention
  long long th = theta(r - 2, q);
  long long sigma1 = ipow(q, r - 1) - 1;
  auto nbr_sum = [&](int p) {
    long long s = 0;
    for_each_bit(Q.perp_row(p), Q.words(), [&](int j) {
      if (j != p) s += mu.w[j];
    });
    return s;
  };
  long long rhs0 = nbr_sum(0) - sigma1 * mu.w[0];
  if (rhs0 % th != 0) return std::nullopt;
  long long x = rhs0 / th;
  for (int p = 0; p < Q.size(); ++p)
    if (nbr_sum(p) != sigma1 * mu.w[p] + x * th) return std::nullopt;
  return x;
}

namespace {

// The pair vector; callers have validated rank >= 2 and noncollinearity.
std::vector<long long> pair_vector(const HyperbolicQuadric& Q, int p1, int p2) {
  long long q = Q.field().q;
  int r = Q.rank();
  long long th1 = theta(r - 1, q), th3 = theta(r - 3, q), qr2 = ipow(q, r - 2);
  std::vector<long long> W(Q.size());
  const std::uint64_t* r1 = Q.perp_row(p1);
  const std::uint64_t* r2 = Q.perp_row(p2);
  for (int k = 0; k < Q.size(); ++k) {
    bool common = ((r1[k / 64] >> (k % 64)) & 1ULL) && ((r2[k / 64] >> (k % 64)) & 1ULL);
    W[k] = (common ? th1 : 0) - th3 - (k == p1 || k == p2 ? qr2 * th1 : 0);
  }
  return W;
}

}  // namespace

bool pair_eigenvector_check(const HyperbolicQuadric& Q, int p1, int p2) {
  if (Q.rank() < 2) throw Error(Errc::BadIndex, "pair eigenvector needs rank >= 2");
  if (p1 < 0 || p1 >= Q.size() || p2 < 0 || p2 >= Q.size())
    throw Error(Errc::BadIndex, "bad point index");
  if (Q.collinear(p1, p2))
    throw Error(Errc::CollinearPair, "pair eigenvector needs a noncollinear pair");
  long long sigma2 = -(ipow(Q.field().q, Q.rank() - 2) + 1);
  std::vector<long long> W = pair_vector(Q, p1, p2);
  for (int k = 0; k < Q.size(); ++k) {
    int128 s = 0;
    for_each_bit(Q.perp_row(k), Q.words(), [&](int j) {
      if (j != k) s += W[j];
    });
    if (s != (int128)sigma2 * W[k]) return false;
  }
  return true;
}

bool pair_orthogonality_check(const WeightedSet& mu, int p1, int p2) {
  const HyperbolicQuadric& Q = *mu.quadric;
  if (Q.rank() < 2) throw Error(Errc::BadIndex, "pair orthogonality needs rank >= 2");
  auto x = property_star(mu);
  if (!x) throw Error(Errc::StarNotSatisfied, "weight does not satisfy the point identity");
  if (Q.collinear(p1, p2))
    throw Error(Errc::CollinearPair, "pair orthogonality needs a noncollinear pair");
  long long q = Q.field().q;
  int r = Q.rank();
  long long sigma0 = q * k_count(r - 2, q), sigma1 = ipow(q, r - 1) - 1;
  long long th = theta(r - 2, q);
  std::vector<long long> W = pair_vector(Q, p1, p2);
  int128 dot = 0;
  for (int k = 0; k < Q.size(); ++k) {
    int128 V = (int128)(sigma1 - sigma0) * mu.w[k] + (int128)*x * th;
    dot += V * W[k];
  }
  return dot == 0;
}

}  // namespace qplus
