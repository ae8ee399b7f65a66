#include "qplus/tight.hpp"

#include <algorithm>
#include <chrono>

namespace qplus {

long long WeightedSet::total() const {
  long long s = 0;
  for (long long v : w) s += v;
  return s;
}

bool WeightedSet::zero_one() const {
  for (long long v : w)
    if (v != 0 && v != 1) return false;
  return true;
}

std::vector<int> WeightedSet::support() const {
  std::vector<int> s;
  for (int i = 0; i < (int)w.size(); ++i)
    if (w[i] != 0) s.push_back(i);
  return s;
}

WeightedSet weighted_from_weights(const HyperbolicQuadric& Q, std::vector<long long> w) {
  if ((int)w.size() != Q.size())
    throw Error(Errc::DimensionMismatch, "weight vector length differs from the point count");
  return WeightedSet{&Q, std::move(w)};
}

WeightedSet weighted_from_indices(const HyperbolicQuadric& Q, const std::vector<int>& idx) {
  std::vector<long long> w(Q.size(), 0);
  for (int i : idx) {
    if (i < 0 || i >= Q.size())
      throw Error(Errc::BadIndex, "point index " + std::to_string(i) + " out of range");
    if (w[i] != 0) throw Error(Errc::DuplicatePoint, "index " + std::to_string(i) + " repeated");
    w[i] = 1;
  }
  return WeightedSet{&Q, std::move(w)};
}

namespace {

// Sum of mu over P-perp, the center included.
long long perp_sum(const WeightedSet& mu, int p) {
  const HyperbolicQuadric& Q = *mu.quadric;
  long long s = 0;
  for_each_bit(Q.perp_row(p), Q.words(), [&](int j) { s += mu.w[j]; });
  return s;
}

long long pmod(int128 v, long long m) {
  long long r = (long long)(v % m);
  return r < 0 ? r + m : r;
}

}  // namespace

TightnessReport tightness_bound(const WeightedSet& T) {
  const HyperbolicQuadric& Q = *T.quadric;
  if (!T.zero_one()) throw Error(Errc::BadInput, "tightness bound needs a 0/1 set");
  long long size = T.total();
  if (size == 0) throw Error(Errc::EmptySet, "tightness bound of the empty set");
  long long q = Q.field().q;
  int r = Q.rank();
  long long inclusive = 0;
  for (int p : T.support()) inclusive += perp_sum(T, p);
  TightnessReport rep;
  rep.size = size;
  rep.kappa = Rational(inclusive - size, size);  // each member counts itself once
  rep.bound = Rational(size * (ipow(q, r - 1) - 1), theta(r - 1, q) * (q - 1)) +
              Rational(ipow(q, r - 1));
  rep.equality = (rep.kappa + Rational(1)) == rep.bound;
  return rep;
}

std::optional<long long> property_star(const WeightedSet& mu) {
  const HyperbolicQuadric& Q = *mu.quadric;
  long long q = Q.field().q;
  int r = Q.rank();
  if (r == 1) return mu.total();  // the identity is vacuous; see the quotient coherence note
  long long th = theta(r - 2, q), qr1 = ipow(q, r - 1);
  // Solve x from the first point, then confirm everywhere.
  long long rhs0 = perp_sum(mu, 0) - qr1 * mu.w[0];
  if (rhs0 % th != 0) return std::nullopt;
  long long x = rhs0 / th;
  for (int p = 0; p < Q.size(); ++p)
    if (perp_sum(mu, p) != x * th + qr1 * mu.w[p]) return std::nullopt;
  return x;
}

PairPropertyReport property_star_star(const WeightedSet& mu, long long x) {
  const HyperbolicQuadric& Q = *mu.quadric;
  long long q = Q.field().q;
  int r = Q.rank();
  if (r < 2) throw Error(Errc::BadIndex, "pair identity needs rank >= 2");
  long long th = theta(r - 3, q), qr2 = ipow(q, r - 2);
  int words = Q.words();
  PairPropertyReport rep;
  for (int i = 0; i < Q.size() && rep.first_fail.empty(); ++i) {
    for (int j = i + 1; j < Q.size(); ++j) {
      if (Q.collinear(i, j)) continue;
      long long s = 0;
      const std::uint64_t* ri = Q.perp_row(i);
      const std::uint64_t* rj = Q.perp_row(j);
      for (int w = 0; w < words; ++w) {
        std::uint64_t bits = ri[w] & rj[w];
        while (bits) {
          int b = __builtin_ctzll(bits);
          s += mu.w[w * 64 + b];
          bits &= bits - 1;
        }
      }
      if (s != x * th + qr2 * (mu.w[i] + mu.w[j])) {
        rep.first_fail = "pair (" + std::to_string(i) + "," + std::to_string(j) + "): sum " +
                         std::to_string(s) + " != " +
                         std::to_string(x * th + qr2 * (mu.w[i] + mu.w[j]));
        break;
      }
      ++rep.pairs_checked;
    }
  }
  rep.ok = rep.first_fail.empty();
  return rep;
}

WeightQuotient quotient_weight(const WeightedSet& mu, int p0) {
  const HyperbolicQuadric& Q = *mu.quadric;
  if (p0 < 0 || p0 >= Q.size()) throw Error(Errc::BadIndex, "bad point index");
  auto x = property_star(mu);
  if (!x) throw Error(Errc::StarNotSatisfied, "weight does not satisfy the point identity");
  WeightQuotient out;
  out.quot = quotient(Q, span({Q.point(p0)}, Q.field()));
  out.weights.assign(out.quot.quadric.size(), 0);
  for (int i = 0; i < Q.size(); ++i) {
    int m = out.quot.point_to_quotient[i];
    if (m >= 0) out.weights[m] += mu.w[i];
  }
  out.x_tilde = (Q.field().q - 1) * mu.w[p0] + *x;
  // Confirm the pushed weight satisfies the identity with that parameter.
  if (out.quot.quadric.size() > 0) {
    WeightedSet pushed{&out.quot.quadric, out.weights};
    auto xt = property_star(pushed);
    if (!xt || *xt != out.x_tilde)
      throw Error(Errc::Internal, "quotient weight parameter mismatch");
  }
  return out;
}

bool sum_squares_identity(const WeightedSet& mu, int p0) {
  const HyperbolicQuadric& Q = *mu.quadric;
  if (p0 < 0 || p0 >= Q.size()) throw Error(Errc::BadIndex, "bad point index");
  auto x = property_star(mu);
  if (!x) throw Error(Errc::StarNotSatisfied, "weight does not satisfy the point identity");
  long long q = Q.field().q;
  int128 lhs = 0;
  for (long long v : mu.w) lhs += (int128)v * v;
  int128 rhs = (int128)mu.w[p0] * mu.w[p0] + (int128)(*x - mu.w[p0]) * (*x - mu.w[p0]);
  int128 nbr2 = 0;
  for_each_bit(Q.perp_row(p0), Q.words(), [&](int j) {
    if (j != p0) nbr2 += (int128)mu.w[j] * mu.w[j];
  });
  rhs += (int128)(q + 1) * nbr2;
  for (const auto& line : line_pencil(Q, p0)) {
    long long m = 0;
    for (int idx : line)
      if (idx != p0) m += mu.w[idx];
    rhs -= (int128)m * m;
  }
  return lhs == rhs;
}

std::optional<long long> tight_parameter(const WeightedSet& T) {
  if (!T.zero_one()) throw Error(Errc::BadInput, "tight parameter needs a 0/1 set");
  const HyperbolicQuadric& Q = *T.quadric;
  long long q = Q.field().q;
  int r = Q.rank();
  if (r == 1) return property_star(T);
  auto x = property_star(T);
  if (!x) return std::nullopt;
  // Tight parameters also fix the size: |T| = x * theta_{r-1}.
  if (T.total() != *x * theta(r - 1, q)) return std::nullopt;
  return x;
}

bool check_subspace_identity(const WeightedSet& T, const Subspace& S) {
  const HyperbolicQuadric& Q = *T.quadric;
  const FieldSpec& f = Q.field();
  auto x = tight_parameter(T);
  if (!x) throw Error(Errc::NotTight, "subspace identity needs a tight set");
  int r = Q.rank(), s = S.pdim();
  if (s < 0 || s > r - 1) throw Error(Errc::BadIndex, "subspace dimension out of range");
  long long in_S = 0;
  for (const auto& pt : subspace_points(S, f)) {
    int i = Q.index_of(pt);
    if (i >= 0) in_S += T.w[i];
  }
  long long in_perp = 0;
  for (int i : perp_of_subspace(Q, S)) in_perp += T.w[i];
  return in_perp == ipow(f.q, r - 1 - s) * in_S + *x * theta(r - s - 2, f.q);
}

PencilReport line_pencil_check(const WeightedSet& T, int p0) {
  const HyperbolicQuadric& Q = *T.quadric;
  long long q = Q.field().q;
  int r = Q.rank();
  auto x = tight_parameter(T);
  if (!x) throw Error(Errc::NotTight, "pencil moments need a tight set");
  if (p0 < 0 || p0 >= Q.size()) throw Error(Errc::BadIndex, "bad point index");
  if (T.w[p0] != 0) throw Error(Errc::PointInT, "pencil center must avoid the set");
  PencilReport rep;
  rep.x = *x;
  for (const auto& line : line_pencil(Q, p0)) {
    long long m = 0;
    for (int idx : line) m += T.w[idx];  // w[p0] = 0, so the center adds nothing
    rep.m.push_back(m);
    rep.sum_m += m;
    rep.sum_m2 += m * m;
    rep.e_lhs += m * (ipow(q, r - 1) + ipow(q, r - 2) * (*x - m));
  }
  rep.e_rhs = *x * ipow(q, r - 1) * (ipow(q, r - 2) + *x * theta(r - 3, q));
  long long want_sum = *x * theta(r - 2, q);
  long long want_sum2 = *x * (theta(r - 2, q) - 1 + *x);
  if (rep.sum_m != want_sum)
    rep.first_fail = "sum of line counts " + std::to_string(rep.sum_m) + " != " +
                     std::to_string(want_sum);
  else if (rep.sum_m2 != want_sum2)
    rep.first_fail = "sum of squared line counts " + std::to_string(rep.sum_m2) + " != " +
                     std::to_string(want_sum2);
  else if (rep.e_lhs != rep.e_rhs)
    rep.first_fail = "double count " + std::to_string(rep.e_lhs) + " != " +
                     std::to_string(rep.e_rhs);
  rep.ok = rep.first_fail.empty();
  return rep;
}

CongruenceAudit congruence_audit(const WeightedSet& T, const std::vector<Subspace>& gens) {
  const HyperbolicQuadric& Q = *T.quadric;
  const FieldSpec& f = Q.field();
  long long q = f.q;
  int r = Q.rank();
  auto x = tight_parameter(T);
  if (!x) throw Error(Errc::NotTight, "congruence audit needs a tight set");
  CongruenceAudit rep;
  rep.x = *x;
  rep.parity_c = (r - 1) % 2;

  // Generator point lists, sorted for membership tests.
  std::vector<std::vector<int>> gpts(gens.size());
  for (size_t g = 0; g < gens.size(); ++g) {
    for (const auto& pt : subspace_points(gens[g], f)) {
      int i = Q.index_of(pt);
      if (i < 0) throw Error(Errc::NotTotallySingular, "generator point off the quadric");
      gpts[g].push_back(i);
    }
    std::sort(gpts[g].begin(), gpts[g].end());
  }

  long long mod1 = q + 1;
  std::vector<long long> residues;
  for (size_t g = 0; g < gens.size(); ++g) {
    long long w = 0;
    for (int i : gpts[g]) w += T.w[i];
    int128 v = rep.parity_c == 0
                   ? (int128)*x * (*x - 1) / 2 + (int128)w * (w - *x)   // odd rank
                   : (int128)w * (w - *x);                              // even rank
    GeneratorCongruence row{(int)g, w, pmod(v, mod1) == 0};
    if (!row.ok && rep.first_fail.empty())
      rep.first_fail = "generator " + std::to_string(g) + ": residue test fails with w = " +
                       std::to_string(w);
    rep.generator_rows.push_back(row);
    residues.push_back(w % mod1);
  }
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  rep.observed_residues = std::move(residues);

  // Pencil congruence at every P0 off T, for every generator through P0:
  // sum m^2 = x(theta_{r-2} - c) + (-1)^c 2w(x - w) + c x^2  mod 2(q+1).
  long long mod2 = 2 * (q + 1);
  long long c = rep.parity_c;
  for (int p0 = 0; p0 < Q.size(); ++p0) {
    if (T.w[p0] != 0) continue;
    long long sum_m2 = 0;
    for (const auto& line : line_pencil(Q, p0)) {
      long long m = 0;
      for (int idx : line) m += T.w[idx];
      sum_m2 += m * m;
    }
    for (size_t g = 0; g < gens.size(); ++g) {
      if (!std::binary_search(gpts[g].begin(), gpts[g].end(), p0)) continue;
      long long w = rep.generator_rows[g].w;
      int128 rhs = (int128)*x * (theta(r - 2, q) - c) +
                   (c == 0 ? 1 : -1) * (int128)2 * w * (*x - w) + (int128)c * *x * *x;
      ++rep.pencil_rows;
      if (pmod((int128)sum_m2 - rhs, mod2) != 0) {
        ++rep.pencil_failures;
        if (rep.first_fail.empty())
          rep.first_fail = "pencil congruence fails at point " + std::to_string(p0) +
                           " on generator " + std::to_string(g);
      }
    }
  }
  rep.ok = rep.first_fail.empty() && rep.pencil_failures == 0;
  return rep;
}

std::optional<WeightedSet> build_disjoint_generators(const HyperbolicQuadric& Q, long long x,
                                                     const std::vector<Subspace>& gens) {
  const FieldSpec& f = Q.field();
  long long q = f.q;
  int r = Q.rank();
  if (x < 0 || x * theta(r - 1, q) > Q.size()) return std::nullopt;
  if (x == 0) return weighted_from_indices(Q, {});
  int words = Q.words();

  std::vector<std::vector<std::uint64_t>> masks(gens.size(),
                                                std::vector<std::uint64_t>(words, 0));
  for (size_t g = 0; g < gens.size(); ++g)
    for (const auto& pt : subspace_points(gens[g], f)) {
      int i = Q.index_of(pt);
      if (i < 0) throw Error(Errc::NotTotallySingular, "generator point off the quadric");
      masks[g][i / 64] |= 1ULL << (i % 64);
    }

  std::vector<int> chosen;
  std::vector<std::uint64_t> used(words, 0);
  std::function<bool(size_t)> dfs = [&](size_t start) {
    if ((long long)chosen.size() == x) return true;
    for (size_t g = start; g < gens.size(); ++g) {
      bool disjoint = true;
      for (int w = 0; w < words && disjoint; ++w)
        if (masks[g][w] & used[w]) disjoint = false;
      if (!disjoint) continue;
      chosen.push_back((int)g);
      for (int w = 0; w < words; ++w) used[w] |= masks[g][w];
      if (dfs(g + 1)) return true;
      for (int w = 0; w < words; ++w) used[w] &= ~masks[g][w];
      chosen.pop_back();
    }
    return false;
  };
  if (!dfs(0)) return std::nullopt;

  std::vector<long long> wts(Q.size(), 0);
  for (int g : chosen)
    for_each_bit(masks[g].data(), words, [&](int i) { wts[i] = 1; });
  WeightedSet out{&Q, std::move(wts)};
  auto got = tight_parameter(out);
  if (!got || *got != x)
    throw Error(Errc::Internal, "disjoint generator union is not x-tight");
  return out;
}

WeightedSet complement(const WeightedSet& T) {
  const HyperbolicQuadric& Q = *T.quadric;
  auto x = tight_parameter(T);
  if (!x) throw Error(Errc::NotTight, "complement needs a tight set");
  std::vector<long long> w(Q.size());
  for (int i = 0; i < Q.size(); ++i) w[i] = 1 - T.w[i];
  WeightedSet out{&Q, std::move(w)};
  auto xc = tight_parameter(out);
  long long want = ipow(Q.field().q, Q.rank() - 1) + 1 - *x;
  if (!xc || *xc != want)
    throw Error(Errc::Internal, "complement parameter mismatch");
  return out;
}

SearchResult exhaustive_search(const HyperbolicQuadric& Q, long long x, double budget_seconds) {
  long long q = Q.field().q;
  int r = Q.rank();
  int N = Q.size();
  SearchResult res;
  if (x < 0 || x > ipow(q, r - 1) + 1) return res;  // parameters outside [0, q^{r-1}+1] have no sets
  long long size_target = x * theta(r - 1, q);
  if (size_target > N) return res;
  long long t_out = x * theta(r - 2, q);
  long long t_in = t_out + ipow(q, r - 1);

  std::vector<signed char> assign(N, -1);  // -1 undecided, 0 out, 1 in
  std::vector<long long> cnt(N, 0), und(N, 0);
  for (int i = 0; i < N; ++i) und[i] = popcount_row(Q.perp_row(i), Q.words());
  long long n_in = 0;

  auto feasible = [&](int j) {
    long long lo = cnt[j], hi = cnt[j] + und[j];
    if (assign[j] == 1) return lo <= t_in && t_in <= hi;
    if (assign[j] == 0) return lo <= t_out && t_out <= hi;
    return (lo <= t_in && t_in <= hi) || (lo <= t_out && t_out <= hi);
  };

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(budget_seconds));

  std::function<void(int)> dfs = [&](int idx) {
    if (!res.exhausted) return;
    if ((++res.nodes & 2047) == 0 && std::chrono::steady_clock::now() > deadline) {
      res.exhausted = false;
      return;
    }
    if (idx == N) {
      if (n_in != size_target) return;
      std::vector<int> sup;
      for (int i = 0; i < N; ++i)
        if (assign[i] == 1) sup.push_back(i);
      WeightedSet cand = weighted_from_indices(Q, sup);
      auto got = tight_parameter(cand);
      if (!got || *got != x) throw Error(Errc::Internal, "search leaf fails verification");
      res.sets.push_back(std::move(sup));
      return;
    }
    if (n_in > size_target || n_in + (N - idx) < size_target) return;
    for (int val = 1; val >= 0; --val) {  // "in" first: ascending lex supports
      assign[idx] = (signed char)val;
      n_in += val;
      bool ok = true;
      for_each_bit(Q.perp_row(idx), Q.words(), [&](int j) {
        cnt[j] += val;
        --und[j];
      });
      for_each_bit(Q.perp_row(idx), Q.words(), [&](int j) {
        if (ok && !feasible(j)) ok = false;
      });
      if (ok) dfs(idx + 1);
      for_each_bit(Q.perp_row(idx), Q.words(), [&](int j) {
        cnt[j] -= val;
        ++und[j];
      });
      n_in -= val;
      assign[idx] = -1;
      if (!res.exhausted) return;
    }
  };
  dfs(0);
  return res;
}

std::vector<CorpusEntry> standard_corpus(const HyperbolicQuadric& Q,
                                         const std::vector<Subspace>& gens) {
  long long q = Q.field().q;
  int r = Q.rank();
  long long x_full = ipow(q, r - 1) + 1;
  std::vector<CorpusEntry> out;
  auto push = [&](const std::string& name, WeightedSet set, long long x) {
    for (const auto& e : out)
      if (e.set.w == set.w) return;  // drop duplicates (self-complements etc.)
    out.push_back(CorpusEntry{name, std::move(set), x});
  };

  push("empty", weighted_from_indices(Q, {}), 0);
  if (!gens.empty()) {
    std::vector<int> g0;
    for (const auto& pt : subspace_points(gens[0], Q.field())) g0.push_back(Q.index_of(pt));
    push("one_generator", weighted_from_indices(Q, g0), 1);
  }
  for (long long k = 2; k <= x_full; ++k) {
    auto u = build_disjoint_generators(Q, k, gens);
    if (!u) break;
    push("disjoint_generators_" + std::to_string(k), std::move(*u), k);
  }
  std::vector<long long> ones(Q.size(), 1);
  push("full", weighted_from_weights(Q, std::move(ones)), x_full);

  size_t base = out.size();
  for (size_t i = 0; i < base; ++i) {
    if (out[i].x == 0) continue;  // complement of empty is full, already present
    push("complement_of_" + out[i].name, complement(out[i].set), x_full - out[i].x);
  }
  return out;
}

}  // namespace qplus
