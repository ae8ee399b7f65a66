#include "qplus/polar.hpp"

#include <algorithm>
#include <cstring>
#include <set>

namespace qplus {

ProjectivePoint normalize_point(std::vector<Fel> coords, const FieldSpec& f) {
  size_t nz = 0;
  while (nz < coords.size() && coords[nz] == 0) ++nz;
  if (nz == coords.size()) throw Error(Errc::BadInput, "zero vector has no projective point");
  if (coords[nz] != 1) {
    Fel s = f.inv(coords[nz]);
    for (auto& c : coords) c = f.mul(c, s);
  }
  return ProjectivePoint{std::move(coords)};
}

Fel form_eval_vec(const std::vector<Fel>& v, const FieldSpec& f) {
  if (v.size() % 2 != 0)
    throw Error(Errc::OddDimension, "form needs an even number of coordinates");
  Fel acc = 0;
  for (size_t i = 0; i + 1 < v.size(); i += 2) acc = f.add(acc, f.mul(v[i], v[i + 1]));
  return acc;
}

Fel bilinear_eval_vec(const std::vector<Fel>& a, const std::vector<Fel>& b, const FieldSpec& f) {
  if (a.size() != b.size())
    throw Error(Errc::DimensionMismatch, "bilinear arguments differ in length");
  if (a.size() % 2 != 0)
    throw Error(Errc::OddDimension, "bilinear form needs an even number of coordinates");
  Fel acc = 0;
  for (size_t i = 0; i + 1 < a.size(); i += 2) {
    acc = f.add(acc, f.mul(a[i], b[i + 1]));
    acc = f.add(acc, f.mul(a[i + 1], b[i]));
  }
  return acc;
}

// Enumerates coordinate tuples in ascending lex order: the position of the
// leading 1 moves from last to first, and the free suffix runs an odometer
// with the last position fastest.
std::vector<ProjectivePoint> projective_points(int n_coords, const FieldSpec& f) {
  std::vector<ProjectivePoint> out;
  std::vector<Fel> c(n_coords);
  for (int fnz = n_coords - 1; fnz >= 0; --fnz) {
    std::fill(c.begin(), c.end(), 0);
    c[fnz] = 1;
    for (;;) {
      out.push_back(ProjectivePoint{c});
      int i = n_coords - 1;
      while (i > fnz && c[i] == f.q - 1) c[i--] = 0;
      if (i == fnz) break;
      ++c[i];
    }
  }
  return out;
}

// ---- linear algebra over GF(q) ----

std::vector<std::vector<Fel>> rref(std::vector<std::vector<Fel>> rows, const FieldSpec& f) {
  if (rows.empty()) return rows;
  size_t n = rows[0].size();
  size_t pr = 0;
  for (size_t col = 0; col < n && pr < rows.size(); ++col) {
    size_t k = pr;
    while (k < rows.size() && rows[k][col] == 0) ++k;
    if (k == rows.size()) continue;
    std::swap(rows[pr], rows[k]);
    Fel s = f.inv(rows[pr][col]);
    for (auto& x : rows[pr]) x = f.mul(x, s);
    for (size_t j = 0; j < rows.size(); ++j) {
      if (j == pr || rows[j][col] == 0) continue;
      Fel m = rows[j][col];
      for (size_t t = 0; t < n; ++t) rows[j][t] = f.sub(rows[j][t], f.mul(m, rows[pr][t]));
    }
    ++pr;
  }
  rows.resize(pr);
  return rows;
}

std::optional<std::vector<Fel>> solve_in_span(const std::vector<std::vector<Fel>>& basis,
                                              const std::vector<Fel>& target, const FieldSpec& f) {
  size_t k = basis.size(), n = target.size();
  // One row per coordinate: sum c_i basis[i][row] = target[row].
  std::vector<std::vector<Fel>> aug(n, std::vector<Fel>(k + 1));
  for (size_t row = 0; row < n; ++row) {
    for (size_t i = 0; i < k; ++i) aug[row][i] = basis[i][row];
    aug[row][k] = target[row];
  }
  aug = rref(std::move(aug), f);
  std::vector<Fel> c(k, 0);
  for (const auto& row : aug) {
    size_t pivot = 0;
    while (pivot <= k && row[pivot] == 0) ++pivot;
    if (pivot == k) return std::nullopt;  // inconsistent: pivot in the augmented column
    if (pivot > k) continue;
    c[pivot] = row[k];
    // Free variables stay 0; any nonzero coefficient right of the pivot in a
    // free column would make this c wrong, so eliminate via the RREF shape:
    // reduced form guarantees such entries multiply free variables only.
  }
  // Verify (cheap, and makes the free-variable convention airtight).
  for (size_t row = 0; row < n; ++row) {
    Fel acc = 0;
    for (size_t i = 0; i < k; ++i) acc = f.add(acc, f.mul(c[i], basis[i][row]));
    if (acc != target[row]) return std::nullopt;
  }
  return c;
}

std::vector<std::vector<Fel>> nullspace(const std::vector<std::vector<Fel>>& rows, int n,
                                        const FieldSpec& f) {
  auto r = rref(rows, f);
  std::vector<int> pivot_col(r.size());
  std::vector<bool> is_pivot(n, false);
  for (size_t i = 0; i < r.size(); ++i) {
    int c = 0;
    while (r[i][c] == 0) ++c;
    pivot_col[i] = c;
    is_pivot[c] = true;
  }
  std::vector<std::vector<Fel>> basis;
  for (int fc = 0; fc < n; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Fel> x(n, 0);
    x[fc] = 1;
    for (size_t i = 0; i < r.size(); ++i) x[pivot_col[i]] = f.neg(r[i][fc]);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::vector<Fel> vec_add(const std::vector<Fel>& a, const std::vector<Fel>& b, const FieldSpec& f) {
  std::vector<Fel> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
  return r;
}

std::vector<Fel> vec_scale(const std::vector<Fel>& a, Fel s, const FieldSpec& f) {
  std::vector<Fel> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], s);
  return r;
}

// ---- subspaces ----

Subspace span(const std::vector<ProjectivePoint>& pts, const FieldSpec& f) {
  if (pts.empty()) throw Error(Errc::EmptyInput, "span of no points");
  std::vector<std::vector<Fel>> rows;
  rows.reserve(pts.size());
  for (const auto& p : pts) rows.push_back(p.coords);
  rows = rref(std::move(rows), f);
  Subspace s;
  for (auto& row : rows) s.basis.push_back(ProjectivePoint{std::move(row)});
  return s;
}

std::vector<ProjectivePoint> subspace_points(const Subspace& s, const FieldSpec& f) {
  int m = (int)s.basis.size();
  std::vector<ProjectivePoint> out;
  // One combo per projective point: leading coefficient fixed to 1.
  for (int lead = 0; lead < m; ++lead) {
    int tail = m - lead - 1;
    std::vector<Fel> lam(tail, 0);
    for (;;) {
      std::vector<Fel> v = s.basis[lead].coords;
      for (int i = 0; i < tail; ++i)
        if (lam[i] != 0) v = vec_add(v, vec_scale(s.basis[lead + 1 + i].coords, lam[i], f), f);
      out.push_back(normalize_point(std::move(v), f));
      int i = tail - 1;
      while (i >= 0 && lam[i] == f.q - 1) lam[i--] = 0;
      if (i < 0) break;
      ++lam[i];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool subspace_contains(const Subspace& s, const ProjectivePoint& pt, const FieldSpec& f) {
  std::vector<std::vector<Fel>> rows;
  for (const auto& b : s.basis) rows.push_back(b.coords);
  return solve_in_span(rows, pt.coords, f).has_value();
}

// Canonical-chain DFS over all subspaces: a chain extends by point index k
// only when k is the smallest new point of the extended subspace, so each
// subspace is visited exactly once.
std::vector<Subspace> all_subspaces(int n_coords, const FieldSpec& f, int max_pdim,
                                    long long cap) {
  std::vector<ProjectivePoint> amb = projective_points(n_coords, f);
  auto index_of = [&](const ProjectivePoint& p) {
    auto it = std::lower_bound(amb.begin(), amb.end(), p);
    return (int)(it - amb.begin());
  };
  std::vector<Subspace> out;
  std::vector<int> chain;

  struct Frame { std::vector<int> span_pts; };
  std::vector<Frame> stack;

  auto record = [&](const std::vector<int>& ch) {
    std::vector<ProjectivePoint> pts;
    for (int i : ch) pts.push_back(amb[i]);
    out.push_back(span(pts, f));
    if ((long long)out.size() > cap)
      throw Error(Errc::ResourceLimit, "subspace cap " + std::to_string(cap) + " exceeded");
  };

  // Recursive lambda via explicit function object.
  std::function<void(const std::vector<int>&, int)> dfs =
      [&](const std::vector<int>& span_pts, int last) {
        if ((int)chain.size() == max_pdim + 1) return;
        for (int k = last + 1; k < (int)amb.size(); ++k) {
          if (std::binary_search(span_pts.begin(), span_pts.end(), k)) continue;
          // New points of <S, k>: k itself and p + lam*k for p in S, lam != 0.
          std::vector<int> fresh{k};
          bool canonical = true;
          for (int pi : span_pts) {
            for (Fel lam = 1; lam < f.q && canonical; ++lam) {
              ProjectivePoint np = normalize_point(
                  vec_add(amb[pi].coords, vec_scale(amb[k].coords, lam, f), f), f);
              int ni = index_of(np);
              if (ni < k) canonical = false;
              fresh.push_back(ni);
            }
            if (!canonical) break;
          }
          if (!canonical) continue;
          chain.push_back(k);
          record(chain);
          std::vector<int> nxt(span_pts);
          nxt.insert(nxt.end(), fresh.begin(), fresh.end());
          std::sort(nxt.begin(), nxt.end());
          dfs(nxt, k);
          chain.pop_back();
        }
      };
  dfs({}, -1);
  return out;
}

// ---- the quadric ----

int HyperbolicQuadric::index_of(const ProjectivePoint& pt) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), pt);
  if (it == points_.end() || !(*it == pt)) return -1;
  return (int)(it - points_.begin());
}

HyperbolicQuadric build_quadric(int rank, const FieldSpec& f, long long max_points, int threads) {
  if (rank < 1) throw Error(Errc::BadIndex, "rank must be >= 1");
  long long q = f.q;
  // Expected point count (q^{r-1} + 1) * (q^r - 1)/(q - 1).
  int128 theta = 0, qp = 1;
  for (int i = 0; i < rank; ++i) theta = theta * q + 1;
  for (int i = 0; i < rank - 1; ++i) qp *= q;
  int128 expect = (qp + 1) * theta;
  if (expect > max_points)
    throw Error(Errc::ResourceLimit,
                "point cap " + std::to_string(max_points) + " exceeded: quadric has " +
                    std::to_string((long long)expect) + " points");

  HyperbolicQuadric Q;
  Q.rank_ = rank;
  Q.field_ = f;
  int n = 2 * rank;
  std::vector<Fel> c(n);
  for (int fnz = n - 1; fnz >= 0; --fnz) {
    std::fill(c.begin(), c.end(), 0);
    c[fnz] = 1;
    for (;;) {
      if (form_eval_vec(c, f) == 0) Q.points_.push_back(ProjectivePoint{c});
      int i = n - 1;
      while (i > fnz && c[i] == f.q - 1) c[i--] = 0;
      if (i == fnz) break;
      ++c[i];
    }
  }
  if ((int128)Q.points_.size() != expect)
    throw Error(Errc::Internal, "point count does not match the closed form");

  int N = (int)Q.points_.size();
  // 8 bytes per word; guard the matrix allocation explicitly.
  long long words = (N + 63) / 64;
  if (words * (long long)N * 8 > (2LL << 30))
    throw Error(Errc::ResourceLimit, "collinearity matrix for " + std::to_string(N) +
                                         " points exceeds the 2 GiB memory cap");
  Q.coll_ = BitMatrix(N, N);

  // b(x, y) = sum over pairs of x_{2i} y_{2i+1} + x_{2i+1} y_{2i}: precompute
  // pair-swapped coordinates so each evaluation is a plain dot product.
  std::vector<Fel> flat((size_t)N * n), swapped((size_t)N * n);
  for (int i = 0; i < N; ++i)
    for (int t = 0; t < n; ++t) {
      flat[(size_t)i * n + t] = Q.points_[i].coords[t];
      swapped[(size_t)i * n + t] = Q.points_[i].coords[t ^ 1];
    }

  const Fel* mul = f.mul_table();
  const Fel* add = f.add_table();
  parallel_chunks(N, threads, 64, [&](int, long long lo, long long hi) {
    for (long long i = lo; i < hi; ++i) {
      const Fel* si = &swapped[(size_t)i * n];
      std::uint64_t* row = Q.coll_.row((int)i);
      for (int j = 0; j < N; ++j) {
        const Fel* pj = &flat[(size_t)j * n];
        Fel acc = 0;
        if (mul) {
          for (int t = 0; t < n; ++t) acc = add[(size_t)acc * q + mul[(size_t)si[t] * q + pj[t]]];
        } else {
          for (int t = 0; t < n; ++t) acc = f.add(acc, f.mul(si[t], pj[t]));
        }
        if (acc == 0) row[j / 64] |= 1ULL << (j % 64);
      }
    }
  });
  return Q;
}

std::vector<int> perp_of_set(const HyperbolicQuadric& Q, const std::vector<ProjectivePoint>& pts) {
  if (pts.empty()) throw Error(Errc::EmptyInput, "perp of an empty point set");
  const FieldSpec& f = Q.field();
  std::vector<int> out;
  for (int j = 0; j < Q.size(); ++j) {
    bool all = true;
    for (const auto& p : pts)
      if (bilinear_eval(p, Q.point(j), f) != 0) { all = false; break; }
    if (all) out.push_back(j);
  }
  return out;
}

std::vector<int> perp_of_subspace(const HyperbolicQuadric& Q, const Subspace& s) {
  return perp_of_set(Q, s.basis);
}

std::vector<std::vector<int>> line_pencil(const HyperbolicQuadric& Q, int p) {
  if (p < 0 || p >= Q.size()) throw Error(Errc::PointNotOnQuadric, "bad point index");
  const FieldSpec& f = Q.field();
  std::set<std::vector<int>> lines;
  for_each_bit(Q.perp_row(p), Q.words(), [&](int j) {
    if (j == p) return;
    // Points of the line <P_p, P_j>: P_j and P_p + lam P_j.
    std::vector<int> idx{p};
    idx.push_back(j);
    for (Fel lam = 1; lam < f.q; ++lam) {
      ProjectivePoint np = normalize_point(
          vec_add(Q.point(p).coords, vec_scale(Q.point(j).coords, lam, f), f), f);
      int ni = Q.index_of(np);
      if (ni < 0) throw Error(Errc::Internal, "singular line leaves the quadric");
      idx.push_back(ni);
    }
    std::sort(idx.begin(), idx.end());
    lines.insert(std::move(idx));
  });
  return std::vector<std::vector<int>>(lines.begin(), lines.end());
}

std::vector<Subspace> lines_through(const HyperbolicQuadric& Q, int p) {
  std::vector<Subspace> out;
  for (const auto& line : line_pencil(Q, p))
    out.push_back(span({Q.point(line[0]), Q.point(line[1])}, Q.field()));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Subspace> lines_through(const HyperbolicQuadric& Q, const ProjectivePoint& pt) {
  int i = Q.index_of(pt);
  if (i < 0) throw Error(Errc::PointNotOnQuadric, "point is not on the quadric");
  return lines_through(Q, i);
}

namespace {

// Shared canonical-chain DFS over totally singular subspaces. Calls visit
// with the chain at every depth; candidates stay inside the running perp.
void ts_dfs(const HyperbolicQuadric& Q, std::vector<int>& chain,
            std::vector<int>& span_pts, std::vector<std::uint64_t>& perp, int max_depth,
            const std::function<void(const std::vector<int>&)>& visit) {
  if ((int)chain.size() == max_depth) return;
  const FieldSpec& f = Q.field();
  int words = Q.words();
  int last = chain.empty() ? -1 : chain.back();
  std::vector<int> candidates;
  if (chain.empty()) {
    candidates.resize(Q.size());
    for (int i = 0; i < Q.size(); ++i) candidates[i] = i;
  } else {
    for_each_bit(perp.data(), words, [&](int k) {
      if (k > last && !std::binary_search(span_pts.begin(), span_pts.end(), k)) candidates.push_back(k);
    });
  }
  for (int k : candidates) {
    // New points of <S, k> are k and p + lam*k; the chain is canonical only
    // if none of them precedes k.
    std::vector<int> fresh{k};
    bool canonical = true;
    for (int pi : span_pts) {
      for (Fel lam = 1; lam < f.q && canonical; ++lam) {
        ProjectivePoint np = normalize_point(
            vec_add(Q.point(pi).coords, vec_scale(Q.point(k).coords, lam, f), f), f);
        int ni = Q.index_of(np);
        if (ni < 0) throw Error(Errc::Internal, "totally singular span leaves the quadric");
        if (ni < k) canonical = false;
        fresh.push_back(ni);
      }
      if (!canonical) break;
    }
    if (!canonical) continue;

    chain.push_back(k);
    std::vector<int> saved_span = span_pts;
    std::vector<std::uint64_t> saved_perp = perp;
    span_pts.insert(span_pts.end(), fresh.begin(), fresh.end());
    std::sort(span_pts.begin(), span_pts.end());
    if (chain.size() == 1) {
      perp.assign(Q.perp_row(k), Q.perp_row(k) + words);
    } else {
      const std::uint64_t* row = Q.perp_row(k);
      for (int w = 0; w < words; ++w) perp[w] &= row[w];
    }
    visit(chain);
    ts_dfs(Q, chain, span_pts, perp, max_depth, visit);
    chain.pop_back();
    span_pts = std::move(saved_span);
    perp = std::move(saved_perp);
  }
}

}  // namespace

std::vector<Subspace> generators(const HyperbolicQuadric& Q, long long max_generators) {
  int r = Q.rank();
  std::vector<Subspace> out;
  std::vector<int> chain, span_pts;
  std::vector<std::uint64_t> perp(Q.words(), 0);
  ts_dfs(Q, chain, span_pts, perp, r, [&](const std::vector<int>& ch) {
    if ((int)ch.size() != r) return;
    std::vector<ProjectivePoint> pts;
    for (int i : ch) pts.push_back(Q.point(i));
    out.push_back(span(pts, Q.field()));
    if ((long long)out.size() > max_generators)
      throw Error(Errc::ResourceLimit,
                  "generator cap " + std::to_string(max_generators) + " exceeded");
  });
  std::sort(out.begin(), out.end());
  return out;
}

Quotient quotient(const HyperbolicQuadric& Q, const Subspace& s) {
  const FieldSpec& f = Q.field();
  int r = Q.rank(), n = 2 * r;
  int d = (int)s.basis.size();
  if (d == 0) throw Error(Errc::EmptyInput, "quotient by an empty subspace");
  for (int i = 0; i < d; ++i) {
    if (form_eval(s.basis[i], f) != 0)
      throw Error(Errc::NotTotallySingular, "base subspace has a nonsingular point");
    for (int j = i + 1; j < d; ++j)
      if (bilinear_eval(s.basis[i], s.basis[j], f) != 0)
        throw Error(Errc::NotTotallySingular, "base subspace is not totally singular");
  }
  if (d > r) throw Error(Errc::NotTotallySingular, "dimension exceeds the rank");

  std::vector<std::vector<Fel>> sbasis;
  for (const auto& b : s.basis) sbasis.push_back(b.coords);

  // Dual basis: d_i singular, b(s_j, d_i) = delta_{ji}, b(d_k, d_i) = 0 for
  // k < i. Lex-first ambient vector search keeps the construction canonical.
  std::vector<std::vector<Fel>> dual;
  for (int i = 0; i < d; ++i) {
    std::vector<Fel> v(n, 0);
    bool found = false;
    for (;;) {
      int t = n - 1;
      while (t >= 0 && v[t] == f.q - 1) v[t--] = 0;
      if (t < 0) break;
      ++v[t];
      bool ok = true;
      for (int j = 0; j < d && ok; ++j)
        if (bilinear_eval_vec(sbasis[j], v, f) != (j == i ? 1 : 0)) ok = false;
      for (int k = 0; k < (int)dual.size() && ok; ++k)
        if (bilinear_eval_vec(dual[k], v, f) != 0) ok = false;
      if (ok) { found = true; break; }
    }
    if (!found) throw Error(Errc::Internal, "dual basis vector not found");
    // Make it singular without disturbing the pairing conditions.
    Fel fv = form_eval_vec(v, f);
    if (fv != 0) v = vec_add(v, vec_scale(sbasis[i], f.neg(fv), f), f);
    dual.push_back(std::move(v));
  }

  // W = everything b-orthogonal to S and D; dim 2(r - d).
  std::vector<std::vector<Fel>> constraints;
  auto swapped = [&](const std::vector<Fel>& x) {
    std::vector<Fel> y(n);
    for (int t = 0; t < n; ++t) y[t] = x[t ^ 1];
    return y;
  };
  for (const auto& b : sbasis) constraints.push_back(swapped(b));
  for (const auto& b : dual) constraints.push_back(swapped(b));
  std::vector<std::vector<Fel>> W = nullspace(constraints, n, f);
  int rq = r - d;
  if ((int)W.size() != 2 * rq) throw Error(Errc::Internal, "wrong perp complement dimension");

  // Peel hyperbolic pairs off W; the resulting ordered basis carries the
  // standard form y0*y1 + y2*y3 + ...
  std::vector<std::vector<Fel>> hyper;
  std::vector<std::vector<Fel>> B = std::move(W);
  auto combo_vec = [&](const std::vector<std::vector<Fel>>& basis, const std::vector<Fel>& c) {
    std::vector<Fel> v(n, 0);
    for (size_t i = 0; i < basis.size(); ++i)
      if (c[i] != 0) v = vec_add(v, vec_scale(basis[i], c[i], f), f);
    return v;
  };
  while (!B.empty()) {
    int m = (int)B.size();
    // First nonzero singular combination, combos in lex order (index 0 slowest).
    std::vector<Fel> c(m, 0);
    std::vector<Fel> w1;
    for (;;) {
      int t = m - 1;
      while (t >= 0 && c[t] == f.q - 1) c[t--] = 0;
      if (t < 0) throw Error(Errc::Internal, "no singular vector in the complement");
      ++c[t];
      std::vector<Fel> v = combo_vec(B, c);
      if (form_eval_vec(v, f) == 0) { w1 = std::move(v); break; }
    }
    // First combination not b-orthogonal to w1, scaled to pairing 1, then
    // corrected to be singular.
    std::fill(c.begin(), c.end(), 0);
    std::vector<Fel> w2;
    for (;;) {
      int t = m - 1;
      while (t >= 0 && c[t] == f.q - 1) c[t--] = 0;
      if (t < 0) throw Error(Errc::Internal, "degenerate pairing on the complement");
      ++c[t];
      std::vector<Fel> v = combo_vec(B, c);
      Fel bv = bilinear_eval_vec(w1, v, f);
      if (bv != 0) { w2 = vec_scale(v, f.inv(bv), f); break; }
    }
    Fel f2 = form_eval_vec(w2, f);
    if (f2 != 0) w2 = vec_add(w2, vec_scale(w1, f.neg(f2), f), f);
    hyper.push_back(w1);
    hyper.push_back(w2);
    if (m == 2) break;
    // Next B: combinations orthogonal to both w1 and w2.
    std::vector<std::vector<Fel>> pairing(2, std::vector<Fel>(m));
    for (int i = 0; i < m; ++i) {
      pairing[0][i] = bilinear_eval_vec(w1, B[i], f);
      pairing[1][i] = bilinear_eval_vec(w2, B[i], f);
    }
    std::vector<std::vector<Fel>> combos = nullspace(pairing, m, f);
    if ((int)combos.size() != m - 2) throw Error(Errc::Internal, "hyperbolic peel lost rank");
    std::vector<std::vector<Fel>> nb;
    for (const auto& cc : combos) nb.push_back(combo_vec(B, cc));
    B = std::move(nb);
  }

  Quotient out;
  out.base = span(s.basis, f);
  if (rq >= 1) out.quadric = build_quadric(rq, f);

  // Fibers: model point y -> the totally singular subspace <S, sum y_i w_i>.
  for (int m = 0; m < out.quadric.size(); ++m) {
    const auto& y = out.quadric.point(m).coords;
    std::vector<Fel> u(n, 0);
    for (int i = 0; i < 2 * rq; ++i)
      if (y[i] != 0) u = vec_add(u, vec_scale(hyper[i], y[i], f), f);
    std::vector<ProjectivePoint> pts = s.basis;
    pts.push_back(normalize_point(std::move(u), f));
    Subspace fiber = span(pts, f);
    if (fiber.pdim() != d) throw Error(Errc::Internal, "fiber has wrong dimension");
    out.fibers.push_back(std::move(fiber));
  }

  // Parent point -> model point. S-perp splits as S + W; the W-part in the
  // hyperbolic basis is the model point.
  std::vector<std::vector<Fel>> combined = sbasis;
  for (const auto& h : hyper) combined.push_back(h);
  out.point_to_quotient.assign(Q.size(), -1);
  for (int i = 0; i < Q.size(); ++i) {
    bool inperp = true;
    for (int j = 0; j < d && inperp; ++j)
      if (bilinear_eval_vec(sbasis[j], Q.point(i).coords, f) != 0) inperp = false;
    if (!inperp) continue;
    auto coeff = solve_in_span(combined, Q.point(i).coords, f);
    if (!coeff) throw Error(Errc::Internal, "perp point outside S + W");
    std::vector<Fel> y(coeff->begin() + d, coeff->end());
    bool zero = true;
    for (Fel v : y) if (v != 0) { zero = false; break; }
    if (zero) continue;  // the point lies in S itself
    int m = out.quadric.index_of(normalize_point(std::move(y), f));
    if (m < 0) throw Error(Errc::Internal, "quotient image misses the model");
    out.point_to_quotient[i] = m;
  }
  return out;
}

}  // namespace qplus
