// Tight-set layer checks. Parameters and bounds are pinned on hand-counted
// generator unions, the rook-graph cases are classified from scratch in the
// test, and the search is compared against an independently constructed
// answer set.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qplus/tight.hpp"

#include <algorithm>
#include <set>

using namespace qplus;

namespace {

std::vector<int> gen_indices(const HyperbolicQuadric& Q, const Subspace& g) {
  std::vector<int> idx;
  for (const auto& pt : subspace_points(g, Q.field())) {
    int i = Q.index_of(pt);
    REQUIRE(i >= 0);
    idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

struct Fixture {
  FieldSpec f;
  HyperbolicQuadric Q;
  std::vector<Subspace> gens;
  Fixture(int r, long long q) : f(make_field(q)), Q(build_quadric(r, f)), gens(generators(Q)) {}
};

}  // namespace

TEST_CASE("weighted set construction") {
  Fixture fx(2, 2);
  WeightedSet s = weighted_from_indices(fx.Q, {2, 0, 5});
  CHECK(s.total() == 3);
  CHECK(s.zero_one());
  CHECK(s.support() == std::vector<int>{0, 2, 5});
  CHECK_THROWS_AS(weighted_from_indices(fx.Q, {0, 0}), Error);
  CHECK_THROWS_AS(weighted_from_indices(fx.Q, {9}), Error);
  CHECK_THROWS_AS(weighted_from_indices(fx.Q, {-1}), Error);
  CHECK_THROWS_AS(weighted_from_weights(fx.Q, {1, 2, 3}), Error);
  WeightedSet w = weighted_from_weights(fx.Q, std::vector<long long>(9, 2));
  CHECK(!w.zero_one());
  CHECK(w.total() == 18);
}

TEST_CASE("intersection bound on hand-counted sets") {
  Fixture fx(3, 2);
  WeightedSet gen = weighted_from_indices(fx.Q, gen_indices(fx.Q, fx.gens[0]));
  // A generator of the rank-3 quadric over GF(2): 7 points, every point of a
  // plane is collinear with all 7, so the exclusive average is exactly 6.
  TightnessReport rep = tightness_bound(gen);
  CHECK(rep.size == 7);
  CHECK(rep.kappa == Rational(6));
  CHECK(rep.bound == Rational(7));
  CHECK(rep.equality);

  // A single point misses the bound: kappa 0 against 1 * 3/7 + 4.
  TightnessReport one = tightness_bound(weighted_from_indices(fx.Q, {0}));
  CHECK(one.size == 1);
  CHECK(one.kappa == Rational(0));
  CHECK(one.bound == Rational(31, 7));
  CHECK(!one.equality);

  // The full point set meets the bound with average sigma0.
  TightnessReport full = tightness_bound(weighted_from_weights(fx.Q, std::vector<long long>(35, 1)));
  CHECK(full.kappa == Rational(18));
  CHECK(full.bound == Rational(19));
  CHECK(full.equality);

  CHECK_THROWS_AS(tightness_bound(weighted_from_indices(fx.Q, {})), Error);
  CHECK_THROWS_AS(tightness_bound(weighted_from_weights(fx.Q, std::vector<long long>(35, 2))), Error);
}

TEST_CASE("point identity witness") {
  Fixture fx(3, 2);
  WeightedSet gen = weighted_from_indices(fx.Q, gen_indices(fx.Q, fx.gens[0]));
  CHECK(property_star(gen) == 1);
  std::vector<long long> ones(35, 1);
  CHECK(property_star(weighted_from_weights(fx.Q, ones)) == 5);
  CHECK(property_star(weighted_from_indices(fx.Q, {})) == 0);
  CHECK(!property_star(weighted_from_indices(fx.Q, {0})).has_value());

  // Integer linearity: 2 * full - 3 * generator has witness 2*5 - 3*1.
  std::vector<long long> mix(35, 2);
  for (int i : gen.support()) mix[i] -= 3;
  CHECK(property_star(weighted_from_weights(fx.Q, mix)) == 7);

  // Rank 1: the identity is vacuous and the witness is the total weight.
  HyperbolicQuadric Q1 = build_quadric(1, make_field(3));
  CHECK(property_star(weighted_from_weights(Q1, {4, -1})) == 3);
}

TEST_CASE("pair identity follows on the corpus") {
  for (auto [r, q] : {std::pair<int, long long>{2, 2}, {2, 3}, {3, 2}}) {
    Fixture fx(r, q);
    CountTable t = count_table(r, q);
    for (const auto& e : standard_corpus(fx.Q, fx.gens)) {
      auto x = property_star(e.set);
      REQUIRE(x == e.x);
      PairPropertyReport rep = property_star_star(e.set, *x);
      CHECK(rep.ok);
      CHECK(rep.pairs_checked == (long long)fx.Q.size() * t.noncollinear / 2);
    }
  }
  // A wrong parameter is rejected.
  Fixture fx(3, 2);
  WeightedSet gen = weighted_from_indices(fx.Q, gen_indices(fx.Q, fx.gens[0]));
  CHECK(!property_star_star(gen, 2).ok);
  HyperbolicQuadric Q1 = build_quadric(1, make_field(2));
  CHECK_THROWS_AS(property_star_star(weighted_from_weights(Q1, {0, 0}), 0), Error);
}

TEST_CASE("quotient weights") {
  for (auto [r, q] : {std::pair<int, long long>{2, 2}, {2, 3}, {3, 2}}) {
    Fixture fx(r, q);
    for (const auto& e : standard_corpus(fx.Q, fx.gens)) {
      for (int p0 : {0, fx.Q.size() - 1}) {
        WeightQuotient wq = quotient_weight(e.set, p0);
        CHECK(wq.x_tilde == (q - 1) * e.set.w[p0] + e.x);
        // Each quotient point carries the weight of its fiber minus the center.
        REQUIRE(wq.weights.size() == wq.quot.fibers.size());
        for (size_t k = 0; k < wq.quot.fibers.size(); ++k) {
          long long want = 0;
          for (const auto& pt : subspace_points(wq.quot.fibers[k], fx.f)) {
            int i = fx.Q.index_of(pt);
            if (i != p0) want += e.set.w[i];
          }
          CHECK(wq.weights[k] == want);
        }
        // The pushed weight satisfies the identity downstairs.
        if (wq.quot.quadric.size() > 0) {
          WeightedSet pushed = weighted_from_weights(wq.quot.quadric, wq.weights);
          CHECK(property_star(pushed) == wq.x_tilde);
        }
      }
    }
  }
  Fixture fx(3, 2);
  CHECK_THROWS_AS(quotient_weight(weighted_from_indices(fx.Q, {0}), 1), Error);
  WeightedSet gen = weighted_from_indices(fx.Q, gen_indices(fx.Q, fx.gens[0]));
  CHECK_THROWS_AS(quotient_weight(gen, 99), Error);
}

TEST_CASE("square identity at every center") {
  for (auto [r, q] : {std::pair<int, long long>{2, 2}, {2, 3}, {3, 2}}) {
    Fixture fx(r, q);
    for (const auto& e : standard_corpus(fx.Q, fx.gens))
      for (int p0 = 0; p0 < fx.Q.size(); ++p0) CHECK(sum_squares_identity(e.set, p0));
  }
  // Also on a weight vector with negative entries.
  Fixture fx(3, 2);
  std::vector<long long> mix(35, 2);
  for (int i : gen_indices(fx.Q, fx.gens[0])) mix[i] -= 3;
  WeightedSet w = weighted_from_weights(fx.Q, mix);
  for (int p0 = 0; p0 < fx.Q.size(); ++p0) CHECK(sum_squares_identity(w, p0));
  CHECK_THROWS_AS(sum_squares_identity(weighted_from_indices(fx.Q, {0}), 0), Error);
}

TEST_CASE("tight parameter on the corpus") {
  for (auto [r, q] : {std::pair<int, long long>{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}}) {
    Fixture fx(r, q);
    auto corpus = standard_corpus(fx.Q, fx.gens);
    CHECK(corpus.size() >= 4);
    std::set<std::string> names;
    std::set<long long> xs;
    for (const auto& e : corpus) {
      CHECK(names.insert(e.name).second);  // names unique
      xs.insert(e.x);
      CHECK(e.set.zero_one());
      auto x = tight_parameter(e.set);
      REQUIRE(x.has_value());
      CHECK(*x == e.x);
      CHECK(e.set.total() == e.x * theta(r - 1, q));
      if (e.x > 0) CHECK(tightness_bound(e.set).equality);
    }
    // Both extremes are present: the empty set and a set with the full parameter.
    CHECK(xs.count(0) == 1);
    CHECK(xs.count(ipow(q, r - 1) + 1) == 1);
    // All weight vectors distinct.
    std::set<std::vector<long long>> vecs;
    for (const auto& e : corpus) CHECK(vecs.insert(e.set.w).second);
  }
  Fixture fx(3, 2);
  CHECK(!tight_parameter(weighted_from_indices(fx.Q, {0})).has_value());
  CHECK(!tight_parameter(weighted_from_indices(fx.Q, {0, 1, 2, 3})).has_value());
  CHECK_THROWS_AS(tight_parameter(weighted_from_weights(fx.Q, std::vector<long long>(35, 2))),
                  Error);
}

TEST_CASE("subspace intersection identity") {
  Fixture fx(2, 2);
  WeightedSet gen = weighted_from_indices(fx.Q, gen_indices(fx.Q, fx.gens[0]));
  // Every ambient subspace of dimension 0 or 1, tight sets of each corpus entry.
  auto subs = all_subspaces(4, fx.f, 1);
  REQUIRE(subs.size() == 50);
  for (const auto& e : standard_corpus(fx.Q, fx.gens)) {
    if (!tight_parameter(e.set)) continue;
    for (const auto& S : subs) CHECK(check_subspace_identity(e.set, S));
  }
  // By hand: S = the generator itself. S-perp meets the set in all 3 points,
  // and q^{r-1-s} |S cap T| + x theta_{r-s-2} = 1 * 3 + 0.
  CHECK(check_subspace_identity(gen, fx.gens[0]));

  CHECK_THROWS_AS(check_subspace_identity(weighted_from_indices(fx.Q, {0}), fx.gens[0]), Error);
  // Dimension above r-1 is out of contract.
  Subspace big = span({ProjectivePoint{{1, 0, 0, 0}}, ProjectivePoint{{0, 1, 0, 0}},
                       ProjectivePoint{{0, 0, 1, 0}}},
                      fx.f);
  CHECK_THROWS_AS(check_subspace_identity(gen, big), Error);
}

TEST_CASE("line pencil moments") {
  Fixture fx(3, 2);
  WeightedSet gen = weighted_from_indices(fx.Q, gen_indices(fx.Q, fx.gens[0]));
  int p0 = -1;
  for (int i = 0; i < fx.Q.size(); ++i)
    if (gen.w[i] == 0) { p0 = i; break; }
  REQUIRE(p0 >= 0);
  PencilReport rep = line_pencil_check(gen, p0);
  CHECK(rep.ok);
  CHECK(rep.x == 1);
  CHECK(rep.m.size() == 9);  // lines through a point, k_{r-2}
  CHECK(rep.sum_m == 3);     // x * theta_1
  CHECK(rep.sum_m2 == 3);    // x * (theta_1 - 1 + x)
  CHECK(rep.e_lhs == 12);    // x q^2 (q + x theta_0)
  CHECK(rep.e_rhs == 12);

  for (auto [r, q] : {std::pair<int, long long>{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
    Fixture fy(r, q);
    for (const auto& e : standard_corpus(fy.Q, fy.gens))
      for (int c = 0; c < fy.Q.size(); ++c) {
        if (e.set.w[c] != 0) continue;
        PencilReport pr = line_pencil_check(e.set, c);
        CHECK(pr.ok);
        CHECK(pr.sum_m == e.x * theta(r - 2, q));
      }
  }
  CHECK_THROWS_AS(line_pencil_check(gen, gen.support()[0]), Error);     // center inside
  CHECK_THROWS_AS(line_pencil_check(weighted_from_indices(fx.Q, {0}), 1), Error);  // not tight
}

TEST_CASE("congruence audit") {
  Fixture fx(3, 2);
  WeightedSet gen = weighted_from_indices(fx.Q, gen_indices(fx.Q, fx.gens[0]));
  CongruenceAudit a = congruence_audit(gen, fx.gens);
  CHECK(a.ok);
  CHECK(a.x == 1);
  CHECK(a.parity_c == 0);
  CHECK(a.generator_rows.size() == 30);
  for (const auto& row : a.generator_rows) CHECK(row.ok);
  // Generators meet a fixed generator in 0, 1, 3, or 7 points; mod q+1 = 3
  // the distinct residues are 0 and 1.
  CHECK(a.observed_residues == std::vector<long long>{0, 1});
  // 28 points off the set, 6 generators through each.
  CHECK(a.pencil_rows == 168);
  CHECK(a.pencil_failures == 0);

  for (auto [r, q] : {std::pair<int, long long>{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
    Fixture fy(r, q);
    for (const auto& e : standard_corpus(fy.Q, fy.gens)) {
      CongruenceAudit au = congruence_audit(e.set, fy.gens);
      CHECK(au.ok);
      CHECK(au.generator_rows.size() == fy.gens.size());
    }
  }
  CHECK_THROWS_AS(congruence_audit(weighted_from_indices(fx.Q, {0}), fx.gens), Error);
}

TEST_CASE("disjoint generator unions") {
  Fixture fx(2, 2);
  auto u1 = build_disjoint_generators(fx.Q, 1, fx.gens);
  REQUIRE(u1.has_value());
  CHECK(u1->support() == gen_indices(fx.Q, fx.gens[0]));
  auto u2 = build_disjoint_generators(fx.Q, 2, fx.gens);
  REQUIRE(u2.has_value());
  CHECK(u2->total() == 6);
  CHECK(tight_parameter(*u2) == 2);
  auto u3 = build_disjoint_generators(fx.Q, 3, fx.gens);
  REQUIRE(u3.has_value());
  CHECK(u3->total() == 9);  // a spread covers the whole quadric
  CHECK(!build_disjoint_generators(fx.Q, 4, fx.gens).has_value());

  Fixture fy(3, 2);
  CHECK(build_disjoint_generators(fy.Q, 2, fy.gens).has_value());
  // 21 points would fit, but no three pairwise disjoint planes exist; the
  // first-fit search proves it by exhaustion.
  CHECK(!build_disjoint_generators(fy.Q, 3, fy.gens).has_value());

  Fixture fz(2, 3);
  CHECK(build_disjoint_generators(fz.Q, 4, fz.gens).has_value());
  CHECK(!build_disjoint_generators(fz.Q, 5, fz.gens).has_value());
}

TEST_CASE("complement flips the parameter") {
  for (auto [r, q] : {std::pair<int, long long>{2, 3}, {3, 2}}) {
    Fixture fx(r, q);
    for (const auto& e : standard_corpus(fx.Q, fx.gens)) {
      WeightedSet c = complement(e.set);
      CHECK(tight_parameter(c) == ipow(q, r - 1) + 1 - e.x);
      WeightedSet cc = complement(c);
      CHECK(cc.w == e.set.w);
    }
  }
  Fixture fx(3, 2);
  CHECK_THROWS_AS(complement(weighted_from_indices(fx.Q, {0})), Error);
}

TEST_CASE("exhaustive search matches the classified answers") {
  Fixture fx(2, 2);
  // Parameter 1: exactly the 6 lines.
  SearchResult r1 = exhaustive_search(fx.Q, 1);
  CHECK(r1.exhausted);
  std::set<std::vector<int>> want1;
  for (const auto& g : fx.gens) want1.insert(gen_indices(fx.Q, g));
  CHECK(std::set<std::vector<int>>(r1.sets.begin(), r1.sets.end()) == want1);
  CHECK(std::is_sorted(r1.sets.begin(), r1.sets.end()));  // lex emission order

  // Parameter 2: exactly the 6 complements of lines.
  SearchResult r2 = exhaustive_search(fx.Q, 2);
  CHECK(r2.exhausted);
  std::set<std::vector<int>> want2;
  for (const auto& g : fx.gens) {
    WeightedSet c = complement(weighted_from_indices(fx.Q, gen_indices(fx.Q, g)));
    want2.insert(c.support());
  }
  CHECK(std::set<std::vector<int>>(r2.sets.begin(), r2.sets.end()) == want2);

  // Parameter 3: only the full set; beyond that, nothing.
  SearchResult r3 = exhaustive_search(fx.Q, 3);
  REQUIRE(r3.sets.size() == 1);
  CHECK((int)r3.sets[0].size() == fx.Q.size());
  CHECK(exhaustive_search(fx.Q, 4).sets.empty());
  CHECK(exhaustive_search(fx.Q, -1).sets.empty());

  // Parameter 2 on the 4x4 case: exactly the 12 unions of two disjoint lines.
  Fixture fy(2, 3);
  std::set<std::vector<int>> want12;
  for (size_t a = 0; a < fy.gens.size(); ++a)
    for (size_t b = a + 1; b < fy.gens.size(); ++b) {
      auto ia = gen_indices(fy.Q, fy.gens[a]), ib = gen_indices(fy.Q, fy.gens[b]);
      std::vector<int> both;
      std::set_intersection(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(both));
      if (!both.empty()) continue;
      std::vector<int> u;
      std::set_union(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(u));
      want12.insert(u);
    }
  REQUIRE(want12.size() == 12);
  SearchResult r12 = exhaustive_search(fy.Q, 2);
  CHECK(r12.exhausted);
  CHECK(std::set<std::vector<int>>(r12.sets.begin(), r12.sets.end()) == want12);
}

TEST_CASE("search budget expiry is reported") {
  Fixture fx(3, 3);
  SearchResult r = exhaustive_search(fx.Q, 2, 0.0);
  CHECK(!r.exhausted);
}
