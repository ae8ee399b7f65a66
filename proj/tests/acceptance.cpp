// Acceptance gate: every top-level requirement, one [PASS]/[FAIL] line each.
// Each criterion pins its exact expected values and wall-clock limit in code;
// the binary exits nonzero if any line fails.
#include "qplus/io.hpp"
#include "qplus/sieve.hpp"
#include "qplus/spectra.hpp"
#include "qplus/tight.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <sys/wait.h>

using namespace qplus;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: construction of the full small-field range ----

void criterion_builds(Check& c) {
  struct Row { int r; long long q, size; };
  for (auto [r, q, size] : {Row{2, 2, 9}, Row{2, 3, 16}, Row{2, 4, 25}, Row{2, 5, 36},
                            Row{3, 2, 35}, Row{3, 3, 130}, Row{3, 4, 357}, Row{4, 2, 135},
                            Row{4, 3, 1120}, Row{5, 2, 527}}) {
    HyperbolicQuadric Q = build_quadric(r, make_field(q));
    c.expect((long long)Q.size() == size,
             "rank " + std::to_string(r) + " q " + std::to_string(q) + ": size " +
                 std::to_string(Q.size()) + " != " + std::to_string(size));
    c.expect(Q.size() == (int)((ipow(q, r - 1) + 1) * theta(r - 1, q)),
             "closed form mismatch at rank " + std::to_string(r) + " q " + std::to_string(q));
  }
}

// ---- criterion 2: exhaustive incidence counts ----

void criterion_counts(Check& c) {
  for (auto [r, q] : {std::pair<int, long long>{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}}) {
    HyperbolicQuadric Q = build_quadric(r, make_field(q));
    CountsReport rep = verify_counts(Q, 2);
    c.expect(rep.ok, "counts fail at rank " + std::to_string(r) + " q " + std::to_string(q) +
                         ": " + rep.first_fail);
    long long n = Q.size();
    CountTable t = count_table(r, q);
    c.expect(rep.pairs_collinear == n * t.sigma0 / 2 &&
                 rep.pairs_collinear + rep.pairs_noncollinear == n * (n - 1) / 2,
             "pair totals wrong at rank " + std::to_string(r) + " q " + std::to_string(q));
    for (int p0 = 0; p0 < Q.size(); ++p0) {
      LemmaLmReport lm = verify_lemma_lm(Q, p0);
      if (!lm.ok) {
        c.fail("perp triple count fails at rank " + std::to_string(r) + " q " +
               std::to_string(q) + " P0 " + std::to_string(p0) + ": " + lm.first_fail);
        return;
      }
    }
  }
}

// ---- criteria 3 and 4 share the corpus fixtures ----

struct Fixture {
  int r;
  long long q;
  FieldSpec f;
  HyperbolicQuadric Q;
  std::vector<Subspace> gens;
  std::vector<CorpusEntry> corpus;
  Fixture(int r_, long long q_)
      : r(r_), q(q_), f(make_field(q_)), Q(build_quadric(r_, f)), gens(generators(Q)),
        corpus(standard_corpus(Q, gens)) {}
  std::string tag() const { return "rank " + std::to_string(r) + " q " + std::to_string(q); }
};

// A deque so fixtures never move: corpus entries point back at their quadric.
std::deque<Fixture>& fixtures() {
  static std::deque<Fixture> fx = [] {
    std::deque<Fixture> v;
    for (auto [r, q] : {std::pair<int, long long>{2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 2}, {3, 3}})
      v.emplace_back(r, q);
    return v;
  }();
  return fx;
}

void criterion_corpus(Check& c) {
  // Expected parameter sets, complements included.
  std::map<std::pair<int, long long>, std::set<long long>> want_x = {
      {{2, 2}, {0, 1, 2, 3}},          {{2, 3}, {0, 1, 2, 3, 4}},
      {{2, 4}, {0, 1, 2, 3, 4, 5}},    {{2, 5}, {0, 1, 2, 3, 4, 5, 6}},
      {{3, 2}, {0, 1, 2, 3, 4, 5}},    {{3, 3}, {0, 1, 2, 8, 9, 10}}};
  for (Fixture& fx : fixtures()) {
    std::set<long long> xs;
    for (const auto& e : fx.corpus) {
      xs.insert(e.x);
      auto x = tight_parameter(e.set);
      c.expect(x.has_value() && *x == e.x,
               fx.tag() + " " + e.name + ": tight parameter mismatch");
      c.expect(e.set.total() == e.x * theta(fx.r - 1, fx.q),
               fx.tag() + " " + e.name + ": size != x * theta");
      if (e.x > 0)
        c.expect(tightness_bound(e.set).equality,
                 fx.tag() + " " + e.name + ": intersection bound not met with equality");
      PairPropertyReport pp = property_star_star(e.set, e.x);
      c.expect(pp.ok, fx.tag() + " " + e.name + ": pair identity fails: " + pp.first_fail);

      // Line moments at every point off the set.
      for (int p0 = 0; p0 < fx.Q.size(); ++p0) {
        if (e.set.w[p0] != 0) continue;
        PencilReport pr = line_pencil_check(e.set, p0);
        if (!pr.ok) {
          c.fail(fx.tag() + " " + e.name + " P0 " + std::to_string(p0) +
                 ": pencil moments fail: " + pr.first_fail);
          break;
        }
      }
      // Square identity at every point.
      for (int p0 = 0; p0 < fx.Q.size(); ++p0)
        if (!sum_squares_identity(e.set, p0)) {
          c.fail(fx.tag() + " " + e.name + " P0 " + std::to_string(p0) +
                 ": square identity fails");
          break;
        }
      if (!c.ok) return;
    }
    c.expect(xs == want_x[{fx.r, fx.q}], fx.tag() + ": unexpected corpus parameter set");

    // Subspace intersection identity: every ambient subspace of dimension
    // <= r-1 when that family is small, a 10^4 seeded sample for the largest.
    std::vector<Subspace> subs;
    if (fx.r == 3 && fx.q == 3) {
      std::mt19937_64 rng(987654321);
      std::uniform_int_distribution<int> d(0, 2);
      while (subs.size() < 10000) {
        std::vector<ProjectivePoint> pts;
        for (int v = 0; v < 3; ++v) {
          std::vector<Fel> coords(6);
          do {
            for (auto& x : coords) x = d(rng);
          } while (std::all_of(coords.begin(), coords.end(), [](Fel x) { return x == 0; }));
          pts.push_back(ProjectivePoint{coords});
        }
        subs.push_back(span(pts, fx.f));
      }
    } else {
      subs = all_subspaces(2 * fx.r, fx.f, fx.r - 1);
    }
    for (const auto& e : fx.corpus)
      for (const auto& S : subs)
        if (!check_subspace_identity(e.set, S)) {
          c.fail(fx.tag() + " " + e.name + ": subspace identity fails at dimension " +
                 std::to_string(S.pdim()));
          return;
        }
  }
}

void criterion_congruences(Check& c) {
  for (Fixture& fx : fixtures()) {
    for (const auto& e : fx.corpus) {
      CongruenceAudit a = congruence_audit(e.set, fx.gens);
      c.expect(a.ok, fx.tag() + " " + e.name + ": congruence audit fails: " + a.first_fail);
      c.expect((long long)a.generator_rows.size() == (long long)fx.gens.size(),
               fx.tag() + " " + e.name + ": generator row count");
      // Soundness link to the sieve: every observed residue must be admissible.
      auto adm = admissible_residues(e.x, fx.q, fx.r);
      for (long long w : a.observed_residues)
        c.expect(std::binary_search(adm.begin(), adm.end(), w),
                 fx.tag() + " " + e.name + ": observed residue " + std::to_string(w) +
                     " not admissible for x = " + std::to_string(e.x));
      if (!c.ok) return;
    }
  }
}

// ---- criterion 5: the parameter sieve ----

void criterion_sieve(Check& c) {
  c.expect(excluded_parameters(4, 3, 8) == std::vector<long long>{3, 4, 8},
           "excluded parameters over GF(4), rank 3, scan to 8");
  c.expect(exclusion_fraction(4, 3) == Rational(1, 2), "exclusion fraction over GF(4), rank 3");
  for (long long q : {2LL, 3LL, 4LL, 5LL})
    c.expect(excluded_parameters(q, 4, default_x_max(q, 4)).empty(),
             "rank 4 excludes nothing at q = " + std::to_string(q));
}

// ---- criterion 6: spectral layer ----

void criterion_spectra(Check& c) {
  struct Row { int r; long long q, v, k, lam, mu, m1, m2; };
  for (auto [r, q, v, k, lam, mu, m1, m2] :
       {Row{2, 2, 9, 4, 1, 2, 4, 4}, Row{2, 3, 16, 6, 2, 2, 6, 9},
        Row{3, 2, 35, 18, 9, 9, 14, 20}, Row{3, 3, 130, 48, 20, 16, 39, 90}}) {
    HyperbolicQuadric Q = build_quadric(r, make_field(q));
    SrgReport rep = srg_verify(Q, 2);
    c.expect(rep.ok, "srg check fails at rank " + std::to_string(r) + " q " + std::to_string(q) +
                         ": " + rep.first_fail);
    c.expect(rep.v == v && rep.k == k && rep.lambda == lam && rep.mu == mu && rep.m1 == m1 &&
                 rep.m2 == m2,
             "srg parameters differ at rank " + std::to_string(r) + " q " + std::to_string(q));
    c.expect(rep.sigma0 == q * k_count(r - 2, q) && rep.sigma1 == ipow(q, r - 1) - 1 &&
                 rep.sigma2 == -(ipow(q, r - 2) + 1),
             "eigenvalues differ at rank " + std::to_string(r) + " q " + std::to_string(q));
  }
  for (Fixture& fx : fixtures()) {
    for (const auto& e : fx.corpus)
      c.expect(star_eigenvector_check(e.set) == e.x,
               fx.tag() + " " + e.name + ": adjacency-sum witness mismatch");
    for (int i = 0; i < fx.Q.size(); ++i)
      for (int j = i + 1; j < fx.Q.size(); ++j) {
        if (fx.Q.collinear(i, j)) continue;
        if (!pair_eigenvector_check(fx.Q, i, j)) {
          c.fail(fx.tag() + ": pair eigenvector fails at (" + std::to_string(i) + "," +
                 std::to_string(j) + ")");
          return;
        }
        for (const auto& e : fx.corpus)
          if (!pair_orthogonality_check(e.set, i, j)) {
            c.fail(fx.tag() + " " + e.name + ": orthogonality fails at (" + std::to_string(i) +
                   "," + std::to_string(j) + ")");
            return;
          }
      }
  }
}

// ---- criterion 7: exhaustive search ----

void criterion_search(Check& c) {
  for (auto [r, q, want] : {std::tuple<int, long long, size_t>{2, 2, 6}, {3, 2, 30}}) {
    FieldSpec f = make_field(q);
    HyperbolicQuadric Q = build_quadric(r, f);
    SearchResult res = exhaustive_search(Q, 1);
    c.expect(res.exhausted, "search budget expired at rank " + std::to_string(r));
    std::set<std::vector<int>> got(res.sets.begin(), res.sets.end());
    std::set<std::vector<int>> expect;
    for (const auto& g : generators(Q)) {
      std::vector<int> idx;
      for (const auto& pt : subspace_points(g, f)) idx.push_back(Q.index_of(pt));
      std::sort(idx.begin(), idx.end());
      expect.insert(idx);
    }
    c.expect(expect.size() == want && got == expect,
             "rank " + std::to_string(r) + " q " + std::to_string(q) + ": found " +
                 std::to_string(got.size()) + " sets, want the " + std::to_string(want) +
                 " generators");
  }
}

// ---- criterion 8: deterministic command-line output ----

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(QPLUS_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void criterion_cli(Check& c) {
  // A generator of the rank-3 quadric over GF(2), for the verify command.
  FieldSpec f = make_field(2);
  HyperbolicQuadric Q = build_quadric(3, f);
  auto gens = generators(Q);
  std::vector<int> idx;
  for (const auto& pt : subspace_points(gens[0], f)) idx.push_back(Q.index_of(pt));
  std::sort(idx.begin(), idx.end());
  auto path = std::filesystem::temp_directory_path() / "qplus_acceptance_gen.txt";
  {
    std::ofstream out(path);
    write_point_set(out, Q, idx, false);
  }

  struct Cmd {
    std::string base;
    bool threaded;
  };
  for (const Cmd& cmd : {Cmd{"census --q 2 --rank 3", true},
                         Cmd{"spectra --q 2 --rank 3", true},
                         Cmd{"sieve --q 4 --rank 3 --xmax 8", false},
                         Cmd{"search --q 2 --rank 2 --x 1", true},
                         Cmd{"verify " + path.string(), true}}) {
    std::vector<std::string> variants = {cmd.base, cmd.base};
    if (cmd.threaded) {
      variants.push_back(cmd.base + " --threads 1");
      variants.push_back(cmd.base + " --threads 8");
      variants.push_back(cmd.base + " --threads 8");
    }
    std::string first;
    for (size_t i = 0; i < variants.size(); ++i) {
      CliRun r = run_cli(variants[i]);
      if (r.exit_code != 0) {
        c.fail("'" + variants[i] + "' exited " + std::to_string(r.exit_code));
        return;
      }
      if (i == 0) first = r.out;
      else if (r.out != first) {
        c.fail("'" + variants[i] + "' output differs between runs");
        return;
      }
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int num;
    std::string label;
    void (*fn)(Check&);
    double limit_seconds;  // 0 = untimed
  };
  const Criterion criteria[] = {
      {1, "ten quadrics materialize with the closed-form sizes", criterion_builds, 60.0},
      {2, "incidence counts verified exhaustively on five quadrics", criterion_counts, 120.0},
      {3, "corpus identities: parameters, bound, pairs, pencils, squares, subspaces",
       criterion_corpus, 0.0},
      {4, "congruence audits pass and observed residues are admissible", criterion_congruences,
       0.0},
      {5, "parameter sieve: GF(4) rank-3 exclusions, even ranks exclude nothing",
       criterion_sieve, 1.0},
      {6, "strongly regular parameters and eigenvector identities", criterion_spectra, 0.0},
      {7, "exhaustive search finds exactly the generators at parameter 1", criterion_search,
       300.0},
      {8, "command-line output is byte-identical across runs and thread counts", criterion_cli,
       0.0},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.fn(c);
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    double secs = seconds_since(t0);
    if (cr.limit_seconds > 0 && secs > cr.limit_seconds)
      c.fail("took " + std::to_string(secs) + "s, limit " + std::to_string(cr.limit_seconds) +
             "s");
    std::ostringstream line;
    line << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << cr.num << ": " << cr.label << " ("
         << std::fixed << std::setprecision(2) << secs << "s";
    if (cr.limit_seconds > 0) line << ", limit " << std::setprecision(0) << cr.limit_seconds << "s";
    line << ")";
    std::cout << line.str() << "\n";
    if (!c.ok) {
      std::cout << "       " << c.detail << "\n";
      ++failures;
    }
  }
  std::cout << (8 - failures) << "/8 criteria passed\n";
  return failures == 0 ? 0 : 1;
}
