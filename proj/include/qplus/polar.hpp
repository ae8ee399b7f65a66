// Hyperbolic quadrics in PG(2r-1, q): point enumeration, collinearity,
// totally singular subspaces, and quotient geometries. The quadratic form is
// x0*x1 + x2*x3 + ... + x_{2r-2}*x_{2r-1} throughout; a point lies in its own
// perp, and all perp sums downstream include the center.
#pragma once

#include "qplus/galois.hpp"
#include "qplus/util.hpp"

#include <optional>
#include <vector>

namespace qplus {

// Projective point, coordinates normalized so the first nonzero entry is 1.
// Lexicographic comparison of coordinate vectors orders all enumerations.
struct ProjectivePoint {
  std::vector<Fel> coords;
  bool operator==(const ProjectivePoint&) const = default;
  bool operator<(const ProjectivePoint& o) const { return coords < o.coords; }
};

ProjectivePoint normalize_point(std::vector<Fel> coords, const FieldSpec& f);

// Form and bilinear values on raw coordinate vectors (need not be normalized).
Fel form_eval_vec(const std::vector<Fel>& v, const FieldSpec& f);
Fel bilinear_eval_vec(const std::vector<Fel>& a, const std::vector<Fel>& b, const FieldSpec& f);

inline Fel form_eval(const ProjectivePoint& pt, const FieldSpec& f) {
  return form_eval_vec(pt.coords, f);
}
inline Fel bilinear_eval(const ProjectivePoint& a, const ProjectivePoint& b, const FieldSpec& f) {
  return bilinear_eval_vec(a.coords, b.coords, f);
}

// All points of PG(n_coords - 1, q) in ascending lex order.
std::vector<ProjectivePoint> projective_points(int n_coords, const FieldSpec& f);

// Projective subspace held as a row-reduced basis (reduced echelon form,
// leading ones), so equal subspaces compare equal.
struct Subspace {
  std::vector<ProjectivePoint> basis;
  int pdim() const { return (int)basis.size() - 1; }
  bool operator==(const Subspace&) const = default;
  bool operator<(const Subspace& o) const { return basis < o.basis; }
};

Subspace span(const std::vector<ProjectivePoint>& pts, const FieldSpec& f);
std::vector<ProjectivePoint> subspace_points(const Subspace& s, const FieldSpec& f);
bool subspace_contains(const Subspace& s, const ProjectivePoint& pt, const FieldSpec& f);

// All subspaces of PG(n_coords - 1, q) of projective dimension <= max_pdim.
// Throws ResourceLimit when more than cap would be produced.
std::vector<Subspace> all_subspaces(int n_coords, const FieldSpec& f, int max_pdim,
                                    long long cap = 5000000);

// Point set of the quadric together with the bit-packed collinearity
// relation. Rows include the diagonal: collinear(i, i) is true.
class HyperbolicQuadric {
public:
  HyperbolicQuadric() = default;

  int rank() const { return rank_; }
  const FieldSpec& field() const { return field_; }
  int size() const { return (int)points_.size(); }
  const std::vector<ProjectivePoint>& points() const { return points_; }
  const ProjectivePoint& point(int i) const { return points_[i]; }
  int index_of(const ProjectivePoint& pt) const;  // -1 when absent

  bool collinear(int i, int j) const { return coll_.get(i, j); }
  const std::uint64_t* perp_row(int i) const { return coll_.row(i); }
  int words() const { return coll_.words(); }

private:
  friend HyperbolicQuadric build_quadric(int, const FieldSpec&, long long, int);
  int rank_ = 0;
  FieldSpec field_;
  std::vector<ProjectivePoint> points_;
  BitMatrix coll_;
};

// Materializes the quadric of the given rank. Throws BadIndex for rank < 1
// and ResourceLimit when the point count would exceed max_points.
HyperbolicQuadric build_quadric(int rank, const FieldSpec& f,
                                long long max_points = 1000000, int threads = 1);

// Indices of the quadric points collinear with every point in the given set
// (equivalently, with every basis point of their span). Sorted ascending.
std::vector<int> perp_of_set(const HyperbolicQuadric& Q, const std::vector<ProjectivePoint>& pts);
std::vector<int> perp_of_subspace(const HyperbolicQuadric& Q, const Subspace& s);

// Totally singular lines through the given point, sorted by basis encoding.
std::vector<Subspace> lines_through(const HyperbolicQuadric& Q, int p);
std::vector<Subspace> lines_through(const HyperbolicQuadric& Q, const ProjectivePoint& pt);

// The same pencil as index lists: each line as the sorted indices of its
// q + 1 quadric points (the center included).
std::vector<std::vector<int>> line_pencil(const HyperbolicQuadric& Q, int p);

// All generators (maximal totally singular subspaces, pdim r-1), sorted by
// basis encoding. Throws ResourceLimit past max_generators.
std::vector<Subspace> generators(const HyperbolicQuadric& Q, long long max_generators = 100000);

// Quotient of the quadric by a totally singular subspace S of pdim s:
// a standard-form quadric of rank r - s - 1 whose points correspond to the
// totally singular (s+1)-dim subspaces through S.
struct Quotient {
  HyperbolicQuadric quadric;           // standard model, empty when s = r-1
  Subspace base;                       // S itself
  std::vector<Subspace> fibers;        // fiber subspace per model point
  std::vector<int> point_to_quotient;  // parent index -> model index, -1 off S-perp or in S
};

Quotient quotient(const HyperbolicQuadric& Q, const Subspace& s);

// ---- small GF-linear algebra helpers shared by the modules ----

// Reduced echelon form of the given rows; zero rows dropped.
std::vector<std::vector<Fel>> rref(std::vector<std::vector<Fel>> rows, const FieldSpec& f);

// Coefficients c with sum c_i * basis_i = target, if target lies in the span.
std::optional<std::vector<Fel>> solve_in_span(const std::vector<std::vector<Fel>>& basis,
                                              const std::vector<Fel>& target, const FieldSpec& f);

// Basis of {x : A x = 0} for the m x n matrix A given as rows.
std::vector<std::vector<Fel>> nullspace(const std::vector<std::vector<Fel>>& rows, int n,
                                        const FieldSpec& f);

std::vector<Fel> vec_add(const std::vector<Fel>& a, const std::vector<Fel>& b, const FieldSpec& f);
std::vector<Fel> vec_scale(const std::vector<Fel>& a, Fel s, const FieldSpec& f);

}  // namespace qplus
