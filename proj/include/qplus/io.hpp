// Point-set file format and the shared JSON report envelope.
//
// File layout:
//   q=<q> rank=<r> modulus=<c0,c1,...>
//   <c0>,<c1>,...            one point per line, coordinate codes, or
//   idx:<i>                  a point by its index in the canonical order
// Blank lines and lines starting with '#' are ignored.
#pragma once

#include "qplus/polar.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qplus {

struct PointSetFile {
  long long q = 0;
  int rank = 0;
  std::vector<Fel> modulus;
  struct Entry {
    bool is_index = false;
    long long index = 0;
    std::vector<Fel> coords;
  };
  std::vector<Entry> entries;
};

// Parses header and entries; throws MalformedHeader / BadInput with the
// offending line in the message. Performs no field or quadric validation.
PointSetFile parse_point_set(std::istream& in);

// Resolves parsed entries against a built quadric. Throws ModulusMismatch,
// CoordinateOutOfRange, PointOffQuadric, BadIndex, or DuplicatePoint.
std::vector<int> resolve_point_set(const PointSetFile& ps, const HyperbolicQuadric& Q);

// Writes the canonical form of a point set (header plus one line per point).
void write_point_set(std::ostream& out, const HyperbolicQuadric& Q,
                     const std::vector<int>& idx, bool as_indices);

// Common JSON prologue: schema, tool, version, command, q, rank, modulus.
nlohmann::ordered_json report_envelope(const std::string& command, const FieldSpec& f, int rank);

}  // namespace qplus
