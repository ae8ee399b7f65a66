// Arithmetic in GF(p^e) for small prime powers, with a deterministic choice
// of modulus so that every enumeration downstream is reproducible.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qplus {

enum class Errc {
  NotPrimePower,
  DivisionByZero,
  OddDimension,
  DimensionMismatch,
  BadIndex,
  BadInput,
  EmptyInput,
  EmptySet,
  PointNotOnQuadric,
  NotTotallySingular,
  StarNotSatisfied,
  PointInT,
  NotTight,
  CollinearPair,
  RangeEmpty,
  ResourceLimit,
  MalformedHeader,
  CoordinateOutOfRange,
  PointOffQuadric,
  DuplicatePoint,
  ModulusMismatch,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

// Field element code in [0, q). The code sum c_i * p^i stands for the
// coordinate vector (c_0, ..., c_{e-1}) in the power basis of the modulus
// root; 0 and 1 are the additive and multiplicative identities.
using Fel = int;

// GF(p^e). The modulus is the lexicographically smallest monic irreducible
// of degree e over GF(p), coefficients compared from the constant term up.
// For q <= 256 all operations are table lookups.
class FieldSpec {
public:
  long long p = 0;
  long long q = 0;
  int e = 0;
  std::vector<Fel> modulus;  // c_0, c_1, ..., c_e with c_e = 1

  Fel add(Fel a, Fel b) const {
    if (!add_table_.empty()) return add_table_[(size_t)a * q + b];
    return add_slow(a, b);
  }
  Fel neg(Fel a) const {
    if (!neg_table_.empty()) return neg_table_[a];
    return neg_slow(a);
  }
  Fel sub(Fel a, Fel b) const { return add(a, neg(b)); }
  Fel mul(Fel a, Fel b) const {
    if (!mul_table_.empty()) return mul_table_[(size_t)a * q + b];
    return mul_slow(a, b);
  }
  Fel inv(Fel a) const;
  Fel pow(Fel a, long long n) const;

  // Raw table pointers for hot loops; null when q > 256.
  const Fel* mul_table() const { return mul_table_.empty() ? nullptr : mul_table_.data(); }
  const Fel* add_table() const { return add_table_.empty() ? nullptr : add_table_.data(); }

  std::vector<Fel> decode(Fel a) const;        // base-p digits, length e
  Fel encode(const std::vector<Fel>& d) const; // inverse of decode

  bool operator==(const FieldSpec& o) const { return q == o.q && modulus == o.modulus; }

private:
  friend FieldSpec make_field(long long q);
  Fel add_slow(Fel a, Fel b) const;
  Fel neg_slow(Fel a) const;
  Fel mul_slow(Fel a, Fel b) const;
  std::vector<Fel> add_table_, mul_table_, neg_table_, inv_table_;
};

// Builds GF(q); throws NotPrimePower unless q = p^e with p prime, e >= 1.
FieldSpec make_field(long long q);

}  // namespace qplus
