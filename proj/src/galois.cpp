#include "qplus/galois.hpp"

#include <algorithm>

namespace qplus {
namespace {

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// q = p^e with p prime, or nothing.
bool factor_prime_power(long long q, long long& p, int& e) {
  if (q < 2) return false;
  long long d = 2;
  while (d * d <= q && q % d != 0) ++d;
  p = (d * d <= q) ? d : q;
  if (!is_prime(p)) return false;
  e = 0;
  long long m = q;
  while (m % p == 0) { m /= p; ++e; }
  return m == 1;
}

// Polynomials over GF(p): little-endian coefficient vectors, no trailing zeros.
using Poly = std::vector<int>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, long long p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (int)((c[i + j] + (long long)a[i] * b[j]) % p);
  trim(c);
  return c;
}

// Remainder of a by monic m.
Poly poly_rem(Poly a, const Poly& m, long long p) {
  trim(a);
  while (a.size() >= m.size()) {
    int lead = a.back();
    size_t shift = a.size() - m.size();
    if (lead != 0) {
      for (size_t i = 0; i < m.size(); ++i) {
        long long v = a[shift + i] - (long long)lead * m[i] % p;
        a[shift + i] = (int)((v % p + p) % p);
      }
    }
    a.pop_back();
    trim(a);
  }
  return a;
}

// Trial division by every monic polynomial of degree 1..deg/2.
bool poly_irreducible(const Poly& m, long long p) {
  int deg = (int)m.size() - 1;
  for (int d = 1; 2 * d <= deg; ++d) {
    std::vector<int> c(d, 0);  // candidate divisor x^d + sum c_i x^i
    for (;;) {
      Poly div(c.begin(), c.end());
      div.push_back(1);
      if (poly_rem(m, div, p).empty()) return false;
      int i = 0;
      while (i < d && ++c[i] == p) c[i++] = 0;
      if (i == d) break;
    }
  }
  return true;
}

// Lexicographically smallest monic irreducible of degree e, coefficients
// compared constant term first.
Poly canonical_modulus(long long p, int e) {
  if (e == 1) return {0, 1};
  std::vector<int> c(e, 0);
  // Odometer with index e-1 fastest, so (c_0, ..., c_{e-1}) ascends in lex order.
  for (;;) {
    Poly m(c.begin(), c.end());
    m.push_back(1);
    if (poly_irreducible(m, p)) return m;
    int i = e - 1;
    while (i >= 0 && ++c[i] == p) c[i--] = 0;
    if (i < 0) break;
  }
  throw Error(Errc::Internal, "no irreducible modulus found");
}

}  // namespace

std::vector<Fel> FieldSpec::decode(Fel a) const {
  std::vector<Fel> d(e);
  for (int i = 0; i < e; ++i) { d[i] = (Fel)(a % p); a = (Fel)(a / p); }
  return d;
}

Fel FieldSpec::encode(const std::vector<Fel>& d) const {
  Fel a = 0;
  for (int i = (int)d.size() - 1; i >= 0; --i) a = (Fel)(a * p + (i < e ? d[i] : 0));
  return a;
}

Fel FieldSpec::add_slow(Fel a, Fel b) const {
  if (e == 1) return (Fel)(((long long)a + b) % p);
  std::vector<Fel> da = decode(a), db = decode(b);
  for (int i = 0; i < e; ++i) da[i] = (Fel)((da[i] + db[i]) % p);
  return encode(da);
}

Fel FieldSpec::neg_slow(Fel a) const {
  if (e == 1) return (Fel)((p - a) % p);
  std::vector<Fel> d = decode(a);
  for (int i = 0; i < e; ++i) d[i] = (Fel)((p - d[i]) % p);
  return encode(d);
}

Fel FieldSpec::mul_slow(Fel a, Fel b) const {
  if (e == 1) return (Fel)((long long)a * b % p);
  Poly pa, pb;
  for (Fel d : decode(a)) pa.push_back(d);
  for (Fel d : decode(b)) pb.push_back(d);
  trim(pa); trim(pb);
  Poly r = poly_rem(poly_mul(pa, pb, p), Poly(modulus.begin(), modulus.end()), p);
  std::vector<Fel> digits(r.begin(), r.end());
  return encode(digits);
}

Fel FieldSpec::pow(Fel a, long long n) const {
  Fel r = 1, base = a;
  while (n > 0) {
    if (n & 1) r = mul(r, base);
    base = mul(base, base);
    n >>= 1;
  }
  return r;
}

Fel FieldSpec::inv(Fel a) const {
  if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero in GF(" + std::to_string(q) + ")");
  if (!inv_table_.empty()) return inv_table_[a];
  return pow(a, q - 2);
}

FieldSpec make_field(long long q) {
  long long p;
  int e;
  if (!factor_prime_power(q, p, e))
    throw Error(Errc::NotPrimePower, std::to_string(q) + " is not a prime power");
  FieldSpec f;
  f.p = p;
  f.q = q;
  f.e = e;
  Poly m = canonical_modulus(p, e);
  f.modulus.assign(m.begin(), m.end());
  if (q <= 256) {
    f.add_table_.resize((size_t)q * q);
    f.mul_table_.resize((size_t)q * q);
    for (Fel a = 0; a < q; ++a)
      for (Fel b = 0; b < q; ++b) {
        f.add_table_[(size_t)a * q + b] = f.add_slow(a, b);
        f.mul_table_[(size_t)a * q + b] = f.mul_slow(a, b);
      }
    f.neg_table_.resize(q);
    for (Fel a = 0; a < q; ++a) f.neg_table_[a] = f.neg_slow(a);
    f.inv_table_.resize(q);
    f.inv_table_[0] = 0;  // never read; inv(0) throws first
    for (Fel a = 1; a < q; ++a) f.inv_table_[a] = f.pow(a, q - 2);
  }
  return f;
}

}  // namespace qplus
