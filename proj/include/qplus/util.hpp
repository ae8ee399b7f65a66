// Small shared utilities: exact rationals, bit-row storage for collinearity,
// integer powers, and a fixed-partition parallel runner whose results do not
// depend on the thread count.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

namespace qplus {

using int128 = __int128;

inline long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Reduced fraction, denominator > 0. Arithmetic stays in 64 bits after
// reduction; inputs at the scales used here never overflow.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const {
    return (int128)num * o.den < (int128)o.num * den;
  }

  Rational operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
  }

  bool is_integer() const { return den == 1; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

// Dense square bit matrix, one row = ceil(n/64) words.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64),
        bits_((size_t)rows * words_, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int words() const { return words_; }

  void set(int i, int j) { bits_[(size_t)i * words_ + j / 64] |= 1ULL << (j % 64); }
  void clear(int i, int j) { bits_[(size_t)i * words_ + j / 64] &= ~(1ULL << (j % 64)); }
  bool get(int i, int j) const {
    return (bits_[(size_t)i * words_ + j / 64] >> (j % 64)) & 1ULL;
  }

  std::uint64_t* row(int i) { return bits_.data() + (size_t)i * words_; }
  const std::uint64_t* row(int i) const { return bits_.data() + (size_t)i * words_; }

private:
  int rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

inline long long popcount_row(const std::uint64_t* a, int words) {
  long long c = 0;
  for (int w = 0; w < words; ++w) c += __builtin_popcountll(a[w]);
  return c;
}

inline long long popcount_and(const std::uint64_t* a, const std::uint64_t* b, int words) {
  long long c = 0;
  for (int w = 0; w < words; ++w) c += __builtin_popcountll(a[w] & b[w]);
  return c;
}

inline long long popcount_xor(const std::uint64_t* a, const std::uint64_t* b, int words) {
  long long c = 0;
  for (int w = 0; w < words; ++w) c += __builtin_popcountll(a[w] ^ b[w]);
  return c;
}

inline long long popcount_and_andnot(const std::uint64_t* a, const std::uint64_t* b,
                                     const std::uint64_t* c, int words) {
  long long n = 0;
  for (int w = 0; w < words; ++w) n += __builtin_popcountll(a[w] & b[w] & ~c[w]);
  return n;
}

template <class Fn>
inline void for_each_bit(const std::uint64_t* a, int words, Fn&& fn) {
  for (int w = 0; w < words; ++w) {
    std::uint64_t x = a[w];
    while (x) {
      int b = __builtin_ctzll(x);
      fn(w * 64 + b);
      x &= x - 1;
    }
  }
}

// Runs fn(chunk, begin, end) over a fixed partition of [0, n) into n_chunks
// pieces. The partition depends only on n and n_chunks, so per-chunk results
// merged in chunk order are identical for every thread count.
inline void parallel_chunks(long long n, int threads, int n_chunks,
                            const std::function<void(int, long long, long long)>& fn) {
  if (n <= 0) return;
  if (n_chunks > n) n_chunks = (int)n;
  if (threads < 1) threads = 1;
  auto bound = [&](int c) { return n * c / n_chunks; };
  if (threads == 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c, bound(c), bound(c + 1));
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  int workers = threads < n_chunks ? threads : n_chunks;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        int c = next.fetch_add(1);
        if (c >= n_chunks) return;
        fn(c, bound(c), bound(c + 1));
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qplus
