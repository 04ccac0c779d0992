#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "efn/rational.hpp"

namespace efn::modp {

/// Word-size primes used for modular rank computations.
inline constexpr std::array<std::uint64_t, 3> kPrimes = {
    2305843009213693951ULL,  // 2^61 - 1
    4611686018427387847ULL,  // 2^62 - 57
    9223372036854775783ULL,  // 2^63 - 25
};

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return (s >= p || s < a) ? s - p : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}
inline std::uint64_t power(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}
inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) { return power(a, p - 2, p); }

/// Image of r in Z/p, or nullopt when p divides the denominator.
inline std::optional<std::uint64_t> reduce(const Rat& r, std::uint64_t p) {
  std::uint64_t d = mpz_fdiv_ui(r.get_den_mpz_t(), p);
  if (d == 0) return std::nullopt;
  std::uint64_t n = mpz_fdiv_ui(r.get_num_mpz_t(), p);
  return mul(n, inv(d, p), p);
}

/// Dense matrix over Z/p with in-place rank computation.
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::uint64_t p = 0;
  std::vector<std::uint64_t> a;
  Mat(std::size_t r, std::size_t c, std::uint64_t prime) : rows(r), cols(c), p(prime), a(r * c, 0) {}
  std::uint64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }

  /// Row-echelon elimination; returns the rank.
  std::size_t rank() {
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
      std::size_t piv = r;
      while (piv < rows && at(piv, c) == 0) ++piv;
      if (piv == rows) continue;
      if (piv != r)
        for (std::size_t j = 0; j < cols; ++j) std::swap(at(piv, j), at(r, j));
      std::uint64_t iv = inv(at(r, c), p);
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (at(i, c) == 0) continue;
        std::uint64_t f = mul(at(i, c), iv, p);
        for (std::size_t j = c; j < cols; ++j)
          if (at(r, j) != 0) at(i, j) = sub(at(i, j), mul(f, at(r, j), p), p);
      }
      ++r;
    }
    return r;
  }
};

/// Mod-p image of a rational matrix given by an entry callback, or nullopt
/// when p divides a denominator.
template <class Entry>
std::optional<Mat> reduce_matrix_mod(std::uint64_t p, std::size_t rows, std::size_t cols, Entry&& entry) {
  Mat m(rows, cols, p);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const Rat& v = entry(i, j);
      if (sgn(v) == 0) continue;
      auto red = reduce(v, p);
      if (!red) return std::nullopt;
      m.at(i, j) = *red;
    }
  return m;
}

/// First prime of kPrimes at which all denominators are invertible.
template <class Entry>
std::optional<Mat> reduce_matrix(std::size_t rows, std::size_t cols, Entry&& entry) {
  for (std::uint64_t p : kPrimes)
    if (auto m = reduce_matrix_mod(p, rows, cols, entry)) return m;
  return std::nullopt;
}

}  // namespace efn::modp
