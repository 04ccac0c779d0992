#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "efn/errors.hpp"

namespace efn {

/// Exact rational scalar. mpq_class keeps values canonical after every
/// arithmetic operation; parse_rat canonicalizes explicitly.
using Rat = mpq_class;
using Int = mpz_class;

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

/// Canonical n/d; mpq_class(n, d) alone does not reduce.
inline Rat make_rat(long n, long d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

/// Parses "p" or "p/q" with an optional sign on p and q > 0.
inline Rat parse_rat(std::string_view text) {
  std::string s(text);
  auto bad = [&] { fail(ErrorKind::ParseError, "malformed rational '" + s + "'"); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto digits_ok = [](const std::string& d, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !d.empty() && (d[0] == '-' || d[0] == '+')) i = 1;
    if (i >= d.size()) return false;
    for (; i < d.size(); ++i)
      if (d[i] < '0' || d[i] > '9') return false;
    return true;
  };
  if (!digits_ok(num, true) || !digits_ok(den, false)) bad();
  if (num[0] == '+') num.erase(0, 1);
  Int n(num), d(den);
  if (d == 0) bad();
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline std::string format_rat(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rat abs_rat(const Rat& r) { return sgn(r) < 0 ? Rat(-r) : r; }

inline Rat rat_pow(const Rat& base, unsigned long e) {
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

inline Int binomial(unsigned long n, unsigned long k) {
  Int out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// n (n-1) ... (n-k+1) as an exact rational.
inline Rat falling(const Rat& n, unsigned k) {
  Rat out = 1;
  for (unsigned i = 0; i < k; ++i) out *= n - i;
  return out;
}

}  // namespace efn
