#pragma once

#include <algorithm>
#include <climits>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "efn/rational.hpp"

namespace efn {

/// Dense univariate polynomial over Q, coefficients in ascending degree.
/// The zero polynomial is the empty coefficient list.
class Poly {
 public:
  /// Degree reported for the zero polynomial.
  static constexpr int kZeroDegree = INT_MIN;

  Poly() = default;
  Poly(const Rat& c) {  // NOLINT(google-explicit-constructor)
    if (!efn::is_zero(c)) c_.push_back(c);
  }
  Poly(int c) : Poly(Rat(c)) {}  // NOLINT(google-explicit-constructor)
  explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly x() { return Poly(std::vector<Rat>{0, 1}); }
  static Poly monomial(const Rat& c, std::size_t k) {
    std::vector<Rat> v(k + 1);
    v[k] = c;
    return Poly(std::move(v));
  }
  /// x - a
  static Poly linear_root(const Rat& a) { return Poly(std::vector<Rat>{-a, 1}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
  std::size_t size() const { return c_.size(); }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rat(0); }
  const Rat& lead() const { return c_.back(); }
  bool is_constant() const { return c_.size() <= 1; }

  Rat eval(const Rat& at) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * at + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rat> v(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) v[k - 1] = c_[k] * static_cast<unsigned long>(k);
    return Poly(std::move(v));
  }

  Poly monic() const {
    if (is_zero()) return {};
    Poly out = *this;
    Rat l = lead();
    for (auto& c : out.c_) c /= l;
    return out;
  }

  /// Largest k with x^k dividing this polynomial (0 for the zero polynomial).
  std::size_t x_valuation() const {
    std::size_t k = 0;
    while (k < c_.size() && efn::is_zero(c_[k])) ++k;
    return k == c_.size() ? 0 : k;
  }
  Poly shift_down(std::size_t k) const {
    if (k >= c_.size()) return {};
    return Poly(std::vector<Rat>(c_.begin() + static_cast<long>(k), c_.end()));
  }
  Poly shift_up(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<Rat> v(k, Rat(0));
    v.insert(v.end(), c_.begin(), c_.end());
    return Poly(std::move(v));
  }

  /// p(a*x + b)
  Poly compose_linear(const Rat& a, const Rat& b) const {
    Poly lin(std::vector<Rat>{b, a});
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + Poly(*it);
    return acc;
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& c : a.c_) c = -c;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rat> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (efn::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(v));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend Poly operator*(Poly a, const Rat& s) {
    if (efn::is_zero(s)) return {};
    for (auto& c : a.c_) c *= s;
    return a;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Euclidean division: returns (q, r) with a = q*b + r and deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) fail(ErrorKind::InvalidArgument, "polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly(), a};
    std::vector<Rat> r = a.c_;
    std::vector<Rat> q(a.c_.size() - b.c_.size() + 1);
    const std::size_t db = b.c_.size() - 1;
    Rat inv = 1 / b.lead();
    for (std::size_t k = q.size(); k-- > 0;) {
      Rat t = r[k + db] * inv;
      q[k] = t;
      if (efn::is_zero(t)) continue;
      for (std::size_t j = 0; j <= db; ++j) r[k + j] -= t * b.c_[j];
    }
    r.resize(db);
    return {Poly(std::move(q)), Poly(std::move(r))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim() {
    while (!c_.empty() && efn::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<Rat> c_;
};

inline bool divides(const Poly& d, const Poly& a) { return (a % d).is_zero(); }

/// Exact quotient; throws if d does not divide a.
inline Poly exact_div(const Poly& a, const Poly& d) {
  auto [q, r] = divmod(a, d);
  if (!r.is_zero()) fail(ErrorKind::InvalidArgument, "inexact polynomial division");
  return q;
}

/// Monic gcd; gcd(0, 0) = 0.
inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

inline Poly poly_lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return (a * exact_div(b, poly_gcd(a, b))).monic();
}

/// Extended Euclid: returns (g, s, t) with s*a + t*b = g monic.
inline std::tuple<Poly, Poly, Poly> poly_xgcd(const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {Poly(), Poly(), Poly()};
  Rat l = 1 / r0.lead();
  return {r0 * l, s0 * l, t0 * l};
}

inline Poly poly_pow(const Poly& p, unsigned e) {
  Poly out = 1;
  for (unsigned i = 0; i < e; ++i) out *= p;
  return out;
}

/// Squarefree part, monic.
inline Poly squarefree_part(const Poly& p) {
  if (p.degree() <= 0) return p.is_zero() ? Poly() : Poly(1);
  return exact_div(p, poly_gcd(p, p.derivative())).monic();
}

/// Scales p to a primitive integer polynomial with positive leading coefficient.
inline std::vector<Int> primitive_integer_coeffs(const Poly& p) {
  Int l = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Int> v;
  v.reserve(p.size());
  Int g = 0;
  for (const auto& c : p.coeffs()) {
    Int n = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    v.push_back(n);
  }
  if (g != 0) {
    if (v.back() < 0) g = -g;
    for (auto& n : v) n /= g;
  }
  return v;
}

namespace detail {

inline int sign_at(const Poly& p, const Rat& x) { return sgn(p.eval(x)); }

/// Sturm sequence of a squarefree polynomial.
inline std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    Poly r = -(chain[chain.size() - 2] % chain.back());
    if (r.is_zero()) break;
    // Positive rescaling keeps sign patterns intact and coefficients small.
    chain.push_back(r * (1 / abs_rat(r.lead())));
  }
  return chain;
}

inline int sign_changes(const std::vector<Poly>& chain, const Rat& x) {
  int changes = 0, last = 0;
  for (const auto& q : chain) {
    int s = sign_at(q, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Simplest rational (smallest denominator) in the closed interval [lo, hi].
inline Rat simplest_between(Rat lo, Rat hi) {
  if (lo > hi) std::swap(lo, hi);
  if (sgn(lo) <= 0 && sgn(hi) >= 0) return 0;
  if (sgn(hi) < 0) return -simplest_between(-hi, -lo);
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rat(fl) == lo) return lo;
  Rat next(fl + 1);
  if (next <= hi) return next;
  // lo and hi share integer part fl: recurse on reciprocals of fractional parts.
  Rat r = simplest_between(1 / (hi - fl), 1 / (lo - fl));
  return Rat(fl) + 1 / r;
}

}  // namespace detail

/// All distinct rational roots, ascending. Real roots are isolated with a
/// Sturm chain on the squarefree part, then each isolating interval is
/// refined until either the simplest rational inside is an exact root or the
/// interval is too narrow to hold a rational whose denominator divides the
/// leading coefficient.
inline std::vector<Rat> rational_roots(const Poly& p) {
  std::vector<Rat> roots;
  if (p.degree() <= 0) return roots;
  Poly sf = squarefree_part(p);
  if (sf.x_valuation() > 0) {
    roots.push_back(0);
    sf = sf.shift_down(1);
  }
  if (sf.degree() <= 0) return roots;
  std::vector<Int> ic = primitive_integer_coeffs(sf);
  Int lead = abs(ic.back());
  // Cauchy bound on root magnitudes.
  Rat bound = 1;
  for (std::size_t i = 0; i + 1 < ic.size(); ++i) {
    Rat q(abs(ic[i]), lead);
    if (q + 1 > bound) bound = q + 1;
  }
  Rat min_width(1, 2 * lead * lead);
  auto chain = detail::sturm_chain(sf);
  struct Interval {
    Rat lo, hi;
    int vlo, vhi;
  };
  std::vector<Interval> work{{-bound, bound, detail::sign_changes(chain, -bound),
                              detail::sign_changes(chain, bound)}};
  std::vector<std::pair<Rat, Rat>> isolated;
  while (!work.empty()) {
    Interval iv = work.back();
    work.pop_back();
    int count = iv.vlo - iv.vhi;
    if (count == 0) continue;
    if (count == 1) {
      isolated.emplace_back(iv.lo, iv.hi);
      continue;
    }
    Rat mid = (iv.lo + iv.hi) / 2;
    int vm = detail::sign_changes(chain, mid);
    if (detail::sign_at(sf, mid) == 0) {
      isolated.emplace_back(mid, mid);
      // Shrink around the exact root.
      Rat eps = (iv.hi - iv.lo) / 1024;
      while (detail::sign_changes(chain, mid - eps) - detail::sign_changes(chain, mid + eps) != 1)
        eps /= 2;
      work.push_back({iv.lo, mid - eps, iv.vlo, detail::sign_changes(chain, mid - eps)});
      work.push_back({mid + eps, iv.hi, detail::sign_changes(chain, mid + eps), iv.vhi});
      continue;
    }
    work.push_back({iv.lo, mid, iv.vlo, vm});
    work.push_back({mid, iv.hi, vm, iv.vhi});
  }
  for (auto [lo, hi] : isolated) {
    if (lo == hi) {
      roots.push_back(lo);
      continue;
    }
    int slo = detail::sign_at(sf, lo);
    if (slo == 0) {
      roots.push_back(lo);
      continue;
    }
    if (detail::sign_at(sf, hi) == 0) {
      roots.push_back(hi);
      continue;
    }
    for (;;) {
      Rat cand = detail::simplest_between(lo, hi);
      if (mpz_divisible_p(lead.get_mpz_t(), cand.get_den_mpz_t()) && is_zero(sf.eval(cand))) {
        roots.push_back(cand);
        break;
      }
      if (hi - lo < min_width) break;
      Rat mid = (lo + hi) / 2;
      int sm = detail::sign_at(sf, mid);
      if (sm == 0) {
        roots.push_back(mid);
        break;
      }
      if (sm == slo) lo = mid; else hi = mid;
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

inline std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const Rat& c = c_[k];
    if (efn::is_zero(c)) continue;
    bool neg = sgn(c) < 0;
    Rat a = abs_rat(c);
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    bool unit = a == 1 && k > 0;
    if (!unit) out += format_rat(a);
    if (k > 0) {
      if (!unit) out += "*";
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

}  // namespace efn
