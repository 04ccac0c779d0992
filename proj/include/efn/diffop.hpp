#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "efn/matrix.hpp"
#include "efn/series.hpp"

namespace efn {

/// Operator sum c_i D^i with coefficients in a differential ring F (Poly or
/// RatFun). Products use D a = a D + a'.
template <class F>
class OreOp {
 public:
  OreOp() = default;
  explicit OreOp(std::vector<F> c) : c_(std::move(c)) { trim(); }
  static OreOp d_power(std::size_t k) {
    std::vector<F> c(k + 1, F(0));
    c[k] = F(1);
    return OreOp(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  /// Order; -1 for the zero operator.
  int order() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<F>& coeffs() const { return c_; }
  F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }
  const F& lead() const { return c_.back(); }

  friend OreOp operator+(const OreOp& a, const OreOp& b) {
    std::vector<F> c(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return OreOp(std::move(c));
  }
  friend OreOp operator-(const OreOp& a, const OreOp& b) {
    std::vector<F> c(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return OreOp(std::move(c));
  }
  /// Left multiplication by a coefficient.
  friend OreOp operator*(const F& s, const OreOp& a) {
    std::vector<F> c = a.c_;
    for (auto& x : c) x = s * x;
    return OreOp(std::move(c));
  }
  /// Composition a o b.
  friend OreOp operator*(const OreOp& a, const OreOp& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<F> c(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      // D^i b_j = sum_k C(i,k) b_j^(k) D^(i-k)
      std::vector<F> ders{b.c_[j]};
      for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (i > 0) ders.push_back(ders.back().derivative());
        if (efn::is_zero(a.c_[i])) continue;
        for (std::size_t k = 0; k <= i; ++k) {
          if (efn::is_zero(ders[k])) continue;
          F term = a.c_[i] * ders[k];
          Int bin = binomial(i, k);
          if (bin != 1) term = F(Rat(bin)) * term;
          c[i - k + j] += term;
        }
      }
    }
    return OreOp(std::move(c));
  }
  friend bool operator==(const OreOp& a, const OreOp& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && efn::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<F> c_;
};

using RatOp = OreOp<RatFun>;

/// A = Q B + R over Q(x), ord R < ord B.
inline std::pair<RatOp, RatOp> right_divide(const RatOp& a, const RatOp& b) {
  if (b.is_zero()) fail(ErrorKind::InvalidArgument, "division by the zero operator");
  RatOp q, r = a;
  while (!r.is_zero() && r.order() >= b.order()) {
    std::size_t k = static_cast<std::size_t>(r.order() - b.order());
    RatOp t = (r.lead() / b.lead()) * RatOp::d_power(k);
    q = q + t;
    r = r - t * b;
  }
  return {q, r};
}

/// Coordinates of D^0..D^count modulo the operator a (order >= 0) over Q(x).
inline std::vector<std::vector<RatFun>> d_powers_mod(const RatOp& a, std::size_t count) {
  const std::size_t n = static_cast<std::size_t>(a.order());
  std::vector<std::vector<RatFun>> out;
  std::vector<RatFun> cur(n, RatFun(0));
  if (n > 0) cur[0] = 1;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(cur);
    if (n == 0) continue;
    // D (sum r_i D^i) = sum r_i' D^i + r_i D^(i+1), then reduce D^n.
    std::vector<RatFun> next(n, RatFun(0));
    for (std::size_t i = 0; i < n; ++i) next[i] = cur[i].derivative();
    for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] += cur[i];
    const RatFun& top = cur[n - 1];
    if (!top.is_zero())
      for (std::size_t i = 0; i < n; ++i) next[i] -= top * a.coeff(i) / a.lead();
    cur = std::move(next);
  }
  return out;
}

/// Operator with polynomial coefficients a_0..a_mu, stored in normal form:
/// coprime coefficients and monic leading coefficient.
class DiffOp {
 public:
  DiffOp() : a_{Poly(1)} {}
  /// Divides out the polynomial content and makes a_mu monic.
  static DiffOp normalize(std::vector<Poly> raw) {
    while (!raw.empty() && raw.back().is_zero()) raw.pop_back();
    if (raw.empty()) fail(ErrorKind::ZeroOperator, "operator has no nonzero coefficient");
    Poly g;
    for (const auto& p : raw) g = poly_gcd(g, p);
    Rat s = 1 / raw.back().lead();
    DiffOp out;
    out.a_.clear();
    for (auto& p : raw) out.a_.push_back(exact_div(p, g) * s);
    return out;
  }
  /// Clears denominators of an operator over Q(x).
  static DiffOp from_ratop(const RatOp& op) {
    if (op.is_zero()) fail(ErrorKind::ZeroOperator, "operator is zero");
    Poly den = 1;
    for (const auto& c : op.coeffs()) den = poly_lcm(den, c.den());
    std::vector<Poly> raw;
    for (const auto& c : op.coeffs()) raw.push_back(c.num() * exact_div(den, c.den()));
    return normalize(std::move(raw));
  }
  static DiffOp d_minus(const Rat& c) { return normalize({Poly(-c), Poly(1)}); }

  std::size_t order() const { return a_.size() - 1; }
  const std::vector<Poly>& coeffs() const { return a_; }
  const Poly& coeff(std::size_t i) const { return a_[i]; }
  const Poly& lead() const { return a_.back(); }
  int max_degree() const {
    int d = 0;
    for (const auto& p : a_) d = std::max(d, p.degree());
    return d;
  }

  RatOp to_ratop() const {
    std::vector<RatFun> c(a_.begin(), a_.end());
    return RatOp(std::move(c));
  }

  /// Substitution x -> x + alpha.
  DiffOp translate(const Rat& alpha) const {
    std::vector<Poly> c;
    for (const auto& p : a_) c.push_back(p.compose_linear(1, alpha));
    return normalize(std::move(c));
  }
  /// Operator annihilating y(a x) when this annihilates y.
  DiffOp scale(const Rat& a) const {
    std::vector<Poly> c;
    for (std::size_t i = 0; i < a_.size(); ++i)
      c.push_back(a_[i].compose_linear(a, 0) * (1 / rat_pow(a, i)));
    return normalize(std::move(c));
  }
  /// The composition L o (x - alpha), annihilating y / (x - alpha).
  DiffOp compose_linear_factor(const Rat& alpha) const {
    std::vector<Poly> c(a_.size());
    Poly lin = Poly::linear_root(alpha);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      c[i] = a_[i] * lin;
      if (i + 1 < a_.size()) c[i] += a_[i + 1] * Rat(static_cast<long>(i + 1));
    }
    return normalize(std::move(c));
  }

  std::string to_string() const;

  friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.a_ == b.a_; }

 private:
  std::vector<Poly> a_;
};

inline std::pair<RatOp, RatOp> right_divide(const DiffOp& a, const DiffOp& b) {
  return right_divide(a.to_ratop(), b.to_ratop());
}

/// Applies sum c_i D^i (polynomial c_i) to a truncated series; the result is
/// exact in every retained coefficient.
inline TruncSeries apply_coeffs(const std::vector<Poly>& c, const TruncSeries& s) {
  const std::size_t mu = c.size() - 1;
  int maxdeg = 0;
  for (const auto& p : c) maxdeg = std::max(maxdeg, p.degree());
  if (s.order() <= mu + static_cast<std::size_t>(maxdeg))
    fail(ErrorKind::TruncationTooShort, "series too short for operator application");
  const std::size_t out_order = s.order() - mu - static_cast<std::size_t>(maxdeg);
  TruncSeries out = TruncSeries::zero(out_order);
  TruncSeries d = s;
  for (std::size_t i = 0; i <= mu; ++i) {
    if (i > 0) d = d.derivative();
    if (!c[i].is_zero()) out = out + (c[i] * d).truncate(out_order);
  }
  return out;
}

inline TruncSeries apply(const DiffOp& l, const TruncSeries& s) { return apply_coeffs(l.coeffs(), s); }

/// Least common left multiple by the ansatz sum c_k D^k vanishing modulo
/// both operators.
inline DiffOp lclm(const DiffOp& a, const DiffOp& b) {
  RatOp ra = a.to_ratop(), rb = b.to_ratop();
  const std::size_t na = a.order(), nb = b.order();
  const std::size_t top = na + nb;
  auto pa = d_powers_mod(ra, top + 1), pb = d_powers_mod(rb, top + 1);
  for (std::size_t k = std::max(na, nb); k <= top; ++k) {
    if (na + nb == 0) break;
    RMatrix m(k + 1, na + nb);
    for (std::size_t j = 0; j <= k; ++j) {
      for (std::size_t i = 0; i < na; ++i) m(j, i) = pa[j][i];
      for (std::size_t i = 0; i < nb; ++i) m(j, na + i) = pb[j][i];
    }
    auto ker = left_kernel(m);
    if (ker.empty()) continue;
    return DiffOp::from_ratop(RatOp(ker.front()));
  }
  return DiffOp();  // both of order 0: only the zero solution
}

/// Lowest-order coefficient of L((x-alpha)^lambda), as a monic polynomial
/// in lambda, together with the shift s (L maps t^n to ind(n) t^(n+s) + ...).
struct IndicialData {
  Poly polynomial;
  int shift = 0;
  DiffOp translated;  // L in the local variable t = x - alpha
};

namespace detail {

/// lambda (lambda-1) ... (lambda-i+1)
inline Poly falling_poly(std::size_t i) {
  Poly p = 1;
  for (std::size_t k = 0; k < i; ++k) p *= Poly::linear_root(Rat(static_cast<long>(k)));
  return p;
}

}  // namespace detail

inline IndicialData indicial_data(const DiffOp& l, const Rat& alpha) {
  IndicialData out;
  out.translated = is_zero(alpha) ? l : l.translate(alpha);
  const auto& c = out.translated.coeffs();
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_zero()) continue;
    int s = static_cast<int>(c[i].x_valuation()) - static_cast<int>(i);
    if (first || s < out.shift) out.shift = s;
    first = false;
  }
  Poly ind;
  for (std::size_t i = 0; i < c.size(); ++i) {
    int j = out.shift + static_cast<int>(i);
    if (j < 0) continue;
    Rat a = c[i].coeff(static_cast<std::size_t>(j));
    if (!is_zero(a)) ind += detail::falling_poly(i) * a;
  }
  out.polynomial = ind.monic();
  return out;
}

inline Poly indicial_polynomial(const DiffOp& l, const Rat& alpha) {
  return indicial_data(l, alpha).polynomial;
}

/// Largest nonnegative integer root of p, or -1.
inline long largest_nonneg_integer_root(const Poly& p) {
  long best = -1;
  for (const Rat& r : rational_roots(p))
    if (r.get_den() == 1 && sgn(r) >= 0) best = std::max(best, r.get_num().get_si());
  return best;
}

/// Coefficients of the relation E_n(c) = 0 from L(sum c_m t^m) = sum E_n t^(n+s):
/// returns the row (coefficient of c_m for m = 0..n).
inline std::vector<Rat> recurrence_row(const IndicialData& d, std::size_t n) {
  const auto& c = d.translated.coeffs();
  std::vector<Rat> row(n + 1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& ci = c[i].coeffs();
    for (std::size_t j = 0; j < ci.size(); ++j) {
      if (is_zero(ci[j])) continue;
      long m = static_cast<long>(n) + d.shift + static_cast<long>(i) - static_cast<long>(j);
      if (m < 0) continue;
      row[static_cast<std::size_t>(m)] += ci[j] * falling(Rat(m), static_cast<unsigned>(i));
    }
  }
  return row;
}

/// Dimension of the space of formal power-series solutions at alpha.
inline std::size_t power_series_solution_dim(const DiffOp& l, const Rat& alpha) {
  IndicialData d = indicial_data(l, alpha);
  long top = largest_nonneg_integer_root(d.polynomial);
  if (top < 0) return 0;
  const std::size_t n = static_cast<std::size_t>(top) + 1;
  QMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    auto row = recurrence_row(d, k);
    for (std::size_t j = 0; j < row.size(); ++j) m(k, j) = row[j];
  }
  return n - rank(m);
}

inline bool is_apparent(const DiffOp& l, const Rat& alpha) {
  if (l.order() == 0 || !is_zero(l.lead().eval(alpha)))
    fail(ErrorKind::NotASingularity, "point " + format_rat(alpha) + " is not a zero of the leading coefficient");
  return power_series_solution_dim(l, alpha) == l.order();
}

enum class SingularityClass { Ordinary, Apparent, NonApparent, UnclassifiedIrrational };

inline const char* to_string(SingularityClass c) {
  switch (c) {
    case SingularityClass::Ordinary: return "ordinary";
    case SingularityClass::Apparent: return "apparent";
    case SingularityClass::NonApparent: return "non_apparent";
    case SingularityClass::UnclassifiedIrrational: return "unclassified_irrational";
  }
  return "?";
}

struct SingularityReport {
  std::optional<Rat> point;  // set for rational points
  Poly factor;               // x - point, or a factor without rational roots
  SingularityClass classification = SingularityClass::Ordinary;
};

/// Rational roots of p and the squarefree cofactor free of rational roots.
inline std::pair<std::vector<Rat>, Poly> split_rational_roots(const Poly& p) {
  auto roots = rational_roots(p);
  Poly rest = squarefree_part(p);
  for (const Rat& r : roots) rest = exact_div(rest, Poly::linear_root(r));
  return {roots, rest.monic()};
}

inline SingularityClass classify_point(const DiffOp& l, const Rat& alpha) {
  if (l.order() == 0 || !is_zero(l.lead().eval(alpha))) return SingularityClass::Ordinary;
  return is_apparent(l, alpha) ? SingularityClass::Apparent : SingularityClass::NonApparent;
}

inline std::vector<SingularityReport> singular_points(const DiffOp& l) {
  std::vector<SingularityReport> out;
  if (l.lead().degree() <= 0) return out;
  auto [roots, rest] = split_rational_roots(l.lead());
  for (const Rat& r : roots)
    out.push_back({r, Poly::linear_root(r), is_apparent(l, r) ? SingularityClass::Apparent
                                                              : SingularityClass::NonApparent});
  if (rest.degree() > 0) out.push_back({std::nullopt, rest, SingularityClass::UnclassifiedIrrational});
  return out;
}

/// Minimal window for the certified-zero rule of l at 0.
inline std::size_t zero_certification_window(const DiffOp& l) {
  long top = largest_nonneg_integer_root(indicial_polynomial(l, 0));
  return static_cast<std::size_t>(std::max(top, -1L) + 2) + l.order();
}

/// A solution of l at 0 whose first zero_certification_window coefficients
/// vanish is identically zero.
inline bool certify_zero(const DiffOp& l, const TruncSeries& s, bool base_point_is_zero = true) {
  if (!base_point_is_zero)
    fail(ErrorKind::InvalidArgument, "zero certification is anchored at 0; translate first");
  std::size_t need = zero_certification_window(l);
  if (s.order() < need)
    fail(ErrorKind::WindowTooShort, "window " + std::to_string(s.order()) + " < " + std::to_string(need));
  return s.is_zero();
}

/// Equation L0(y) = P0 with gcd(a_0..a_mu0, P0) = 1 and a_mu0 monic.
struct InhomEq {
  std::vector<Poly> op;
  Poly rhs;

  std::size_t order() const { return op.size() - 1; }

  static InhomEq normalize(std::vector<Poly> raw, Poly rhs) {
    while (!raw.empty() && raw.back().is_zero()) raw.pop_back();
    if (raw.empty()) fail(ErrorKind::ZeroOperator, "inhomogeneous operator is zero");
    Poly g = rhs;
    for (const auto& p : raw) g = poly_gcd(g, p);
    Rat s = 1 / raw.back().lead();
    InhomEq out;
    for (auto& p : raw) out.op.push_back(exact_div(p, g) * s);
    out.rhs = exact_div(rhs, g) * s;
    return out;
  }
  bool is_homogeneous() const { return rhs.is_zero(); }
  bool singular_at(const Rat& a) const { return is_zero(op.back().eval(a)); }
  friend bool operator==(const InhomEq& a, const InhomEq& b) { return a.op == b.op && a.rhs == b.rhs; }
};

/// Zeros of a_mu0; no apparent/non-apparent label is attached.
inline std::vector<SingularityReport> singular_points(const InhomEq& e) {
  std::vector<SingularityReport> out;
  if (e.op.back().degree() <= 0) return out;
  auto [roots, rest] = split_rational_roots(e.op.back());
  for (const Rat& r : roots) out.push_back({r, Poly::linear_root(r), SingularityClass::Ordinary});
  if (rest.degree() > 0) out.push_back({std::nullopt, rest, SingularityClass::UnclassifiedIrrational});
  return out;
}

inline std::string format_operator(const std::vector<Poly>& c) {
  std::string out;
  for (std::size_t k = c.size(); k-- > 0;) {
    if (c[k].is_zero()) continue;
    std::string coef = c[k].to_string();
    bool compound = c[k].size() > 1 && std::count_if(c[k].coeffs().begin(), c[k].coeffs().end(),
                                                     [](const Rat& r) { return !is_zero(r); }) > 1;
    std::string d = k == 0 ? "" : (k == 1 ? "D" : "D^" + std::to_string(k));
    std::string term;
    if (k > 0 && compound) term = "(" + coef + ")*" + d;
    else if (k > 0 && coef == "1") term = d;
    else if (k > 0 && coef == "-1") term = "-" + d;
    else if (k > 0) term = coef + "*" + d;
    else term = coef;
    if (out.empty()) out = term;
    else if (!term.empty() && term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

inline std::string DiffOp::to_string() const { return format_operator(a_); }

}  // namespace efn
