#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "efn/dmodule.hpp"

namespace efn {

/// max(order, 1 + largest nonnegative integer indicial root at 0).
inline std::size_t required_seed_window(const DiffOp& l) {
  long top = largest_nonneg_integer_root(indicial_polynomial(l, 0));
  return std::max<std::size_t>(l.order(), static_cast<std::size_t>(top + 1));
}

/// Power series f = sum c_n x^n given by an annihilator and the first
/// coefficients. Later coefficients come from the recurrence at 0 and are
/// memoized in a cache shared by copies.
class EFun {
 public:
  /// The zero function.
  EFun() : EFun(DiffOp(), {}, "0") {}

  EFun(DiffOp op, std::vector<Rat> seeds, std::string label = "")
      : state_(std::make_shared<State>()), label_(std::move(label)) {
    state_->op = std::move(op);
    build_recurrence();
    std::size_t need = required_seed_window(state_->op);
    if (seeds.size() < need)
      fail(ErrorKind::RecurrenceUnderdetermined,
           "need " + std::to_string(need) + " seeds, got " + std::to_string(seeds.size()));
    state_->seeds = std::move(seeds);
    state_->coeffs = state_->seeds;
    // Every relation E_n with n below the seed count must already hold.
    for (std::size_t n = 0; n < state_->seeds.size(); ++n)
      if (!is_zero(residual(n, state_->coeffs)))
        fail(ErrorKind::InvalidArgument, "seeds are inconsistent with the annihilator");
  }

  const DiffOp& annihilator() const { return state_->op; }
  const std::vector<Rat>& seeds() const { return state_->seeds; }
  std::size_t seed_count() const { return state_->seeds.size(); }
  const std::string& label() const { return label_; }
  EFun with_label(std::string l) const {
    EFun out = *this;
    out.label_ = std::move(l);
    return out;
  }
  bool is_zero_function() const { return state_->op.order() == 0; }

  /// Number of preceding coefficients each recurrence step reads.
  std::size_t recurrence_depth() const { return state_->depth; }

  Rat coefficient(std::size_t n) const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    extend(n + 1);
    return state_->coeffs[n];
  }

  TruncSeries series(std::size_t k) const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    extend(k);
    return TruncSeries(std::vector<Rat>(state_->coeffs.begin(), state_->coeffs.begin() + static_cast<long>(k)));
  }

  /// Annihilator of the form c D^k: f is then a polynomial of degree < k.
  bool is_evidently_polynomial() const {
    const auto& c = state_->op.coeffs();
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (!c[i].is_zero()) return false;
    return c.back().degree() == 0;
  }

 private:
  struct Term {
    std::size_t i;  // derivative order
    long jmi;       // degree minus derivative order
    Rat a;
  };
  struct State {
    DiffOp op;
    std::vector<Rat> seeds;
    std::vector<Term> terms;
    long shift = 0;
    std::size_t depth = 0;
    std::mutex mutex;
    std::vector<Rat> coeffs;
  };

  void build_recurrence() {
    const auto& c = state_->op.coeffs();
    bool first = true;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c[i].size(); ++j) {
        if (is_zero(c[i].coeff(j))) continue;
        long jmi = static_cast<long>(j) - static_cast<long>(i);
        state_->terms.push_back({i, jmi, c[i].coeff(j)});
        if (first || jmi < state_->shift) state_->shift = jmi;
        first = false;
      }
    for (const auto& t : state_->terms)
      state_->depth = std::max(state_->depth, static_cast<std::size_t>(t.jmi - state_->shift));
  }

  // Left side of E_n using coefficients c (all entries up to n present).
  Rat residual(std::size_t n, const std::vector<Rat>& c) const {
    Rat acc = 0;
    for (const auto& t : state_->terms) {
      long m = static_cast<long>(n) + state_->shift - t.jmi;
      if (m < 0 || is_zero(c[static_cast<std::size_t>(m)])) continue;
      acc += t.a * falling(Rat(m), static_cast<unsigned>(t.i)) * c[static_cast<std::size_t>(m)];
    }
    return acc;
  }

  void extend(std::size_t k) const {
    auto& c = state_->coeffs;
    while (c.size() < k) {
      const std::size_t n = c.size();
      Rat lead = 0, acc = 0;
      for (const auto& t : state_->terms) {
        long m = static_cast<long>(n) + state_->shift - t.jmi;
        if (m < 0) continue;
        Rat w = t.a * falling(Rat(m), static_cast<unsigned>(t.i));
        if (static_cast<std::size_t>(m) == n) lead += w;
        else if (!is_zero(c[static_cast<std::size_t>(m)])) acc += w * c[static_cast<std::size_t>(m)];
      }
      if (is_zero(lead))
        fail(ErrorKind::RecurrenceUnderdetermined, "indicial polynomial vanishes at " + std::to_string(n));
      c.push_back(-acc / lead);
    }
  }

  std::shared_ptr<State> state_;
  std::string label_;
};

namespace catalog {

inline EFun exp(const Rat& a) {
  return EFun(DiffOp::d_minus(a), {1}, "exp(" + format_rat(a) + "*x)");
}
inline EFun cos(const Rat& a) {
  if (is_zero(a)) return EFun(DiffOp::normalize({Poly(), Poly(1)}), {1}, "cos(0*x)");
  return EFun(DiffOp::normalize({Poly(a * a), Poly(), Poly(1)}), {1, 0}, "cos(" + format_rat(a) + "*x)");
}
inline EFun sin(const Rat& a) {
  if (is_zero(a)) return EFun().with_label("sin(0*x)");
  return EFun(DiffOp::normalize({Poly(a * a), Poly(), Poly(1)}), {0, a}, "sin(" + format_rat(a) + "*x)");
}
/// J0(a x), annihilated by x D^2 + D + a^2 x.
inline EFun bessel_j0(const Rat& a) {
  Poly x = Poly::x();
  if (is_zero(a)) return EFun(DiffOp::normalize({Poly(), Poly(1)}), {1}, "besselJ0(0*x)");
  return EFun(DiffOp::normalize({x * (a * a), Poly(1), x}), {1, 0}, "besselJ0(" + format_rat(a) + "*x)");
}
inline EFun polynomial(const Poly& p) {
  if (p.is_zero()) return EFun();
  std::vector<Poly> op(p.size() + 1);
  op.back() = 1;
  return EFun(DiffOp::normalize(op), p.coeffs(), p.to_string());
}
inline EFun raw(const std::vector<Poly>& op, std::vector<Rat> seeds) {
  return EFun(DiffOp::normalize(op), std::move(seeds), "raw");
}

}  // namespace catalog

/// Basis b with b' = A b and a way to produce the series of every b_i.
struct BasisModule {
  RMatrix a;
  std::function<std::vector<TruncSeries>(std::size_t)> series;
  std::size_t dim() const { return a.rows(); }
};

/// Basis (f, f', ..., f^(mu-1)).
inline BasisModule companion_module(const EFun& f) {
  const std::size_t mu = f.annihilator().order();
  return {companion_matrix(f.annihilator()), [f, mu](std::size_t k) {
            std::vector<TruncSeries> out;
            TruncSeries s = f.series(k + mu);
            for (std::size_t i = 0; i < mu; ++i) {
              out.push_back(s.truncate(k));
              s = s.derivative();
            }
            return out;
          }};
}

/// Basis of products b_i c_j, index i * dim(c) + j.
inline BasisModule tensor_module(const BasisModule& b, const BasisModule& c) {
  return {tensor_sum(b.a, c.a), [b, c](std::size_t k) {
            auto sb = b.series(k), sc = c.series(k);
            std::vector<TruncSeries> out;
            for (const auto& x : sb)
              for (const auto& y : sc) out.push_back(x * y);
            return out;
          }};
}

inline BasisModule direct_sum(const std::vector<BasisModule>& parts) {
  std::vector<RMatrix> blocks;
  for (const auto& p : parts) blocks.push_back(p.a);
  return {block_diag(blocks), [parts](std::size_t k) {
            std::vector<TruncSeries> out;
            for (const auto& p : parts)
              for (auto& s : p.series(k)) out.push_back(std::move(s));
            return out;
          }};
}

/// Series of v . b to order k; v may have denominators as long as the
/// combination is a power series.
inline TruncSeries combine_series(const BasisModule& m, const RatRow& v, std::size_t k) {
  Poly den = 1;
  for (const auto& e : v) den = poly_lcm(den, e.den());
  const std::size_t extra = den.x_valuation();
  auto basis = m.series(k + extra);
  TruncSeries acc = TruncSeries::zero(k + extra);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    acc = acc + v[i].num() * exact_div(den, v[i].den()) * basis[i];
  }
  return series_divide(acc, den);
}

inline TruncSeries combine_series(const BasisModule& m, const PolyRow& v, std::size_t k) {
  return combine_series(m, RatRow(v.begin(), v.end()), k);
}

/// The function v . b as an EFun with its cyclic annihilator.
inline EFun from_module(const BasisModule& m, const RatRow& v, std::string label = "") {
  DiffOp l = cyclic_annihilator(m.a, v);
  if (l.order() == 0) return EFun().with_label(label);
  TruncSeries s = combine_series(m, v, required_seed_window(l));
  std::vector<Rat> seeds(s.order());
  for (std::size_t n = 0; n < s.order(); ++n) seeds[n] = s[n];
  return EFun(std::move(l), std::move(seeds), std::move(label));
}

inline RatRow unit_row(std::size_t n, std::size_t i) {
  RatRow v(n, RatFun(0));
  v[i] = 1;
  return v;
}

inline EFun scale_argument(const EFun& f, const Rat& a) {
  if (is_zero(a)) fail(ErrorKind::ZeroScale, "argument scale must be nonzero");
  DiffOp op = f.annihilator().scale(a);
  std::vector<Rat> seeds(required_seed_window(op));
  Rat p = 1;
  for (std::size_t n = 0; n < seeds.size(); ++n, p *= a) seeds[n] = f.coefficient(n) * p;
  std::string label = a == 1 ? f.label() : f.label() + " @ " + format_rat(a) + "*x";
  return EFun(std::move(op), std::move(seeds), label);
}

inline EFun scale_value(const EFun& f, const Rat& c) {
  if (is_zero(c)) return EFun();
  std::vector<Rat> seeds = f.seeds();
  for (auto& s : seeds) s *= c;
  return EFun(f.annihilator(), std::move(seeds), format_rat(c) + "*(" + f.label() + ")");
}

inline EFun add(const EFun& f, const EFun& g) {
  if (f.is_zero_function()) return g;
  if (g.is_zero_function()) return f;
  DiffOp op = lclm(f.annihilator(), g.annihilator());
  std::vector<Rat> seeds(required_seed_window(op));
  for (std::size_t n = 0; n < seeds.size(); ++n) seeds[n] = f.coefficient(n) + g.coefficient(n);
  return EFun(std::move(op), std::move(seeds), "(" + f.label() + ") + (" + g.label() + ")");
}

inline EFun sub(const EFun& f, const EFun& g) { return add(f, scale_value(g, -1)); }

inline EFun mul(const EFun& f, const EFun& g) {
  if (f.is_zero_function() || g.is_zero_function()) return EFun();
  BasisModule m = tensor_module(companion_module(f), companion_module(g));
  return from_module(m, unit_row(m.dim(), 0), "(" + f.label() + ") * (" + g.label() + ")");
}

/// p * f through the module of f.
inline EFun mul_poly(const Poly& p, const EFun& f) {
  if (p.is_zero() || f.is_zero_function()) return EFun();
  BasisModule m = companion_module(f);
  RatRow v(m.dim(), RatFun(0));
  v[0] = p;
  return from_module(m, v, "(" + p.to_string() + ") * (" + f.label() + ")");
}

inline EFun derivative(const EFun& f) {
  if (f.is_zero_function()) return f;
  BasisModule m = companion_module(f);
  return from_module(m, derive_row(unit_row(m.dim(), 0), m.a), "D(" + f.label() + ")");
}

/// Evidence that f vanishes at a point: f = v . b with polynomial v, v(alpha) = 0.
struct ZeroValueWitness {
  BasisModule module;
  PolyRow coords;
};

/// Certifies f == v . b with the certified-zero rule on the difference.
inline bool witness_represents(const EFun& f, const ZeroValueWitness& w) {
  DiffOp ly = cyclic_annihilator(w.module.a, RatRow(w.coords.begin(), w.coords.end()));
  DiffOp l = lclm(f.annihilator(), ly);
  std::size_t k = zero_certification_window(l);
  return certify_zero(l, f.series(k) - combine_series(w.module, w.coords, k));
}

/// h with f = (x - alpha) h. Accepted when f is zero, an evident polynomial
/// vanishing at alpha, or when a witness certifies f(alpha) = 0.
inline EFun divide_by_linear(const EFun& f, const Rat& alpha, const ZeroValueWitness* witness = nullptr) {
  if (is_zero(alpha)) fail(ErrorKind::InvalidArgument, "division point must be nonzero");
  if (f.is_zero_function()) return f;
  bool certified = false;
  if (f.is_evidently_polynomial()) {
    Rat v = 0, p = 1;
    for (std::size_t n = 0; n < f.annihilator().order(); ++n, p *= alpha) v += f.coefficient(n) * p;
    certified = is_zero(v);
  } else if (witness) {
    bool vanishes = true;
    for (const auto& c : witness->coords) vanishes = vanishes && is_zero(c.eval(alpha));
    certified = vanishes && witness_represents(f, *witness);
  }
  if (!certified)
    fail(ErrorKind::ValueNotCertifiedZero, "no certificate that f(" + format_rat(alpha) + ") = 0");
  DiffOp op = f.annihilator().compose_linear_factor(alpha);
  std::vector<Rat> seeds(required_seed_window(op));
  Rat prev = 0;
  for (std::size_t n = 0; n < seeds.size(); ++n) {
    seeds[n] = (prev - f.coefficient(n)) / alpha;
    prev = seeds[n];
  }
  return EFun(std::move(op), std::move(seeds), "(" + f.label() + ") / (x - " + format_rat(alpha) + ")");
}

/// An E-function value f(point), point nonzero.
struct ValueRef {
  EFun function;
  Rat point;
  ValueRef(EFun f, Rat p) : function(std::move(f)), point(std::move(p)) {
    if (is_zero(point)) fail(ErrorKind::InvalidArgument, "value point must be nonzero");
  }
};

struct Interval {
  Rat lo, hi;
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  Rat mid() const { return (lo + hi) / 2; }
};

/// Partial sums with a ratio-test tail estimate (heuristic, advisory).
inline Interval eval_numeric(const ValueRef& v, const Rat& target_abs_error, std::size_t max_terms = 2000) {
  if (sgn(target_abs_error) <= 0) fail(ErrorKind::InvalidArgument, "target error must be positive");
  const EFun& f = v.function;
  const std::size_t settled = required_seed_window(f.annihilator());
  const std::size_t depth = std::max<std::size_t>(f.recurrence_depth(), 1);
  constexpr std::size_t kRun = 10;
  Rat sum = 0, pw = 1, prev_abs = 0;
  std::vector<Rat> ratios;
  std::size_t zeros = 0;
  for (std::size_t n = 0; n < max_terms; ++n, pw *= v.point) {
    Rat t = f.coefficient(n) * pw;
    sum += t;
    if (is_zero(t)) {
      // depth consecutive zeros past the free indices force all later terms to vanish
      if (++zeros >= depth && n + 1 >= settled + depth) return {sum, sum};
      continue;
    }
    zeros = 0;
    Rat a = abs_rat(t);
    if (sgn(prev_abs) != 0) {
      if (a < prev_abs) ratios.push_back(a / prev_abs);
      else ratios.clear();
    }
    prev_abs = a;
    if (ratios.size() < kRun) continue;
    Rat rho = 0;
    for (std::size_t k = ratios.size() - kRun; k < ratios.size(); ++k) rho = std::max(rho, ratios[k]);
    Rat bound = 2 * a * rho / (1 - rho);
    if (bound <= target_abs_error) return {sum - bound, sum + bound};
  }
  fail(ErrorKind::TailBoundNotReached, "no decay regime within " + std::to_string(max_terms) + " terms");
}

}  // namespace efn
