#pragma once

#include <optional>
#include <string>
#include <vector>

#include "efn/efun.hpp"
#include "efn/guess.hpp"

namespace efn {

/// No relation sum_{i<=order} p_i f^(i) (= q, with constant_column) has
/// coefficient degrees <= rank.degree.
struct ExclusionWitness {
  std::size_t order = 0;
  bool constant_column = false;
  RankWitness rank;
};

struct MinimalityCertificate {
  std::string label;
  std::vector<Poly> operator_coeffs;
  Poly rhs;  // zero for a homogeneous certificate
  bool inhomogeneous = false;
  std::vector<ExclusionWitness> exclusions;
  unsigned degree_bound = 0;
  bool division_remainder_zero = false;  // known annihilator right-divisible by the result
  std::size_t certification_window = 0;   // window of the certified-zero check on L(f) - P
};

namespace detail {

/// Coordinates of sum c_i f^(i) in the companion basis of f.
inline RatRow apply_in_companion(const BasisModule& m, const std::vector<Poly>& c) {
  RatRow w = unit_row(m.dim(), 0), acc(m.dim(), RatFun(0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) w = derive_row(w, m.a);
    if (c[i].is_zero()) continue;
    for (std::size_t j = 0; j < w.size(); ++j) acc[j] += RatFun(c[i]) * w[j];
  }
  return acc;
}

}  // namespace detail

/// Certifies L(f) = rhs: the difference is a module element whose cyclic
/// annihilator bounds the window of the certified-zero rule. Returns the
/// window, or nullopt if the difference is nonzero.
inline std::optional<std::size_t> certify_relation(const EFun& f, const std::vector<Poly>& l, const Poly& rhs) {
  if (f.is_zero_function()) return rhs.is_zero() ? std::optional<std::size_t>(0) : std::nullopt;
  if (!rhs.is_zero() && l.size() == f.annihilator().order()) {
    // If the annihilator right-divides (P D - P') L0, then y = L0(f) - P
    // solves P y' = P' y, so the first-order operator bounds the window.
    DiffOp first = DiffOp::normalize({-rhs.derivative(), rhs});
    RatOp k = first.to_ratop() * DiffOp::normalize(l).to_ratop();
    if (right_divide(k, f.annihilator().to_ratop()).second.is_zero()) {
      std::size_t w = zero_certification_window(first);
      int maxdeg = 0;
      for (const auto& p : l) maxdeg = std::max(maxdeg, p.degree());
      TruncSeries y = apply_coeffs(l, f.series(w + l.size() - 1 + static_cast<std::size_t>(std::max(maxdeg, 0))));
      y = y - TruncSeries::from_poly(rhs, y.order());
      if (certify_zero(first, y.truncate(w))) return w;
      return std::nullopt;
    }
  }
  BasisModule cm = companion_module(f);
  RatRow v = detail::apply_in_companion(cm, l);
  BasisModule m = cm;
  if (!rhs.is_zero()) {
    BasisModule one{RMatrix(1, 1), [](std::size_t k) {
                      TruncSeries s = TruncSeries::zero(k);
                      if (k) s[0] = 1;
                      return std::vector<TruncSeries>{s};
                    }};
    m = direct_sum({one, cm});
    v.insert(v.begin(), RatFun(-rhs));
  }
  DiffOp ly = cyclic_annihilator(m.a, v);
  std::size_t k = zero_certification_window(ly);
  int maxdeg = 0;
  for (const auto& p : l) maxdeg = std::max(maxdeg, p.degree());
  TruncSeries y = apply_coeffs(l, f.series(k + l.size() - 1 + static_cast<std::size_t>(std::max(maxdeg, 0))));
  y = y - TruncSeries::from_poly(rhs, y.order());
  if (!certify_zero(ly, y.truncate(k))) return std::nullopt;
  return k;
}

namespace detail {

inline std::vector<TruncSeries> derivative_series(const EFun& f, std::size_t count, std::size_t k) {
  std::vector<TruncSeries> out;
  TruncSeries s = f.series(k + count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(s.truncate(k));
    s = s.derivative();
  }
  return out;
}

// Columns f, f', ..., f^(order), optionally followed by -1.
inline std::vector<TruncSeries> exclusion_columns(const EFun& f, std::size_t order, bool constant, std::size_t k) {
  auto g = derivative_series(f, order + 1, k);
  if (constant) {
    TruncSeries minus_one = TruncSeries::zero(k);
    if (k) minus_one[0] = -1;
    g.push_back(minus_one);
  }
  return g;
}

inline std::optional<ExclusionWitness> exclusion_witness(const EFun& f, std::size_t order, bool constant,
                                                         const GuessConfig& cfg) {
  auto w = no_relation_witness(
      order + 1 + (constant ? 1 : 0), [&](std::size_t k) { return exclusion_columns(f, order, constant, k); },
      cfg.degrees.back(), cfg);
  if (!w) return std::nullopt;
  return ExclusionWitness{order, constant, *w};
}

inline void add_exclusions(MinimalityCertificate& cert, const EFun& f, std::size_t upto, bool constant,
                           const GuessConfig& cfg) {
  cert.degree_bound = cfg.degrees.back();
  for (std::size_t r = 0; r < upto; ++r) {
    auto w = exclusion_witness(f, r, constant, cfg);
    if (!w)
      fail(ErrorKind::GuessBoundExceeded, "cannot exclude order-" + std::to_string(r) +
                                              " relations of degree <= " + std::to_string(cfg.degrees.back()) +
                                              " for " + f.label());
    cert.exclusions.push_back(*w);
  }
}

}  // namespace detail

/// Minimal homogeneous operator with its certificate. The known annihilator
/// is kept when order mu - 1 relations are excluded up to the degree bound;
/// otherwise smaller orders are searched by guessing.
inline std::pair<DiffOp, MinimalityCertificate> minimal_homogeneous(const EFun& f, const GuessConfig& cfg = {}) {
  if (f.is_zero_function()) fail(ErrorKind::InvalidArgument, "the zero function has no minimal operator");
  const DiffOp& known = f.annihilator();
  const std::size_t mu_known = known.order();
  std::optional<DiffOp> found;
  if (mu_known > 1 && !detail::exclusion_witness(f, mu_known - 1, false, cfg)) {
    for (std::size_t r = 1; r < mu_known && !found; ++r) {
      auto accept = [&](const PolyRow& cand) {
        if (cand.back().is_zero()) return false;
        DiffOp l = DiffOp::normalize(cand);
        if (!certify_relation(f, l.coeffs(), Poly())) return false;
        found = l;
        return true;
      };
      search_relation(r + 1, [&](std::size_t k) { return detail::derivative_series(f, r + 1, k); }, accept, cfg);
    }
  }
  DiffOp l = found ? *found : DiffOp::normalize(known.coeffs());
  MinimalityCertificate cert;
  cert.label = f.label();
  cert.operator_coeffs = l.coeffs();
  auto window = certify_relation(f, l.coeffs(), Poly());
  if (!window) fail(ErrorKind::VerificationFailed, "minimal operator does not annihilate " + f.label());
  cert.certification_window = *window;
  detail::add_exclusions(cert, f, l.order(), false, cfg);
  cert.division_remainder_zero = right_divide(known, l).second.is_zero();
  if (!cert.division_remainder_zero)
    fail(ErrorKind::VerificationFailed, "minimal operator does not right-divide the annihilator");
  return {l, cert};
}

/// Minimal pair (L0, P0) with L0(f) = P0. A caller-provided candidate is
/// accepted when certified; otherwise order mu - 1 is searched by guessing.
inline std::pair<InhomEq, MinimalityCertificate> minimal_inhomogeneous(const EFun& f, const GuessConfig& cfg = {},
                                                                       const InhomEq* hint = nullptr,
                                                                       const DiffOp* minimal_hom = nullptr) {
  DiffOp l = minimal_hom ? *minimal_hom : minimal_homogeneous(f, cfg).first;
  const std::size_t mu = l.order();
  std::optional<InhomEq> found;
  if (hint && hint->order() + 1 == mu && certify_relation(f, hint->op, hint->rhs))
    found = InhomEq::normalize(hint->op, hint->rhs);
  if (!found && mu >= 1) {
    const std::size_t r = mu - 1;
    auto accept = [&](const PolyRow& cand) {
      // columns: f, f', ..., f^(r), then -1
      std::vector<Poly> op(cand.begin(), cand.end() - 1);
      Poly rhs = cand.back();
      bool nonzero_op = false;
      for (const auto& p : op) nonzero_op = nonzero_op || !p.is_zero();
      if (!nonzero_op || op.back().is_zero()) return false;
      if (!certify_relation(f, op, rhs)) return false;
      found = InhomEq::normalize(op, rhs);
      return true;
    };
    search_relation(
        r + 2, [&](std::size_t k) { return detail::exclusion_columns(f, r, true, k); }, accept, cfg);
  }
  InhomEq e = found ? *found : InhomEq{l.coeffs(), Poly()};
  MinimalityCertificate cert;
  cert.label = f.label();
  cert.inhomogeneous = true;
  cert.operator_coeffs = e.op;
  cert.rhs = e.rhs;
  auto window = certify_relation(f, e.op, e.rhs);
  if (!window) fail(ErrorKind::VerificationFailed, "inhomogeneous relation does not hold for " + f.label());
  cert.certification_window = *window;
  detail::add_exclusions(cert, f, e.order(), true, cfg);
  cert.division_remainder_zero = true;
  return {e, cert};
}

/// Replays the relation check and the rank witnesses of a certificate.
inline bool check_witnesses(const EFun& f, const MinimalityCertificate& cert) {
  if (cert.operator_coeffs.empty()) return false;
  const std::size_t order = cert.operator_coeffs.size() - 1;
  if (cert.exclusions.size() != order) return false;
  for (std::size_t r = 0; r < order; ++r) {
    const auto& w = cert.exclusions[r];
    if (w.order != r || w.constant_column != cert.inhomogeneous || w.rank.degree < cert.degree_bound) return false;
    if (!check_rank_witness(detail::exclusion_columns(f, r, w.constant_column, w.rank.rows), w.rank)) return false;
  }
  return certify_relation(f, cert.operator_coeffs, cert.rhs).has_value();
}

/// Wronskian of f_1..f_r nonzero, with witness index; false only when the
/// determinant (built by closure operations) is certified zero.
struct WronskianVerdict {
  bool nonzero = false;
  std::size_t index = 0;
  std::size_t window = 0;
};

inline WronskianVerdict wronskian_nonzero(const std::vector<EFun>& fs, std::size_t r) {
  if (r > fs.size() || r == 0) fail(ErrorKind::InvalidArgument, "Wronskian size out of range");
  // rows: derivatives 0..r-1 of each function
  std::vector<std::vector<EFun>> d(r);
  for (std::size_t j = 0; j < r; ++j) {
    d[0].push_back(fs[j]);
    for (std::size_t i = 1; i < r; ++i) d[i].push_back(derivative(d[i - 1][j]));
  }
  // Laplace expansion along columns with closure operations.
  std::vector<EFun> dp(std::size_t{1} << r);
  dp[0] = catalog::polynomial(Poly(1));
  for (std::size_t mask = 1; mask < dp.size(); ++mask) {
    std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
    EFun acc;
    int sign = 1;
    for (std::size_t j = r; j-- > 0;) {
      if (!(mask & (std::size_t{1} << j))) continue;
      EFun t = mul(d[row][j], dp[mask ^ (std::size_t{1} << j)]);
      acc = add(acc, sign > 0 ? t : scale_value(t, -1));
      sign = -sign;
    }
    dp[mask] = acc;
  }
  const EFun& w = dp.back();
  WronskianVerdict out;
  out.window = std::max<std::size_t>(zero_certification_window(w.annihilator()), 16);
  TruncSeries s = w.series(out.window);
  for (std::size_t n = 0; n < s.order(); ++n)
    if (!is_zero(s[n])) {
      out.nonzero = true;
      out.index = n;
      return out;
    }
  return out;  // certified zero by the rule on w's annihilator
}

}  // namespace efn
