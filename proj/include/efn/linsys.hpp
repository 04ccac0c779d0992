#pragma once

#include <optional>
#include <string>
#include <vector>

#include "efn/polymatrix.hpp"
#include "efn/span.hpp"

namespace efn {

/// Y' = A Y, optionally with the functions forming Y.
struct LinSystem {
  RMatrix a;
  std::optional<std::vector<EFun>> basis;

  std::size_t dim() const { return a.rows(); }
};

inline RMatrix to_rmatrix(const PolyMatrix& p) {
  RMatrix m(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) m(i, j) = RatFun(p(i, j));
  return m;
}

inline Poly poly_determinant(const PolyMatrix& p) {
  RatFun d = determinant(to_rmatrix(p));
  return d.num() * (1 / d.den().lead());
}

struct GaugeMatrix {
  PolyMatrix t;
  Poly det;

  static GaugeMatrix make(PolyMatrix t) {
    if (t.rows() == 0 || t.rows() != t.cols()) fail(ErrorKind::InvalidArgument, "gauge matrix must be square");
    Poly d = poly_determinant(t);
    if (d.is_zero()) fail(ErrorKind::SingularGauge, "gauge matrix has zero determinant");
    return {std::move(t), std::move(d)};
  }
  static GaugeMatrix identity(std::size_t n) { return make(PolyMatrix::identity(n)); }
};

/// Forward: new basis h = T g. Inverse: old basis g = T h.
enum class GaugeDirection { Forward, Inverse };

inline RMatrix entrywise_derivative(const RMatrix& m) {
  RMatrix d(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).derivative();
  return d;
}

inline Poly denominator_lcm(const RMatrix& m) {
  Poly q = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q = poly_lcm(q, m(i, j).den());
  return q;
}

inline bool is_laurent(const RMatrix& m) {
  Poly q = denominator_lcm(m);
  return q.shift_down(q.x_valuation()).degree() == 0;
}

inline LinSystem companion(const DiffOp& l) {
  if (l.order() == 0) fail(ErrorKind::ZeroOperator, "companion system needs positive order");
  return {companion_matrix(l), std::nullopt};
}

/// Rows of the derivatives of basis elements, expressed in the basis.
inline RMatrix derivation_matrix(const RowSpace& space, const std::vector<RatRow>& basis, const GuessConfig& cfg) {
  RMatrix a(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Dependence d = decide_dependence(space, basis, space.derivative(basis[i]), cfg);
    if (!d.dependent)
      fail(ErrorKind::NotDerivationClosed, "derivative of basis element " + std::to_string(i) + " leaves the span");
    for (std::size_t j = 0; j < basis.size(); ++j) a(i, j) = d.coords[j];
  }
  return a;
}

/// Q(x)-independence of the rows up to the degree bound; throws otherwise.
inline RankWitness certify_independent(const RowSpace& space, const std::vector<RatRow>& rows,
                                       const GuessConfig& cfg) {
  auto series = [&](std::size_t k) { return space.series(rows, k); };
  if (auto w = no_relation_witness(rows.size(), series, cfg.degrees.back(), cfg)) return *w;
  fail(ErrorKind::NotIndependent, "functions admit a polynomial relation of degree <= " +
                                      std::to_string(cfg.degrees.back()) + " or one could not be excluded");
}

inline LinSystem from_basis(const std::vector<EFun>& fs, const GuessConfig& cfg = {}) {
  if (fs.empty()) fail(ErrorKind::EmptyGenerators, "empty basis");
  auto [space, rows] = ambient_space(fs);
  certify_independent(space, rows, cfg);
  return {derivation_matrix(space, rows, cfg), fs};
}

namespace detail {

inline std::optional<std::vector<EFun>> transform_basis(const std::vector<EFun>& fs, const RMatrix& m) {
  auto [space, rows] = ambient_space(fs);
  std::vector<EFun> out;
  try {
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(space.function(row_combination(rows, m.row(i), space.dim())));
  } catch (const Error&) {
    return std::nullopt;  // some new basis element is not a power series at 0
  }
  return out;
}

}  // namespace detail

inline LinSystem gauge_apply(const LinSystem& s, const GaugeMatrix& g, GaugeDirection dir) {
  if (g.t.rows() != s.dim()) fail(ErrorKind::InvalidArgument, "gauge dimension mismatch");
  if (g.det.is_zero()) fail(ErrorKind::SingularGauge, "gauge matrix has zero determinant");
  RMatrix t = to_rmatrix(g.t);
  RMatrix ti = *inverse(t);
  RMatrix dt = entrywise_derivative(t);
  LinSystem out;
  if (dir == GaugeDirection::Forward) {
    out.a = (t * s.a + dt) * ti;
    if (s.basis) out.basis = detail::transform_basis(*s.basis, t);
  } else {
    out.a = ti * (s.a * t - dt);
    if (s.basis) out.basis = detail::transform_basis(*s.basis, ti);
  }
  return out;
}

struct SystemSingularities {
  std::vector<Rat> points;
  Poly irrational_factor = 1;  // squarefree, no rational roots

  bool empty() const { return points.empty() && irrational_factor.degree() <= 0; }
};

inline SystemSingularities singularities(const LinSystem& s) {
  auto [roots, rest] = split_rational_roots(denominator_lcm(s.a));
  return {roots, rest};
}

struct Desingularization {
  GaugeMatrix t;  // g = T h
  LinSystem b;    // h' = B h, B Laurent
  std::vector<EFun> h;
  RMatrix h_coords;  // h = H g, H = T^-1
  std::vector<RatRow> h_rows;  // h in the row space of g
  std::size_t rounds = 0;
};

/// Saturates the Q[x, 1/x]-span of g and its derivatives. Its x-saturated
/// basis consists of entire functions (combinations of derivatives of E-functions
/// whose coefficients are regular at 0) and is stable under derivation.
/// g_i is given by rows[i] in `space`, with g' = A g.
inline Desingularization desingularize(const RMatrix& a, const RowSpace& space, const std::vector<RatRow>& rows,
                                       std::size_t cap = 64) {
  const std::size_t m = a.rows();
  if (rows.size() != m) fail(ErrorKind::BasisInvalid, "basis size does not match the system");
  const Poly q = denominator_lcm(a);
  RMatrix hm = RMatrix::identity(m);
  std::size_t rounds = 0;
  if (q.shift_down(q.x_valuation()).degree() > 0) {
    std::vector<RatRow> gens;
    for (std::size_t i = 0; i < m; ++i) gens.push_back(unit_row(m, i));
    RowModule mod = hnf_with_x_saturation(gens, q);
    for (;; ++rounds) {
      if (rounds >= cap)
        fail(ErrorKind::SaturationCapExceeded, "module not derivation-stable after " + std::to_string(cap) + " rounds");
      if (mod.rank() != m) fail(ErrorKind::BasisInvalid, "saturated module lost rank");
      std::vector<RatRow> next;
      bool stable = true;
      for (std::size_t i = 0; i < m; ++i) next.push_back(mod.element(i));
      for (std::size_t i = 0; i < m; ++i) {
        RatRow d = derive_row(mod.element(i), a);
        auto c = express_in(mod, d);
        if (!c) fail(ErrorKind::BasisInvalid, "derivative outside the span; the system does not match its basis");
        for (const auto& e : *c) stable = stable && e.den().shift_down(e.den().x_valuation()).degree() == 0;
        next.push_back(std::move(d));
      }
      if (stable) break;
      mod = hnf_with_x_saturation(next, q);
    }
    for (std::size_t i = 0; i < m; ++i) hm.set_row(i, mod.element(i));
  }
  auto tinv = inverse(hm);
  if (!tinv) fail(ErrorKind::BasisInvalid, "saturated basis is singular");
  PolyMatrix t(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const RatFun& e = (*tinv)(i, j);
      if (e.den().degree() != 0) fail(ErrorKind::BasisInvalid, "gauge matrix is not polynomial");
      t(i, j) = e.num() * (1 / e.den().lead());
    }
  Desingularization out{GaugeMatrix::make(t), {}, {}, hm, {}, rounds};
  RMatrix tr = to_rmatrix(t);
  out.b.a = hm * (a * tr - entrywise_derivative(tr));
  if (!is_laurent(out.b.a)) fail(ErrorKind::VerificationFailed, "desingularized system has finite poles");
  for (std::size_t j = 0; j < m; ++j) {
    out.h_rows.push_back(row_combination(rows, hm.row(j), space.dim()));
    out.h.push_back(space.function(out.h_rows.back(), "h" + std::to_string(j + 1)));
  }
  out.b.basis = out.h;
  return out;
}

inline Desingularization desingularize(const LinSystem& s, std::size_t cap = 64) {
  if (!s.basis || s.basis->size() != s.dim()) fail(ErrorKind::BasisInvalid, "desingularization needs the basis");
  if (is_laurent(s.a)) {
    Desingularization out{GaugeMatrix::identity(s.dim()), s, *s.basis, RMatrix::identity(s.dim()), {}, 0};
    return out;
  }
  auto [space, rows] = ambient_space(*s.basis);
  return desingularize(s.a, space, rows, cap);
}

}  // namespace efn
