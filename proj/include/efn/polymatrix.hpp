#pragma once

#include <vector>

#include "efn/matrix.hpp"

namespace efn {

using PolyRow = std::vector<Poly>;
using RatRow = std::vector<RatFun>;
/// Rectangular grid of polynomials.
using PolyMatrix = Matrix<Poly>;

inline bool is_zero_row(const PolyRow& r) {
  for (const auto& p : r)
    if (!p.is_zero()) return false;
  return true;
}

inline PolyRow row_axpy(const PolyRow& y, const Poly& a, const PolyRow& x) {
  PolyRow out = y;
  if (a.is_zero()) return out;
  for (std::size_t j = 0; j < out.size(); ++j)
    if (!x[j].is_zero()) out[j] -= a * x[j];
  return out;
}

/// Hermite normal form over Q[x]: echelon rows with monic pivots, entries
/// above each pivot reduced below its degree, zero rows dropped. Pivots are
/// chosen by minimal degree, ties broken by row position.
inline std::vector<PolyRow> hnf(std::vector<PolyRow> rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    bool have_pivot = false;
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][c].is_zero()) continue;
        if (best == rows.size() || rows[i][c].degree() < rows[best][c].degree()) best = i;
      }
      if (best == rows.size()) break;
      have_pivot = true;
      std::swap(rows[r], rows[best]);
      bool others = false;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c].is_zero()) continue;
        rows[i] = row_axpy(rows[i], rows[i][c] / rows[r][c], rows[r]);
        if (!rows[i][c].is_zero()) others = true;
      }
      if (!others) break;
    }
    if (!have_pivot) continue;
    Rat l = 1 / rows[r][c].lead();
    for (auto& p : rows[r]) p = p * l;
    for (std::size_t i = 0; i < r; ++i)
      if (!rows[i][c].is_zero()) rows[i] = row_axpy(rows[i], rows[i][c] / rows[r][c], rows[r]);
    ++r;
  }
  rows.resize(r);
  return rows;
}

/// Saturates the row module with respect to x: afterwards the rows are
/// linearly independent at x = 0, so v with x*v in the module is in it.
inline std::vector<PolyRow> x_saturate(std::vector<PolyRow> rows) {
  rows = hnf(std::move(rows));
  for (;;) {
    if (rows.empty()) return rows;
    const std::size_t cols = rows[0].size();
    QMatrix at0(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) at0(i, j) = rows[i][j].coeff(0);
    auto ker = left_kernel(at0);
    if (ker.empty()) return rows;
    const auto& c = ker.front();
    std::size_t k = c.size();
    while (k-- > 0 && is_zero(c[k])) {}
    PolyRow combo(cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (is_zero(c[i])) continue;
      for (std::size_t j = 0; j < cols; ++j) combo[j] += rows[i][j] * c[i];
    }
    for (auto& p : combo) p = p.shift_down(1);
    rows[k] = std::move(combo);
    rows = hnf(std::move(rows));
  }
}

/// A module given by polynomial rows over a common denominator.
struct RowModule {
  std::vector<PolyRow> rows;  // HNF basis
  Poly denominator = 1;       // monic; elements are rows / denominator
  int common_x_power = 0;     // x-power cleared from the input denominators

  std::size_t rank() const { return rows.size(); }
  RatRow element(std::size_t i) const {
    RatRow out;
    for (const auto& p : rows[i]) out.emplace_back(p, denominator);
    return out;
  }
  friend bool operator==(const RowModule& a, const RowModule& b) {
    return a.rows == b.rows && a.denominator == b.denominator;
  }
};

namespace detail {

inline Poly common_denominator(const std::vector<RatRow>& gens) {
  Poly d = 1;
  for (const auto& g : gens)
    for (const auto& e : g) d = poly_lcm(d, e.den());
  return d;
}

inline std::vector<PolyRow> clear_rows(const std::vector<RatRow>& gens, const Poly& d) {
  std::vector<PolyRow> rows;
  for (const auto& g : gens) {
    PolyRow r;
    for (const auto& e : g) r.push_back(e.num() * exact_div(d, e.den()));
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Removes a common factor shared by the denominator and every entry.
inline void canonicalize(RowModule& m) {
  Poly g = m.denominator;
  for (const auto& r : m.rows)
    for (const auto& p : r) g = poly_gcd(g, p);
  if (g.degree() > 0) {
    for (auto& r : m.rows)
      for (auto& p : r) p = exact_div(p, g);
    m.denominator = exact_div(m.denominator, g).monic();
    m.rows = hnf(std::move(m.rows));
  }
}

inline void check_generators(const std::vector<RatRow>& gens) {
  if (gens.empty()) fail(ErrorKind::EmptyGenerators, "module needs at least one generator");
  for (const auto& g : gens)
    if (g.size() != gens[0].size() || g.empty())
      fail(ErrorKind::InvalidArgument, "generators must share one positive length");
}

}  // namespace detail

/// Q[x]-module generated by rational row vectors, in canonical HNF form.
inline RowModule polynomial_module(const std::vector<RatRow>& gens) {
  detail::check_generators(gens);
  RowModule m;
  m.denominator = detail::common_denominator(gens);
  m.rows = hnf(detail::clear_rows(gens, m.denominator));
  detail::canonicalize(m);
  return m;
}

/// Q[x, 1/x]-module generated by rows whose denominators divide x^a q^b:
/// returns a triangular polynomial basis with x-content removed (rows
/// independent at x = 0) over a denominator coprime to x.
inline RowModule hnf_with_x_saturation(const std::vector<RatRow>& gens, const Poly& q) {
  detail::check_generators(gens);
  if (q.is_zero()) fail(ErrorKind::InvalidArgument, "q must be nonzero");
  Poly d = detail::common_denominator(gens);
  RowModule m;
  m.common_x_power = static_cast<int>(d.x_valuation());
  Poly d0 = d.shift_down(d.x_valuation()).monic();
  if (d0.degree() > 0 && !divides(squarefree_part(d0), squarefree_part(q)))
    fail(ErrorKind::InvalidArgument, "generator denominators must divide x^a q^b");
  m.denominator = d0;
  m.rows = x_saturate(detail::clear_rows(gens, d));
  detail::canonicalize(m);
  m.rows = x_saturate(std::move(m.rows));
  return m;
}

/// Coefficients c with v = sum_i c_i * basis_i, if v lies in the span.
inline std::optional<RatRow> express_in(const RowModule& m, const RatRow& v) {
  if (m.rows.empty()) return std::nullopt;
  RMatrix basis(m.rank(), v.size());
  for (std::size_t i = 0; i < m.rank(); ++i) basis.set_row(i, m.element(i));
  return solve_left(basis, v);
}

inline PolyMatrix to_poly_matrix(const std::vector<PolyRow>& rows) {
  return PolyMatrix::from_rows(rows);
}

}  // namespace efn
