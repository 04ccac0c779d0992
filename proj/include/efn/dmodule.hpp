#pragma once

#include <vector>

#include "efn/diffop.hpp"
#include "efn/polymatrix.hpp"

// Functions y = v . b over a basis vector b with b' = A b (A over Q(x)).

namespace efn {

/// b = (y, y', ..., y^(mu-1)): superdiagonal ones, last row -a_i / a_mu.
inline RMatrix companion_matrix(const DiffOp& l) {
  const std::size_t mu = l.order();
  RMatrix a(mu, mu);
  for (std::size_t i = 0; i + 1 < mu; ++i) a(i, i + 1) = 1;
  for (std::size_t i = 0; i < mu; ++i) a(mu - 1, i) = -RatFun(l.coeff(i), l.lead());
  return a;
}

/// A (x) I + I (x) B: derivative matrix of the products b_i c_j, index i*n+j.
inline RMatrix tensor_sum(const RMatrix& a, const RMatrix& b) {
  const std::size_t m = a.rows(), n = b.rows();
  RMatrix out(m * n, m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < m; ++k)
        if (!a(i, k).is_zero()) out(i * n + j, k * n + j) += a(i, k);
      for (std::size_t k = 0; k < n; ++k)
        if (!b(j, k).is_zero()) out(i * n + j, i * n + k) += b(j, k);
    }
  return out;
}

inline RMatrix block_diag(const std::vector<RMatrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  RMatrix out(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return out;
}

/// Coordinates of y' for y = v . b.
inline RatRow derive_row(const RatRow& v, const RMatrix& a) {
  RatRow out = row_times(v, a);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i].derivative();
  return out;
}

/// First Q(x)-relation sum c_j y^(j) = 0 with c_k = 1, found by reducing the
/// derivative coordinates incrementally.
inline RatOp cyclic_relation(const RMatrix& a, const RatRow& v) {
  const std::size_t m = v.size();
  struct Reduced {
    RatRow row;
    std::size_t pivot;
    std::vector<RatFun> combo;
  };
  std::vector<Reduced> echelon;
  RatRow w = v;
  for (std::size_t k = 0; k <= m; ++k) {
    RatRow cur = w;
    std::vector<RatFun> combo(k + 1, RatFun(0));
    combo[k] = 1;
    for (const auto& e : echelon) {
      if (cur[e.pivot].is_zero()) continue;
      RatFun f = cur[e.pivot] / e.row[e.pivot];
      for (std::size_t j = 0; j < m; ++j)
        if (!e.row[j].is_zero()) cur[j] -= f * e.row[j];
      for (std::size_t j = 0; j < e.combo.size(); ++j)
        if (!e.combo[j].is_zero()) combo[j] -= f * e.combo[j];
    }
    std::size_t piv = m;
    for (std::size_t j = 0; j < m && piv == m; ++j)
      if (!cur[j].is_zero()) piv = j;
    if (piv == m) return RatOp(std::move(combo));
    echelon.push_back({std::move(cur), piv, std::move(combo)});
    w = derive_row(w, a);
  }
  fail(ErrorKind::InvalidArgument, "no cyclic relation within the module dimension");
}

inline DiffOp cyclic_annihilator(const RMatrix& a, const RatRow& v) {
  bool zero = true;
  for (const auto& e : v) zero = zero && e.is_zero();
  if (zero) return DiffOp();
  return DiffOp::from_ratop(cyclic_relation(a, v));
}

}  // namespace efn
