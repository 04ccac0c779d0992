#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "efn/efun.hpp"
#include "efn/guess.hpp"

// Functions represented as coordinate rows over one basis module, so that
// identities between them reduce to certified-zero checks on a single row.

namespace efn {

struct RowSpace {
  BasisModule module;

  std::size_t dim() const { return module.dim(); }
  RatRow derivative(const RatRow& v) const { return derive_row(v, module.a); }
  TruncSeries series(const RatRow& v, std::size_t k) const { return combine_series(module, v, k); }
  EFun function(const RatRow& v, std::string label = "") const { return from_module(module, v, std::move(label)); }

  std::vector<TruncSeries> series(const std::vector<RatRow>& rows, std::size_t k) const {
    std::vector<TruncSeries> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(series(r, k));
    return out;
  }

  /// True when v . b is certified to be the zero function.
  bool vanishes(const RatRow& v) const {
    bool all_zero = true;
    for (const auto& e : v) all_zero = all_zero && e.is_zero();
    if (all_zero) return true;
    DiffOp l = cyclic_annihilator(module.a, v);
    return certify_zero(l, series(v, zero_certification_window(l)));
  }
};

/// Direct sum of companion modules, with the row of each input function.
inline std::pair<RowSpace, std::vector<RatRow>> ambient_space(const std::vector<EFun>& fs) {
  std::vector<BasisModule> parts;
  std::vector<std::size_t> offsets;
  std::size_t dim = 0;
  for (const auto& f : fs) {
    if (f.is_zero_function()) fail(ErrorKind::InvalidArgument, "zero function in a basis");
    parts.push_back(companion_module(f));
    offsets.push_back(dim);
    dim += parts.back().dim();
  }
  std::vector<RatRow> rows;
  for (std::size_t off : offsets) rows.push_back(unit_row(dim, off));
  return {RowSpace{direct_sum(parts)}, rows};
}

inline RatRow row_combination(const std::vector<RatRow>& rows, const std::vector<RatFun>& c, std::size_t dim) {
  RatRow acc(dim, RatFun(0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (c[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim; ++j)
      if (!rows[i][j].is_zero()) acc[j] += c[i] * rows[i][j];
  }
  return acc;
}

/// Outcome of testing a candidate against functions already known to be
/// independent over Q(x).
struct Dependence {
  bool dependent = false;
  std::vector<RatFun> coords;  // candidate = sum coords_j basis_j when dependent
  RankWitness witness;          // joint independence witness otherwise
};

/// Decides whether the candidate lies in the Q(x)-span of the basis rows.
/// Dependence is certified exactly; independence is certified for relations
/// with coefficient degree up to the configured bound.
inline Dependence decide_dependence(const RowSpace& space, const std::vector<RatRow>& basis, const RatRow& candidate,
                                    const GuessConfig& cfg) {
  std::vector<RatRow> cols = basis;
  cols.push_back(candidate);
  Dependence out;
  if (space.vanishes(candidate)) {
    out.dependent = true;
    out.coords.assign(basis.size(), RatFun(0));
    return out;
  }
  if (!basis.empty()) {
    // a row identity is already a function identity
    if (auto c = solve_left(RMatrix::from_rows(basis), candidate)) {
      out.dependent = true;
      out.coords = std::move(*c);
      return out;
    }
  }
  auto series = [&](std::size_t k) { return space.series(cols, k); };
  if (auto w = no_relation_witness(cols.size(), series, cfg.degrees.back(), cfg)) {
    out.witness = *w;
    return out;
  }
  auto accept = [&](const PolyRow& rel) {
    if (rel.back().is_zero()) return false;
    std::vector<RatFun> c(rel.begin(), rel.end());
    if (!space.vanishes(row_combination(cols, c, space.dim()))) return false;
    out.coords.clear();
    for (std::size_t j = 0; j + 1 < rel.size(); ++j) out.coords.push_back(RatFun(-rel[j], rel.back()));
    return true;
  };
  if (search_relation(cols.size(), series, accept, cfg)) {
    out.dependent = true;
    return out;
  }
  fail(ErrorKind::GuessBoundExceeded, "neither a relation nor independence certified within degree " +
                                          std::to_string(cfg.degrees.back()));
}

}  // namespace efn
