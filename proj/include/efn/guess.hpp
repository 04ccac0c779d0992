#pragma once

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "efn/modp.hpp"
#include "efn/polymatrix.hpp"
#include "efn/series.hpp"

// Polynomial relations sum_k p_k(x) g_k(x) = 0 among power series, found as
// kernels of truncated convolution matrices.

namespace efn {

struct GuessConfig {
  std::vector<unsigned> degrees{4, 8, 16, 32, 64};
  std::size_t margin = 12;
  std::size_t max_trunc = 0;  // 0: no cap

  /// Degree schedule truncated at max_degree (when nonzero).
  static GuessConfig with_max_degree(unsigned max_degree) {
    GuessConfig c;
    if (max_degree == 0) return c;
    c.degrees.clear();
    for (unsigned d : GuessConfig().degrees)
      if (d < max_degree) c.degrees.push_back(d);
    c.degrees.push_back(max_degree);
    return c;
  }

  /// Truncation cap from EFN_MAX_TRUNC, if set.
  static std::size_t env_max_trunc() {
    const char* v = std::getenv("EFN_MAX_TRUNC");
    if (!v || !*v) return 0;
    return static_cast<std::size_t>(std::strtoull(v, nullptr, 10));
  }

  void check_trunc(std::size_t k) const {
    std::size_t cap = max_trunc ? max_trunc : env_max_trunc();
    if (cap && k > cap)
      fail(ErrorKind::GuessBoundExceeded,
           "truncation order " + std::to_string(k) + " exceeds cap " + std::to_string(cap));
  }
};

/// Number of series coefficients a (count generators, degree d) search reads.
inline std::size_t relation_rows(std::size_t count, unsigned d, const GuessConfig& cfg) {
  return count * (d + 1) + cfg.margin;
}

namespace detail {

// Entry (n, k*(d+1)+j) = [x^n] x^j g_k.
inline const Rat& conv_entry(const std::vector<TruncSeries>& g, unsigned d, std::size_t n, std::size_t col) {
  static const Rat zero = 0;
  std::size_t k = col / (d + 1), j = col % (d + 1);
  if (n < j) return zero;
  return g[k][n - j];
}

}  // namespace detail

/// Prime at which the degree-d convolution matrix has full column rank.
/// Full rank mod p implies full rank over Q, so no relation of degree <= d
/// exists.
inline std::optional<std::uint64_t> full_rank_prime(const std::vector<TruncSeries>& g, unsigned d,
                                                    std::size_t rows) {
  const std::size_t cols = g.size() * (d + 1);
  if (rows < cols) return std::nullopt;
  for (std::uint64_t p : modp::kPrimes) {
    auto m = modp::reduce_matrix_mod(p, rows, cols, [&](std::size_t i, std::size_t j) -> const Rat& {
      return detail::conv_entry(g, d, i, j);
    });
    if (m && m->rank() == cols) return p;
  }
  return std::nullopt;
}

inline bool proves_no_relation(const std::vector<TruncSeries>& g, unsigned d, std::size_t rows) {
  return full_rank_prime(g, d, rows).has_value();
}

/// Replayable evidence that `columns` series admit no polynomial relation
/// with coefficient degrees <= degree.
struct RankWitness {
  std::size_t columns = 0;
  unsigned degree = 0;
  std::size_t rows = 0;
  std::uint64_t prime = 0;
};

template <class SeriesFn>
std::optional<RankWitness> no_relation_witness(std::size_t count, SeriesFn&& series, unsigned degree,
                                               const GuessConfig& cfg) {
  for (std::size_t margin : {cfg.margin, 4 * cfg.margin, 16 * cfg.margin}) {
    std::size_t rows = count * (degree + 1) + margin;
    cfg.check_trunc(rows);
    auto g = series(rows);
    if (auto p = full_rank_prime(g, degree, rows)) return RankWitness{count, degree, rows, *p};
  }
  return std::nullopt;
}

inline bool check_rank_witness(const std::vector<TruncSeries>& g, const RankWitness& w) {
  if (g.size() != w.columns) return false;
  for (const auto& s : g)
    if (s.order() < w.rows) return false;
  const std::size_t cols = w.columns * (w.degree + 1);
  if (w.rows < cols) return false;
  auto m = modp::reduce_matrix_mod(w.prime, w.rows, cols, [&](std::size_t i, std::size_t j) -> const Rat& {
    return detail::conv_entry(g, w.degree, i, j);
  });
  return m && m->rank() == cols;
}

/// Exact kernel of the degree-d convolution matrix, as polynomial rows.
inline std::vector<PolyRow> relation_kernel(const std::vector<TruncSeries>& g, unsigned d, std::size_t rows) {
  const std::size_t cols = g.size() * (d + 1);
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = detail::conv_entry(g, d, i, j);
  std::vector<PolyRow> out;
  for (const auto& v : kernel(m)) {
    PolyRow r;
    for (std::size_t k = 0; k < g.size(); ++k)
      r.emplace_back(std::vector<Rat>(v.begin() + static_cast<long>(k * (d + 1)),
                                      v.begin() + static_cast<long>((k + 1) * (d + 1))));
    out.push_back(std::move(r));
  }
  return out;
}

/// Walks the degree schedule; for each degree where the modular test does
/// not exclude a relation, narrows to the least such degree and hands the
/// exact kernel to accept(). Returns the first accepted candidate.
template <class SeriesFn, class Accept>
std::optional<PolyRow> search_relation(std::size_t count, SeriesFn&& series, Accept&& accept,
                                       const GuessConfig& cfg) {
  unsigned prev = 0;
  bool have_prev = false;
  for (unsigned d : cfg.degrees) {
    std::size_t rows = relation_rows(count, d, cfg);
    cfg.check_trunc(rows);
    std::vector<TruncSeries> g = series(rows);
    if (proves_no_relation(g, d, rows)) {
      prev = d;
      have_prev = true;
      continue;
    }
    unsigned lo = have_prev ? prev + 1 : 0, hi = d;
    while (lo < hi) {
      unsigned mid = (lo + hi) / 2;
      if (proves_no_relation(g, mid, relation_rows(count, mid, cfg))) lo = mid + 1;
      else hi = mid;
    }
    for (unsigned e = lo; e <= d; ++e) {
      auto ker = relation_kernel(g, e, relation_rows(count, e, cfg));
      for (auto& cand : ker)
        if (accept(cand)) return cand;
      if (!ker.empty()) break;
    }
    prev = d;
    have_prev = true;
  }
  return std::nullopt;
}

}  // namespace efn
