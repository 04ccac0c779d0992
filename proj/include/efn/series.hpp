#pragma once

#include <algorithm>
#include <vector>

#include "efn/poly.hpp"

namespace efn {

/// Plain power-series coefficients c_0 .. c_{K-1}; K is the truncation order.
class TruncSeries {
 public:
  TruncSeries() = default;
  explicit TruncSeries(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {}
  static TruncSeries zero(std::size_t order) { return TruncSeries(std::vector<Rat>(order)); }
  static TruncSeries from_poly(const Poly& p, std::size_t order) {
    std::vector<Rat> v(order);
    for (std::size_t k = 0; k < order && k < p.size(); ++k) v[k] = p.coeff(k);
    return TruncSeries(std::move(v));
  }

  std::size_t order() const { return c_.size(); }
  const Rat& operator[](std::size_t k) const { return c_[k]; }
  Rat& operator[](std::size_t k) { return c_[k]; }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rat& r) { return efn::is_zero(r); });
  }
  /// Index of the first nonzero coefficient, or order() when none.
  std::size_t valuation() const {
    std::size_t k = 0;
    while (k < c_.size() && efn::is_zero(c_[k])) ++k;
    return k;
  }

  TruncSeries truncate(std::size_t order) const {
    std::vector<Rat> v(c_.begin(), c_.begin() + static_cast<long>(std::min(order, c_.size())));
    return TruncSeries(std::move(v));
  }

  TruncSeries derivative() const {
    if (c_.empty()) return {};
    std::vector<Rat> v(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) v[k - 1] = c_[k] * static_cast<unsigned long>(k);
    return TruncSeries(std::move(v));
  }

  /// Shifts down by k after checking the first k coefficients vanish.
  TruncSeries divide_by_x_power(std::size_t k) const {
    for (std::size_t i = 0; i < k && i < c_.size(); ++i)
      if (!efn::is_zero(c_[i]))
        fail(ErrorKind::InvalidArgument, "series not divisible by the requested power of x");
    if (k >= c_.size()) return {};
    return TruncSeries(std::vector<Rat>(c_.begin() + static_cast<long>(k), c_.end()));
  }

  /// Division by a polynomial with nonzero constant term.
  TruncSeries divide_by(const Poly& d) const {
    if (d.is_zero() || efn::is_zero(d.coeff(0)))
      fail(ErrorKind::InvalidArgument, "series division needs a nonzero constant term");
    std::vector<Rat> q(c_.size());
    Rat inv = 1 / d.coeff(0);
    for (std::size_t n = 0; n < c_.size(); ++n) {
      Rat acc = c_[n];
      for (std::size_t j = 1; j < d.size() && j <= n; ++j) acc -= d.coeff(j) * q[n - j];
      q[n] = acc * inv;
    }
    return TruncSeries(std::move(q));
  }

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    std::vector<Rat> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = a.c_[k] + b.c_[k];
    return TruncSeries(std::move(v));
  }
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    std::vector<Rat> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = a.c_[k] - b.c_[k];
    return TruncSeries(std::move(v));
  }
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    std::vector<Rat> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (efn::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; i + j < n; ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    return TruncSeries(std::move(v));
  }
  friend TruncSeries operator*(const Poly& p, const TruncSeries& s) {
    std::vector<Rat> v(s.order());
    for (std::size_t i = 0; i < p.size() && i < v.size(); ++i) {
      if (efn::is_zero(p.coeff(i))) continue;
      for (std::size_t j = 0; i + j < v.size(); ++j) v[i + j] += p.coeff(i) * s.c_[j];
    }
    return TruncSeries(std::move(v));
  }
  friend TruncSeries operator*(const Rat& r, TruncSeries s) {
    for (auto& c : s.c_) c *= r;
    return s;
  }
  friend bool operator==(const TruncSeries& a, const TruncSeries& b) { return a.c_ == b.c_; }

 private:
  std::vector<Rat> c_;
};

/// Power series of p/q where q may vanish at 0 as long as the quotient is a
/// power series; the input series must carry x_valuation(q) extra terms.
inline TruncSeries series_divide(const TruncSeries& numerator, const Poly& den) {
  std::size_t k = den.x_valuation();
  return numerator.divide_by_x_power(k).divide_by(den.shift_down(k));
}

}  // namespace efn
