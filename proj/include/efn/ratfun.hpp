#pragma once

#include <string>
#include <utility>

#include "efn/poly.hpp"

namespace efn {

/// Reduced rational function num/den with den monic.
class RatFun {
 public:
  RatFun() : den_(1) {}
  RatFun(const Rat& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFun(int c) : RatFun(Rat(c)) {}            // NOLINT(google-explicit-constructor)
  RatFun(Poly p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  Rat eval(const Rat& at) const {
    Rat d = den_.eval(at);
    if (efn::is_zero(d)) fail(ErrorKind::InvalidArgument, "rational function evaluated at a pole");
    return num_.eval(at) / d;
  }

  RatFun derivative() const {
    return RatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
    return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b) {
    if (a.den_ == b.den_) return RatFun(a.num_ - b.num_, a.den_);
    return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a) {
    RatFun out = a;
    out.num_ = -out.num_;
    return out;
  }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly g1 = poly_gcd(a.num_, b.den_), g2 = poly_gcd(b.num_, a.den_);
    RatFun out;
    out.num_ = exact_div(a.num_, g1) * exact_div(b.num_, g2);
    out.den_ = exact_div(a.den_, g2) * exact_div(b.den_, g1);
    out.normalize_sign();
    return out;
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) fail(ErrorKind::InvalidArgument, "rational function division by zero");
    return a * RatFun(b.den_, b.num_);
  }
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
  friend bool operator==(const RatFun& a, const RatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string to_string() const {
    if (den_.degree() == 0) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
  }

 private:
  void reduce() {
    if (den_.is_zero()) fail(ErrorKind::InvalidArgument, "rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = 1;
      return;
    }
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
    normalize_sign();
  }
  void normalize_sign() {
    if (num_.is_zero()) {
      den_ = 1;
      return;
    }
    Rat l = den_.lead();
    if (l != 1) {
      num_ = num_ * (1 / l);
      den_ = den_ * (1 / l);
    }
  }
  Poly num_;
  Poly den_;
};

inline bool is_zero(const RatFun& f) { return f.is_zero(); }
inline bool is_zero(const Poly& p) { return p.is_zero(); }

}  // namespace efn
