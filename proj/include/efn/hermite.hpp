#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "efn/poly.hpp"

namespace efn {

struct HermiteConstraint {
  Rat point;
  unsigned derivative_order = 0;
  Rat value;
};

/// The unique polynomial of degree < constraints.size() with
/// p^(t)(point) = value for every constraint. Each point's local Taylor
/// polynomial is glued to the others by Chinese remaindering.
inline Poly hermite_interpolate(const std::vector<HermiteConstraint>& constraints) {
  std::map<Rat, std::map<unsigned, Rat>> by_point;
  for (const auto& c : constraints) {
    auto& slot = by_point[c.point];
    if (!slot.emplace(c.derivative_order, c.value).second)
      fail(ErrorKind::DuplicateConstraint,
           "duplicate constraint at point " + format_rat(c.point) + " order " +
               std::to_string(c.derivative_order));
  }
  Poly acc;      // interpolant so far
  Poly modulus = 1;  // product of (x - a)^m over processed points
  for (const auto& [a, orders] : by_point) {
    unsigned expect = 0;
    for (const auto& [t, v] : orders) {
      if (t != expect)
        fail(ErrorKind::NonPrefixDerivativeOrders,
             "derivative orders at " + format_rat(a) + " do not form a prefix 0..k");
      ++expect;
    }
    const unsigned m = expect;
    // Local target: sum_t v_t / t! (x - a)^t, reduced to a polynomial in x.
    Poly local;
    Poly lin = Poly::linear_root(a);
    Poly power = 1;
    Rat fact = 1;
    for (unsigned t = 0; t < m; ++t) {
      if (t > 0) fact *= t;
      local += power * (orders.at(t) / fact);
      power *= lin;
    }
    Poly local_mod = power;  // (x - a)^m
    if (modulus.degree() == 0) {
      acc = local;
      modulus = local_mod;
      continue;
    }
    auto [g, s, t] = poly_xgcd(modulus, local_mod);
    (void)t;
    // acc + modulus * ((local - acc) * s mod local_mod)
    Poly corr = ((local - acc) * s) % local_mod;
    acc = acc + modulus * corr;
    modulus = modulus * local_mod;
  }
  return acc;
}

/// t-th derivative of p evaluated at a.
inline Rat derivative_at(Poly p, unsigned t, const Rat& a) {
  for (unsigned k = 0; k < t; ++k) p = p.derivative();
  return p.eval(a);
}

}  // namespace efn
