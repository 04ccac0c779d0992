#pragma once

#include <functional>
#include <string>
#include <vector>

#include "efn/serialize.hpp"

// Replays an interpolation certificate from its serialized data alone.
// Function identities are compared on series to `order`; minimality and
// relation checks go through the same exact routines as the pipeline.

namespace efn {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }
};

namespace detail {

// den * (sum_j m_ij y_j) with den the row's denominator lcm.
inline TruncSeries cleared_row(const RMatrix& m, std::size_t i, const std::vector<TruncSeries>& y, Poly& den,
                               std::size_t k) {
  den = 1;
  for (std::size_t j = 0; j < m.cols(); ++j) den = poly_lcm(den, m(i, j).den());
  TruncSeries acc = TruncSeries::zero(k);
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!m(i, j).is_zero()) acc = acc + m(i, j).num() * exact_div(den, m(i, j).den()) * y[j].truncate(k);
  return acc;
}

inline TruncSeries poly_combination(const std::vector<Poly>& c, const std::vector<TruncSeries>& y, std::size_t k) {
  TruncSeries acc = TruncSeries::zero(k);
  for (std::size_t j = 0; j < c.size(); ++j)
    if (!c[j].is_zero()) acc = acc + c[j] * y[j].truncate(k);
  return acc;
}

}  // namespace detail

inline VerifyReport verify_certificate(const CertificateFile& c, std::size_t order = 60) {
  VerifyReport rep;
  auto run = [&](const std::string& name, const std::function<std::string()>& body) {
    VerifyCheck v{name, false, ""};
    try {
      v.detail = body();
      v.passed = v.detail.empty();
    } catch (const Error& e) {
      v.detail = std::string(to_string(e.kind())) + ": " + e.what();
    }
    rep.checks.push_back(std::move(v));
    return rep.checks.back().passed;
  };

  const std::size_t m = c.big_m, mm = c.module_rank;
  InterpProblem aug;
  bool shapes = run("shapes", [&]() -> std::string {
    aug = augment(c.problem.to_problem(), c.alpha0);
    const std::size_t gens = 1 + aug.size() * aug.depth;
    if (m == 0 || mm == 0 || mm > m) return "module rank and closed dimension are inconsistent";
    if (c.expressions.size() != gens) return "one expression per generator is required";
    for (const auto& q : c.expressions)
      if (q.size() != mm) return "expression length differs from the module rank";
    if (c.t.rows() != m || c.t.cols() != m || c.b.rows() != m || c.b.cols() != m) return "T and B must be M x M";
    if (c.h.size() != m || c.s.size() != m) return "h and S must have M entries";
    if (c.points.size() != aug.size()) return "one record per augmented point is required";
    for (std::size_t n = 0; n < aug.size(); ++n) {
      const auto& p = c.points[n];
      if (p.point != aug.points[n] || p.augmented != (n == 0)) return "point records out of order";
      if (p.xi.size() != aug.depth || p.targets.size() != m || p.one.size() != m) return "coordinate shape";
      for (const auto& v : p.xi)
        if (v.size() != m) return "coordinate shape";
      for (const auto& v : p.targets)
        if (v.size() != m) return "coordinate shape";
    }
    return "";
  });
  if (!shapes) return rep;

  run("gauge determinant", [&]() -> std::string {
    Poly d = poly_determinant(c.t);
    if (d.is_zero()) return "det T is zero";
    if (d != c.det) return "recorded det T differs from the recomputed one";
    return "";
  });
  run("system is Laurent", [&]() -> std::string {
    if (!is_laurent(c.b)) return "B has a pole outside 0";
    return "";
  });

  std::vector<TruncSeries> hs;
  for (const auto& h : c.h) hs.push_back(h.series(order + 1));
  run("h' = B h", [&]() -> std::string {
    for (std::size_t i = 0; i < m; ++i) {
      Poly den;
      TruncSeries rhs = detail::cleared_row(c.b, i, hs, den, order);
      if (!(den * hs[i].derivative().truncate(order) - rhs).is_zero())
        return "row " + std::to_string(i) + " fails";
    }
    return "";
  });

  run("generators = Q T h", [&]() -> std::string {
    std::vector<EFun> gens{catalog::polynomial(Poly(1))};
    for (std::size_t n = 0; n < aug.size(); ++n)
      for (std::size_t t = 0; t < aug.depth; ++t) gens.push_back(value_function(aug.values[n][t], aug.points[n]));
    for (std::size_t k = 0; k < gens.size(); ++k) {
      std::vector<Poly> coords(m);
      for (std::size_t l = 0; l < mm; ++l)
        for (std::size_t j = 0; j < m; ++j) coords[j] += c.expressions[k][l] * c.t(l, j);
      if (!(detail::poly_combination(coords, hs, order) - gens[k].series(order)).is_zero())
        return "generator " + std::to_string(k) + " differs from its expression";
    }
    return "";
  });

  run("value coordinates", [&]() -> std::string {
    for (std::size_t n = 0; n < aug.size(); ++n) {
      const auto& p = c.points[n];
      if (generator_coordinates(c.expressions[0], c.t, p.point) != p.one) return "coordinates of 1 at point " + std::to_string(n);
      for (std::size_t t = 0; t < aug.depth; ++t)
        if (generator_coordinates(c.expressions[generator_index(aug, n, t)], c.t, p.point) != p.xi[t])
          return "coordinates of value (" + std::to_string(n) + ", " + std::to_string(t) + ")";
    }
    return "";
  });

  run("exchange completion", [&]() -> std::string {
    for (const auto& p : c.points) {
      SteinitzResult st = steinitz_complete(p.xi, p.one, m);
      if (to_string(st.kind) != p.steinitz) return "case label differs at " + format_rat(p.point);
      if (st.targets != p.targets) return "targets differ at " + format_rat(p.point);
      if (p.zero_padding != (st.kind == SteinitzCase::Dependent && m > aug.depth)) return "padding flag";
    }
    return "";
  });

  run("interpolated derivative coordinates", [&]() -> std::string {
    for (const auto& p : c.points)
      if (derivative_value_coordinates(c.s, c.b, p.point, m) != p.targets)
        return "f^(t) coordinates miss the targets at " + format_rat(p.point);
    return "";
  });

  run("f = S h", [&]() -> std::string {
    if (!(detail::poly_combination(c.s, hs, order) - c.f.series(order)).is_zero()) return "series differ";
    return "";
  });

  auto check_min = [&](const MinimalityCertificate& mc, bool inhom) -> std::string {
    if (mc.inhomogeneous != inhom) return "certificate kind";
    if (mc.degree_bound != c.degree_bound) return "degree bound differs from the certificate's";
    if (!check_witnesses(c.f, mc)) return "witness replay failed";
    if (!inhom) {
      DiffOp l = DiffOp::normalize(mc.operator_coeffs);
      if (l.coeffs() != mc.operator_coeffs) return "operator not normalized";
      if (!right_divide(c.f.annihilator(), l).second.is_zero()) return "annihilator not right-divisible";
    }
    return "";
  };
  run("minimal homogeneous equation", [&] { return check_min(c.l, false); });
  run("minimal inhomogeneous equation", [&] { return check_min(c.l0, true); });

  const std::size_t mu = c.l.operator_coeffs.empty() ? 0 : c.l.operator_coeffs.size() - 1;
  const std::size_t mu0 = c.l0.operator_coeffs.empty() ? 0 : c.l0.operator_coeffs.size() - 1;
  run("orders", [&]() -> std::string {
    if (mu != m) return "mu != M";
    if (mu0 + 1 != m) return "mu0 != M - 1";
    if (mu < aug.depth + 1) return "mu < T + 1";
    return "";
  });

  run("singular points", [&]() -> std::string {
    auto s = singular_points(DiffOp::normalize(c.l.operator_coeffs));
    if (s.size() != c.l_singularities.size()) return "count differs";
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i].point != c.l_singularities[i].point || s[i].factor != c.l_singularities[i].factor ||
          s[i].classification != c.l_singularities[i].classification)
        return "entry " + std::to_string(i) + " differs";
    return "";
  });

  run("verdicts", [&]() -> std::string {
    const Poly& lead = c.l.operator_coeffs.back();
    const Poly& lead0 = c.l0.operator_coeffs.back();
    for (const auto& p : c.points) {
      auto with_one = p.xi;
      with_one.push_back(p.one);
      const std::string at = " at " + format_rat(p.point);
      if (p.homogeneous_dependent != (rank_of(p.xi) < aug.depth)) return "homogeneous dependence" + at;
      if (p.inhomogeneous_dependent != (rank_of(with_one) < aug.depth + 1)) return "inhomogeneous dependence" + at;
      if (p.singular_in_l != is_zero(lead.eval(p.point))) return "singular in L" + at;
      if (p.singular_in_l0 != is_zero(lead0.eval(p.point))) return "singular in L0" + at;
      if (p.singular_in_l != p.homogeneous_dependent) return "homogeneous equivalence" + at;
      if (p.singular_in_l0 != p.inhomogeneous_dependent) return "inhomogeneous equivalence" + at;
    }
    if (c.points[0].singular_in_l || c.points[0].singular_in_l0) return "augmentation point is singular";
    return "";
  });
  return rep;
}

}  // namespace efn
