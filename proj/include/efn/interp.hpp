#pragma once

#include <algorithm>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "efn/hermite.hpp"
#include "efn/linsys.hpp"
#include "efn/minop.hpp"

// Construction of an E-function f with prescribed values f^(t)(a_n) whose
// minimal equations are singular exactly where those values are dependent.

namespace efn {

/// Values xi_{n,t} = values[n][t].function(values[n][t].point).
struct InterpProblem {
  std::vector<Rat> points;
  std::size_t depth = 0;
  std::vector<std::vector<ValueRef>> values;

  std::size_t size() const { return points.size(); }

  void validate() const {
    if (points.empty() || depth == 0) fail(ErrorKind::InvalidArgument, "need at least one point and depth >= 1");
    std::set<Rat> seen;
    for (const Rat& a : points) {
      if (is_zero(a)) fail(ErrorKind::InvalidArgument, "interpolation points must be nonzero");
      if (!seen.insert(a).second) fail(ErrorKind::InvalidArgument, "interpolation points must be distinct");
    }
    if (values.size() != points.size()) fail(ErrorKind::InvalidArgument, "one value row per point is required");
    for (const auto& row : values)
      if (row.size() != depth) fail(ErrorKind::InvalidArgument, "each point needs exactly depth values");
  }
};

/// Smallest positive integer not among the points.
inline Rat default_alpha0(const InterpProblem& p) {
  for (long k = 1;; ++k)
    if (std::find(p.points.begin(), p.points.end(), Rat(k)) == p.points.end()) return Rat(k);
}

/// Prepends a0 with values e^(t+1), realized as exp((t+1)/a0 * x) at a0.
inline InterpProblem augment(const InterpProblem& p, std::optional<Rat> alpha0 = std::nullopt) {
  p.validate();
  Rat a0 = alpha0 ? *alpha0 : default_alpha0(p);
  if (std::find(p.points.begin(), p.points.end(), a0) != p.points.end() || is_zero(a0))
    fail(ErrorKind::InvalidArgument, "augmentation point must be nonzero and unused");
  InterpProblem out;
  out.depth = p.depth;
  out.points.push_back(a0);
  std::vector<ValueRef> row;
  for (std::size_t t = 0; t < p.depth; ++t)
    row.emplace_back(catalog::exp(Rat(static_cast<long>(t + 1)) / a0), a0);
  out.values.push_back(std::move(row));
  out.points.insert(out.points.end(), p.points.begin(), p.points.end());
  out.values.insert(out.values.end(), p.values.begin(), p.values.end());
  return out;
}

/// f_{n,t}(x) = F(p x / a_n), so that f_{n,t}(a_n) = F(p).
inline EFun value_function(const ValueRef& v, const Rat& alpha) {
  return scale_argument(v.function, v.point / alpha);
}

/// Free polynomial module generated by 1 and the f_{n,t}.
struct FunctionModule {
  std::vector<EFun> generators;           // 1, then f_{n,t} row by row
  std::vector<std::size_t> independent;   // generators forming a Q(x)-basis I
  RowSpace space;                         // companion modules of I
  std::vector<RatRow> basis_coords;       // g_l in terms of I
  std::vector<RatRow> basis_rows;         // g_l in `space`
  std::vector<PolyRow> expressions;       // generator k = sum_l Q[k][l] g_l
  RankWitness independence;               // joint witness for I
};

inline std::size_t generator_index(const InterpProblem& p, std::size_t n, std::size_t t) {
  return 1 + n * p.depth + t;
}

namespace detail {

// c with f = c g when both have the same annihilator and proportional seeds.
inline std::optional<Rat> proportional(const EFun& f, const EFun& g) {
  if (!(f.annihilator() == g.annihilator())) return std::nullopt;
  const std::size_t k = std::max(f.seed_count(), g.seed_count());
  std::optional<Rat> c;
  for (std::size_t n = 0; n < k; ++n) {
    Rat a = f.coefficient(n), b = g.coefficient(n);
    if (is_zero(b)) {
      if (!is_zero(a)) return std::nullopt;
      continue;
    }
    if (!c) c = a / b;
    else if (*c != a / b) return std::nullopt;
  }
  return c;
}

}  // namespace detail

inline FunctionModule build_function_module(const InterpProblem& p, const GuessConfig& cfg = {}) {
  FunctionModule fm;
  fm.generators.push_back(catalog::polynomial(Poly(1)));
  for (std::size_t n = 0; n < p.size(); ++n)
    for (std::size_t t = 0; t < p.depth; ++t) fm.generators.push_back(value_function(p.values[n][t], p.points[n]));

  // Q(x)-coordinates of every generator over an independent subset.
  auto [all, all_rows] = ambient_space(fm.generators);
  std::vector<RatRow> ind_rows;
  std::vector<std::vector<RatFun>> coords(fm.generators.size());
  for (std::size_t k = 0; k < fm.generators.size(); ++k) {
    if (fm.generators[k].is_zero_function()) continue;
    std::optional<std::vector<RatFun>> c;
    for (std::size_t j = 0; j < fm.independent.size() && !c; ++j)
      if (auto r = detail::proportional(fm.generators[k], fm.generators[fm.independent[j]])) {
        c = std::vector<RatFun>(fm.independent.size(), RatFun(0));
        (*c)[j] = *r;
      }
    if (!c) {
      Dependence d = decide_dependence(all, ind_rows, all_rows[k], cfg);
      if (d.dependent) c = d.coords;
    }
    if (c) {
      coords[k] = *c;
    } else {
      fm.independent.push_back(k);
      ind_rows.push_back(all_rows[k]);
      coords[k] = unit_row(fm.independent.size(), fm.independent.size() - 1);
    }
  }
  const std::size_t r = fm.independent.size();
  std::vector<RatRow> padded;
  for (auto& c : coords) {
    c.resize(r, RatFun(0));
    padded.push_back(c);
  }
  fm.independence = certify_independent(all, ind_rows, cfg);

  RowModule mod = polynomial_module(padded);
  if (mod.rank() != r) fail(ErrorKind::VerificationFailed, "module rank differs from the number of independent generators");
  for (std::size_t l = 0; l < r; ++l) fm.basis_coords.push_back(mod.element(l));
  for (const auto& c : padded) {
    auto q = express_in(mod, c);
    if (!q) fail(ErrorKind::VerificationFailed, "generator outside its own module");
    PolyRow row;
    for (const auto& e : *q) {
      if (!e.is_polynomial()) fail(ErrorKind::VerificationFailed, "generator expression is not polynomial");
      row.push_back(e.num() * (1 / e.den().lead()));
    }
    fm.expressions.push_back(std::move(row));
  }

  std::vector<EFun> ind;
  for (std::size_t k : fm.independent) ind.push_back(fm.generators[k]);
  auto [space, rows] = ambient_space(ind);
  fm.space = space;
  for (const auto& c : fm.basis_coords) fm.basis_rows.push_back(row_combination(rows, c, space.dim()));
  return fm;
}

/// Derivation-closed extension (g_1..g_M) of the module basis and g' = A g.
struct ClosedBasis {
  std::vector<RatRow> rows;
  RMatrix a;
  std::size_t module_rank = 0;  // m: the first m rows are the module basis
};

inline ClosedBasis derivation_closure(const RowSpace& space, const std::vector<RatRow>& basis,
                                      const GuessConfig& cfg = {}) {
  ClosedBasis out;
  out.rows = basis;
  out.module_rank = basis.size();
  std::vector<std::vector<RatFun>> a_rows;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    RatRow d = space.derivative(out.rows[i]);
    Dependence dep = decide_dependence(space, out.rows, d, cfg);
    if (dep.dependent) {
      a_rows.push_back(dep.coords);
    } else {
      out.rows.push_back(std::move(d));
      a_rows.push_back(unit_row(out.rows.size(), out.rows.size() - 1));
    }
  }
  const std::size_t mm = out.rows.size();
  out.a = RMatrix(mm, mm);
  for (std::size_t i = 0; i < mm; ++i)
    for (std::size_t j = 0; j < a_rows[i].size(); ++j) out.a(i, j) = a_rows[i][j];
  return out;
}

/// Rational coordinates of values in the basis (h_1(a_n), ..., h_M(a_n)).
struct ValueCoordinates {
  std::vector<std::vector<std::vector<Rat>>> xi;  // [n][t]
  std::vector<std::vector<Rat>> one;              // [n]
};

/// Coordinates of generator k at a: Q_k(a) times the first m rows of T(a).
inline std::vector<Rat> generator_coordinates(const PolyRow& q, const PolyMatrix& t, const Rat& a) {
  std::vector<Rat> out(t.cols(), Rat(0));
  for (std::size_t l = 0; l < q.size(); ++l) {
    Rat ql = q[l].eval(a);
    if (is_zero(ql)) continue;
    for (std::size_t j = 0; j < t.cols(); ++j) out[j] += ql * t(l, j).eval(a);
  }
  return out;
}

inline ValueCoordinates value_coordinates(const FunctionModule& fm, const PolyMatrix& t, const InterpProblem& p) {
  ValueCoordinates vc;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const Rat& a = p.points[n];
    vc.one.push_back(generator_coordinates(fm.expressions[0], t, a));
    std::vector<std::vector<Rat>> row;
    for (std::size_t s = 0; s < p.depth; ++s)
      row.push_back(generator_coordinates(fm.expressions[generator_index(p, n, s)], t, a));
    vc.xi.push_back(std::move(row));
  }
  return vc;
}

inline std::size_t rank_of(const std::vector<std::vector<Rat>>& vs) {
  if (vs.empty()) return 0;
  return rank(QMatrix::from_rows(vs));
}

enum class SteinitzCase { OneAdjoined, SpanContainsOne, Dependent };

inline const char* to_string(SteinitzCase c) {
  switch (c) {
    case SteinitzCase::OneAdjoined: return "independent_with_one";
    case SteinitzCase::SpanContainsOne: return "independent_one_in_span";
    case SteinitzCase::Dependent: return "dependent";
  }
  return "?";
}

struct SteinitzResult {
  SteinitzCase kind = SteinitzCase::Dependent;
  std::vector<std::vector<Rat>> targets;  // coordinates of f^(t)(a), t < M
};

/// Extends xi_0..xi_{T-1} to M target vectors by the three exchange cases;
/// completions use the lowest-index standard vectors.
inline SteinitzResult steinitz_complete(const std::vector<std::vector<Rat>>& xi, const std::vector<Rat>& one,
                                        std::size_t m) {
  const std::size_t t = xi.size();
  if (m < t + 1) fail(ErrorKind::VerificationFailed, "closed basis smaller than depth + 1");
  SteinitzResult out;
  out.targets = xi;
  auto with_one = xi;
  with_one.push_back(one);
  auto complete = [&](std::vector<std::vector<Rat>>& fam, const std::vector<std::vector<Rat>>& extra,
                      std::size_t want) {
    for (std::size_t i = 0; i < m && fam.size() < want; ++i) {
      auto trial = fam;
      trial.insert(trial.end(), extra.begin(), extra.end());
      std::size_t before = rank_of(trial);
      std::vector<Rat> e(m, Rat(0));
      e[i] = 1;
      trial.push_back(e);
      if (rank_of(trial) > before) fam.push_back(e);
    }
  };
  if (rank_of(with_one) == t + 1) {
    out.kind = SteinitzCase::OneAdjoined;
    complete(out.targets, {one}, m - 1);
    out.targets.push_back(one);
  } else if (rank_of(xi) == t) {
    out.kind = SteinitzCase::SpanContainsOne;
    complete(out.targets, {}, m);
  } else {
    out.kind = SteinitzCase::Dependent;
    out.targets.resize(m, std::vector<Rat>(m, Rat(0)));
  }
  if (out.targets.size() != m) fail(ErrorKind::VerificationFailed, "exchange completion did not reach size M");
  return out;
}

/// C_0 = I, C_j = C_{j-1}' + C_{j-1} B: h^(j) = C_j h.
inline std::vector<RMatrix> derivative_coordinate_matrices(const RMatrix& b, std::size_t count) {
  std::vector<RMatrix> c{RMatrix::identity(b.rows())};
  while (c.size() < count) c.push_back(entrywise_derivative(c.back()) + c.back() * b);
  return c;
}

inline QMatrix eval_matrix(const RMatrix& m, const Rat& a) {
  QMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).eval(a);
  return out;
}

/// S_1..S_M with sum_i sum_k binom(t,k) S_i^(k)(a_n) h_i^(t-k)(a_n) having
/// coordinates targets[n][t] for every n and t < M.
inline std::vector<Poly> solve_s_constraints(const std::vector<std::vector<std::vector<Rat>>>& targets,
                                             const RMatrix& b, const std::vector<Rat>& points) {
  const std::size_t m = b.rows();
  auto cs = derivative_coordinate_matrices(b, m);
  std::vector<std::vector<HermiteConstraint>> constraints(m);
  for (std::size_t n = 0; n < points.size(); ++n) {
    std::vector<QMatrix> ca;
    for (const auto& c : cs) ca.push_back(eval_matrix(c, points[n]));
    std::vector<std::vector<Rat>> sd;  // sd[k][i] = S_i^(k)(a_n)
    for (std::size_t t = 0; t < m; ++t) {
      std::vector<Rat> v = targets[n][t];
      for (std::size_t k = 0; k < t; ++k) {
        Rat bin(binomial(t, k));
        for (std::size_t i = 0; i < m; ++i) {
          if (is_zero(sd[k][i])) continue;
          Rat w = bin * sd[k][i];
          for (std::size_t l = 0; l < m; ++l) v[l] -= w * ca[t - k](i, l);
        }
      }
      sd.push_back(v);
      for (std::size_t i = 0; i < m; ++i)
        constraints[i].push_back({points[n], static_cast<unsigned>(t), v[i]});
    }
  }
  std::vector<Poly> s;
  for (const auto& c : constraints) s.push_back(hermite_interpolate(c));
  return s;
}

/// Coordinates of f^(t)(a) for f = sum S_i h_i, t < count.
inline std::vector<std::vector<Rat>> derivative_value_coordinates(const std::vector<Poly>& s, const RMatrix& b,
                                                                  const Rat& a, std::size_t count) {
  RatRow v(s.begin(), s.end());
  std::vector<std::vector<Rat>> out;
  for (std::size_t t = 0; t < count; ++t) {
    if (t > 0) v = derive_row(v, b);
    std::vector<Rat> e;
    for (const auto& x : v) e.push_back(x.eval(a));
    out.push_back(std::move(e));
  }
  return out;
}

struct PointVerdict {
  Rat point;
  bool augmented = false;
  SteinitzCase steinitz = SteinitzCase::Dependent;
  std::vector<std::vector<Rat>> targets;  // t < M
  std::vector<Rat> one;
  bool homogeneous_dependent = false;
  bool inhomogeneous_dependent = false;
  bool singular_in_l = false;
  bool singular_in_l0 = false;
};

struct NumericCheck {
  Rat point;
  std::size_t derivative = 0;
  Interval computed, expected;
  bool overlaps = false;
};

struct InterpCertificate {
  InterpProblem problem;  // augmented, a0 first
  Rat alpha0;
  FunctionModule module;
  ClosedBasis closed;
  Desingularization desing;
  std::vector<Poly> s;
  EFun f;
  DiffOp l;
  MinimalityCertificate l_cert;
  InhomEq l0;
  MinimalityCertificate l0_cert;
  std::vector<SingularityReport> l_singularities;
  std::vector<PointVerdict> verdicts;
  std::vector<NumericCheck> numeric;

  std::size_t big_m() const { return closed.rows.size(); }
};

struct InterpOptions {
  std::optional<Rat> alpha0;
  GuessConfig guess;
  std::size_t desing_cap = 64;
  bool numeric = true;
  Rat numeric_tolerance = make_rat(1, 1000000000000L);
  std::size_t threads = 1;
};

namespace detail {

// (L0, P0) with L0(f) = P0 of order M - 1, read off a rational relation
// among f, ..., f^(M-1) and 1 in h-coordinates.
inline std::optional<InhomEq> inhomogeneous_hint(const std::vector<Poly>& s, const RMatrix& b,
                                                 const RatRow& one_row) {
  const std::size_t m = b.rows();
  RatRow v(s.begin(), s.end());
  RMatrix rows(m + 1, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) v = derive_row(v, b);
    rows.set_row(i, v);
  }
  rows.set_row(m, one_row);
  auto ker = left_kernel(rows);
  if (ker.size() != 1) return std::nullopt;
  Poly den = 1;
  for (const auto& e : ker[0]) den = poly_lcm(den, e.den());
  std::vector<Poly> op;
  for (std::size_t i = 0; i < m; ++i) op.push_back(ker[0][i].num() * exact_div(den, ker[0][i].den()));
  Poly rhs = -(ker[0][m].num() * exact_div(den, ker[0][m].den()));
  while (!op.empty() && op.back().is_zero()) op.pop_back();
  if (op.size() != m) return std::nullopt;
  return InhomEq::normalize(op, rhs);
}

// v . h with the annihilator of v in the h-system.
inline EFun h_function(const Desingularization& d, const RowSpace& space, const RatRow& v, std::string label) {
  DiffOp ann = cyclic_annihilator(d.b.a, v);
  if (ann.order() == 0) return EFun().with_label(label);
  RatRow row = row_combination(d.h_rows, v, space.dim());
  TruncSeries s = space.series(row, required_seed_window(ann));
  return EFun(ann, std::vector<Rat>(s.coeffs().begin(), s.coeffs().end()), std::move(label));
}

}  // namespace detail

inline InterpCertificate run_interpolation(const InterpProblem& problem, const InterpOptions& opt = {}) {
  InterpCertificate cert;
  cert.problem = augment(problem, opt.alpha0);
  cert.alpha0 = cert.problem.points[0];
  const InterpProblem& p = cert.problem;
  const GuessConfig& cfg = opt.guess;

  cert.module = build_function_module(p, cfg);
  cert.closed = derivation_closure(cert.module.space, cert.module.basis_rows, cfg);
  cert.desing = desingularize(cert.closed.a, cert.module.space, cert.closed.rows, opt.desing_cap);
  const std::size_t m = cert.big_m();
  const RMatrix& b = cert.desing.b.a;

  ValueCoordinates vc = value_coordinates(cert.module, cert.desing.t.t, p);
  std::vector<std::vector<std::vector<Rat>>> targets;
  for (std::size_t n = 0; n < p.size(); ++n) {
    SteinitzResult st = steinitz_complete(vc.xi[n], vc.one[n], m);
    PointVerdict v;
    v.point = p.points[n];
    v.augmented = n == 0;
    v.steinitz = st.kind;
    v.targets = st.targets;
    v.one = vc.one[n];
    v.homogeneous_dependent = rank_of(vc.xi[n]) < p.depth;
    auto with_one = vc.xi[n];
    with_one.push_back(vc.one[n]);
    v.inhomogeneous_dependent = rank_of(with_one) < p.depth + 1;
    targets.push_back(st.targets);
    cert.verdicts.push_back(std::move(v));
  }
  cert.s = solve_s_constraints(targets, b, p.points);

  RatRow srow(cert.s.begin(), cert.s.end());
  cert.f = detail::h_function(cert.desing, cert.module.space, srow, "f");
  for (std::size_t n = 0; n < p.size(); ++n)
    if (derivative_value_coordinates(cert.s, b, p.points[n], m) != targets[n])
      fail(ErrorKind::VerificationFailed, "interpolated derivatives miss their target coordinates");

  std::tie(cert.l, cert.l_cert) = minimal_homogeneous(cert.f, cfg);
  RatRow one_row;
  {
    PolyRow q = cert.module.expressions[0];
    const auto& t = cert.desing.t.t;
    one_row.assign(m, RatFun(0));
    for (std::size_t l = 0; l < q.size(); ++l)
      for (std::size_t j = 0; j < m; ++j) one_row[j] += RatFun(q[l] * t(l, j));
  }
  auto hint = detail::inhomogeneous_hint(cert.s, b, one_row);
  std::tie(cert.l0, cert.l0_cert) = minimal_inhomogeneous(cert.f, cfg, hint ? &*hint : nullptr, &cert.l);
  cert.l_singularities = singular_points(cert.l);

  const std::size_t mu = cert.l.order(), mu0 = cert.l0.order();
  if (mu != m) fail(ErrorKind::VerificationFailed, "minimal order " + std::to_string(mu) + " differs from M = " + std::to_string(m));
  if (mu0 + 1 != m) fail(ErrorKind::VerificationFailed, "inhomogeneous order is not M - 1");
  if (mu < p.depth + 1) fail(ErrorKind::VerificationFailed, "minimal order below depth + 1");
  for (auto& v : cert.verdicts) {
    v.singular_in_l = is_zero(cert.l.lead().eval(v.point));
    v.singular_in_l0 = cert.l0.singular_at(v.point);
    if (v.singular_in_l != v.homogeneous_dependent)
      fail(ErrorKind::VerificationFailed, "homogeneous singularity verdict disagrees at " + format_rat(v.point));
    if (v.singular_in_l0 != v.inhomogeneous_dependent)
      fail(ErrorKind::VerificationFailed, "inhomogeneous singularity verdict disagrees at " + format_rat(v.point));
  }

  if (opt.numeric) {
    std::vector<EFun> ders{cert.f};
    for (std::size_t t = 1; t < p.depth; ++t) {
      srow = derive_row(srow, b);
      ders.push_back(detail::h_function(cert.desing, cert.module.space, srow, "f'"));
    }
    auto check = [&](std::size_t n, std::size_t t) {
      NumericCheck c;
      c.point = p.points[n];
      c.derivative = t;
      c.computed = eval_numeric(ValueRef(ders[t], c.point), opt.numeric_tolerance);
      c.expected = eval_numeric(p.values[n][t], opt.numeric_tolerance);
      c.overlaps = c.computed.overlaps(c.expected);
      return c;
    };
    // points are independent; results keep (n, t) order
    std::vector<std::future<NumericCheck>> pending;
    for (std::size_t n = 0; n < p.size(); ++n)
      for (std::size_t t = 0; t < p.depth; ++t) {
        if (pending.size() >= std::max<std::size_t>(opt.threads, 1)) {
          cert.numeric.push_back(pending.front().get());
          pending.erase(pending.begin());
        }
        pending.push_back(std::async(opt.threads > 1 ? std::launch::async : std::launch::deferred, check, n, t));
      }
    for (auto& f : pending) cert.numeric.push_back(f.get());
  }
  return cert;
}

}  // namespace efn
