#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "efn/dsl.hpp"
#include "efn/interp.hpp"

// JSON codec. Rationals are strings "p/q", polynomials ascending coefficient
// arrays, matrices row-major arrays. Decoding failures raise SchemaError.

namespace efn {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace io {

[[noreturn]] inline void schema(const std::string& where, const std::string& msg) {
  fail(ErrorKind::SchemaError, where + ": " + msg);
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(where, std::string("missing field '") + key + "'");
  return *it;
}

inline const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array");
  return j;
}

inline bool boolean(const Json& j, const std::string& where) {
  if (!j.is_boolean()) schema(where, "expected a boolean");
  return j.get<bool>();
}

inline std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    schema(where, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

inline std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) schema(where, "expected a string");
  return j.get<std::string>();
}

inline std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }
inline std::string at(const std::string& where, const char* key) { return where + "." + key; }

// ---- scalars and containers

inline Json rat(const Rat& r) { return format_rat(r); }

inline Rat rat(const Json& j, const std::string& where) {
  if (!j.is_string()) schema(where, "rationals must be strings \"p/q\"");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const Error&) {
    schema(where, "malformed rational '" + j.get<std::string>() + "'");
  }
}

inline Json rats(const std::vector<Rat>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(rat(r));
  return a;
}

inline std::vector<Rat> rats(const Json& j, const std::string& where) {
  std::vector<Rat> out;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) out.push_back(rat(j[i], at(where, i)));
  return out;
}

inline Json poly(const Poly& p) { return rats(p.coeffs()); }
inline Poly poly(const Json& j, const std::string& where) { return Poly(rats(j, where)); }

inline Json polys(const std::vector<Poly>& v) {
  Json a = Json::array();
  for (const auto& p : v) a.push_back(poly(p));
  return a;
}

inline std::vector<Poly> polys(const Json& j, const std::string& where) {
  std::vector<Poly> out;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) out.push_back(poly(j[i], at(where, i)));
  return out;
}

inline Json ratfun(const RatFun& f) { return Json{{"num", poly(f.num())}, {"den", poly(f.den())}}; }

inline RatFun ratfun(const Json& j, const std::string& where) {
  Poly den = poly(field(j, "den", where), at(where, "den"));
  if (den.is_zero()) schema(where, "zero denominator");
  return RatFun(poly(field(j, "num", where), at(where, "num")), den);
}

template <class T, class F>
Json matrix(const Matrix<T>& m, F&& enc) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(enc(m(i, k)));
    rows.push_back(std::move(r));
  }
  return rows;
}

template <class T, class F>
Matrix<T> matrix(const Json& j, const std::string& where, F&& dec) {
  const std::size_t n = array(j, where).size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = array(j[i], at(where, i)).size();
    if (i == 0) cols = c;
    else if (c != cols) schema(where, "ragged matrix");
  }
  Matrix<T> m(n, cols);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = dec(j[i][k], at(at(where, i), k));
  return m;
}

inline Json rmatrix(const RMatrix& m) { return matrix(m, [](const RatFun& f) { return ratfun(f); }); }
inline RMatrix rmatrix(const Json& j, const std::string& w) {
  return matrix<RatFun>(j, w, [](const Json& e, const std::string& p) { return ratfun(e, p); });
}
inline Json pmatrix(const PolyMatrix& m) { return matrix(m, [](const Poly& p) { return poly(p); }); }
inline PolyMatrix pmatrix(const Json& j, const std::string& w) {
  return matrix<Poly>(j, w, [](const Json& e, const std::string& p) { return poly(e, p); });
}

inline Json rat_grid(const std::vector<std::vector<Rat>>& g) {
  Json a = Json::array();
  for (const auto& r : g) a.push_back(rats(r));
  return a;
}

inline std::vector<std::vector<Rat>> rat_grid(const Json& j, const std::string& where) {
  std::vector<std::vector<Rat>> out;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) out.push_back(rats(j[i], at(where, i)));
  return out;
}

// ---- library objects

inline Json efun(const EFun& f) {
  return Json{{"label", f.label()}, {"operator", polys(f.annihilator().coeffs())}, {"seeds", rats(f.seeds())}};
}

inline EFun efun(const Json& j, const std::string& where) {
  auto op = polys(field(j, "operator", where), at(where, "operator"));
  auto seeds = rats(field(j, "seeds", where), at(where, "seeds"));
  std::string label = text(field(j, "label", where), at(where, "label"));
  try {
    return EFun(DiffOp::normalize(op), seeds, label);
  } catch (const Error& e) {
    schema(where, std::string("invalid function data: ") + e.what());
  }
}

inline Json rank_witness(const RankWitness& w) {
  return Json{{"columns", w.columns}, {"degree", w.degree}, {"rows", w.rows}, {"prime", std::to_string(w.prime)}};
}

inline RankWitness rank_witness(const Json& j, const std::string& where) {
  RankWitness w;
  w.columns = count(field(j, "columns", where), at(where, "columns"));
  w.degree = static_cast<unsigned>(count(field(j, "degree", where), at(where, "degree")));
  w.rows = count(field(j, "rows", where), at(where, "rows"));
  std::string p = text(field(j, "prime", where), at(where, "prime"));
  try {
    std::size_t used = 0;
    w.prime = std::stoull(p, &used);
    if (used != p.size()) throw std::invalid_argument(p);
  } catch (const std::exception&) {
    schema(at(where, "prime"), "malformed prime");
  }
  return w;
}

inline Json minimality(const MinimalityCertificate& c) {
  Json ex = Json::array();
  for (const auto& w : c.exclusions)
    ex.push_back(Json{{"order", w.order}, {"constant_column", w.constant_column}, {"rank", rank_witness(w.rank)}});
  return Json{{"label", c.label},
              {"operator", polys(c.operator_coeffs)},
              {"rhs", poly(c.rhs)},
              {"inhomogeneous", c.inhomogeneous},
              {"exclusions", ex},
              {"degree_bound", c.degree_bound},
              {"division_remainder_zero", c.division_remainder_zero},
              {"certification_window", c.certification_window}};
}

inline MinimalityCertificate minimality(const Json& j, const std::string& w) {
  MinimalityCertificate c;
  c.label = text(field(j, "label", w), at(w, "label"));
  c.operator_coeffs = polys(field(j, "operator", w), at(w, "operator"));
  c.rhs = poly(field(j, "rhs", w), at(w, "rhs"));
  c.inhomogeneous = boolean(field(j, "inhomogeneous", w), at(w, "inhomogeneous"));
  const Json& ex = array(field(j, "exclusions", w), at(w, "exclusions"));
  for (std::size_t i = 0; i < ex.size(); ++i) {
    std::string p = at(at(w, "exclusions"), i);
    ExclusionWitness e;
    e.order = count(field(ex[i], "order", p), at(p, "order"));
    e.constant_column = boolean(field(ex[i], "constant_column", p), at(p, "constant_column"));
    e.rank = rank_witness(field(ex[i], "rank", p), at(p, "rank"));
    c.exclusions.push_back(e);
  }
  c.degree_bound = static_cast<unsigned>(count(field(j, "degree_bound", w), at(w, "degree_bound")));
  c.division_remainder_zero = boolean(field(j, "division_remainder_zero", w), at(w, "division_remainder_zero"));
  c.certification_window = count(field(j, "certification_window", w), at(w, "certification_window"));
  return c;
}

inline Json singularity(const SingularityReport& r) {
  return Json{{"point", r.point ? rat(*r.point) : Json(nullptr)},
              {"factor", poly(r.factor)},
              {"classification", to_string(r.classification)}};
}

inline Json singularities(const std::vector<SingularityReport>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(singularity(r));
  return a;
}

inline SingularityReport singularity(const Json& j, const std::string& w) {
  SingularityReport r;
  const Json& p = field(j, "point", w);
  if (!p.is_null()) r.point = rat(p, at(w, "point"));
  r.factor = poly(field(j, "factor", w), at(w, "factor"));
  std::string c = text(field(j, "classification", w), at(w, "classification"));
  if (c == "ordinary") r.classification = SingularityClass::Ordinary;
  else if (c == "apparent") r.classification = SingularityClass::Apparent;
  else if (c == "non_apparent") r.classification = SingularityClass::NonApparent;
  else if (c == "unclassified_irrational") r.classification = SingularityClass::UnclassifiedIrrational;
  else schema(at(w, "classification"), "unknown classification '" + c + "'");
  return r;
}

inline std::vector<SingularityReport> singularities(const Json& j, const std::string& w) {
  std::vector<SingularityReport> out;
  for (std::size_t i = 0; i < array(j, w).size(); ++i) out.push_back(singularity(j[i], at(w, i)));
  return out;
}

inline void check_header(const Json& j, const char* kind) {
  if (!j.is_object()) schema("$", "expected an object");
  const Json& v = field(j, "schema_version", "$");
  if (!v.is_number_integer() || v.get<long long>() != kSchemaVersion)
    schema("$.schema_version", "unsupported schema version");
  if (text(field(j, "kind", "$"), "$.kind") != kind) schema("$.kind", std::string("expected '") + kind + "'");
}

inline Json parse_document(const std::string& s) {
  try {
    return Json::parse(s);
  } catch (const Json::parse_error& e) {
    schema("$", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace io

// ---- problem files

struct ValueSpec {
  std::string function;  // canonical expression text
  Rat point;
};

struct ProblemFile {
  std::vector<Rat> points;
  std::size_t depth = 0;
  std::vector<std::vector<ValueSpec>> values;

  InterpProblem to_problem() const {
    InterpProblem p;
    p.points = points;
    p.depth = depth;
    for (const auto& row : values) {
      std::vector<ValueRef> r;
      for (const auto& v : row) r.emplace_back(efun_from_text(v.function), v.point);
      p.values.push_back(std::move(r));
    }
    p.validate();
    return p;
  }
};

inline Json to_json(const ProblemFile& p) {
  Json values = Json::array();
  for (const auto& row : p.values) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(Json{{"function", v.function}, {"point", io::rat(v.point)}});
    values.push_back(std::move(r));
  }
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "problem"},
              {"points", io::rats(p.points)},
              {"depth", p.depth},
              {"values", values}};
}

/// Function texts are parsed and stored canonically; syntax errors surface
/// as ParseError or UnknownBuiltin.
inline ProblemFile problem_from_json(const Json& j) {
  io::check_header(j, "problem");
  ProblemFile p;
  p.points = io::rats(io::field(j, "points", "$"), "$.points");
  p.depth = io::count(io::field(j, "depth", "$"), "$.depth");
  const Json& vs = io::array(io::field(j, "values", "$"), "$.values");
  for (std::size_t n = 0; n < vs.size(); ++n) {
    std::string w = io::at("$.values", n);
    std::vector<ValueSpec> row;
    for (std::size_t t = 0; t < io::array(vs[n], w).size(); ++t) {
      std::string wt = io::at(w, t);
      std::string fn = io::text(io::field(vs[n][t], "function", wt), io::at(wt, "function"));
      Rat pt = io::rat(io::field(vs[n][t], "point", wt), io::at(wt, "point"));
      row.push_back({to_text(*parse_efun(fn)), pt});
    }
    p.values.push_back(std::move(row));
  }
  return p;
}

// ---- linear systems (desing input)

struct SystemFile {
  RMatrix a;
  std::vector<std::string> basis;  // expression texts, may be empty
};

inline SystemFile system_from_json(const Json& j) {
  io::check_header(j, "system");
  SystemFile s;
  s.a = io::rmatrix(io::field(j, "matrix", "$"), "$.matrix");
  if (s.a.rows() == 0 || s.a.rows() != s.a.cols()) io::schema("$.matrix", "matrix must be square and nonempty");
  if (j.contains("basis")) {
    const Json& b = io::array(j["basis"], "$.basis");
    for (std::size_t i = 0; i < b.size(); ++i)
      s.basis.push_back(to_text(*parse_efun(io::text(b[i], io::at("$.basis", i)))));
  }
  return s;
}

inline Json to_json(const SystemFile& s) {
  Json j{{"schema_version", kSchemaVersion}, {"kind", "system"}, {"matrix", io::rmatrix(s.a)}};
  if (!s.basis.empty()) j["basis"] = s.basis;
  return j;
}

// ---- certificates

struct PointRecord {
  Rat point;
  bool augmented = false;
  std::string steinitz;
  std::vector<std::vector<Rat>> xi;       // t < T
  std::vector<Rat> one;
  std::vector<std::vector<Rat>> targets;  // t < M
  bool zero_padding = false;
  bool homogeneous_dependent = false;
  bool inhomogeneous_dependent = false;
  bool singular_in_l = false;
  bool singular_in_l0 = false;
};

struct NumericRecord {
  Rat point;
  std::size_t derivative = 0;
  Interval computed, expected;
  bool overlaps = false;
};

/// Serialized form of an interpolation certificate; everything `verify`
/// needs and nothing else.
struct CertificateFile {
  ProblemFile problem;  // as given, without the augmentation point
  Rat alpha0;
  std::size_t degree_bound = 0;
  std::vector<std::size_t> independent;
  std::vector<PolyRow> expressions;  // per generator of the augmented problem
  std::size_t module_rank = 0;
  std::size_t big_m = 0;
  PolyMatrix t;
  Poly det;
  RMatrix b;
  std::vector<EFun> h;
  std::vector<Poly> s;
  EFun f;
  MinimalityCertificate l;
  MinimalityCertificate l0;
  std::vector<SingularityReport> l_singularities;
  std::vector<PointRecord> points;
  Rat numeric_tolerance;
  std::vector<NumericRecord> numeric;
};

inline CertificateFile make_certificate_file(const ProblemFile& pf, const InterpCertificate& c,
                                             const InterpOptions& opt = {}) {
  CertificateFile out;
  out.problem = pf;
  out.alpha0 = c.alpha0;
  out.degree_bound = opt.guess.degrees.back();
  out.numeric_tolerance = opt.numeric_tolerance;
  out.independent = c.module.independent;
  out.expressions = c.module.expressions;
  out.module_rank = c.closed.module_rank;
  out.big_m = c.big_m();
  out.t = c.desing.t.t;
  out.det = c.desing.t.det;
  out.b = c.desing.b.a;
  out.h = c.desing.h;
  out.s = c.s;
  out.f = c.f;
  out.l = c.l_cert;
  out.l0 = c.l0_cert;
  out.l_singularities = c.l_singularities;
  for (const auto& v : c.verdicts) {
    PointRecord r;
    r.point = v.point;
    r.augmented = v.augmented;
    r.steinitz = to_string(v.steinitz);
    r.xi.assign(v.targets.begin(), v.targets.begin() + static_cast<long>(c.problem.depth));
    r.one = v.one;
    r.targets = v.targets;
    r.zero_padding = v.steinitz == SteinitzCase::Dependent && c.big_m() > c.problem.depth;
    r.homogeneous_dependent = v.homogeneous_dependent;
    r.inhomogeneous_dependent = v.inhomogeneous_dependent;
    r.singular_in_l = v.singular_in_l;
    r.singular_in_l0 = v.singular_in_l0;
    out.points.push_back(std::move(r));
  }
  for (const auto& n : c.numeric) out.numeric.push_back({n.point, n.derivative, n.computed, n.expected, n.overlaps});
  return out;
}

inline Json to_json(const CertificateFile& c) {
  using namespace io;
  Json problem = efn::to_json(c.problem);
  problem.erase("schema_version");
  problem.erase("kind");
  Json pts = Json::array();
  for (const auto& p : c.points)
    pts.push_back(Json{{"point", rat(p.point)},
                       {"augmented", p.augmented},
                       {"steinitz", p.steinitz},
                       {"xi", rat_grid(p.xi)},
                       {"one", rats(p.one)},
                       {"targets", rat_grid(p.targets)},
                       {"padding", p.zero_padding ? Json("zero_vector") : Json(nullptr)},
                       {"homogeneous_dependent", p.homogeneous_dependent},
                       {"inhomogeneous_dependent", p.inhomogeneous_dependent},
                       {"singular_in_L", p.singular_in_l},
                       {"singular_in_L0", p.singular_in_l0}});
  Json num = Json::array();
  for (const auto& n : c.numeric)
    num.push_back(Json{{"point", rat(n.point)},
                       {"derivative", n.derivative},
                       {"computed", Json::array({rat(n.computed.lo), rat(n.computed.hi)})},
                       {"expected", Json::array({rat(n.expected.lo), rat(n.expected.hi)})},
                       {"overlaps", n.overlaps}});
  Json hs = Json::array();
  for (const auto& h : c.h) hs.push_back(efun(h));
  Json exprs = Json::array();
  for (const auto& q : c.expressions) exprs.push_back(polys(q));
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "certificate"},
              {"problem", problem},
              {"alpha0", rat(c.alpha0)},
              {"degree_bound", c.degree_bound},
              {"module",
               Json{{"independent_generators", c.independent},
                    {"rank", c.module_rank},
                    {"expressions", exprs}}},
              {"closed_dimension", c.big_m},
              {"gauge", Json{{"T", pmatrix(c.t)}, {"det", poly(c.det)}}},
              {"system", rmatrix(c.b)},
              {"h", hs},
              {"S", polys(c.s)},
              {"f", efun(c.f)},
              {"homogeneous", minimality(c.l)},
              {"inhomogeneous", minimality(c.l0)},
              {"singularities", singularities(c.l_singularities)},
              {"points", pts},
              {"numeric",
               Json{{"advisory", true}, {"tolerance", rat(c.numeric_tolerance)}, {"checks", num}}}};
}

inline CertificateFile certificate_from_json(const Json& j) {
  using namespace io;
  check_header(j, "certificate");
  CertificateFile c;
  Json problem = field(j, "problem", "$");
  if (!problem.is_object()) schema("$.problem", "expected an object");
  problem["schema_version"] = kSchemaVersion;
  problem["kind"] = "problem";
  c.problem = problem_from_json(problem);
  c.alpha0 = rat(field(j, "alpha0", "$"), "$.alpha0");
  c.degree_bound = count(field(j, "degree_bound", "$"), "$.degree_bound");
  const Json& mod = field(j, "module", "$");
  const Json& ind = array(field(mod, "independent_generators", "$.module"), "$.module.independent_generators");
  for (std::size_t i = 0; i < ind.size(); ++i) c.independent.push_back(count(ind[i], at("$.module.independent_generators", i)));
  c.module_rank = count(field(mod, "rank", "$.module"), "$.module.rank");
  const Json& ex = array(field(mod, "expressions", "$.module"), "$.module.expressions");
  for (std::size_t i = 0; i < ex.size(); ++i) c.expressions.push_back(polys(ex[i], at("$.module.expressions", i)));
  c.big_m = count(field(j, "closed_dimension", "$"), "$.closed_dimension");
  const Json& g = field(j, "gauge", "$");
  c.t = pmatrix(field(g, "T", "$.gauge"), "$.gauge.T");
  c.det = poly(field(g, "det", "$.gauge"), "$.gauge.det");
  c.b = rmatrix(field(j, "system", "$"), "$.system");
  const Json& hs = array(field(j, "h", "$"), "$.h");
  for (std::size_t i = 0; i < hs.size(); ++i) c.h.push_back(efun(hs[i], at("$.h", i)));
  c.s = polys(field(j, "S", "$"), "$.S");
  c.f = efun(field(j, "f", "$"), "$.f");
  c.l = minimality(field(j, "homogeneous", "$"), "$.homogeneous");
  c.l0 = minimality(field(j, "inhomogeneous", "$"), "$.inhomogeneous");
  c.l_singularities = singularities(field(j, "singularities", "$"), "$.singularities");
  const Json& pts = array(field(j, "points", "$"), "$.points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::string w = at("$.points", i);
    const Json& p = pts[i];
    PointRecord r;
    r.point = rat(field(p, "point", w), at(w, "point"));
    r.augmented = boolean(field(p, "augmented", w), at(w, "augmented"));
    r.steinitz = text(field(p, "steinitz", w), at(w, "steinitz"));
    r.xi = rat_grid(field(p, "xi", w), at(w, "xi"));
    r.one = rats(field(p, "one", w), at(w, "one"));
    r.targets = rat_grid(field(p, "targets", w), at(w, "targets"));
    const Json& pad = field(p, "padding", w);
    if (!pad.is_null() && !(pad.is_string() && pad.get<std::string>() == "zero_vector"))
      schema(at(w, "padding"), "expected null or \"zero_vector\"");
    r.zero_padding = !pad.is_null();
    r.homogeneous_dependent = boolean(field(p, "homogeneous_dependent", w), at(w, "homogeneous_dependent"));
    r.inhomogeneous_dependent = boolean(field(p, "inhomogeneous_dependent", w), at(w, "inhomogeneous_dependent"));
    r.singular_in_l = boolean(field(p, "singular_in_L", w), at(w, "singular_in_L"));
    r.singular_in_l0 = boolean(field(p, "singular_in_L0", w), at(w, "singular_in_L0"));
    c.points.push_back(std::move(r));
  }
  const Json& num = field(j, "numeric", "$");
  c.numeric_tolerance = rat(field(num, "tolerance", "$.numeric"), "$.numeric.tolerance");
  const Json& checks = array(field(num, "checks", "$.numeric"), "$.numeric.checks");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::string w = at("$.numeric.checks", i);
    const Json& n = checks[i];
    NumericRecord r;
    r.point = rat(field(n, "point", w), at(w, "point"));
    r.derivative = count(field(n, "derivative", w), at(w, "derivative"));
    auto iv = [&](const char* key) {
      auto v = rats(field(n, key, w), at(w, key));
      if (v.size() != 2) schema(at(w, key), "expected [lo, hi]");
      return Interval{v[0], v[1]};
    };
    r.computed = iv("computed");
    r.expected = iv("expected");
    r.overlaps = boolean(field(n, "overlaps", w), at(w, "overlaps"));
    c.numeric.push_back(r);
  }
  return c;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace efn
