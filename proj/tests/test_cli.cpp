#include <catch_amalgamated.hpp>

#include "efn/serialize.hpp"
#include "efn/verify.hpp"

using namespace efn;

namespace {

const Poly X = Poly::x();

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

bool same_series(const EFun& a, const EFun& b, std::size_t k = 40) { return a.series(k) == b.series(k); }

// x e^x = sum x^n / (n-1)!
TruncSeries x_exp(std::size_t k) {
  TruncSeries s = TruncSeries::zero(k);
  Rat fact = 1;
  for (std::size_t n = 1; n < k; ++n) {
    s[n] = 1 / fact;
    fact *= Rat(static_cast<long>(n));
  }
  return s;
}

}  // namespace

TEST_CASE("parse_efun examples") {
  auto e = parse_efun("exp(1*x)");
  CHECK(e->kind == EFunExpr::Kind::Builtin);
  CHECK(e->name == "exp");
  CHECK(e->scale == 1);

  auto j = parse_efun("besselJ0(2*x)");
  CHECK(j->name == "besselJ0");
  CHECK(j->scale == 2);

  auto s = parse_efun(" sin( -1/3 * x ) ");
  CHECK(s->scale == make_rat(-1, 3));

  // x e^x written as e^x + (x - 1) e^x
  EFun f = efun_from_text("exp(1*x) + (-1 + 1*x) * exp(1*x)");
  CHECK(f.series(40) == x_exp(40));
  CHECK(same_series(f, mul_poly(X, catalog::exp(1))));
}

TEST_CASE("DSL elaboration agrees with direct construction") {
  CHECK(same_series(efun_from_text("D(sin(2*x))"), scale_value(catalog::cos(2), 2)));
  CHECK(same_series(efun_from_text("cos(1*x) * cos(1*x) + sin(1*x) * sin(1*x)"), catalog::polynomial(Poly(1))));
  CHECK(same_series(efun_from_text("x^2 - 2*x + 1"), catalog::polynomial((X - Poly(1)) * (X - Poly(1)))));
  CHECK(same_series(efun_from_text("-exp(1/2*x)"), scale_value(catalog::exp(make_rat(1, 2)), -1)));
  // J0 through its operator: x y'' + y' + x y = 0
  CHECK(same_series(efun_from_text("raw([[0, 1], [1], [0, 1]], [1, 0])"), catalog::bessel_j0(1)));
}

TEST_CASE("DSL errors") {
  CHECK(kind_of([] { parse_efun("foo(1*x)"); }) == ErrorKind::UnknownBuiltin);
  CHECK(kind_of([] { parse_efun("exp(1*x"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_efun("exp(0*x)"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_efun("exp(1/0*x)"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_efun("exp(1*x) +"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_efun("exp(1*y)"); }) == ErrorKind::ParseError);
  CHECK(message_of([] { parse_efun("exp(1*x) +\n  cos(1*x) $"); }).find("line 2, column 12") != std::string::npos);
  CHECK_THROWS_AS(efun_from_text("raw([[1], [0, 1]], [])"), Error);
}

TEST_CASE("canonical text is a fixed point") {
  for (const char* src : {"exp(1*x) + (-1 + 1*x) * exp(1*x)", "D(besselJ0(2*x))*x^3", "-(sin(1/2*x) - 3)",
                          "raw([[0,1],[1],[0,1]],[1,0]) * exp(-1*x)", "x", "(x - 1)*(x + 1)"}) {
    std::string once = to_text(*parse_efun(src));
    CHECK(to_text(*parse_efun(once)) == once);
    CHECK(same_series(efun_from_text(src), efun_from_text(once)));
  }
}

TEST_CASE("JSON scalars are exact strings") {
  CHECK(io::rat(make_rat(-3, 6)) == "-1/2");
  CHECK(io::rat(Json("10/4"), "$") == make_rat(5, 2));
  CHECK(kind_of([] { io::rat(Json(0.5), "$"); }) == ErrorKind::SchemaError);
  CHECK(kind_of([] { io::rat(Json("1.5"), "$"); }) == ErrorKind::SchemaError);
  CHECK(kind_of([] { io::rat(Json("1/0"), "$"); }) == ErrorKind::SchemaError);
  Poly p(std::vector<Rat>{1, 0, make_rat(2, 3)});
  CHECK(io::poly(p) == Json::array({"1", "0", "2/3"}));
  CHECK(io::poly(io::poly(p), "$") == p);
  RatFun f(X, X - Poly(1));
  CHECK(io::ratfun(io::ratfun(f), "$") == f);
  CHECK(kind_of([] { io::pmatrix(Json::array({Json::array({Json::array()}), Json::array()}), "$"); }) ==
        ErrorKind::SchemaError);
}

TEST_CASE("problem files round-trip") {
  Json j = Json::parse(R"js({"schema_version": 1, "kind": "problem", "points": ["1", "2"], "depth": 1,
    "values": [[{"function": "exp( 1*x )", "point": "1"}], [{"function": "besselJ0(2*x)", "point": "2"}]]})js");
  ProblemFile p = problem_from_json(j);
  CHECK(p.values[0][0].function == "exp(1*x)");
  Json once = to_json(p);
  CHECK(to_json(problem_from_json(once)) == once);
  CHECK(p.to_problem().values[1][0].point == 2);

  Json bad = j;
  bad["depth"] = 1.0;
  CHECK(kind_of([&] { problem_from_json(bad); }) == ErrorKind::SchemaError);
  bad = j;
  bad["points"][0] = 1;
  CHECK(kind_of([&] { problem_from_json(bad); }) == ErrorKind::SchemaError);
  bad = j;
  bad["schema_version"] = 2;
  CHECK(kind_of([&] { problem_from_json(bad); }) == ErrorKind::SchemaError);
  bad = j;
  bad.erase("values");
  CHECK(kind_of([&] { problem_from_json(bad); }) == ErrorKind::SchemaError);
  CHECK(kind_of([] { io::parse_document("{\"kind\": "); }) == ErrorKind::SchemaError);
}

TEST_CASE("certificates round-trip, replay and reject tampering") {
  ProblemFile pf;
  pf.points = {Rat(1)};
  pf.depth = 1;
  pf.values = {{{"exp(1*x)", Rat(1)}}};
  InterpOptions opt;
  auto cert = run_interpolation(pf.to_problem(), opt);
  Json j = to_json(make_certificate_file(pf, cert, opt));

  SECTION("determinism and round trip") {
    auto again = run_interpolation(pf.to_problem(), opt);
    CHECK(dump(to_json(make_certificate_file(pf, again, opt))) == dump(j));
    CHECK(to_json(certificate_from_json(j)) == j);
  }
  SECTION("replay passes") {
    VerifyReport rep = verify_certificate(certificate_from_json(j));
    for (const auto& c : rep.checks) INFO(c.name << ": " << c.detail);
    CHECK(rep.ok());
  }
  SECTION("perturbed coordinate fails") {
    Json t = j;
    t["points"][1]["xi"][0][0] = "7/3";
    CHECK(!verify_certificate(certificate_from_json(t)).ok());
  }
  SECTION("perturbed S fails") {
    Json t = j;
    t["S"][0].push_back("1");
    CHECK(!verify_certificate(certificate_from_json(t)).ok());
  }
  SECTION("flipped verdict fails") {
    Json t = j;
    t["points"][1]["singular_in_L"] = true;
    CHECK(!verify_certificate(certificate_from_json(t)).ok());
  }
  SECTION("weakened witness fails") {
    Json t = j;
    t["homogeneous"]["exclusions"][0]["rank"]["rows"] = 3;
    CHECK(!verify_certificate(certificate_from_json(t)).ok());
  }
  SECTION("float in a load-bearing field is a schema error") {
    Json t = j;
    t["points"][1]["targets"][0][0] = 0.0;
    CHECK(kind_of([&] { certificate_from_json(t); }) == ErrorKind::SchemaError);
  }
}

TEST_CASE("system files") {
  Json j = Json::parse(R"js({"schema_version": 1, "kind": "system",
    "matrix": [[{"num": ["0", "1"], "den": ["-1", "1"]}]], "basis": ["(x - 1) * exp(1*x)"]})js");
  SystemFile s = system_from_json(j);
  CHECK(s.a(0, 0) == RatFun(X, X - Poly(1)));
  CHECK(to_json(system_from_json(to_json(s))) == to_json(s));
  j["matrix"] = Json::array({Json::array({Json{{"num", Json::array({"1"})}, {"den", Json::array()}}})});
  CHECK(kind_of([&] { system_from_json(j); }) == ErrorKind::SchemaError);
}
