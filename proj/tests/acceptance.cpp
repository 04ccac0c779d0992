// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <unistd.h>
#include <sys/wait.h>

#include "efn/serialize.hpp"
#include "efn/verify.hpp"

using namespace efn;

namespace {

const Poly X = Poly::x();

struct Outcome {
  bool ok = true;
  std::string note;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

int failures = 0;
std::map<int, std::string> lines;  // printed in criterion order

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.note = std::string("exception: ") + e.what();
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.ok && s > limit_s) {
    out.ok = false;
    out.note = "time limit exceeded";
  }
  if (!out.ok) ++failures;
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.2fs)", s);
  lines[id] = std::string(out.ok ? "PASS " : "FAIL ") + std::to_string(id) + " " + title + buf +
              (out.note.empty() ? "" : ": " + out.note);
}

InterpProblem problem(std::vector<Rat> points, std::size_t depth, std::vector<std::vector<ValueRef>> values) {
  InterpProblem p;
  p.points = std::move(points);
  p.depth = depth;
  p.values = std::move(values);
  return p;
}

InterpOptions tight_options() {
  InterpOptions opt;
  opt.numeric_tolerance = make_rat(1, 10000000000000L);  // 1e-13
  return opt;
}

// Upper bound on |computed - expected| from two overlapping enclosures.
Rat numeric_gap(const NumericCheck& c) {
  if (!c.overlaps) return Rat(1);
  return std::max(c.computed.hi, c.expected.hi) - std::min(c.computed.lo, c.expected.lo);
}

// Desingularization contract on a pipeline-generated system.
void check_pipeline_system(Outcome& o, const InterpCertificate& c) {
  const std::size_t m = c.big_m(), k = 60;
  auto sing = singularities(c.desing.b);
  o.require(sing.irrational_factor.degree() <= 0, "B has irrational poles");
  for (const Rat& a : sing.points) o.require(is_zero(a), "B has a pole at " + format_rat(a));
  o.require(!c.desing.t.det.is_zero(), "det T = 0");
  for (std::size_t i = 0; i < m; ++i) {
    TruncSeries acc = TruncSeries::zero(k);
    for (std::size_t j = 0; j < m; ++j) acc = acc + c.desing.t.t(i, j) * c.desing.h[j].series(k);
    o.require((c.module.space.series(c.closed.rows[i], k) - acc).is_zero(), "g != T h on series");
  }
}

// Exact coordinate fidelity plus advisory numeric agreement.
void check_fidelity(Outcome& o, const InterpCertificate& c, const Rat& tol) {
  for (const auto& v : c.verdicts)
    o.require(derivative_value_coordinates(c.s, c.desing.b.a, v.point, c.big_m()) == v.targets,
              "coordinates miss targets at " + format_rat(v.point));
  o.require(!c.numeric.empty(), "no numeric checks");
  for (const auto& n : c.numeric) o.require(numeric_gap(n) <= tol, "numeric gap at " + format_rat(n.point));
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(EFN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  std::vector<InterpCertificate> runs;

  criterion(1, "(x-1)e^x: minimal operator and apparent singularity at 1", 1.0, [](Outcome& o) {
    EFun f = efun_from_text("(-1 + 1*x) * exp(1*x)");
    DiffOp l = minimal_homogeneous(f).first;
    o.require(l == DiffOp::normalize({-X, X - Poly(1)}), "operator is " + l.to_string());
    auto s = singular_points(l);
    o.require(s.size() == 1 && s[0].point && *s[0].point == 1, "singular set is not {1}");
    o.require(!s.empty() && s[0].classification == SingularityClass::Apparent, "1 not apparent");
  });

  criterion(2, "Bessel operator: singular set {0}, non-apparent", 1.0, [](Outcome& o) {
    DiffOp l = DiffOp::normalize({X, Poly(1), X});
    auto s = singular_points(l);
    o.require(s.size() == 1 && s[0].point && is_zero(*s[0].point), "singular set is not {0}");
    o.require(!is_apparent(l, Rat(0)), "0 classified apparent");
  });

  criterion(3, "closure operations match series arithmetic on 20 pairs", 30.0, [](Outcome& o) {
    std::vector<EFun> cat;
    for (const Rat& a : {Rat(1), Rat(2), make_rat(1, 2), make_rat(1, 3)})
      for (EFun f : {catalog::exp(a), catalog::cos(a), catalog::sin(a), catalog::bessel_j0(a)}) cat.push_back(f);
    const std::size_t k = 50;
    for (std::size_t i = 0; i < 20; ++i) {
      const EFun& f = cat[i % cat.size()];
      const EFun& g = cat[(7 * i + 3) % cat.size()];
      TruncSeries fs = f.series(k), gs = g.series(k);
      o.require(add(f, g).series(k) == fs + gs, "add differs for " + f.label() + ", " + g.label());
      o.require(mul(f, g).series(k) == fs * gs, "mul differs for " + f.label() + ", " + g.label());
    }
  });

  criterion(4, "minimality: right division and rank witnesses below the minimal order", 60.0, [](Outcome& o) {
    EFun e = catalog::exp(1);
    std::vector<EFun> suite{e,
                            mul(catalog::polynomial(X - Poly(1)), e),
                            add(e, catalog::polynomial(X)),
                            catalog::cos(1),
                            catalog::sin(2),
                            catalog::bessel_j0(1),
                            catalog::bessel_j0(2),
                            mul(e, catalog::cos(1)),
                            catalog::polynomial(X * X),
                            add(e, catalog::exp(2))};
    for (const auto& f : suite) {
      auto [l, cert] = minimal_homogeneous(f);
      o.require(right_divide(f.annihilator(), l).second.is_zero(), "remainder nonzero for " + f.label());
      o.require(cert.exclusions.size() == l.order(), "missing witnesses for " + f.label());
      o.require(check_witnesses(f, cert), "witness replay failed for " + f.label());
    }
  });

  criterion(6, "J0(2) at 1: mu = M >= 2, 1 regular, 0 non-apparent, numeric 1e-12", 120.0, [&](Outcome& o) {
    auto c = run_interpolation(problem({1}, 1, {{ValueRef(catalog::bessel_j0(2), 1)}}), tight_options());
    o.require(c.l.order() == c.big_m() && c.big_m() >= 2, "mu != M or M < 2");
    o.require(!c.verdicts[1].singular_in_l, "1 singular in L");
    bool zero = false;
    for (const auto& r : c.l_singularities)
      if (r.point && is_zero(*r.point)) zero = r.classification == SingularityClass::NonApparent;
    o.require(zero && !is_apparent(c.l, Rat(0)), "0 not a non-apparent singularity");
    for (const auto& n : c.numeric)
      if (n.point == 1 && n.derivative == 0)
        o.require(numeric_gap(n) <= make_rat(1, 1000000000000L), "|f(1) - J0(2)| bound above 1e-12");
    runs.push_back(std::move(c));
  });

  criterion(7, "stress instance: verdicts at 1 and 2 in both equations", 120.0, [&](Outcome& o) {
    EFun e = catalog::exp(1);
    auto c = run_interpolation(problem({1, 2}, 2,
                                       {{ValueRef(e, 1), ValueRef(scale_value(e, 2), 1)},
                                        {ValueRef(e, 2), ValueRef(catalog::polynomial(Poly(1)), 2)}}),
                               tight_options());
    const auto& a1 = c.verdicts[1];
    const auto& a2 = c.verdicts[2];
    o.require(a1.point == 1 && a2.point == 2, "point order");
    o.require(a1.singular_in_l && a1.homogeneous_dependent, "1 not singular in L");
    o.require(a1.singular_in_l0 && a1.inhomogeneous_dependent, "1 not singular in L0");
    o.require(!a2.singular_in_l && !a2.homogeneous_dependent, "2 singular in L");
    o.require(a2.singular_in_l0 && a2.inhomogeneous_dependent, "2 not singular in L0");
    runs.push_back(std::move(c));
  });

  // runs after the pipeline criteria so that their systems are covered
  criterion(5, "desingularization contract", 60.0, [&](Outcome& o) {
    LinSystem s{RMatrix::from_rows({{RatFun(X, X - Poly(1))}}),
                std::vector<EFun>{mul(catalog::polynomial(X - Poly(1)), catalog::exp(1))}};
    Desingularization d = desingularize(s);
    o.require(d.t.t(0, 0) == X - Poly(1), "T != [x - 1]");
    o.require(d.b.a == RMatrix::from_rows({{RatFun(1)}}), "B != [[1]]");
    o.require(d.h.size() == 1 && d.h[0].series(40) == catalog::exp(1).series(40), "h != exp");
    o.require(!runs.empty(), "no pipeline systems");
    for (const auto& c : runs) check_pipeline_system(o, c);
  });

  criterion(8, "interpolation fidelity: exact coordinates, numeric 1e-10", 120.0, [&](Outcome& o) {
    auto c = run_interpolation(
        problem({1}, 2, {{ValueRef(catalog::exp(1), 1), ValueRef(scale_value(catalog::exp(1), 2), 1)}}),
        tight_options());
    runs.push_back(std::move(c));
    for (const auto& r : runs) check_fidelity(o, r, make_rat(1, 10000000000L));
  });

  criterion(9, "CLI: certificate verifies, tampering exits 1, malformed JSON exits 2", 10.0, [](Outcome& o) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("efn_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::string prob = (dir / "problem.json").string(), cert = (dir / "cert.json").string();
    std::string bad = (dir / "tampered.json").string(), broken = (dir / "broken.json").string();
    std::ofstream(prob) << R"js({"schema_version": 1, "kind": "problem", "points": ["1"], "depth": 1,
      "values": [[{"function": "exp(1*x)", "point": "1"}]]})js";
    o.require(run_cli("interp " + prob + " -o " + cert) == 0, "interp failed");
    o.require(run_cli("verify " + cert) == 0, "verify rejected a valid certificate");
    Json j = Json::parse(std::ifstream(cert));
    j["points"][1]["xi"][0][0] = "12345/7";
    std::ofstream(bad) << j.dump();
    o.require(run_cli("verify " + bad) == 1, "tampered certificate not rejected with exit 1");
    std::ofstream(broken) << "{\"schema_version\": 1, \"kind\": ";
    o.require(run_cli("verify " + broken) == 2, "malformed JSON not rejected with exit 2");
    fs::remove_all(dir);
  });

  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%s\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
  return failures ? 1 : 0;
}
