#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "efn/serialize.hpp"
#include "efn/verify.hpp"

using namespace efn;

namespace {

constexpr int kModuleError = 1;
constexpr int kSchemaError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

Json operator_json(const std::vector<Poly>& c) {
  return Json{{"coefficients", io::polys(c)}, {"text", format_operator(c)}};
}

struct Limits {
  unsigned max_degree = 0;
  std::size_t trunc = 0;
  GuessConfig config() const {
    GuessConfig c = GuessConfig::with_max_degree(max_degree);
    c.max_trunc = trunc;
    return c;
  }
};

Json cmd_minop(const std::string& expr, const Limits& lim) {
  EFun f = efun_from_text(expr);
  GuessConfig cfg = lim.config();
  auto [l, lc] = minimal_homogeneous(f, cfg);
  auto [l0, l0c] = minimal_inhomogeneous(f, cfg, nullptr, &l);
  Json inh = operator_json(l0.op);
  inh["rhs"] = io::poly(l0.rhs);
  inh["certificate"] = io::minimality(l0c);
  Json hom = operator_json(l.coeffs());
  hom["certificate"] = io::minimality(lc);
  return Json{{"function", f.label()}, {"homogeneous", hom}, {"inhomogeneous", inh}};
}

Json cmd_sing(const std::string& expr, const Limits& lim) {
  EFun f = efun_from_text(expr);
  DiffOp l = minimal_homogeneous(f, lim.config()).first;
  return Json{{"function", f.label()}, {"operator", operator_json(l.coeffs())},
              {"singularities", io::singularities(singular_points(l))}};
}

Json cmd_desing(const std::string& path, std::size_t cap) {
  SystemFile sf = system_from_json(io::parse_document(read_file(path)));
  LinSystem s{sf.a, std::nullopt};
  if (!sf.basis.empty()) {
    std::vector<EFun> fs;
    for (const auto& t : sf.basis) fs.push_back(efun_from_text(t));
    if (fs.size() != s.dim()) fail(ErrorKind::BasisInvalid, "basis size does not match the matrix");
    s.basis = fs;
  }
  Desingularization d = desingularize(s, cap);
  Json hs = Json::array();
  for (const auto& h : d.h) hs.push_back(io::efun(h));
  auto sing = singularities(d.b);
  return Json{{"T", io::pmatrix(d.t.t)},
              {"det", io::poly(d.t.det)},
              {"B", io::rmatrix(d.b.a)},
              {"h", hs},
              {"rounds", d.rounds},
              {"singularities_of_B", io::rats(sing.points)}};
}

std::string cmd_interp(const std::string& path, const std::optional<std::string>& alpha0, const Limits& lim,
                       std::size_t threads) {
  ProblemFile pf = problem_from_json(io::parse_document(read_file(path)));
  InterpOptions opt;
  opt.guess = lim.config();
  opt.threads = threads;
  if (alpha0) opt.alpha0 = parse_rat(*alpha0);
  InterpCertificate c = run_interpolation(pf.to_problem(), opt);
  return dump(to_json(make_certificate_file(pf, c, opt)));
}

int cmd_verify(const std::string& path) {
  CertificateFile cf = certificate_from_json(io::parse_document(read_file(path)));
  VerifyReport rep = verify_certificate(cf);
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json j{{"check", c.name}, {"passed", c.passed}};
    if (!c.passed) j["detail"] = c.detail;
    checks.push_back(j);
  }
  std::cout << dump(Json{{"ok", rep.ok()}, {"checks", checks}});
  return rep.ok() ? 0 : kModuleError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact construction and certification of E-functions with prescribed values"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t threads = 1;
  app.add_option("--threads", threads, "Worker threads for independent per-point work")->check(CLI::PositiveNumber);

  Limits lim;
  auto add_limits = [&](CLI::App* c) {
    c->add_option("--max-degree", lim.max_degree, "Largest coefficient degree searched and excluded");
    c->add_option("--trunc-order", lim.trunc, "Cap on series truncation orders (also EFN_MAX_TRUNC)");
  };

  std::string expr, input, output;
  std::optional<std::string> alpha0;
  std::size_t cap = 64;

  auto* minop = app.add_subcommand("minop", "Minimal homogeneous and inhomogeneous equations");
  minop->add_option("expr", expr, "Function expression")->required();
  add_limits(minop);

  auto* sing = app.add_subcommand("sing", "Singular points of the minimal equation");
  sing->add_option("expr", expr, "Function expression")->required();
  add_limits(sing);

  auto* desing = app.add_subcommand("desing", "Desingularize a first-order system");
  desing->add_option("system", input, "System JSON")->required();
  desing->add_option("--cap", cap, "Saturation round limit");

  auto* interp = app.add_subcommand("interp", "Construct an interpolating E-function with certificate");
  interp->add_option("problem", input, "Problem JSON")->required();
  interp->add_option("-o,--output", output, "Certificate path (default stdout)");
  interp->add_option("--alpha0", alpha0, "Augmentation point");
  add_limits(interp);

  auto* verify = app.add_subcommand("verify", "Replay the checks of a certificate");
  verify->add_option("certificate", input, "Certificate JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*minop) std::cout << dump(cmd_minop(expr, lim));
    else if (*sing) std::cout << dump(cmd_sing(expr, lim));
    else if (*desing) std::cout << dump(cmd_desing(input, cap));
    else if (*interp) write_output(output, cmd_interp(input, alpha0, lim, threads));
    else if (*verify) return cmd_verify(input);
  } catch (const Error& e) {
    std::cout << dump(Json{{"error", to_string(e.kind())}, {"message", e.what()}});
    return e.kind() == ErrorKind::SchemaError ? kSchemaError : kModuleError;
  }
  return 0;
}
