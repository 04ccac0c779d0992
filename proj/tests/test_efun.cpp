#include <catch_amalgamated.hpp>

#include <random>
#include <thread>

#include "efn/efun.hpp"

using namespace efn;

namespace {

const Poly X = Poly::x();

Rat factorial(std::size_t n) {
  Rat r = 1;
  for (std::size_t k = 2; k <= n; ++k) r *= Rat(static_cast<long>(k));
  return r;
}

// Closed-form Taylor coefficients of the catalog functions.
Rat direct_coeff(const std::string& kind, const Rat& a, std::size_t n) {
  Rat an = rat_pow(a, n);
  if (kind == "exp") return an / factorial(n);
  if (kind == "cos") return n % 2 ? Rat(0) : Rat((n / 2) % 2 ? -1 : 1) * an / factorial(n);
  if (kind == "sin") return n % 2 ? Rat(((n - 1) / 2) % 2 ? -1 : 1) * an / factorial(n) : Rat(0);
  // J0(a x) = sum (-1)^k (a x / 2)^(2k) / (k!)^2
  if (n % 2) return 0;
  std::size_t k = n / 2;
  Rat f = factorial(k);
  return Rat(k % 2 ? -1 : 1) * an / (rat_pow(2, n) * f * f);
}

EFun make(const std::string& kind, const Rat& a) {
  if (kind == "exp") return catalog::exp(a);
  if (kind == "cos") return catalog::cos(a);
  if (kind == "sin") return catalog::sin(a);
  return catalog::bessel_j0(a);
}

TruncSeries direct_series(const std::string& kind, const Rat& a, std::size_t k) {
  std::vector<Rat> v(k);
  for (std::size_t n = 0; n < k; ++n) v[n] = direct_coeff(kind, a, n);
  return TruncSeries(v);
}

Rat direct_sum(const std::string& kind, const Rat& a, const Rat& p, std::size_t terms) {
  Rat s = 0;
  for (std::size_t n = 0; n < terms; ++n) s += direct_coeff(kind, a, n) * rat_pow(p, n);
  return s;
}

bool annihilates(const EFun& f, std::size_t k) { return apply(f.annihilator(), f.series(k)).is_zero(); }

}  // namespace

TEST_CASE("coefficient examples") {
  CHECK(catalog::exp(1).coefficient(5) == make_rat(1, 120));
  EFun j0(DiffOp::normalize({X, Poly(1), X}), {1, 0});
  CHECK(j0.coefficient(2) == make_rat(-1, 4));
  CHECK(catalog::cos(1).coefficient(4) == make_rat(1, 24));
  CHECK_THROWS_AS(EFun(DiffOp::normalize({X, Poly(1), X}), {1}), Error);
  CHECK_THROWS_AS(EFun(DiffOp::d_minus(1), {1, 2}), Error);
}

TEST_CASE("catalog functions match closed forms") {
  for (const char* kind : {"exp", "cos", "sin", "j0"})
    for (const Rat& a : {Rat(1), Rat(2), make_rat(1, 2), make_rat(-1, 3)}) {
      EFun f = make(kind, a);
      CHECK(f.series(30) == direct_series(kind, a, 30));
      CHECK(annihilates(f, 60));
    }
}

TEST_CASE("scale_argument examples") {
  EFun e2 = scale_argument(catalog::exp(1), 2);
  CHECK(e2.annihilator() == DiffOp::d_minus(2));
  CHECK(e2.seeds() == std::vector<Rat>{1});
  EFun j = scale_argument(catalog::bessel_j0(1), 2);
  CHECK(j.annihilator().coeffs() == std::vector<Poly>{X * Rat(4), Poly(1), X});
  CHECK(j.coefficient(2) == -1);
  EFun c = catalog::cos(3);
  CHECK(scale_argument(c, 1).annihilator() == c.annihilator());
  CHECK_THROWS_AS(scale_argument(c, 0), Error);
  for (const Rat& a : {Rat(2), make_rat(1, 3), Rat(-5)}) {
    EFun back = scale_argument(scale_argument(c, a), 1 / a);
    CHECK(back.series(30) == c.series(30));
  }
}

TEST_CASE("add, mul and derivative examples") {
  EFun e = catalog::exp(1), e2 = scale_argument(e, 2);
  EFun s = add(e, e2);
  for (std::size_t n = 0; n < 20; ++n) CHECK(s.coefficient(n) == (1 + rat_pow(2, n)) / factorial(n));
  EFun p = mul(e, e);
  CHECK(p.series(40) == e2.series(40));
  CHECK(p.annihilator() == DiffOp::d_minus(2));

  EFun j0 = catalog::bessel_j0(1);
  EFun dj = derivative(j0);
  CHECK(dj.annihilator().order() == 2);
  CHECK(dj.series(40) == j0.series(41).derivative());
  CHECK(annihilates(dj, 60));
}

TEST_CASE("closure operations agree with direct series arithmetic") {
  const std::vector<std::string> kinds{"exp", "cos", "sin", "j0"};
  const std::vector<Rat> scales{1, 2, make_rat(1, 2), make_rat(1, 3)};
  std::mt19937 rng(9);
  for (int trial = 0; trial < 8; ++trial) {
    std::string k1 = kinds[rng() % 4], k2 = kinds[rng() % 4];
    Rat a1 = scales[rng() % 4], a2 = scales[rng() % 4];
    EFun f = make(k1, a1), g = make(k2, a2);
    TruncSeries sf = direct_series(k1, a1, 41), sg = direct_series(k2, a2, 41);
    EFun s = add(f, g), p = mul(f, g);
    CHECK(s.series(41) == sf + sg);
    CHECK(p.series(41) == sf * sg);
    CHECK(annihilates(s, 60));
    CHECK(annihilates(p, 60));
  }
}

TEST_CASE("divide_by_linear") {
  EFun e = catalog::exp(1);
  BasisModule m = companion_module(e);
  ZeroValueWitness w{m, {Poly::linear_root(1)}};
  EFun f = from_module(m, {RatFun(Poly::linear_root(1))}, "(x-1)e^x");
  EFun h = divide_by_linear(f, 1, &w);
  CHECK(h.series(40) == e.series(40));
  CHECK(annihilates(h, 60));
  // multiply back
  CHECK(mul_poly(Poly::linear_root(1), h).series(60) == f.series(60));

  CHECK_THROWS_AS(divide_by_linear(catalog::polynomial(X * X), 1), Error);
  EFun q = divide_by_linear(catalog::polynomial(X * X - Poly(1)), 1);
  CHECK(q.series(5) == TruncSeries::from_poly(X + Poly(1), 5));
  CHECK(divide_by_linear(EFun(), 3).is_zero_function());
  CHECK_THROWS_AS(divide_by_linear(e, 1), Error);
  ZeroValueWitness wrong{m, {Poly::linear_root(2)}};
  CHECK_THROWS_AS(divide_by_linear(f, 2, &wrong), Error);
}

TEST_CASE("eval_numeric intervals contain reference values") {
  const Rat eps = make_rat(1, 1000000000000000L);
  Interval ie = eval_numeric(ValueRef(catalog::exp(1), 1), eps);
  CHECK(ie.hi - ie.lo <= 2 * eps);
  CHECK(ie.contains(direct_sum("exp", 1, 1, 80)));
  CHECK(std::abs(ie.mid().get_d() - 2.718281828459045) < 1e-14);

  Interval ij = eval_numeric(ValueRef(scale_argument(catalog::bessel_j0(1), 2), 1), eps);
  CHECK(ij.contains(direct_sum("j0", 2, 1, 100)));
  CHECK(std::abs(ij.mid().get_d() - 0.2238907791412357) < 1e-14);

  for (const char* kind : {"exp", "cos", "sin", "j0"})
    for (const Rat& p : {make_rat(1, 2), Rat(1), Rat(2)}) {
      Interval iv = eval_numeric(ValueRef(make(kind, 1), p), make_rat(1, 10000000000L));
      CHECK(iv.contains(direct_sum(kind, 1, p, 160)));
    }

  // a polynomial vanishing at the point evaluates exactly
  Interval z = eval_numeric(ValueRef(catalog::polynomial(X * X - Poly(4)), 2), eps);
  CHECK(z.lo == 0);
  CHECK(z.hi == 0);
  CHECK_THROWS_AS(ValueRef(catalog::exp(1), 0), Error);
}

TEST_CASE("concurrent readers observe identical coefficients") {
  EFun f = mul(catalog::bessel_j0(1), catalog::exp(2));
  std::vector<TruncSeries> seen(4);
  std::vector<std::thread> ts;
  for (int i = 0; i < 4; ++i) ts.emplace_back([&, i] { seen[i] = f.series(80 - 5 * i); });
  for (auto& t : ts) t.join();
  for (int i = 1; i < 4; ++i) CHECK(seen[i] == seen[0].truncate(seen[i].order()));
}
