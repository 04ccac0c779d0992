#include <catch_amalgamated.hpp>

#include <random>

#include "efn/hermite.hpp"
#include "efn/polymatrix.hpp"
#include "efn/series.hpp"

using namespace efn;

namespace {

Poly P(std::initializer_list<int> c) {
  std::vector<Rat> v;
  for (int x : c) v.emplace_back(x);
  return Poly(std::move(v));
}

Poly random_poly(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg), coef(-5, 5), den(1, 3);
  std::vector<Rat> v(deg(rng) + 1);
  for (auto& c : v) c = make_rat(coef(rng), den(rng));
  return Poly(v);
}

bool reduced(const Rat& r) {
  Int g;
  mpz_gcd(g.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return g == 1 && r.get_den() >= 1;
}

// Dense oracle: solve the Vandermonde-with-derivatives system directly.
Poly dense_hermite(const std::vector<HermiteConstraint>& cs) {
  const std::size_t n = cs.size();
  QMatrix a(n, n);
  std::vector<Rat> rhs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      // d^t/dx^t x^k at point
      if (k < cs[i].derivative_order) continue;
      a(i, k) = falling(Rat(static_cast<long>(k)), cs[i].derivative_order) *
                rat_pow(cs[i].point, k - cs[i].derivative_order);
    }
    rhs.push_back(cs[i].value);
  }
  auto sol = solve_left(a.transpose(), rhs);
  REQUIRE(sol.has_value());
  return Poly(*sol);
}

}  // namespace

TEST_CASE("rationals parse and print canonically") {
  CHECK(format_rat(parse_rat("6/4")) == "3/2");
  CHECK(format_rat(parse_rat("-10/5")) == "-2");
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("1.5"), Error);
}

TEST_CASE("poly_gcd") {
  CHECK(poly_gcd(P({-1, 0, 1}), P({-1, 1})) == P({-1, 1}));
  CHECK(poly_gcd(P({2, 4}), Poly()) == P({2, 4}).monic());
  CHECK(poly_gcd(Poly(), Poly()).is_zero());
  Poly a = P({2, -1, -2, 1}), b = P({2, -3, 1});
  Poly g = poly_gcd(a, b);
  CHECK(g == P({2, -3, 1}));
  CHECK(divides(g, a));
  CHECK(divides(g, b));
}

TEST_CASE("poly_gcd divides both inputs on random data") {
  std::mt19937 rng(7);
  for (int i = 0; i < 30; ++i) {
    Poly c = random_poly(rng, 3);
    Poly a = random_poly(rng, 4) * c, b = random_poly(rng, 4) * c;
    Poly g = poly_gcd(a, b);
    if (a.is_zero() && b.is_zero()) continue;
    CHECK(divides(g, a));
    CHECK(divides(g, b));
    if (!c.is_zero()) CHECK(divides(c, g));
    for (const auto& x : g.coeffs()) CHECK(reduced(x));
  }
}

TEST_CASE("degree of zero is a sentinel") {
  CHECK(Poly().degree() == Poly::kZeroDegree);
  CHECK(Poly(3).degree() == 0);
}

TEST_CASE("rational roots") {
  // (x - 1/2)(x + 3)(x^2 + 1) x
  Poly p = P({-1, 2}) * P({3, 1}) * P({1, 0, 1}) * P({0, 1});
  auto r = rational_roots(p);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == -3);
  CHECK(r[1] == 0);
  CHECK(r[2] == make_rat(1, 2));
  CHECK(rational_roots(P({-2, 0, 1})).empty());
  CHECK(rational_roots(P({-7, 0, 0, 1})).empty());
  auto big = rational_roots(P({-1000003, 1}) * P({5, -7}));
  REQUIRE(big.size() == 2);
  CHECK(big[0] == make_rat(5, 7));
  CHECK(big[1] == 1000003);
}

TEST_CASE("rational functions stay reduced") {
  std::mt19937 rng(11);
  for (int i = 0; i < 25; ++i) {
    Poly d1 = random_poly(rng, 2), d2 = random_poly(rng, 2);
    if (d1.is_zero() || d2.is_zero()) continue;
    RatFun a(random_poly(rng, 3), d1), b(random_poly(rng, 3), d2);
    for (const RatFun& f : {a + b, a - b, a * b}) {
      CHECK(poly_gcd(f.num(), f.den()).degree() <= 0);
      CHECK(f.den().lead() == 1);
      for (const auto& x : f.num().coeffs()) CHECK(reduced(x));
    }
  }
}

TEST_CASE("hermite_interpolate examples") {
  CHECK(hermite_interpolate({{1, 0, 5}}) == Poly(5));
  CHECK(hermite_interpolate({{1, 0, 0}, {1, 1, 1}}) == P({-1, 1}));
  std::vector<HermiteConstraint> cs{{1, 0, 1}, {2, 0, 4}, {2, 1, 4}};
  Poly p = hermite_interpolate(cs);
  CHECK(p == dense_hermite(cs));
  CHECK(p == P({0, 0, 1}));
}

TEST_CASE("hermite_interpolate errors") {
  CHECK_THROWS_MATCHES(hermite_interpolate({{1, 0, 1}, {1, 0, 2}}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.kind() == ErrorKind::DuplicateConstraint; }));
  CHECK_THROWS_MATCHES(hermite_interpolate({{1, 0, 1}, {1, 2, 2}}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::NonPrefixDerivativeOrders;
                       }));
}

TEST_CASE("hermite_interpolate reproduces random constraints") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> v(-9, 9), m(1, 3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<HermiteConstraint> cs;
    for (int pt = 1; pt <= 3; ++pt) {
      Rat a = make_rat(pt * (trial % 2 ? -1 : 1), trial % 3 + 1);
      int k = m(rng);
      for (int t = 0; t < k; ++t) cs.push_back({a, static_cast<unsigned>(t), Rat(v(rng))});
    }
    Poly p = hermite_interpolate(cs);
    CHECK(p.degree() < static_cast<int>(cs.size()));
    for (const auto& c : cs) CHECK(derivative_at(p, c.derivative_order, c.point) == c.value);
    CHECK(p == dense_hermite(cs));
  }
}

TEST_CASE("hnf_with_x_saturation examples") {
  Poly q = 1;
  auto m1 = hnf_with_x_saturation({{RatFun(1), RatFun(0)}, {RatFun(0), RatFun(1)}}, q);
  CHECK(m1.rows == std::vector<PolyRow>{{Poly(1), Poly()}, {Poly(), Poly(1)}});
  CHECK(m1.common_x_power == 0);

  auto m2 = hnf_with_x_saturation({{RatFun(Poly::x()), RatFun(P({0, 0, 1}))}}, q);
  CHECK(m2.rows == std::vector<PolyRow>{{Poly(1), Poly::x()}});

  auto m3 = hnf_with_x_saturation({{RatFun(P({-1, 1})), RatFun(0)}, {RatFun(1), RatFun(0)}}, q);
  REQUIRE(m3.rows.size() == 1);
  CHECK(m3.rows[0] == PolyRow{Poly(1), Poly()});
  // Both generators are polynomial multiples of the basis row.
  for (const RatRow& g : {RatRow{RatFun(P({-1, 1})), RatFun(0)}, RatRow{RatFun(1), RatFun(0)}}) {
    auto c = express_in(m3, g);
    REQUIRE(c.has_value());
    CHECK((*c)[0].is_polynomial());
  }
  CHECK_THROWS_AS(hnf_with_x_saturation({}, q), Error);
}

TEST_CASE("hnf_with_x_saturation membership and idempotence") {
  std::mt19937 rng(5);
  Poly q = P({-1, 1}) * P({2, 1});
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<RatRow> gens;
    for (int g = 0; g < 3; ++g) {
      RatRow r;
      for (int j = 0; j < 3; ++j) {
        Poly den = poly_pow(P({-1, 1}), rng() % 2) * poly_pow(Poly::x(), rng() % 2);
        r.emplace_back(random_poly(rng, 2), den);
      }
      gens.push_back(r);
    }
    auto m = hnf_with_x_saturation(gens, q);
    for (const auto& g : gens) {
      auto c = express_in(m, g);
      REQUIRE(c.has_value());
      // Laurent coefficients: only powers of x in the denominators.
      for (const auto& e : *c) CHECK(e.den().x_valuation() == static_cast<std::size_t>(e.den().degree()));
    }
    std::vector<RatRow> again;
    for (std::size_t i = 0; i < m.rank(); ++i) again.push_back(m.element(i));
    auto m2 = hnf_with_x_saturation(again, q);
    CHECK(m2 == m);
  }
}

TEST_CASE("series division handles x-powers in the denominator") {
  // (x + x^2) / x = 1 + x
  TruncSeries s(std::vector<Rat>{0, 1, 1, 0, 0});
  auto d = series_divide(s, Poly::x());
  CHECK(d.order() == 4);
  CHECK(d[0] == 1);
  CHECK(d[1] == 1);
  CHECK(d[2] == 0);
}
