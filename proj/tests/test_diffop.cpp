#include <catch_amalgamated.hpp>

#include <random>

#include "efn/diffop.hpp"

using namespace efn;

namespace {

Poly P(std::initializer_list<int> c) {
  std::vector<Rat> v;
  for (int x : c) v.emplace_back(x);
  return Poly(std::move(v));
}

const Poly X = Poly::x();

TruncSeries exp_series(std::size_t k, const Rat& a = 1) {
  std::vector<Rat> v(k);
  Rat c = 1;
  for (std::size_t n = 0; n < k; ++n) {
    v[n] = c;
    c = c * a / Rat(static_cast<long>(n + 1));
  }
  return TruncSeries(v);
}

// J0(x) = sum (-1)^n / (n!)^2 (x/2)^(2n)
TruncSeries j0_series(std::size_t k) {
  std::vector<Rat> v(k);
  Rat c = 1;
  for (std::size_t n = 0; 2 * n < k; ++n) {
    v[2 * n] = c;
    c = -c / (4 * Rat(static_cast<long>((n + 1) * (n + 1))));
  }
  return TruncSeries(v);
}

Poly random_poly(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg), coef(-4, 4);
  std::vector<Rat> v(deg(rng) + 1);
  for (auto& c : v) c = coef(rng);
  return Poly(v);
}

DiffOp random_op(std::mt19937& rng, int max_order, int max_deg) {
  std::uniform_int_distribution<int> ord(0, max_order);
  for (;;) {
    std::vector<Poly> c(ord(rng) + 1);
    for (auto& p : c) p = random_poly(rng, max_deg);
    if (!c.back().is_zero()) return DiffOp::normalize(c);
  }
}

// Counts power-series solutions at alpha by applying L to t^0..t^K and
// solving the resulting linear system, with no use of the local recurrence.
std::size_t brute_force_series_dim(const DiffOp& l, const Rat& alpha, std::size_t k) {
  DiffOp t = l.translate(alpha);
  const std::size_t pad = k + t.order() + t.max_degree() + 4;
  int shift = 0;
  bool first = true;
  for (std::size_t i = 0; i <= t.order(); ++i) {
    if (t.coeff(i).is_zero()) continue;
    int s = static_cast<int>(t.coeff(i).x_valuation()) - static_cast<int>(i);
    if (first || s < shift) shift = s;
    first = false;
  }
  // Rows: coefficients of t^e for e <= k + shift (only c_0..c_k contribute).
  const long rows = static_cast<long>(k) + shift + 1;
  QMatrix m(rows > 0 ? static_cast<std::size_t>(rows) : 0, k + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    TruncSeries basis = TruncSeries::zero(pad);
    basis[j] = 1;
    TruncSeries img = apply(t, basis);
    for (long e = 0; e < rows; ++e) m(static_cast<std::size_t>(e), j) = img[static_cast<std::size_t>(e)];
  }
  return k + 1 - rank(m);
}

}  // namespace

TEST_CASE("normalize examples") {
  CHECK(DiffOp::normalize({X, X * X}).coeffs() == std::vector<Poly>{Poly(1), X});
  DiffOp bessel = DiffOp::normalize({X, Poly(1), X});
  CHECK(bessel.coeffs() == std::vector<Poly>{X, Poly(1), X});
  CHECK(DiffOp::normalize({P({-2, 2}), P({0, -2})}).coeffs() == std::vector<Poly>{P({1, -1}), X});
  CHECK_THROWS_AS(DiffOp::normalize({Poly(), Poly()}), Error);
}

TEST_CASE("normalize is idempotent and preserves the kernel") {
  std::mt19937 rng(1);
  for (int i = 0; i < 20; ++i) {
    DiffOp l = random_op(rng, 3, 3);
    CHECK(DiffOp::normalize(l.coeffs()) == l);
    Poly content = random_poly(rng, 2);
    if (content.is_zero()) continue;
    std::vector<Poly> scaled;
    for (const auto& c : l.coeffs()) scaled.push_back(c * content);
    CHECK(DiffOp::normalize(scaled) == l);
  }
  TruncSeries e = exp_series(20);
  CHECK(apply(DiffOp::normalize({P({-3, -3}), P({3, 3})}), e).is_zero());
}

TEST_CASE("apply examples") {
  TruncSeries out = apply(DiffOp::d_minus(1), exp_series(20));
  CHECK(out.order() == 19);
  CHECK(out.is_zero());
  CHECK(apply(DiffOp::normalize({X, Poly(1), X}), j0_series(30)).is_zero());
  TruncSeries x2 = TruncSeries::from_poly(X * X, 6);
  TruncSeries d = apply_coeffs({Poly(), Poly(1)}, x2);
  CHECK(d[1] == 2);
  CHECK(d[0] == 0);
  CHECK(d[2] == 0);
  CHECK_THROWS_AS(apply(DiffOp::normalize({X, Poly(1), X}), TruncSeries::zero(3)), Error);
}

TEST_CASE("right_divide examples") {
  auto [q1, r1] = right_divide(DiffOp::normalize({0, 0, 1}), DiffOp::normalize({0, 1}));
  CHECK(q1 == RatOp::d_power(1));
  CHECK(r1.is_zero());

  auto [q2, r2] = right_divide(DiffOp::normalize({2, -3, 1}), DiffOp::d_minus(1));
  CHECK(q2 == RatOp({RatFun(-2), RatFun(1)}));
  CHECK(r2.is_zero());

  // ((x-1)D - x) = (x-1)(D-1) - 1
  auto [q3, r3] = right_divide(RatOp({RatFun(-X), RatFun(P({-1, 1}))}), DiffOp::d_minus(1).to_ratop());
  CHECK(q3 == RatOp({RatFun(P({-1, 1}))}));
  CHECK(r3 == RatOp({RatFun(-1)}));
}

TEST_CASE("right_divide reconstructs on random operators") {
  std::mt19937 rng(2);
  for (int i = 0; i < 25; ++i) {
    DiffOp a = random_op(rng, 4, 4), b = random_op(rng, 4, 4);
    auto [q, r] = right_divide(a, b);
    CHECK(q * b.to_ratop() + r == a.to_ratop());
    CHECK(r.order() < static_cast<int>(b.order()));
  }
}

TEST_CASE("lclm examples") {
  DiffOp d1 = DiffOp::d_minus(1), d2 = DiffOp::d_minus(2), d0 = DiffOp::d_minus(0);
  CHECK(lclm(d1, d1) == d1);
  DiffOp l = lclm(d1, d2);
  CHECK(l.coeffs() == std::vector<Poly>{Poly(2), Poly(-3), Poly(1)});
  CHECK(apply(l, exp_series(25)).is_zero());
  CHECK(apply(l, exp_series(25, 2)).is_zero());
  DiffOp l2 = lclm(d0, d1);
  CHECK(l2.coeffs() == std::vector<Poly>{Poly(), Poly(-1), Poly(1)});
  CHECK(apply(l2, TruncSeries::from_poly(Poly(1), 10)).is_zero());
}

TEST_CASE("lclm is right-divisible by both operands") {
  std::mt19937 rng(3);
  for (int i = 0; i < 12; ++i) {
    DiffOp a = random_op(rng, 2, 2), b = random_op(rng, 2, 2);
    DiffOp l = lclm(a, b);
    CHECK(right_divide(l, a).second.is_zero());
    CHECK(right_divide(l, b).second.is_zero());
    CHECK(l.order() <= a.order() + b.order());
  }
}

TEST_CASE("indicial polynomial examples") {
  DiffOp bessel = DiffOp::normalize({X, Poly(1), X});
  CHECK(indicial_polynomial(bessel, 0) == P({0, 0, 1}));
  CHECK(indicial_polynomial(DiffOp::d_minus(1), 0) == X);
  DiffOp l = DiffOp::normalize({-X, P({-1, 1})});
  CHECK(indicial_polynomial(l, 1) == P({-1, 1}));
}

TEST_CASE("singular points and apparent test") {
  DiffOp bessel = DiffOp::normalize({X, Poly(1), X});
  auto sb = singular_points(bessel);
  REQUIRE(sb.size() == 1);
  CHECK(*sb[0].point == 0);
  CHECK(sb[0].classification == SingularityClass::NonApparent);
  CHECK_FALSE(is_apparent(bessel, 0));

  DiffOp l = DiffOp::normalize({-X, P({-1, 1})});
  auto sl = singular_points(l);
  REQUIRE(sl.size() == 1);
  CHECK(*sl[0].point == 1);
  CHECK(sl[0].classification == SingularityClass::Apparent);

  CHECK(singular_points(DiffOp::d_minus(1)).empty());
  CHECK(is_apparent(DiffOp::normalize({Poly(-3), X}), 0));
  CHECK_THROWS_AS(is_apparent(bessel, 1), Error);

  // x^2 + 1 has no rational root
  auto si = singular_points(DiffOp::normalize({Poly(1), P({1, 0, 1})}));
  REQUIRE(si.size() == 1);
  CHECK(!si[0].point);
  CHECK(si[0].classification == SingularityClass::UnclassifiedIrrational);
}

TEST_CASE("singular points are exactly the rational roots of the leading coefficient") {
  std::mt19937 rng(4);
  for (int i = 0; i < 15; ++i) {
    DiffOp l = random_op(rng, 2, 3);
    auto rep = singular_points(l);
    for (const auto& r : rep)
      if (r.point) CHECK(is_zero(l.lead().eval(*r.point)));
    for (int p = -4; p <= 4; ++p) {
      bool listed = false;
      for (const auto& r : rep) listed = listed || (r.point && *r.point == p);
      CHECK(listed == is_zero(l.lead().eval(p)));
    }
  }
}

TEST_CASE("is_apparent agrees with a brute-force local solver") {
  std::mt19937 rng(5);
  std::vector<Rat> alphas{0, 1, make_rat(-1, 2)};
  std::uniform_int_distribution<int> small(-3, 3);
  int checked = 0, apparent = 0;
  for (int trial = 0; trial < 40 && checked < 16; ++trial) {
    Rat a = alphas[trial % 3];
    Poly lin = Poly::linear_root(a);
    DiffOp l;
    switch (trial % 4) {
      case 0: l = DiffOp::normalize({Poly(small(rng)), lin}); break;
      case 1: l = lclm(DiffOp::d_minus(1), DiffOp::normalize({Poly(-std::abs(small(rng))), lin})); break;
      case 2: l = DiffOp::normalize({P({small(rng), small(rng)}), P({small(rng), small(rng)}), lin}); break;
      default: l = DiffOp::normalize({Poly(small(rng)), P({small(rng), small(rng)}), lin * lin}); break;
    }
    if (l.order() == 0 || !is_zero(l.lead().eval(a))) continue;
    std::size_t oracle = brute_force_series_dim(l, a, 14);
    CHECK(is_apparent(l, a) == (oracle == l.order()));
    CHECK(power_series_solution_dim(l, a) == oracle);
    apparent += oracle == l.order();
    ++checked;
  }
  CHECK(checked >= 10);
  CHECK(apparent >= 2);
}

TEST_CASE("certify_zero") {
  DiffOp d1 = DiffOp::d_minus(1);
  CHECK(certify_zero(d1, exp_series(10) - exp_series(10)));
  CHECK_FALSE(certify_zero(d1, exp_series(10)));
  DiffOp l = lclm(d1, DiffOp::d_minus(2));
  TruncSeries s = exp_series(12) + exp_series(12, 2) - exp_series(12) - exp_series(12, 2);
  CHECK(certify_zero(l, s));
  // x D - 3 admits x^3: window must exceed 3 + 1 + order
  DiffOp x3 = DiffOp::normalize({Poly(-3), X});
  CHECK(zero_certification_window(x3) == 6);
  CHECK_THROWS_AS(certify_zero(x3, TruncSeries::zero(5)), Error);
  CHECK(certify_zero(x3, TruncSeries::zero(6)));
}

TEST_CASE("argument scaling and linear-factor composition") {
  DiffOp bessel = DiffOp::normalize({X, Poly(1), X});
  CHECK(bessel.scale(2).coeffs() == std::vector<Poly>{X * Rat(4), Poly(1), X});
  CHECK(bessel.scale(1) == bessel);
  // (D - 1) o (x - 1) annihilates e^x / (x - 1)
  DiffOp c = DiffOp::d_minus(1).compose_linear_factor(1);
  CHECK(c.coeffs() == std::vector<Poly>{P({2, -1}), P({-1, 1})});
}

TEST_CASE("inhomogeneous normalization") {
  InhomEq e = InhomEq::normalize({P({-2, 0}), Poly(2)}, P({2, -2}));
  CHECK(e.op == std::vector<Poly>{Poly(-1), Poly(1)});
  CHECK(e.rhs == P({1, -1}));
  InhomEq f = InhomEq::normalize({X, X * X}, X * X);
  CHECK(f.op == std::vector<Poly>{Poly(1), X});
  CHECK(f.rhs == X);
  CHECK(f.singular_at(0));
}

TEST_CASE("operator formatting") {
  CHECK(DiffOp::normalize({-X, P({-1, 1})}).to_string() == "(x - 1)*D - x");
  CHECK(DiffOp::d_minus(1).to_string() == "D - 1");
  CHECK(DiffOp::normalize({X, Poly(1), X}).to_string() == "x*D^2 + D + x");
}
