#include <random>

#include <doctest.h>

#include "ctverify/ratpoly.hpp"

using namespace ctv;

namespace {

RatPoly P(std::initializer_list<long> c) {
  std::vector<Rat> v;
  for (long x : c) v.emplace_back(x);
  return RatPoly(v);
}

RatPoly random_poly(std::mt19937_64& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<long> num(-20, 20);
  std::uniform_int_distribution<long> den(1, 7);
  std::vector<Rat> c;
  for (int i = deg(rng); i >= 0; --i) c.push_back(make_rat(num(rng), den(rng)));
  return RatPoly(c);
}

}  // namespace

TEST_CASE("rationals stay canonical") {
  Rat r = make_rat(6, -4);
  CHECK(r.get_num() == -3);
  CHECK(r.get_den() == 2);
  CHECK(parse_rat("10/4") == make_rat(5, 2));
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("x"), Error);
}

TEST_CASE("zero polynomial has no degree") {
  RatPoly z;
  CHECK(z.is_zero());
  CHECK_FALSE(z.degree().has_value());
  CHECK(z.degree() < RatPoly(1).degree());
  CHECK(RatPoly(std::vector<Rat>{Rat(1), Rat(0), Rat(0)}).degree() == 0u);
}

TEST_CASE("binom_poly") {
  CHECK(binom_poly(1, 0, 0) == RatPoly(1));
  CHECK(binom_poly(1, 0, 2) == RatPoly({Rat(0), make_rat(-1, 2), make_rat(1, 2)}));
  CHECK(binom_poly(-2, 4, 1) == P({4, -2}));
  // C(t + 1/2, 2) at t = 3 is C(7/2, 2) = 35/8
  CHECK(binom_poly(1, make_rat(1, 2), 2)(Rat(3)) == make_rat(35, 8));
}

TEST_CASE("binom_rat") {
  CHECK(binom_rat(Rat(5), 2) == 10);
  CHECK(binom_rat(Rat(-3), 2) == 6);
  CHECK(binom_rat(make_rat(1, 2), 2) == make_rat(-1, 8));
  CHECK(binom_rat(Rat(2), 3) == 0);
}

TEST_CASE("poly_divide") {
  auto d = poly_divide(P({-1, 0, 1}), P({-1, 1}));
  CHECK(d.quotient == P({1, 1}));
  CHECK(d.remainder.is_zero());
  d = poly_divide(P({0, 0, 1}), P({-1, 1}));
  CHECK(d.quotient == P({1, 1}));
  CHECK(d.remainder == RatPoly(1));
  d = poly_divide(RatPoly(), P({7, 0, 0, 1}));
  CHECK(d.quotient.is_zero());
  CHECK(d.remainder.is_zero());
  CHECK_THROWS_AS(poly_divide(P({1}), RatPoly()), Error);
}

TEST_CASE("poly_gcd") {
  CHECK(poly_gcd(P({-1, 0, 1}), P({-1, 1})) == P({-1, 1}));
  CHECK(poly_gcd(P({107, 0, 4}), RatPoly(1)) == RatPoly(1));
  CHECK(poly_gcd(P({-30, -2, 1}), P({320, 0, 9})) == RatPoly(1));
  CHECK(poly_gcd(P({0, 0, 2}), RatPoly()) == P({0, 0, 1}));
  CHECK_THROWS_AS(poly_gcd(RatPoly(), RatPoly()), Error);
}

TEST_CASE("interpolate") {
  std::vector<InterpolationNode> sq{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(2), Rat(4)}};
  CHECK(interpolate(sq) == P({0, 0, 1}));
  std::vector<InterpolationNode> one{{Rat(0), Rat(5)}};
  CHECK(interpolate(one) == RatPoly(5));
  std::vector<InterpolationNode> dup{{Rat(1), Rat(0)}, {Rat(2), Rat(1)}, {Rat(1), Rat(3)}};
  try {
    (void)interpolate(dup);
    FAIL("duplicate abscissae accepted");
  } catch (const InterpolationError& e) {
    CHECK(e.first == 0);
    CHECK(e.second == 2);
  }
}

TEST_CASE("primitive_normalize") {
  auto a = primitive_normalize(P({2, 2}));
  CHECK(a.primitive == P({1, 1}));
  CHECK(a.scale == 2);
  auto b = primitive_normalize(RatPoly({Rat(0), make_rat(-2, 3), make_rat(8, 3)}));
  CHECK(b.primitive == P({0, -1, 4}));
  CHECK(b.scale == make_rat(2, 3));
  auto c = primitive_normalize(P({107, 0, 4}));
  CHECK(c.primitive == P({107, 0, 4}));
  CHECK(c.scale == 1);
  auto d = primitive_normalize(P({-3, -6}));
  CHECK(d.primitive == P({1, 2}));
  CHECK(d.scale == -3);
}

TEST_CASE("to_string") {
  CHECK(P({107, 0, 4}).to_string() == "4*t^2 + 107");
  CHECK(RatPoly().to_string() == "0");
}

TEST_CASE("property: ring operations agree with evaluation") {
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<long> pt(-9, 9);
  for (int iter = 0; iter < 200; ++iter) {
    RatPoly f = random_poly(rng, 6);
    RatPoly g = random_poly(rng, 4);
    Rat x = make_rat(pt(rng), 1 + (iter % 5));
    CHECK((f + g)(x) == f(x) + g(x));
    CHECK((f - g)(x) == f(x) - g(x));
    CHECK((f * g)(x) == f(x) * g(x));
    CHECK(f.compose(g)(x) == f(g(x)));
    if (!g.is_zero()) {
      auto d = poly_divide(f, g);
      CHECK(d.quotient * g + d.remainder == f);
      CHECK(d.remainder.degree() < g.degree());
      CHECK(poly_divide(f * g, g).remainder.is_zero());
    }
  }
}

TEST_CASE("property: gcd divides both and interpolation round-trips") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 60; ++iter) {
    RatPoly a = random_poly(rng, 3);
    RatPoly b = random_poly(rng, 3);
    RatPoly c = random_poly(rng, 2);
    if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
    RatPoly g = poly_gcd(a * c, b * c);
    CHECK(poly_divide(a * c, g).remainder.is_zero());
    CHECK(poly_divide(b * c, g).remainder.is_zero());
    CHECK(poly_divide(g, poly_gcd(c, c)).remainder.is_zero());
    CHECK(g.leading() == 1);

    std::vector<InterpolationNode> nodes;
    const std::size_t n = a.degree().value_or(0) + 1;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back({make_rat(static_cast<long>(i) * 3 - 4, 2), a(make_rat(static_cast<long>(i) * 3 - 4, 2))});
    CHECK(interpolate(nodes) == a);
  }
}
