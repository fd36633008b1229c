#include <doctest.h>

#include "ctverify/ct_engine.hpp"
#include "ctverify/identity.hpp"

using namespace ctv;

namespace {

CTExpression make(std::vector<std::string> vars, std::vector<Factor> factors, std::map<std::string, long> res) {
  CTExpression e;
  e.vars = vars;
  e.elim_order.assign(vars.rbegin(), vars.rend());
  e.factors = std::move(factors);
  e.residue_exponents = std::move(res);
  return e;
}

EngineOptions exact() {
  EngineOptions o;
  o.mode = Mode::Exact;
  return o;
}

EngineOptions interp(Arithmetic a) {
  EngineOptions o;
  o.mode = Mode::Interpolated;
  o.arithmetic = a;
  return o;
}

// Replaces the delta factor by the iota_{dominant} expansion of (v - w)^(-k-1).
CTExpression expand_delta(const CTExpression& e, bool v_dominant) {
  CTExpression out = e;
  out.factors.clear();
  for (const auto& f : e.factors) {
    const auto* d = std::get_if<DeltaDeriv>(&f);
    if (!d) {
      out.factors.push_back(f);
      continue;
    }
    auto n = normalize_negative_power(d->v, d->w, -(d->order + 1), v_dominant ? d->v : d->w);
    out.scale *= n.sign;
    out.factors.emplace_back(n.mono);
    out.factors.emplace_back(n.geom);
  }
  return out;
}

}  // namespace

TEST_CASE("bounds: single factor window") {
  auto e = make({"x"}, {OnePlus{"x", 1, 0}}, {{"x", 0}});
  auto b = propagate_bounds(e);
  CHECK_FALSE(b.identically_zero);
  CHECK(b.windows.at("x") == Window{0, 0});
}

TEST_CASE("bounds: Dyson n=2 windows") {
  auto b = propagate_bounds(dyson_expression(2, 1));
  CHECK(b.windows.at("x0") == Window{-1, 1});
  CHECK(b.windows.at("x1") == Window{-1, 1});
  CHECK(b.t_degree_bound == 0);
}

TEST_CASE("bounds: A1 windows are finite and extraction is stable under slack") {
  const auto c = build_case(CaseId::A1, 2, 1);
  auto b = propagate_bounds(c.lhs[0]);
  for (const auto& [v, w] : b.windows) {
    CHECK(w.lo <= w.hi);
    CHECK(w.hi - w.lo < 1000);
  }
  auto base = constant_term(c.lhs[0], exact()).value;
  auto wide = exact();
  wide.window_slack = 5;
  CHECK(constant_term(c.lhs[0], wide).value == base);
  for (long t = 0; t <= 3; ++t) CHECK(evaluate_at(c.lhs[0], Rat(t), 5) == base(Rat(t)));
}

TEST_CASE("bounds: opposing geometric factors are rejected") {
  auto e = make({"x", "y"}, {GeomInv{"x", "y", 1}, GeomInv{"y", "x", 1}}, {{"x", 0}, {"y", 0}});
  CHECK_THROWS_AS(propagate_bounds(e), WindowError);
}

TEST_CASE("bounds: empty slot means identically zero") {
  // coefficient of x^-1 in a polynomial
  auto e = make({"x"}, {OnePlus{"x", 1, 0}}, {{"x", -1}});
  CHECK(propagate_bounds(e).identically_zero);
  CHECK(constant_term(e).value.is_zero());
}

TEST_CASE("validation") {
  auto dup = make({"x", "x"}, {}, {});
  CHECK_THROWS_AS(dup.validate(), Error);
  auto unknown = make({"x"}, {Monomial{"y", 1}}, {});
  CHECK_THROWS_AS(unknown.validate(), Error);
  auto negdiff = make({"x", "y"}, {Diff{"x", "y", -2}}, {});
  CHECK_THROWS_AS(negdiff.validate(), Error);
  auto twodelta = make({"x", "y"}, {DeltaDeriv{"x", "y", 0}, DeltaDeriv{"x", "y", 1}}, {});
  twodelta.elim_order = {"y", "x"};
  CHECK_THROWS_AS(twodelta.validate(), Error);
  auto order = make({"x", "y"}, {DeltaDeriv{"x", "y", 0}}, {});
  order.elim_order = {"x", "y"};
  CHECK_THROWS_AS(order.validate(), Error);
  auto perm = make({"x", "y"}, {}, {});
  perm.elim_order = {"x"};
  CHECK_THROWS_AS(perm.validate(), Error);
}

TEST_CASE("constant term of (1+x)^t / x is t") {
  auto e = make({"x"}, {OnePlus{"x", 1, 0}, Monomial{"x", -1}}, {{"x", 0}});
  CHECK(evaluate_at(e, Rat(7)) == 7);
  CHECK(constant_term(e).value == RatPoly::x());
  CHECK(constant_term(e, exact()).value == RatPoly::x());
}

TEST_CASE("Dyson constant terms") {
  for (auto [n, p] : {std::pair{2L, 1L}, {3L, 1L}, {2L, 2L}, {3L, 2L}, {4L, 1L}}) {
    CAPTURE(n);
    CAPTURE(p);
    auto v = constant_term(dyson_expression(n, p), exact()).value;
    CHECK(v == RatPoly(Rat(dyson_closed_form(n, p))));
    CHECK(dense_oracle(dyson_expression(n, p), Rat(0)) == Rat(dyson_closed_form(n, p)));
  }
  CHECK(dyson_closed_form(3, 2) == 90);
}

TEST_CASE("exact, rational-interpolated and modular-interpolated modes agree") {
  for (CaseId id : {CaseId::A1, CaseId::A2, CaseId::H, CaseId::Ftilde}) {
    CAPTURE(to_string(id));
    const auto c = build_case(id, 2, 1);
    for (const auto& e : c.lhs) {
      auto ex = constant_term(e, exact()).value;
      CHECK(constant_term(e, interp(Arithmetic::Rational)).value == ex);
      CHECK(constant_term(e, interp(Arithmetic::Modular)).value == ex);
      auto par = interp(Arithmetic::Modular);
      par.jobs = 3;
      CHECK(constant_term(e, par).value == ex);
    }
  }
}

TEST_CASE("dense oracle matches the sparse path") {
  const auto a5 = build_case(CaseId::A5, 2, 1);
  auto v = constant_term(a5.lhs[0], exact()).value;
  CHECK(evaluate_at(a5.lhs[0], Rat(3)) == v(Rat(3)));
  // A4 and A5 overflow the dense cap; the widened sparse path stands in for it
  const auto a4 = build_case(CaseId::A4, 2, 1);
  auto w = constant_term(a4.lhs[0]).value;
  for (long t = 0; t <= 3; ++t) {
    CAPTURE(t);
    CHECK(evaluate_at(a4.lhs[0], Rat(t), 5) == w(Rat(t)));
  }
  CHECK_THROWS_AS(dense_oracle(a4.lhs[0], Rat(0)), OracleCapError);
}

TEST_CASE("delta reduction equals the difference of the two expansions") {
  // small case: Res_x Res_y x^-2 y^-3 (1+x)^t (1+y)^(t+1) d/dx (y^-1 delta(x/y))
  auto e = make({"x", "y"},
                {OnePlus{"x", 1, 0}, OnePlus{"y", 1, 1}, Monomial{"x", -2}, Monomial{"y", -3},
                 DeltaDeriv{"x", "y", 1}},
                {{"x", -1}, {"y", -1}});
  e.elim_order = {"y", "x"};
  auto lhs = constant_term(e, exact()).value;
  for (long t = 0; t <= 4; ++t) CHECK(dense_oracle(e, Rat(t)) == lhs(Rat(t)));
  auto rhs = constant_term(expand_delta(e, true), exact()).value -
             constant_term(expand_delta(e, false), exact()).value;
  CHECK(lhs == rhs);
  CHECK_FALSE(lhs.is_zero());

  const auto a4 = build_case(CaseId::A4, 2, 1);
  auto d = constant_term(a4.lhs[0]).value;
  auto diff = constant_term(expand_delta(a4.lhs[0], true)).value -
              constant_term(expand_delta(a4.lhs[0], false)).value;
  CHECK(d == diff);
}

TEST_CASE("an undersized degree bound is detected") {
  auto e = make({"x"}, {OnePlus{"x", 1, 0}}, {{"x", 2}});
  auto o = interp(Arithmetic::Rational);
  o.degree_bound_override = 1;
  CHECK_THROWS_AS(constant_term(e, o), DegreeBoundError);
  o.degree_bound_override = 2;
  CHECK(constant_term(e, o).value == binom_poly(1, 0, 2));
}

TEST_CASE("rational reconstruction") {
  auto r = rational_reconstruct(Int(34), Int(101));
  REQUIRE(r.has_value());
  CHECK(*r == make_rat(1, 3));
  const Int m("1000000000000000003");
  // -22/7 mod m
  Int inv;
  mpz_invert(inv.get_mpz_t(), Int(7).get_mpz_t(), m.get_mpz_t());
  Int a = (Int(m - 22) * inv) % m;
  auto q = rational_reconstruct(a, m);
  REQUIRE(q.has_value());
  CHECK(*q == make_rat(-22, 7));
}

TEST_CASE("mode parsing") {
  CHECK(parse_mode("exact") == Mode::Exact);
  CHECK(parse_mode("interp") == Mode::Interpolated);
  CHECK(parse_mode("interpolated") == Mode::Interpolated);
  CHECK_THROWS_AS(parse_mode("fast"), Error);
}
