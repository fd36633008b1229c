#include <fstream>
#include <sstream>

#include <doctest.h>

#include "ctverify/zhu.hpp"

using namespace ctv;
using namespace ctv::zhu;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CTVERIFY_GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GoldenPoly {
  std::string name;
  long m;
  long p;
  RatPoly value;
};

std::vector<GoldenPoly> golden_polys() {
  std::vector<GoldenPoly> out;
  std::istringstream in(slurp("zhu_polys.txt"));
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    GoldenPoly g;
    ls >> g.name >> g.m >> g.p;
    if (g.name == "phi") continue;
    std::vector<Rat> c;
    std::string tok;
    while (ls >> tok) c.push_back(parse_rat(tok));
    g.value = RatPoly(c);
    out.push_back(g);
  }
  return out;
}

}  // namespace

TEST_CASE("h_weight") {
  for (long p = 1; p <= 5; ++p) CHECK(h_weight(Rat(1), 1, p) == 0);
  CHECK(h_weight(Rat(2), 1, 1) == make_rat(1, 4));
  CHECK(h_weight(make_rat(7, 2), 1, 1) == make_rat(25, 16));  // both factors are i - 1 at j = p = 1
  CHECK_THROWS_AS(h_weight(Rat(1), 1, 0), Error);
}

TEST_CASE("f_p") {
  CHECK(f_p(1) == make_rat(-8, 3) * RatPoly::x() * RatPoly::linear(1, make_rat(-1, 4)));
  for (long p = 1; p <= 4; ++p) {
    const RatPoly f = f_p(p);
    CHECK(f.degree() == static_cast<std::size_t>(3 * p - 1));
    for (long i = 1; i <= 3 * p - 1; ++i) CHECK(f(h_weight(Rat(i), 1, p)) == 0);
  }
  // (-1)^2 8^5 2! 4! ... = 8^5 * 24 / (7! 5! 2!)
  CHECK(f_p(2).leading() == Rat(32768 * 24) / Rat(5040L * 120 * 2));
}

TEST_CASE("ell_p, g_p, v_p") {
  auto roots_of = [](const RatPoly& f, std::vector<Rat> rs) {
    for (const auto& r : rs) CHECK(f(r) == 0);
    CHECK(f.degree() == rs.size());
  };
  roots_of(ell_p(1), {h_weight(Rat(3), 1, 1), h_weight(make_rat(5, 2), 1, 1), h_weight(make_rat(3, 2), 1, 1)});
  for (long p = 1; p <= 3; ++p) CHECK(g_p(2, p) == ell_p(p));
  CHECK(g_p(3, 1) != ell_p(1));
  CHECK(g_p(3, 1)(h_weight(Rat(1), 4, 1)) == 0);
  roots_of(v_p(3, 2), {h_weight(Rat(1), 4, 2), h_weight(Rat(2), 4, 2)});
  CHECK(v_p(2, 3).leading() == 1);
}

TEST_CASE("interpolants satisfy their conditions") {
  for (long m = 2; m <= 4; ++m) {
    for (long p = 1; p <= 3; ++p) {
      CAPTURE(m);
      CAPTURE(p);
      const RatPoly h = h_p_interp(m, p);
      const auto hn = h_p_nodes(m, p);
      CHECK(hn.size() == static_cast<std::size_t>(3 * p));
      CHECK(h.degree() <= static_cast<std::size_t>(3 * p - 1));
      for (const auto& n : hn) CHECK(h(n.x) == n.y);
      const RatPoly u = u_p_interp(m, p);
      CHECK(u.degree() <= static_cast<std::size_t>(p - 1));
      for (const auto& n : u_p_nodes(m, p)) CHECK(u(n.x) == n.y);
    }
  }
  for (long m = 2; m <= 6; ++m) CHECK(u_p_interp(m, 1) == RatPoly(-m));
  // independent check at (2,1): h_p(h_{1,3}) = f_1(h_{1,3})
  CHECK(h_p_interp(2, 1)(h_weight(Rat(1), 3, 1)) == f_p(1)(h_weight(Rat(1), 3, 1)));
}

TEST_CASE("node collisions name both nodes") {
  std::vector<Node> nodes{{"i=1", Rat(1), Rat(0)}, {"j=2", Rat(2), Rat(0)}, {"j=4", Rat(1), Rat(3)}};
  try {
    (void)interpolate_nodes(nodes);
    FAIL("collision accepted");
  } catch (const NodeCollision& e) {
    CHECK(e.first == "i=1");
    CHECK(e.second == "j=4");
    CHECK(std::string(e.what()).find("i=1") != std::string::npos);
  }
}

TEST_CASE("interpolants and f_p match the sympy oracle") {
  const auto golden = golden_polys();
  CHECK(golden.size() == 15);
  for (const auto& g : golden) {
    CAPTURE(g.name);
    CAPTURE(g.m);
    CAPTURE(g.p);
    if (g.name == "f_p") CHECK(f_p(g.p) == g.value);
    if (g.name == "h_p") CHECK(h_p_interp(g.m, g.p) == g.value);
    if (g.name == "u_p") CHECK(u_p_interp(g.m, g.p) == g.value);
  }
}

TEST_CASE("phi") {
  CHECK(phi(Rat(3), 2, 1) == -12);
  for (long m = 2; m <= 4; ++m) {
    for (long p = 1; p <= 2; ++p) {
      for (long t = 0; t < (m + 1) * p - 1; ++t) CHECK(phi(Rat(t), m, p) == 0);
    }
  }
  std::istringstream in(slurp("zhu_polys.txt"));
  std::string line;
  int seen = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string name, t, v;
    long m = 0, p = 0;
    ls >> name >> m >> p >> t >> v;
    if (name != "phi") continue;
    ++seen;
    CHECK(phi(parse_rat(t), m, p) == parse_rat(v));
  }
  CHECK(seen == 5);
}

TEST_CASE("dims") {
  for (long p = 1; p <= 6; ++p) {
    auto d = dims(Family::D, 2, p);
    CHECK(d.zhu_dim == 12 * p - 1);
    CHECK(d.irreducible_count == 11 * p);
  }
  auto a = dims(Family::A, 2, 1);
  CHECK(a.zhu_dim == 11);
  CHECK(a.irreducible_count == 8);
  CHECK(a.center_dim == 5);
  auto d32 = dims(Family::D, 3, 2);
  CHECK(d32.zhu_dim == 33);
  CHECK(d32.irreducible_count == 32);
  for (long m = 2; m <= 6; ++m) {
    for (long p = 1; p <= 5; ++p) {
      auto d = dims(Family::D, m, p);
      CHECK(d.zhu_dim - (p - 1) - d.irreducible_count == 0);
      CHECK(*d.even_part_bound + d.odd_part_bound == d.zhu_dim);
      CHECK(d.odd_part_bound == 3 * p);
      CHECK(dims(Family::A, m, p).odd_part_bound == p);
    }
  }
}

TEST_CASE("table rows follow the formulas") {
  const auto t = build_table(Family::D, 2, 2);
  const RatPoly f = f_p(2);
  CHECK(t.rows[0].label == "Lambda(1)_0^+");
  CHECK(t.rows[0].H == 0);
  CHECK(t.rows[2].label == "Lambda(1)_0^-");
  CHECK(t.rows[2].H == -2 * f(h_weight(Rat(1), 3, 2)));
  for (const auto& r : t.rows) {
    if (r.label.rfind("Pi(", 0) == 0 || r.label.find("_m^") != std::string::npos) CHECK(r.H == f(r.L0));
  }
  const auto a = build_table(Family::A, 3, 2);
  for (const auto& r : a.rows) {
    if (r.label == "Lambda(2)_1^+") CHECK(r.H == binom_rat(Rat(-2 * 2 - 1 + 2), 3));
  }
}

TEST_CASE("row counts match once the R rows are supplied") {
  for (long m = 2; m <= 5; ++m) {
    for (long p = 1; p <= 3; ++p) {
      for (Family fam : {Family::A, Family::D}) {
        std::vector<RParams> rr(static_cast<std::size_t>(r_row_count(fam, m, p)));
        for (std::size_t k = 0; k < rr.size(); ++k) rr[k] = {1, 0, static_cast<long>(k), Rat(static_cast<long>(k))};
        CHECK(build_table(fam, m, p, rr).count_matches);
        CHECK_FALSE(build_table(fam, m, p).count_matches);
      }
    }
  }
}

TEST_CASE("Lambda and Pi lowest weights are pairwise distinct") {
  for (long m = 2; m <= 4; ++m) {
    for (long p = 1; p <= 3; ++p) {
      CAPTURE(m);
      CAPTURE(p);
      CHECK(duplicate_weights(build_table(Family::D, m, p)).empty());
    }
  }
}

TEST_CASE("tables match the sympy oracle byte for byte") {
  CHECK(table_csv(build_table(Family::D, 2, 1, {{1, 0, 0, Rat(0)}, {1, 1, 0, Rat(2)}})) == slurp("zhu_D_m2_p1.csv"));
  CHECK(table_csv(build_table(Family::A, 2, 1,
                              {{1, 0, 0, Rat(0)}, {1, 0, 1, Rat(1)}, {1, 1, 0, Rat(2)}, {1, 1, 1, Rat(3)}})) ==
        slurp("zhu_A_m2_p1.csv"));
  CHECK(table_csv(build_table(Family::D, 3, 1)) == slurp("zhu_D_m3_p1_nor.csv"));
  CHECK(table_csv(build_table(Family::D, 2, 2)) == slurp("zhu_D_m2_p2_nor.csv"));
  CHECK(table_csv(build_table(Family::D, 4, 1)) == slurp("zhu_D_m4_p1_nor.csv"));
  CHECK(table_csv(build_table(Family::A, 3, 1)) == slurp("zhu_A_m3_p1_nor.csv"));
}

TEST_CASE("markdown output") {
  const auto md = table_markdown(build_table(Family::D, 3, 1));
  CHECK(md.find("| module | L(0) | H^(2)(0) | U^(m)(0) |") != std::string::npos);
  CHECK(md.find("(mismatch)") != std::string::npos);
  CHECK(to_string(GaussRat{Rat(1), Rat(-2)}) == "1-2*i");
  CHECK(to_string(GaussRat{Rat(0), Rat(3)}) == "3*i");
}
