#include "ctverify/zhu.hpp"

#include <sstream>

namespace ctv::zhu {

namespace {

void require_p(long p) {
  if (p < 1) throw Error("p must be >= 1, got " + std::to_string(p));
}

void require_mp(long m, long p) {
  if (m < 2) throw Error("m must be >= 2, got " + std::to_string(m));
  require_p(p);
}

RatPoly product_of_roots(const std::vector<Rat>& roots) {
  RatPoly acc(1);
  for (const auto& r : roots) acc *= RatPoly::linear(1, -r);
  return acc;
}

// C(z, k) for integer z of either sign, as a rational.
Rat binom_int(long z, long k) { return Rat(binomial(Int(z), static_cast<unsigned long>(k))); }

Rat fact(long n) { return Rat(factorial(static_cast<unsigned long>(n))); }

GaussRat times_i_pow(const Rat& c, long m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {c, 0};
    case 1: return {0, c};
    case 2: return {-c, 0};
    default: return {0, -c};
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_string(Family f) { return f == Family::A ? "A" : "D"; }

Family parse_family(const std::string& s) {
  if (s == "A") return Family::A;
  if (s == "D") return Family::D;
  throw Error("unknown family '" + s + "' (expected A or D)");
}

Rat h_weight(const Rat& i, long j, long p) {
  require_p(p);
  Rat a = i - j * p + p - 1;
  Rat b = i - j * p - p + 1;
  return a * b / (4 * p);
}

RatPoly f_p(long p) {
  require_p(p);
  Int pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), static_cast<unsigned long>(4 * p), static_cast<unsigned long>(3 * p - 1));
  Rat c = Rat(pow) * fact(2 * p) / (fact(4 * p - 1) * fact(3 * p - 1) * fact(p));
  if (p % 2 != 0) c = -c;
  std::vector<Rat> roots;
  for (long i = 1; i <= 3 * p - 1; ++i) roots.push_back(h_weight(i, 1, p));
  return c * product_of_roots(roots);
}

RatPoly ell_p(long p) {
  require_p(p);
  std::vector<Rat> roots;
  for (long i = 1; i <= p; ++i) roots.push_back(h_weight(4 * p - i, 1, p));
  for (long i = 1; i <= 2 * p; ++i) roots.push_back(h_weight(Rat(6 * p + 1, 2) - i, 1, p));
  return product_of_roots(roots);
}

RatPoly g_p(long m, long p) {
  require_mp(m, p);
  std::vector<Rat> roots;
  for (long i = 1; i <= p; ++i) roots.push_back(h_weight(i, m + 1, p));
  for (long i = 1; i <= 2 * p; ++i) roots.push_back(h_weight(Rat(6 * p + 1, 2) - i, 1, p));
  return product_of_roots(roots);
}

RatPoly v_p(long m, long p) {
  require_mp(m, p);
  std::vector<Rat> roots;
  for (long i = 1; i <= p; ++i) roots.push_back(h_weight(i, m + 1, p));
  return product_of_roots(roots);
}

NodeCollision::NodeCollision(std::string a, std::string b, const Rat& x)
    : Error("interpolation nodes " + a + " and " + b + " coincide at x=" + ctv::to_string(x)),
      first(std::move(a)),
      second(std::move(b)) {}

RatPoly interpolate_nodes(const std::vector<Node>& nodes) {
  std::vector<InterpolationNode> raw;
  raw.reserve(nodes.size());
  for (const auto& n : nodes) raw.push_back({n.x, n.y});
  try {
    return interpolate(raw);
  } catch (const InterpolationError& e) {
    throw NodeCollision(nodes[e.first].label, nodes[e.second].label, nodes[e.first].x);
  }
}

std::vector<Node> h_p_nodes(long m, long p) {
  require_mp(m, p);
  const RatPoly f = f_p(p);
  std::vector<Node> nodes;
  for (long i = 1; i <= p; ++i) {
    Rat x = h_weight(i, m + 1, p);
    nodes.push_back({"i=" + std::to_string(i), x, f(x)});
  }
  for (long j = 1; j <= 2 * p; ++j) {
    Rat x = h_weight(Rat(6 * p + 1, 2) - j, 1, p);
    nodes.push_back({"j=" + std::to_string(j), x, -f(x) / 2});
  }
  return nodes;
}

std::vector<Node> u_p_nodes(long m, long p) {
  require_mp(m, p);
  std::vector<Node> nodes;
  for (long i = 1; i <= p; ++i) {
    nodes.push_back({"i=" + std::to_string(i), h_weight(i, m + 1, p), binom_int(-m * p - 1 + i, 2 * p - 1)});
  }
  return nodes;
}

RatPoly h_p_interp(long m, long p) { return interpolate_nodes(h_p_nodes(m, p)); }
RatPoly u_p_interp(long m, long p) { return interpolate_nodes(u_p_nodes(m, p)); }

Rat phi(const Rat& t, long m, long p) {
  require_mp(m, p);
  const auto k = static_cast<unsigned long>((m + 1) * p - 1);
  Rat acc = (m * (m - 1) * p / 2) % 2 == 0 ? Rat(1) : Rat(-1);
  for (long l = 0; l < m; ++l) {
    acc *= binom_rat(t + p * l, k);
    acc *= fact((m + 1) * p - 1) * fact((l + 1) * p) / (fact((m + l + 1) * p - 1) * fact(p));
  }
  return acc;
}

std::string to_string(const GaussRat& z) {
  if (z.im == 0) return ctv::to_string(z.re);
  std::string im = ctv::to_string(z.im) + "*i";
  if (z.re == 0) return im;
  return ctv::to_string(z.re) + (z.im > 0 ? "+" : "") + im;
}

long r_row_count(Family family, long m, long p) {
  require_mp(m, p);
  return family == Family::D ? (m * m - m) * p : 2 * m * (m - 1) * p;
}

Table build_table(Family family, long m, long p, const std::vector<RParams>& r_rows) {
  require_mp(m, p);
  Table t;
  t.family = family;
  t.m = m;
  t.p = p;
  const bool even = m % 2 == 0;
  const long lambda_js = (m - 1) / 2;
  const long pi_js = m / 2;
  const auto si = [](long v) { return std::to_string(v); };

  if (family == Family::D) {
    t.expected_count = (m * m + 7) * p;
    const RatPoly f = f_p(p);
    const Rat u_top = fact(2 * m) / fact(m);
    Int two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(m - 1));
    const Rat u_sigma = fact(2 * m) / (Rat(two_pow) * fact(m));
    const auto plain = [&](std::string label, const Rat& L0) {
      t.rows.push_back({std::move(label), L0, f(L0), GaussRat{}, 1});
    };

    for (long i = 1; i <= p; ++i) t.rows.push_back({"Lambda(" + si(i) + ")_0^+", h_weight(i, 1, p), 0, GaussRat{}, 1});
    for (long i = 1; i <= p; ++i) {
      Rat L0 = h_weight(i, 3, p);
      t.rows.push_back({"Lambda(" + si(i) + ")_0^-", L0, -2 * f(L0), GaussRat{}, 1});
    }
    for (long j = 1; j <= lambda_js; ++j) {
      for (long i = 1; i <= p; ++i) {
        std::string n = "Lambda(" + si(i) + ")_" + si(j);
        plain(n + "^+=" + n + "^-", h_weight(i, 2 * j + 1, p));
      }
    }
    for (long j = 1; j <= pi_js; ++j) {
      for (long i = 1; i <= p; ++i) {
        std::string n = "Pi(" + si(i) + ")_" + si(j);
        plain(n + "^+=" + n + "^-", h_weight(p + i, 2 * j + 1, p));
      }
    }
    // Top rows: Lambda(i)_m for even m, Pi(i)_m for odd m.
    for (const char* sign : {"+", "-"}) {
      for (long i = 1; i <= p; ++i) {
        Rat L0 = even ? h_weight(i, m + 1, p) : h_weight(p + i, m + 2, p);
        Rat u = u_top * phi(Rat(-m * p + i - 1), m, p);
        if (*sign == '-') u = -u;
        std::string name = std::string(even ? "Lambda(" : "Pi(") + si(i) + ")_m^" + sign;
        t.rows.push_back({name, L0, f(L0), GaussRat{u, 0}, 1});
      }
    }
    for (const auto& r : r_rows) {
      plain("R(" + si(r.i) + "," + si(r.j) + "," + si(r.k) + ")[l=" + ctv::to_string(r.l) + "]",
            h_weight(r.l + 1 - Rat(r.i, m), 1, p));
    }
    for (const char* tw : {"sigma", "hsigma"}) {
      for (long j = 1; j <= 2 * p; ++j) {
        Rat L0 = h_weight(Rat(6 * p + 1, 2) - j, 1, p);
        Rat u = u_sigma * phi(Rat(6 * p - 1, 2) - j, m, p);
        if (std::string(tw) == "hsigma") u = -u;
        t.rows.push_back({"R(" + si(j) + ")^" + tw, L0, -f(L0) / 2, times_i_pow(u, m), 1});
      }
    }
  } else {
    t.expected_count = 2 * m * m * p;
    const auto pm = [&](const std::string& n, const Rat& L0, const Rat& h) {
      t.rows.push_back({n + "^+", L0, h, std::nullopt, 1});
      t.rows.push_back({n + "^-", L0, -h, std::nullopt, 1});
    };
    for (long i = 1; i <= p; ++i) t.rows.push_back({"Lambda(" + si(i) + ")_0", h_weight(i, 1, p), 0, std::nullopt, 1});
    for (long j = 1; j <= lambda_js; ++j) {
      for (long i = 1; i <= p; ++i) {
        pm("Lambda(" + si(i) + ")_" + si(j), h_weight(i, 2 * j + 1, p), binom_int(-2 * j * p - 1 + i, 2 * p - 1));
      }
    }
    for (long i = 1; i <= p; ++i) {
      if (even) {
        long k = m / 2;
        t.rows.push_back({"Lambda(" + si(i) + ")_m", h_weight(i, 2 * k + 1, p),
                          binom_int(-2 * k * p - 1 + i, 2 * p - 1), std::nullopt, 2});
      } else {
        long k = (m - 1) / 2;
        t.rows.push_back({"Pi(" + si(i) + ")_m", h_weight(p + i, 2 * k + 3, p),
                          binom_int(-(2 * k + 1) * p - 1 + i, 2 * p - 1), std::nullopt, 2});
      }
    }
    for (long j = 1; j <= pi_js; ++j) {
      for (long i = 1; i <= p; ++i) {
        pm("Pi(" + si(i) + ")_" + si(j), h_weight(p + i, 2 * j + 1, p),
           binom_int(-(2 * j - 1) * p - 1 + i, 2 * p - 1));
      }
    }
    for (const auto& r : r_rows) {
      Rat arg = r.l - Rat(r.i, m);
      t.rows.push_back({"R(" + si(r.i) + "," + si(r.j) + "," + si(r.k) + ")[l=" + ctv::to_string(r.l) + "]",
                        h_weight(arg + 1, 1, p), binom_rat(arg, static_cast<unsigned long>(2 * p - 1)),
                        std::nullopt, 1});
    }
  }
  t.count_matches = static_cast<long>(t.rows.size()) == t.expected_count;
  return t;
}

std::vector<Collision> duplicate_weights(const Table& t) {
  std::vector<Collision> out;
  for (std::size_t a = 0; a < t.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < t.rows.size(); ++b) {
      const auto& x = t.rows[a];
      const auto& y = t.rows[b];
      if (x.L0 == y.L0 && x.H == y.H && x.U == y.U) out.push_back({a, b});
    }
  }
  return out;
}

std::string table_csv(const Table& t) {
  std::ostringstream os;
  if (t.family == Family::D) {
    os << "module,L0,H2_0,Um_0\r\n";
    for (const auto& r : t.rows) {
      os << csv_field(r.label) << ',' << r.L0.get_str() << ',' << r.H.get_str() << ','
         << csv_field(to_string(r.U.value_or(GaussRat{}))) << "\r\n";
    }
  } else {
    os << "module,L0,H0,dim_lowest\r\n";
    for (const auto& r : t.rows) {
      std::string h = r.H.get_str();
      if (r.dim_lowest == 2 && r.H != 0) h = "+-" + Rat(abs(r.H)).get_str();
      os << csv_field(r.label) << ',' << r.L0.get_str() << ',' << h << ',' << r.dim_lowest << "\r\n";
    }
  }
  return os.str();
}

std::string table_markdown(const Table& t) {
  std::ostringstream os;
  os << "### W(p)^" << to_string(t.family) << "_m, m=" << t.m << ", p=" << t.p << "\n\n";
  if (t.family == Family::D) {
    os << "| module | L(0) | H^(2)(0) | U^(m)(0) |\n|---|---|---|---|\n";
    for (const auto& r : t.rows) {
      os << "| " << r.label << " | " << r.L0.get_str() << " | " << r.H.get_str() << " | "
         << to_string(r.U.value_or(GaussRat{})) << " |\n";
    }
  } else {
    os << "| module | L(0) | H(0) | dim M(0) |\n|---|---|---|---|\n";
    for (const auto& r : t.rows) {
      std::string h = r.H.get_str();
      if (r.dim_lowest == 2 && r.H != 0) h = "+-" + Rat(abs(r.H)).get_str();
      os << "| " << r.label << " | " << r.L0.get_str() << " | " << h << " | " << r.dim_lowest << " |\n";
    }
  }
  os << "\nrows: " << t.rows.size() << ", expected: " << t.expected_count
     << (t.count_matches ? "" : " (mismatch)") << "\n";
  return os.str();
}

DimReport dims(Family family, long m, long p) {
  require_mp(m, p);
  DimReport d;
  d.family = family;
  d.m = m;
  d.p = p;
  if (family == Family::D) {
    d.zhu_dim = (m * m + 8) * p - 1;
    d.irreducible_count = (m * m + 7) * p;
    d.even_part_bound = m * m * p + 5 * p - 1;
    d.odd_part_bound = 3 * p;
  } else {
    d.zhu_dim = (2 * m * m + 4) * p - 1;
    d.irreducible_count = 2 * m * m * p;
    d.center_dim = (m * m + 2) * p - 1;
    d.odd_part_bound = p;
  }
  return d;
}

}  // namespace ctv::zhu
