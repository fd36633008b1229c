#include "ctverify/report.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace ctv {

namespace {

json factor_json(const Factor& f) {
  return std::visit(
      [](const auto& fac) -> json {
        using T = std::decay_t<decltype(fac)>;
        if constexpr (std::is_same_v<T, Monomial>) {
          return {{"kind", "monomial"}, {"var", fac.var}, {"exponent", fac.exponent}};
        } else if constexpr (std::is_same_v<T, OnePlus>) {
          return {{"kind", "one_plus"}, {"var", fac.var}, {"a", fac.a}, {"b", fac.b}};
        } else if constexpr (std::is_same_v<T, Diff>) {
          return {{"kind", "diff"}, {"u", fac.u}, {"v", fac.v}, {"exponent", fac.exponent}};
        } else if constexpr (std::is_same_v<T, GeomInv>) {
          return {{"kind", "geom_inv"}, {"num", fac.num}, {"den", fac.den}, {"power", fac.power}};
        } else if constexpr (std::is_same_v<T, DeltaDeriv>) {
          return {{"kind", "delta_deriv"}, {"w", fac.w}, {"v", fac.v}, {"order", fac.order}};
        } else {
          return {{"kind", "poly"}, {"var", fac.var}, {"coeffs", poly_json(RatPoly(fac.coeffs))}};
        }
      },
      f);
}

json expression_json(const CTExpression& e) {
  json factors = json::array();
  for (const auto& f : e.factors) factors.push_back(factor_json(f));
  json residues = json::object();
  for (const auto& v : e.vars) residues[v] = e.residue_exponent(v);
  return {{"vars", e.vars},
          {"elim_order", e.elim_order},
          {"scale", to_string(e.scale)},
          {"residue_exponents", residues},
          {"factors", factors}};
}

json rhs_json(const RhsFactor& f) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BinomialFactor>) {
          return {{"kind", "binomial"}, {"a", to_string(r.a)}, {"b", to_string(r.b)}, {"k", r.k}};
        } else if constexpr (std::is_same_v<T, ShiftedSquares>) {
          return {{"kind", "shifted_squares"}, {"shift", to_string(r.shift)}, {"count", r.count}, {"m", r.m}};
        } else {
          return {{"kind", "linear_range"}, {"shift", to_string(r.shift)}, {"lo", r.lo}, {"hi", r.hi}, {"m", r.m}};
        }
      },
      f);
}

template <class T>
json opt_str(const std::optional<T>& v) {
  return v ? json(to_string(*v)) : json(nullptr);
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string poly_text(const RatPoly& p) { return p.to_string("t"); }

}  // namespace

json poly_json(const RatPoly& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_string(c));
  return a;
}

RatPoly poly_from_json(const json& j) {
  std::vector<Rat> c;
  for (const auto& e : j) c.push_back(parse_rat(e.get<std::string>()));
  return RatPoly(std::move(c));
}

json case_json(const IdentityCase& c) {
  json lhs = json::array();
  for (const auto& e : c.lhs) lhs.push_back(expression_json(e));
  json rhs = json::array();
  for (const auto& f : c.rhs) {
    json r = rhs_json(f);
    r["text"] = describe(f);
    rhs.push_back(r);
  }
  return {{"id", to_string(c.id)},
          {"m", c.m},
          {"p", c.p},
          {"variant", opt_str(c.variant)},
          {"dominance", to_string(c.dominance)},
          {"numerator", opt_str(c.numerator)},
          {"xi_exponent", opt_str(c.xi_exponent)},
          {"display_factor", c.display_factor ? json(to_string(*c.display_factor)) : json(nullptr)},
          {"residual_degree_bound", opt(c.residual_degree_bound)},
          {"partner", opt_str(c.partner)},
          {"perturbed", c.perturbed},
          {"lhs", lhs},
          {"rhs", rhs}};
}

json report_json(const IdentityReport& r) {
  json lhs = json::array();
  for (const auto& v : r.lhs_values) lhs.push_back(poly_json(v));
  json j = {{"schema", kSchemaVersion},
            {"version", CTVERIFY_VERSION},
            {"id", to_string(r.id)},
            {"m", r.m},
            {"p", r.p},
            {"variant", opt_str(r.variant)},
            {"dominance", to_string(r.dominance)},
            {"numerator", opt_str(r.numerator)},
            {"xi_exponent", opt_str(r.xi_exponent)},
            {"mode", to_string(r.mode)},
            {"perturbed", r.perturbed},
            {"computed", r.computed()},
            {"error", r.error.empty() ? json(nullptr) : json(r.error)},
            {"lhs_values", lhs},
            {"rhs_product", poly_json(r.rhs_product)},
            {"display_division_exact", r.display_division_exact},
            {"division_exact", r.division_exact},
            {"remainder", poly_json(r.remainder)},
            {"lhs_nonzero", r.lhs_nonzero},
            {"residual", poly_json(r.residual)},
            {"residual_text", poly_text(r.residual)},
            {"scale", to_string(r.scale)},
            {"display_equality", opt(r.display_equality)},
            {"mode_agreement", opt(r.mode_agreement)},
            {"residual_degree_bound", opt(r.residual_degree_bound)},
            {"degree_bound_ok", opt(r.degree_bound_ok)},
            {"coprime_with_partner", opt(r.coprime_with_partner)},
            {"passed", r.passed()}};
  return j;
}

json stats_json(const IdentityReport& r) {
  json a = json::array();
  for (const auto& s : r.stats) {
    a.push_back({{"peak_terms", s.peak_terms},
                 {"peak_bytes", s.peak_bytes},
                 {"samples", s.samples},
                 {"primes", s.primes},
                 {"t_degree_bound", s.t_degree_bound},
                 {"seconds", s.seconds}});
  }
  return {{"id", to_string(r.id)}, {"m", r.m}, {"p", r.p}, {"runs", a}};
}

json pair_json(const PairReport& r) {
  return {{"schema", kSchemaVersion},
          {"first", report_json(r.first)},
          {"second", report_json(r.second)},
          {"gcd", poly_json(r.gcd)},
          {"coprime", r.coprime}};
}

json table_json(const zhu::Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json j = {{"module", row.label}, {"L0", to_string(row.L0)}, {"H", to_string(row.H)}};
    if (row.U) j["U"] = {{"re", to_string(row.U->re)}, {"im", to_string(row.U->im)}};
    if (t.family == zhu::Family::A) j["dim_lowest"] = row.dim_lowest;
    rows.push_back(j);
  }
  return {{"schema", kSchemaVersion},
          {"family", zhu::to_string(t.family)},
          {"m", t.m},
          {"p", t.p},
          {"expected_count", t.expected_count},
          {"row_count", t.rows.size()},
          {"count_matches", t.count_matches},
          {"rows", rows}};
}

json dims_json(const zhu::DimReport& d) {
  return {{"schema", kSchemaVersion},
          {"family", zhu::to_string(d.family)},
          {"m", d.m},
          {"p", d.p},
          {"zhu_dim", d.zhu_dim},
          {"irreducible_count", d.irreducible_count},
          {"center_dim", opt(d.center_dim)},
          {"even_part_bound", opt(d.even_part_bound)},
          {"odd_part_bound", d.odd_part_bound}};
}

std::string summary_markdown(const std::vector<IdentityReport>& reports) {
  std::ostringstream os;
  os << "| id | m | p | mode | division exact | residual | scale | status |\n"
     << "|---|---|---|---|---|---|---|---|\n";
  std::size_t passed = 0;
  for (const auto& r : reports) {
    std::string status = !r.computed() ? "error: " + r.error : (r.passed() ? "pass" : "FAIL");
    if (r.passed()) ++passed;
    os << "| " << to_string(r.id) << " | " << r.m << " | " << r.p << " | " << to_string(r.mode) << " | "
       << (r.division_exact ? "yes" : "no") << " | " << (r.division_exact ? poly_text(r.residual) : "-")
       << " | " << (r.division_exact ? to_string(r.scale) : "-") << " | " << status << " |\n";
  }
  os << "\n" << passed << "/" << reports.size() << " passed\n";
  return os.str();
}

json registry_json() {
  json cases = json::array();
  for (CaseId id : all_case_ids()) cases.push_back(case_json(build_case(id, min_m(id), 1)));
  return {{"schema", kSchemaVersion}, {"version", CTVERIFY_VERSION}, {"cases", cases}};
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
  }
}

}  // namespace ctv
