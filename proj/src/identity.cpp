#include "ctverify/identity.hpp"

#include <sstream>

namespace ctv {

namespace {

struct NamedId {
  CaseId id;
  const char* name;
};

constexpr NamedId kIds[] = {
    {CaseId::A1, "A1"}, {CaseId::A2, "A2"},         {CaseId::A3, "A3"},
    {CaseId::A4, "A4"}, {CaseId::A5, "A5"},         {CaseId::A6, "A6"},
    {CaseId::H, "H_pm"}, {CaseId::Htilde, "Htilde_pm"}, {CaseId::F, "F_pm"},
    {CaseId::Ftilde, "Ftilde_pm"},
};

std::string xv(long i) { return "x" + std::to_string(i); }

/// Accumulates one residue display. Raw negative difference powers are
/// normalized here according to the case's dominance rule.
class Builder {
 public:
  Builder(long nvars, Dominance dom) : dom_(dom) {
    for (long i = 0; i < nvars; ++i) e_.vars.push_back(xv(i));
    // Innermost first: highest index down to x0.
    for (long i = nvars - 1; i >= 0; --i) e_.elim_order.push_back(xv(i));
    for (const auto& v : e_.vars) e_.residue_exponents[v] = -1;
  }

  void mono(long i, long e) { e_.factors.emplace_back(Monomial{xv(i), e}); }
  void one_plus(long i, long a, long b) { e_.factors.emplace_back(OnePlus{xv(i), a, b}); }
  void poly(long i, std::vector<Rat> c) { e_.factors.emplace_back(PolyFactor{xv(i), std::move(c)}); }
  void geom(long num, long den, long n) { e_.factors.emplace_back(GeomInv{xv(num), xv(den), n}); }
  void delta(long w, long v, long k) { e_.factors.emplace_back(DeltaDeriv{xv(w), xv(v), k}); }

  /// (x_u - x_v)^(-n)
  void neg_diff(long u, long v, long n) {
    std::string dominant = dom_ == Dominance::SecondWritten ? xv(v) : xv(u);
    if (dom_ == Dominance::X0 && (u == 0 || v == 0)) dominant = xv(0);
    const auto np = normalize_negative_power(xv(u), xv(v), -n, dominant);
    e_.scale *= np.sign;
    e_.factors.emplace_back(np.mono);
    e_.factors.emplace_back(np.geom);
  }

  /// prod_{lo <= i < j <= hi} (x_i - x_j)^e
  void vandermonde(long lo, long hi, long e) {
    for (long i = lo; i <= hi; ++i) {
      for (long j = i + 1; j <= hi; ++j) e_.factors.emplace_back(Diff{xv(i), xv(j), e});
    }
  }

  /// Monomial block x_i^{e} (1 + x_i)^t for i in [lo, hi].
  void block(long lo, long hi, long e) {
    for (long i = lo; i <= hi; ++i) {
      mono(i, e);
      one_plus(i, 1, 0);
    }
  }

  CTExpression take() { return std::move(e_); }

 private:
  CTExpression e_;
  Dominance dom_;
};

/// (a, b) with the x0 exponent equal to a*t + b.
std::pair<long, long> x0_exponent(ExponentVariant v, long m, long p) {
  const long base = m * m * p + m * p;
  if (v == ExponentVariant::MTimesTPlus1) return {-m, base - m};
  return {-(m + 1), base};
}

BinomialFactor binom(long b, long k) { return {Rat(1), Rat(b), static_cast<unsigned long>(k)}; }
BinomialFactor binom(const Rat& b, long k) { return {Rat(1), b, static_cast<unsigned long>(k)}; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(msg);
}

// C(t-(m+1)p+1, p) C(t+mp, p) prod_{l=0}^{m-1} C(t+pl, (m+1)p-1)
std::vector<RhsFactor> a2_rhs(long m, long p) {
  std::vector<RhsFactor> r{binom(-(m + 1) * p + 1, p), binom(m * p, p)};
  for (long l = 0; l < m; ++l) r.emplace_back(binom(p * l, (m + 1) * p - 1));
  return r;
}

CTExpression a2_display(long m, long p, long x0_power, ExponentVariant var, Dominance dom,
                        XiExponent xi) {
  Builder b(m + 2, dom);
  const auto [a, c] = x0_exponent(var, m, p);
  b.one_plus(0, a, c);
  b.mono(0, x0_power);
  b.block(1, m + 1, xi == XiExponent::Balanced ? -2 * p : -2 * m * p);
  b.neg_diff(0, m + 1, 2 * m * p);
  b.vandermonde(1, m + 1, 2 * p);
  for (long i = 1; i <= m; ++i) b.neg_diff(i, 0, 2 * m * p);
  return b.take();
}

CTExpression a3_display(long m, long p, long x0_power, ExponentVariant var, Dominance dom) {
  Builder b(m + 3, dom);
  const auto [a, c] = x0_exponent(var, m, p);
  b.one_plus(0, a, c);
  b.mono(0, x0_power);
  b.block(1, m + 2, -4 * p);
  b.neg_diff(0, m + 1, 2 * m * p);
  b.neg_diff(0, m + 2, 2 * m * p);
  b.vandermonde(1, m + 2, 2 * p);
  for (long i = 1; i <= m; ++i) b.neg_diff(i, 0, 2 * m * p);
  return b.take();
}

/// The two type-D2 shapes share everything but the x4 coupling.
CTExpression d2_display(long p, bool with_delta, ExponentVariant var, Dominance dom) {
  Builder b(5, dom);
  const auto [a, c] = x0_exponent(var, 2, p);
  b.one_plus(0, a, c);
  b.mono(0, with_delta ? 8 * p - 3 : 8 * p - 2);
  b.block(1, 4, -4 * p);
  b.neg_diff(0, 1, 4 * p);
  b.neg_diff(0, 2, 4 * p);
  b.neg_diff(3, 0, 4 * p);
  if (with_delta) {
    b.vandermonde(1, 4, 2 * p);
    b.delta(0, 4, 4 * p - 1);
  } else {
    b.neg_diff(4, 0, 4 * p);
    b.vandermonde(1, 4, 2 * p);
  }
  return b.take();
}

CTExpression h_display(long m, long p, bool tilde, ExponentVariant var) {
  Builder b(2 * m + 1, Dominance::X0);
  const auto [a, c] = x0_exponent(var, m, p);
  b.one_plus(0, a, c);
  if (tilde) {
    b.poly(0, {Rat(2), Rat(3), Rat(3), Rat(1)});
    b.mono(0, -(2 * m * m * p + 5));
  } else {
    b.poly(0, {Rat(2), Rat(1)});
    b.mono(0, -(2 * m * m * p + 3));
  }
  b.block(1, 2 * m, -2 * m * p);
  b.vandermonde(1, 2 * m, 2 * p);
  for (long i = 1; i <= 2 * m; ++i) b.geom(i, 0, 2 * m * p);
  return b.take();
}

CTExpression f_display(long m, long p, bool tilde, ExponentVariant var, Dominance dom,
                       NumeratorVariant num) {
  Builder b(2 * m + 1, dom);
  const auto [a, c] = x0_exponent(var, m, p);
  b.one_plus(0, a, c);
  if (tilde) {
    if (num == NumeratorVariant::Tabulated) {
      b.poly(0, {Rat(1), Rat(1), Rat(1)});
    } else {
      b.poly(0, {Rat(2), Rat(2), Rat(1)});
    }
    b.mono(0, 2 * m * m * p - 4);
  } else {
    b.mono(0, 2 * m * m * p - 2);
  }
  b.block(1, 2 * m, -2 * m * p);
  b.vandermonde(1, 2 * m, 2 * p);
  for (long i = 1; i <= 2 * m; ++i) b.neg_diff(i, 0, 2 * m * p);
  return b.take();
}

std::vector<RhsFactor> h_rhs(long m, long p) {
  return {binom(0, p), binom(1 - p, p), binom(-(m + 1) * p, p - 1), binom(m * p, p - 1),
          ShiftedSquares{Rat(1 - p), m * m * p, m}};
}

std::vector<RhsFactor> f_rhs(long m, long p) {
  return {binom(-(m + 1) * p, p - 1), binom(m * p, p - 1),
          LinearRange{Rat(1 - p), -m * m * p, m * m * p, m}};
}

}  // namespace

std::string to_string(CaseId id) {
  for (const auto& n : kIds) {
    if (n.id == id) return n.name;
  }
  return "?";
}

CaseId parse_case_id(const std::string& s) {
  for (const auto& n : kIds) {
    if (s == n.name) return n.id;
  }
  if (s == "H") return CaseId::H;
  if (s == "Htilde") return CaseId::Htilde;
  if (s == "F") return CaseId::F;
  if (s == "Ftilde") return CaseId::Ftilde;
  throw Error("unknown identity id '" + s + "'");
}

const std::vector<CaseId>& all_case_ids() {
  static const std::vector<CaseId> ids = [] {
    std::vector<CaseId> v;
    for (const auto& n : kIds) v.push_back(n.id);
    return v;
  }();
  return ids;
}

std::string to_string(ExponentVariant v) {
  return v == ExponentVariant::MTimesTPlus1 ? "m(t+1)" : "(m+1)t";
}

ExponentVariant parse_exponent_variant(const std::string& s) {
  if (s == "m(t+1)") return ExponentVariant::MTimesTPlus1;
  if (s == "(m+1)t") return ExponentVariant::MPlus1TimesT;
  throw Error("unknown exponent variant '" + s + "' (expected m(t+1) or (m+1)t)");
}

std::string to_string(Dominance d) {
  switch (d) {
    case Dominance::X0:
      return "x0";
    case Dominance::FirstWritten:
      return "first";
    case Dominance::SecondWritten:
      return "second";
  }
  return "?";
}

Dominance parse_dominance(const std::string& s) {
  if (s == "x0") return Dominance::X0;
  if (s == "first") return Dominance::FirstWritten;
  if (s == "second") return Dominance::SecondWritten;
  throw Error("unknown dominance '" + s + "' (expected x0, first or second)");
}

std::string to_string(XiExponent x) { return x == XiExponent::Balanced ? "balanced" : "printed"; }

XiExponent parse_xi_exponent(const std::string& s) {
  if (s == "balanced") return XiExponent::Balanced;
  if (s == "printed") return XiExponent::Printed;
  throw Error("unknown x_i exponent reading '" + s + "' (expected balanced or printed)");
}

std::string to_string(NumeratorVariant n) {
  return n == NumeratorVariant::Tabulated ? "tabulated" : "printed";
}

NumeratorVariant parse_numerator_variant(const std::string& s) {
  if (s == "tabulated") return NumeratorVariant::Tabulated;
  if (s == "printed") return NumeratorVariant::Printed;
  throw Error("unknown numerator variant '" + s + "'");
}

RatPoly rhs_factor_poly(const RhsFactor& f) {
  return std::visit(
      [](const auto& r) -> RatPoly {
        using T = std::decay_t<decltype(r)>;
        RatPoly out(Rat(1));
        if constexpr (std::is_same_v<T, BinomialFactor>) {
          for (unsigned long j = 0; j < r.k; ++j) out *= RatPoly::linear(r.a, r.b - j);
          out *= Rat(1) / Rat(factorial(r.k));
        } else if constexpr (std::is_same_v<T, ShiftedSquares>) {
          const RatPoly s = RatPoly::linear(Rat(1), r.shift);
          const RatPoly sq = s * s;
          for (long i = 1; i <= r.count; ++i) out *= sq - RatPoly(make_rat(i * i, r.m * r.m));
        } else {
          for (long i = r.lo; i <= r.hi; ++i) {
            out *= RatPoly::linear(Rat(1), r.shift - make_rat(i, r.m));
          }
        }
        return out;
      },
      f);
}

std::string describe(const RhsFactor& f) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, BinomialFactor>) {
          os << "C(" << RatPoly::linear(r.a, r.b).to_string("t") << ", " << r.k << ")";
        } else if constexpr (std::is_same_v<T, ShiftedSquares>) {
          os << "prod_{i=1}^{" << r.count << "} ((" << RatPoly::linear(Rat(1), r.shift).to_string("t")
             << ")^2 - i^2/" << r.m * r.m << ")";
        } else {
          os << "prod_{i=" << r.lo << "}^{" << r.hi << "} ("
             << RatPoly::linear(Rat(1), r.shift).to_string("t") << " - i/" << r.m << ")";
        }
      },
      f);
  return os.str();
}

std::optional<ExponentVariant> default_variant(CaseId id) {
  switch (id) {
    case CaseId::A1:
      return std::nullopt;
    default:
      return ExponentVariant::MTimesTPlus1;
  }
}

Dominance default_dominance(CaseId id) {
  switch (id) {
    case CaseId::A2:
    case CaseId::A3:
    case CaseId::A5:
    case CaseId::A6:
      return Dominance::FirstWritten;
    case CaseId::A4:
      return Dominance::SecondWritten;
    default:
      return Dominance::X0;
  }
}

long min_m(CaseId id) { return id == CaseId::A3 ? 3 : 2; }

IdentityCase build_case(CaseId id, long m, long p, const CaseOptions& opts) {
  require(p >= 1, "p must be at least 1");
  const bool d2 = id == CaseId::A4 || id == CaseId::A5 || id == CaseId::A6;
  if (d2) {
    require(m == 2, to_string(id) + " is a type-D2 identity; m must be 2");
  } else if (id == CaseId::A3) {
    require(m >= 3, "A3 requires m >= 3 (the identity fails for m = 2)");
  } else {
    require(m >= 2, "m must be at least 2");
  }
  const long vars = id == CaseId::A1 || id == CaseId::A2 ? m + 2
                    : id == CaseId::A3                   ? m + 3
                    : d2                                 ? 5
                                                         : 2 * m + 1;
  require(vars <= static_cast<long>(kMaxVars),
          "too many variables for (m, p) = (" + std::to_string(m) + ", " + std::to_string(p) + ")");

  IdentityCase c;
  c.id = id;
  c.m = m;
  c.p = p;
  c.variant = default_variant(id);
  if (c.variant && opts.variant) c.variant = opts.variant;
  c.dominance = opts.dominance.value_or(default_dominance(id));
  const ExponentVariant var = c.variant.value_or(ExponentVariant::MTimesTPlus1);

  switch (id) {
    case CaseId::A1: {
      Builder b(m + 2, c.dominance);
      b.one_plus(0, -1, 2 * p - 1);
      b.mono(0, -(2 + 2 * p));
      b.block(1, m + 1, -2 * m * p);
      for (long i = 1; i <= m + 1; ++i) b.geom(i, 0, 2 * p);
      b.vandermonde(1, m + 1, 2 * p);
      c.lhs.push_back(b.take());
      c.rhs.emplace_back(binom(m * p, 2 * (m + 1) * p - 1));
      for (long i = 1; i <= m - 1; ++i) c.rhs.emplace_back(binom((i - 1) * p, 2 * i * p - 1));
      break;
    }
    case CaseId::A2:
      c.xi_exponent = opts.xi_exponent;
      c.lhs.push_back(a2_display(m, p, 2 * m * p - 2, var, c.dominance, opts.xi_exponent));
      c.lhs.push_back(a2_display(m, p, 2 * m * p - 3, var, c.dominance, opts.xi_exponent));
      c.display_factor = Rat(-2);
      c.rhs = a2_rhs(m, p);
      break;
    case CaseId::A3:
      c.lhs.push_back(a3_display(m, p, 4 * m * p - 3, var, c.dominance));
      c.lhs.push_back(a3_display(m, p, 4 * m * p - 4, var, c.dominance));
      c.display_factor = Rat(-1);
      c.rhs = {binom(Rat(p) + make_rat(1, 2), 2 * p), binom(Rat(-p) + make_rat(1, 2), 2 * p)};
      for (auto& f : a2_rhs(m, p)) c.rhs.push_back(f);
      break;
    case CaseId::A4:
      c.lhs.push_back(d2_display(p, true, var, c.dominance));
      c.rhs = {binom(Rat(p) + make_rat(1, 2), 4 * p), binom(2 * p, 4 * p - 1), binom(0, 4 * p - 1)};
      break;
    case CaseId::A5:
    case CaseId::A6:
      c.lhs.push_back(d2_display(p, false, var, c.dominance));
      c.rhs = {binom(2 * p, 6 * p - 1), binom(p, 4 * p - 1), binom(0, 2 * p - 1)};
      break;
    case CaseId::H:
    case CaseId::Htilde: {
      const bool tilde = id == CaseId::Htilde;
      c.lhs.push_back(h_display(m, p, tilde, var));
      c.rhs = h_rhs(m, p);
      c.residual_degree_bound = 2 * (m - 2) * (p - 1) + (tilde ? 2 : 0);
      c.partner = tilde ? CaseId::H : CaseId::Htilde;
      break;
    }
    case CaseId::F:
    case CaseId::Ftilde: {
      const bool tilde = id == CaseId::Ftilde;
      if (tilde) c.numerator = opts.numerator;
      c.lhs.push_back(f_display(m, p, tilde, var, c.dominance, opts.numerator));
      c.rhs = f_rhs(m, p);
      c.residual_degree_bound = 2 * (m - 1) * (p - 1) + (tilde ? 2 : 0);
      c.partner = tilde ? CaseId::F : CaseId::Ftilde;
      break;
    }
  }
  if (opts.perturb_rhs) {
    auto* first = std::get_if<BinomialFactor>(&c.rhs.front());
    require(first != nullptr, "cannot perturb this right-hand side");
    first->k += 1;
    c.perturbed = true;
  }
  for (const auto& e : c.lhs) e.validate();
  return c;
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::Exact:
      return "exact";
    case RunMode::Interp:
      return "interp";
    case RunMode::Both:
      return "both";
  }
  return "?";
}

RunMode parse_run_mode(const std::string& s) {
  if (s == "exact") return RunMode::Exact;
  if (s == "interp") return RunMode::Interp;
  if (s == "both") return RunMode::Both;
  throw Error("unknown mode '" + s + "' (expected exact, interp or both)");
}

bool IdentityReport::passed() const {
  return computed() && division_exact && lhs_nonzero && display_equality.value_or(true) &&
         mode_agreement.value_or(true) && degree_bound_ok.value_or(true) &&
         coprime_with_partner.value_or(true);
}

IdentityReport run_case(const IdentityCase& c, const RunOptions& opts) {
  IdentityReport r;
  r.id = c.id;
  r.m = c.m;
  r.p = c.p;
  r.variant = c.variant;
  r.dominance = c.dominance;
  r.numerator = c.numerator;
  r.xi_exponent = c.xi_exponent;
  r.mode = opts.mode;
  r.perturbed = c.perturbed;
  r.residual_degree_bound = c.residual_degree_bound;

  for (const auto& expr : c.lhs) {
    std::optional<RatPoly> exact;
    std::optional<RatPoly> interp;
    if (opts.mode != RunMode::Interp) {
      EngineOptions eo;
      eo.mode = Mode::Exact;
      auto res = constant_term(expr, eo);
      r.stats.push_back(res.stats);
      exact = std::move(res.value);
    }
    if (opts.mode != RunMode::Exact) {
      EngineOptions eo;
      eo.mode = Mode::Interpolated;
      eo.arithmetic = opts.arithmetic;
      eo.jobs = opts.jobs;
      auto res = constant_term(expr, eo);
      r.stats.push_back(res.stats);
      interp = std::move(res.value);
    }
    if (exact && interp) r.mode_agreement = r.mode_agreement.value_or(true) && *exact == *interp;
    r.lhs_values.push_back(exact ? *exact : *interp);
  }

  r.rhs_product = RatPoly(Rat(1));
  for (const auto& f : c.rhs) r.rhs_product *= rhs_factor_poly(f);

  std::optional<RatPoly> quotient;
  for (const auto& v : r.lhs_values) {
    auto d = poly_divide(v, r.rhs_product);
    r.display_division_exact.push_back(d.remainder.is_zero());
    if (!quotient) {
      quotient = d.quotient;
      r.remainder = d.remainder;
    }
  }
  r.division_exact = std::all_of(r.display_division_exact.begin(), r.display_division_exact.end(),
                                 [](bool b) { return b; });
  r.lhs_nonzero = !r.lhs_values.front().is_zero();
  if (c.display_factor && r.lhs_values.size() == 2) {
    r.display_equality = r.lhs_values[0] == *c.display_factor * r.lhs_values[1];
  }
  if (r.division_exact && r.lhs_nonzero) {
    auto prim = primitive_normalize(*quotient);
    r.residual = prim.primitive;
    r.scale = prim.scale;
    if (c.residual_degree_bound) {
      r.degree_bound_ok = r.residual.degree().value_or(0) <=
                          static_cast<std::size_t>(*c.residual_degree_bound);
    }
  }
  return r;
}

PairReport run_pair(CaseId id, long m, long p, const CaseOptions& opts, const RunOptions& run) {
  const IdentityCase first = build_case(id, m, p, opts);
  if (!first.partner) throw Error(to_string(id) + " has no coprimality partner");
  PairReport out;
  out.first = run_case(first, run);
  out.second = run_case(build_case(*first.partner, m, p, opts), run);
  if (out.first.division_exact && out.second.division_exact && out.first.lhs_nonzero &&
      out.second.lhs_nonzero) {
    out.gcd = poly_gcd(out.first.residual, out.second.residual);
    out.coprime = out.gcd == RatPoly(Rat(1));
    out.first.coprime_with_partner = out.coprime;
    out.second.coprime_with_partner = out.coprime;
  }
  return out;
}

std::vector<IdentityReport> verify_range(CaseId id, const std::vector<long>& ms,
                                         const std::vector<long>& ps, const CaseOptions& opts,
                                         const RunOptions& run) {
  std::vector<IdentityReport> out;
  for (long m : ms) {
    for (long p : ps) {
      try {
        out.push_back(run_case(build_case(id, m, p, opts), run));
      } catch (const std::exception& e) {
        IdentityReport r;
        r.id = id;
        r.m = m;
        r.p = p;
        r.mode = run.mode;
        r.error = e.what();
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

VariantResolution resolve_exponent_variant(CaseId id, const RunOptions& run) {
  VariantResolution res;
  res.id = id;
  res.m = min_m(id);
  res.p = 1;
  if (!default_variant(id)) {
    res.needs_review = false;
    return res;
  }
  auto trial = [&](ExponentVariant v) {
    CaseOptions o;
    o.variant = v;
    auto r = run_case(build_case(id, res.m, res.p, o), run);
    return r.division_exact && r.lhs_nonzero;
  };
  res.exact_m_t_plus_1 = trial(ExponentVariant::MTimesTPlus1);
  res.exact_m_plus_1_t = trial(ExponentVariant::MPlus1TimesT);
  if (res.exact_m_t_plus_1 != res.exact_m_plus_1_t) {
    res.chosen = res.exact_m_t_plus_1 ? ExponentVariant::MTimesTPlus1 : ExponentVariant::MPlus1TimesT;
    res.needs_review = false;
  }
  return res;
}

CTExpression dyson_expression(long n, long p) {
  require(n >= 1 && n <= static_cast<long>(kMaxVars), "dyson: n must be in 1..12");
  require(p >= 0, "dyson: p must be >= 0");
  CTExpression e;
  for (long i = 0; i < n; ++i) e.vars.push_back(xv(i));
  for (long i = n - 1; i >= 0; --i) e.elim_order.push_back(xv(i));
  for (long i = 0; i < n; ++i) {
    e.residue_exponents[xv(i)] = 0;
    for (long j = 0; j < n; ++j) {
      if (i == j) continue;
      // (1 - x_i/x_j)^p = x_j^-p (x_j - x_i)^p
      e.factors.emplace_back(Monomial{xv(j), -p});
      e.factors.emplace_back(Diff{xv(j), xv(i), p});
    }
  }
  return e;
}

Int dyson_closed_form(long n, long p) {
  Int den = 1;
  for (long i = 0; i < n; ++i) den *= factorial(static_cast<unsigned long>(p));
  return factorial(static_cast<unsigned long>(n * p)) / den;
}

}  // namespace ctv
