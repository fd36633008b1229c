#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "ctverify/rational.hpp"
#include "ctverify/rings.hpp"

namespace ctv {

// ---------------------------------------------------------------------------
// Factors
// ---------------------------------------------------------------------------

/// var^exponent
struct Monomial {
  std::string var;
  long exponent = 0;
  bool operator==(const Monomial&) const = default;
};

/// (1 + var)^(a*t + b)
struct OnePlus {
  std::string var;
  long a = 0;
  long b = 0;
  bool operator==(const OnePlus&) const = default;
};

/// (u - v)^exponent with exponent >= 0.
struct Diff {
  std::string u;
  std::string v;
  long exponent = 0;
  bool operator==(const Diff&) const = default;
};

/// (1 - num/den)^(-power), expanded in nonnegative powers of num/den.
struct GeomInv {
  std::string num;
  std::string den;
  long power = 0;
  bool operator==(const GeomInv&) const = default;
};

/// (1/order!) d^order/dw^order [ v^-1 delta(w/v) ]. Not expandable; the
/// engine reduces it under the residue in v.
struct DeltaDeriv {
  std::string w;
  std::string v;
  long order = 0;
  bool operator==(const DeltaDeriv&) const = default;
};

/// A fixed polynomial sum_i coeffs[i] * var^i, e.g. (2 + x0).
struct PolyFactor {
  std::string var;
  std::vector<Rat> coeffs;
  bool operator==(const PolyFactor&) const = default;
};

using Factor = std::variant<Monomial, OnePlus, Diff, GeomInv, DeltaDeriv, PolyFactor>;

/// Variables a factor touches, in declaration order.
std::vector<std::string> factor_vars(const Factor& f);
std::string describe(const Factor& f);

/// Result of rewriting (u - v)^e, e < 0, for expansion in the non-dominant
/// variable: sign * mono * geom.
struct NormalizedPower {
  Rat sign;
  Monomial mono;
  GeomInv geom;
};

NormalizedPower normalize_negative_power(const std::string& u, const std::string& v, long e,
                                         const std::string& dominant);

// ---------------------------------------------------------------------------
// Series
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxVars = 12;

/// Inclusive exponent bounds for one variable.
struct Window {
  long lo = 0;
  long hi = 0;
  [[nodiscard]] bool contains(long e) const { return lo <= e && e <= hi; }
  [[nodiscard]] bool empty() const { return lo > hi; }
  bool operator==(const Window&) const = default;
};

struct ExpVec {
  std::array<std::int16_t, kMaxVars> e{};
  bool operator==(const ExpVec&) const = default;
  template <typename H>
  friend H AbslHashValue(H h, const ExpVec& v) {
    return H::combine_contiguous(std::move(h), v.e.data(), v.e.size());
  }
};

/// Truncated multivariate Laurent series over a named variable set. Every
/// stored exponent vector lies inside the per-variable windows; terms that
/// would fall outside are dropped on insertion.
template <CoeffRing R>
class Series {
 public:
  using Coeff = typename R::value_type;
  using Map = absl::flat_hash_map<ExpVec, Coeff>;

  Series(R ring, std::vector<std::string> vars, std::vector<Window> windows)
      : ring_(std::move(ring)), vars_(std::move(vars)), windows_(std::move(windows)) {
    if (vars_.size() > kMaxVars) {
      throw Error("too many variables in series (max " + std::to_string(kMaxVars) + ")");
    }
    if (vars_.size() != windows_.size()) {
      throw Error("series needs one window per variable");
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      for (std::size_t j = i + 1; j < vars_.size(); ++j) {
        if (vars_[i] == vars_[j]) throw Error("duplicate series variable " + vars_[i]);
      }
      if (windows_[i].lo < std::numeric_limits<std::int16_t>::min() ||
          windows_[i].hi > std::numeric_limits<std::int16_t>::max()) {
        throw Error("window for " + vars_[i] + " exceeds the packed exponent range");
      }
    }
  }

  /// The constant 1 over the given variables.
  static Series one(R ring, std::vector<std::string> vars, std::vector<Window> windows) {
    Series s(std::move(ring), std::move(vars), std::move(windows));
    s.add_term(ExpVec{}, s.ring_.from_int(Int(1)));
    return s;
  }

  [[nodiscard]] const R& ring() const { return ring_; }
  [[nodiscard]] const std::vector<std::string>& vars() const { return vars_; }
  [[nodiscard]] const std::vector<Window>& windows() const { return windows_; }
  [[nodiscard]] const Map& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  [[nodiscard]] std::size_t index_of(std::string_view v) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == v) return i;
    }
    throw Error("variable " + std::string(v) + " not in series");
  }

  [[nodiscard]] bool in_window(const ExpVec& e) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (!windows_[i].contains(e.e[i])) return false;
    }
    return true;
  }

  /// Adds c * x^e; returns false (and stores nothing) when e is outside the window.
  bool add_term(const ExpVec& e, const Coeff& c) {
    if (!in_window(e)) return false;
    if (ring_.is_zero(c)) return true;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      ring_.add(it->second, c);
      if (ring_.is_zero(it->second)) terms_.erase(it);
    }
    return true;
  }

  bool add_term(std::span<const long> exps, const Coeff& c) {
    if (exps.size() != vars_.size()) throw Error("exponent vector has wrong arity");
    ExpVec e;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (!windows_[i].contains(exps[i])) return false;
      e.e[i] = static_cast<std::int16_t>(exps[i]);
    }
    return add_term(e, c);
  }

  [[nodiscard]] Coeff coefficient(std::span<const long> exps) const {
    ExpVec e;
    for (std::size_t i = 0; i < exps.size() && i < vars_.size(); ++i) {
      if (!windows_[i].contains(exps[i])) return ring_.zero();
      e.e[i] = static_cast<std::int16_t>(exps[i]);
    }
    auto it = terms_.find(e);
    return it == terms_.end() ? ring_.zero() : it->second;
  }

  /// Narrows the windows, dropping terms that fall outside.
  void restrict_to(const std::vector<Window>& w) {
    if (w.size() != windows_.size()) throw Error("window arity mismatch");
    for (std::size_t i = 0; i < w.size(); ++i) {
      windows_[i] = {std::max(windows_[i].lo, w[i].lo), std::min(windows_[i].hi, w[i].hi)};
    }
    absl::erase_if(terms_, [this](const auto& kv) { return !in_window(kv.first); });
  }

  /// Replaces the windows outright; terms outside the new windows are dropped.
  void set_windows(std::vector<Window> w) {
    if (w.size() != windows_.size()) throw Error("window arity mismatch");
    for (const auto& win : w) {
      if (win.lo < std::numeric_limits<std::int16_t>::min() ||
          win.hi > std::numeric_limits<std::int16_t>::max()) {
        throw Error("window exceeds the packed exponent range");
      }
    }
    windows_ = std::move(w);
    absl::erase_if(terms_, [this](const auto& kv) { return !in_window(kv.first); });
  }

  Map& mutable_terms() { return terms_; }

 private:
  R ring_;
  std::vector<std::string> vars_;
  std::vector<Window> windows_;
  Map terms_;
};

/// Truncated product: terms whose exponents leave `target` are dropped.
template <CoeffRing R>
Series<R> series_mul(const Series<R>& a, const Series<R>& b, std::vector<Window> target) {
  if (a.vars() != b.vars()) {
    throw Error("series_mul: variable sets differ");
  }
  const std::size_t n = a.vars().size();
  Series<R> out(a.ring(), a.vars(), std::move(target));
  const auto& ring = a.ring();
  const auto& w = out.windows();
  // Iterate the smaller operand in the inner loop.
  const auto& outer = a.size() >= b.size() ? a.terms() : b.terms();
  const auto& inner = a.size() >= b.size() ? b.terms() : a.terms();
  std::vector<std::pair<ExpVec, const typename Series<R>::Coeff*>> inner_terms;
  inner_terms.reserve(inner.size());
  for (const auto& [e, c] : inner) inner_terms.emplace_back(e, &c);

  auto& acc = out.mutable_terms();
  for (const auto& [ea, ca] : outer) {
    for (const auto& [eb, cb] : inner_terms) {
      ExpVec e;
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        const long s = static_cast<long>(ea.e[i]) + eb.e[i];
        if (s < w[i].lo || s > w[i].hi) {
          ok = false;
          break;
        }
        e.e[i] = static_cast<std::int16_t>(s);
      }
      if (!ok) continue;
      auto [it, inserted] = acc.try_emplace(e, ring.zero());
      ring.add_mul(it->second, ca, *cb);
    }
  }
  absl::erase_if(acc, [&ring](const auto& kv) { return ring.is_zero(kv.second); });
  return out;
}

template <CoeffRing R>
Series<R> series_mul(const Series<R>& a, const Series<R>& b) {
  return series_mul(a, b, a.windows());
}

/// Sub-series of terms with exponent exactly e in v, with v removed.
/// Throws when e lies outside v's window (a truncation-bound bug, never zero).
template <CoeffRing R>
Series<R> coeff(const Series<R>& s, std::string_view v, long e) {
  const std::size_t k = s.index_of(v);
  if (!s.windows()[k].contains(e)) {
    throw Error("coeff: exponent " + std::to_string(e) + " of " + std::string(v) +
                " outside window [" + std::to_string(s.windows()[k].lo) + ", " +
                std::to_string(s.windows()[k].hi) + "]");
  }
  std::vector<std::string> vars;
  std::vector<Window> windows;
  for (std::size_t i = 0; i < s.vars().size(); ++i) {
    if (i == k) continue;
    vars.push_back(s.vars()[i]);
    windows.push_back(s.windows()[i]);
  }
  Series<R> out(s.ring(), std::move(vars), std::move(windows));
  const std::size_t n = s.vars().size();
  for (const auto& [ex, c] : s.terms()) {
    if (ex.e[k] != e) continue;
    ExpVec r;
    for (std::size_t i = 0, j = 0; i < n; ++i) {
      if (i != k) r.e[j++] = ex.e[i];
    }
    out.mutable_terms().emplace(r, c);
  }
  return out;
}

/// Expands one factor over `vars`, keeping only exponents inside `windows`.
/// Variables the factor does not touch must admit exponent 0.
template <CoeffRing R>
Series<R> expand_factor(const R& ring, const Factor& f, std::vector<std::string> vars,
                        std::vector<Window> windows) {
  Series<R> s(ring, std::move(vars), std::move(windows));
  const std::size_t n = s.vars().size();
  auto at = [&](std::string_view v) { return s.index_of(v); };
  auto term = [&](std::initializer_list<std::pair<std::size_t, long>> exps, const auto& c) {
    ExpVec e;
    for (auto [i, x] : exps) {
      if (x < std::numeric_limits<std::int16_t>::min() ||
          x > std::numeric_limits<std::int16_t>::max()) {
        return;
      }
      e.e[i] += static_cast<std::int16_t>(x);
    }
    s.add_term(e, c);
  };
  (void)n;
  std::visit(
      [&](const auto& fac) {
        using T = std::decay_t<decltype(fac)>;
        if constexpr (std::is_same_v<T, Monomial>) {
          term({{at(fac.var), fac.exponent}}, ring.from_int(Int(1)));
        } else if constexpr (std::is_same_v<T, OnePlus>) {
          const std::size_t i = at(fac.var);
          const Window w = s.windows()[i];
          for (long k = std::max(0L, w.lo); k <= w.hi; ++k) {
            term({{i, k}}, ring.binom_t(fac.a, fac.b, static_cast<unsigned long>(k)));
          }
        } else if constexpr (std::is_same_v<T, Diff>) {
          if (fac.exponent < 0) {
            throw Error("Diff exponent must be nonnegative; normalize " + describe(f) + " first");
          }
          const std::size_t iu = at(fac.u);
          const std::size_t iv = at(fac.v);
          for (long j = 0; j <= fac.exponent; ++j) {
            Int c = binomial(static_cast<unsigned long>(fac.exponent), static_cast<unsigned long>(j));
            if (j % 2 == 1) c = -c;
            term({{iu, fac.exponent - j}, {iv, j}}, ring.from_int(c));
          }
        } else if constexpr (std::is_same_v<T, GeomInv>) {
          const std::size_t in = at(fac.num);
          const std::size_t id = at(fac.den);
          const Window wn = s.windows()[in];
          const Window wd = s.windows()[id];
          const long kmax = std::min(wn.hi, -wd.lo);
          const long kmin = std::max({0L, wn.lo, -wd.hi});
          for (long k = kmin; k <= kmax; ++k) {
            // C(N + k - 1, k)
            Int c = binomial(Int(fac.power + k - 1), static_cast<unsigned long>(k));
            term({{in, k}, {id, -k}}, ring.from_int(c));
          }
        } else if constexpr (std::is_same_v<T, PolyFactor>) {
          const std::size_t i = at(fac.var);
          for (std::size_t k = 0; k < fac.coeffs.size(); ++k) {
            term({{i, static_cast<long>(k)}}, ring.from_rat(fac.coeffs[k]));
          }
        } else {
          throw Error("DeltaDeriv cannot be expanded as a series; reduce it via the engine");
        }
      },
      f);
  return s;
}

/// Res_v [ s * (1/k!) d^k/dw^k (v^-1 delta(w/v)) ]: each c * v^e becomes
/// c * C(e, k) * w^(e - k). The result drops v; w's window widens to
/// cover the substituted exponents.
template <CoeffRing R>
Series<R> delta_reduce(const Series<R>& s, const DeltaDeriv& d) {
  if (d.w == d.v) throw Error("delta_reduce: w and v must differ");
  if (d.order < 0) throw Error("delta_reduce: negative derivative order");
  const std::size_t kv = s.index_of(d.v);
  const std::size_t kw = s.index_of(d.w);
  const std::size_t n = s.vars().size();
  std::vector<std::string> vars;
  std::vector<Window> windows;
  std::size_t kw_out = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == kv) continue;
    if (i == kw) {
      kw_out = vars.size();
      const Window wv = s.windows()[kv];
      const Window ww = s.windows()[kw];
      windows.push_back({ww.lo + wv.lo - d.order, ww.hi + wv.hi - d.order});
    } else {
      windows.push_back(s.windows()[i]);
    }
    vars.push_back(s.vars()[i]);
  }
  Series<R> out(s.ring(), std::move(vars), std::move(windows));
  const auto& ring = s.ring();
  for (const auto& [ex, c] : s.terms()) {
    const long e = ex.e[kv];
    Int falling = binomial(Int(e), static_cast<unsigned long>(d.order));
    if (falling == 0) continue;
    ExpVec r;
    for (std::size_t i = 0, j = 0; i < n; ++i) {
      if (i != kv) r.e[j++] = ex.e[i];
    }
    r.e[kw_out] = static_cast<std::int16_t>(r.e[kw_out] + e - d.order);
    out.add_term(r, ring.mul(c, ring.from_int(falling)));
  }
  return out;
}

}  // namespace ctv
