#include "ctverify/ct_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace ctv {

namespace {

constexpr long kInf = std::numeric_limits<long>::max() / 4;

bool is_pos_inf(long x) { return x >= kInf; }
bool is_neg_inf(long x) { return x <= -kInf; }

struct Slot {
  std::size_t factor;
  std::size_t pos;
  std::string var;
};

Window natural_domain(const Factor& f, std::size_t pos) {
  return std::visit(
      [pos](const auto& fac) -> Window {
        using T = std::decay_t<decltype(fac)>;
        if constexpr (std::is_same_v<T, Monomial>) {
          return {fac.exponent, fac.exponent};
        } else if constexpr (std::is_same_v<T, OnePlus>) {
          if (fac.a == 0 && fac.b >= 0) return {0, fac.b};
          return {0, kInf};
        } else if constexpr (std::is_same_v<T, Diff>) {
          return {0, fac.exponent};
        } else if constexpr (std::is_same_v<T, GeomInv>) {
          if (fac.power == 0) return {0, 0};
          return pos == 0 ? Window{0, kInf} : Window{-kInf, 0};
        } else if constexpr (std::is_same_v<T, PolyFactor>) {
          long lo = kInf;
          long hi = -kInf;
          for (std::size_t i = 0; i < fac.coeffs.size(); ++i) {
            if (fac.coeffs[i] != 0) {
              lo = std::min(lo, static_cast<long>(i));
              hi = std::max(hi, static_cast<long>(i));
            }
          }
          return {lo, hi};
        } else {
          return {-kInf, kInf};
        }
      },
      f);
}

/// Two-variable factors tie their slots: e_0 + e_1 == constant.
std::optional<long> pair_sum(const Factor& f) {
  if (const auto* d = std::get_if<Diff>(&f)) return d->exponent;
  if (std::holds_alternative<GeomInv>(f)) return 0L;
  if (const auto* d = std::get_if<DeltaDeriv>(&f)) return -1 - d->order;
  return std::nullopt;
}

Window intersect(Window a, Window b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

// c - [lo, hi], respecting infinities.
Window reflect(long c, Window w) {
  return {is_pos_inf(w.hi) ? -kInf : c - w.hi, is_neg_inf(w.lo) ? kInf : c - w.lo};
}

std::size_t estimate_bytes(std::size_t terms, std::size_t coeff_bytes) {
  // flat_hash_map slot + control byte
  return terms * (sizeof(ExpVec) + coeff_bytes + 1);
}

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> workers;
  const unsigned count = std::min<unsigned>(jobs, static_cast<unsigned>(n));
  workers.reserve(count);
  for (unsigned w = 0; w < count; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

// ---------------------------------------------------------------------------
// CTExpression
// ---------------------------------------------------------------------------

void CTExpression::validate() const {
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (!seen.insert(v).second) throw Error("duplicate variable " + v);
  }
  if (vars.size() > kMaxVars) throw Error("too many variables");
  std::set<std::string> order(elim_order.begin(), elim_order.end());
  if (order != seen || elim_order.size() != vars.size()) {
    throw Error("elimination order must be a permutation of the variables");
  }
  const DeltaDeriv* delta = nullptr;
  for (const auto& f : factors) {
    const auto fv = factor_vars(f);
    for (const auto& v : fv) {
      if (!seen.contains(v)) throw Error("factor " + describe(f) + " uses unknown variable " + v);
    }
    if (fv.size() == 2 && fv[0] == fv[1]) {
      throw Error("factor " + describe(f) + " repeats its variable");
    }
    if (const auto* d = std::get_if<Diff>(&f); d != nullptr && d->exponent < 0) {
      throw Error("negative Diff power must be normalized with a dominant variable: " + describe(f));
    }
    if (const auto* g = std::get_if<GeomInv>(&f); g != nullptr && g->power < 0) {
      throw Error("GeomInv power must be nonnegative: " + describe(f));
    }
    if (const auto* d = std::get_if<DeltaDeriv>(&f)) {
      if (delta != nullptr) throw Error("at most one DeltaDeriv factor per expression");
      if (d->order < 0) throw Error("negative delta derivative order");
      delta = d;
    }
  }
  if (delta != nullptr) {
    auto pos = [&](const std::string& v) {
      return std::find(elim_order.begin(), elim_order.end(), v) - elim_order.begin();
    };
    if (pos(delta->v) > pos(delta->w)) {
      throw Error("delta variable " + delta->v + " must be eliminated before " + delta->w);
    }
    if (residue_exponent(delta->v) != -1) {
      throw Error("the delta variable " + delta->v + " must carry the standard residue (-1)");
    }
  }
}

long CTExpression::residue_exponent(const std::string& v) const {
  auto it = residue_exponents.find(v);
  return it == residue_exponents.end() ? -1 : it->second;
}

WindowError::WindowError(const std::string& v)
    : Error("unbounded exponent window for variable " + v +
            " (ill-posed expression or wrong dominant variable)"),
      var(v) {}

std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "interp"; }

Mode parse_mode(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "interp" || s == "interpolated") return Mode::Interpolated;
  throw Error("unknown mode '" + s + "'");
}

// ---------------------------------------------------------------------------
// Bound propagation
// ---------------------------------------------------------------------------

Bounds propagate_bounds(const CTExpression& expr, long slack) {
  expr.validate();
  Bounds out;
  std::vector<Slot> slots;
  std::vector<Window> iv;
  std::vector<Window> natural;
  std::map<std::string, std::vector<std::size_t>> by_var;
  for (const auto& v : expr.vars) by_var[v];
  for (std::size_t f = 0; f < expr.factors.size(); ++f) {
    const auto fv = factor_vars(expr.factors[f]);
    for (std::size_t p = 0; p < fv.size(); ++p) {
      by_var[fv[p]].push_back(slots.size());
      slots.push_back({f, p, fv[p]});
      natural.push_back(natural_domain(expr.factors[f], p));
      iv.push_back(natural.back());
    }
  }

  auto mark_zero = [&] {
    out.identically_zero = true;
    out.slot_windows.assign(expr.factors.size(), {});
    for (const auto& v : expr.vars) out.windows[v] = {expr.residue_exponent(v), expr.residue_exponent(v)};
    return out;
  };

  for (const auto& w : iv) {
    if (w.empty()) return mark_zero();
  }

  bool changed = true;
  for (int iter = 0; changed && iter < 100000; ++iter) {
    changed = false;
    for (const auto& [v, ids] : by_var) {
      const long r = expr.residue_exponent(v);
      if (ids.empty()) {
        if (r != 0) return mark_zero();
        continue;
      }
      long lo_sum = 0, hi_sum = 0;
      int lo_inf = 0, hi_inf = 0;
      for (auto id : ids) {
        if (is_neg_inf(iv[id].lo)) ++lo_inf; else lo_sum += iv[id].lo;
        if (is_pos_inf(iv[id].hi)) ++hi_inf; else hi_sum += iv[id].hi;
      }
      for (auto id : ids) {
        const bool self_lo_inf = is_neg_inf(iv[id].lo);
        const bool self_hi_inf = is_pos_inf(iv[id].hi);
        const bool others_lo_inf = lo_inf - (self_lo_inf ? 1 : 0) > 0;
        const bool others_hi_inf = hi_inf - (self_hi_inf ? 1 : 0) > 0;
        const long others_lo = lo_sum - (self_lo_inf ? 0 : iv[id].lo);
        const long others_hi = hi_sum - (self_hi_inf ? 0 : iv[id].hi);
        Window allowed{others_hi_inf ? -kInf : r - others_hi, others_lo_inf ? kInf : r - others_lo};
        Window next = intersect(iv[id], allowed);
        if (next.empty()) return mark_zero();
        if (next != iv[id]) {
          iv[id] = next;
          changed = true;
        }
      }
    }
    for (std::size_t s = 0; s + 1 < slots.size(); ++s) {
      if (slots[s].pos != 0 || slots[s + 1].factor != slots[s].factor) continue;
      const auto c = pair_sum(expr.factors[slots[s].factor]);
      if (!c) continue;
      Window a = intersect(iv[s], reflect(*c, iv[s + 1]));
      Window b = intersect(iv[s + 1], reflect(*c, a));
      if (a.empty() || b.empty()) return mark_zero();
      if (a != iv[s] || b != iv[s + 1]) {
        iv[s] = a;
        iv[s + 1] = b;
        changed = true;
      }
    }
  }

  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (is_neg_inf(iv[s].lo) || is_pos_inf(iv[s].hi)) throw WindowError(slots[s].var);
    if (slack > 0) iv[s] = intersect({iv[s].lo - slack, iv[s].hi + slack}, natural[s]);
  }

  out.slot_windows.resize(expr.factors.size());
  for (std::size_t s = 0; s < slots.size(); ++s) {
    out.slot_windows[slots[s].factor].push_back(iv[s]);
  }
  for (const auto& v : expr.vars) {
    const long r = expr.residue_exponent(v);
    Window hull{r, r};
    for (auto id : by_var[v]) hull = {std::min(hull.lo, iv[id].lo), std::max(hull.hi, iv[id].hi)};
    out.windows[v] = hull;
  }
  for (std::size_t f = 0; f < expr.factors.size(); ++f) {
    if (const auto* op = std::get_if<OnePlus>(&expr.factors[f]); op != nullptr && op->a != 0) {
      out.t_degree_bound += out.slot_windows[f][0].hi;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sparse evaluation
// ---------------------------------------------------------------------------

namespace {

template <class R>
std::size_t coeff_bytes(const typename R::value_type& c) {
  if constexpr (std::is_same_v<R, ExactRing>) {
    return sizeof(RatPoly) + c.coeffs().size() * 48;
  } else if constexpr (std::is_same_v<R, RationalRing>) {
    return 48;
  } else {
    return sizeof(c);
  }
}

template <CoeffRing R>
typename R::value_type run_sparse(const CTExpression& expr, const Bounds& b, const R& ring,
                                  CTStats* stats) {
  if (b.identically_zero) return ring.zero();
  const std::size_t nf = expr.factors.size();
  std::vector<std::vector<std::string>> fvars(nf);
  for (std::size_t f = 0; f < nf; ++f) fvars[f] = factor_vars(expr.factors[f]);
  std::vector<bool> absorbed(nf, false);
  const DeltaDeriv* delta = nullptr;
  std::size_t delta_index = nf;
  for (std::size_t f = 0; f < nf; ++f) {
    if (const auto* d = std::get_if<DeltaDeriv>(&expr.factors[f])) {
      delta = d;
      delta_index = f;
    }
  }

  // Window each remaining variable may occupy, given the factors not yet absorbed.
  auto target_for = [&](const std::vector<std::string>& vars) {
    std::vector<Window> w;
    w.reserve(vars.size());
    for (const auto& v : vars) {
      long lo_sum = 0, hi_sum = 0;
      for (std::size_t f = 0; f < nf; ++f) {
        if (absorbed[f]) continue;
        for (std::size_t p = 0; p < fvars[f].size(); ++p) {
          if (fvars[f][p] != v) continue;
          lo_sum += b.slot_windows[f][p].lo;
          hi_sum += b.slot_windows[f][p].hi;
        }
      }
      const long r = expr.residue_exponent(v);
      w.push_back({r - hi_sum, r - lo_sum});
    }
    return w;
  };

  auto note = [&](const Series<R>& s) {
    if (stats == nullptr) return;
    if (s.size() > stats->peak_terms) {
      stats->peak_terms = s.size();
      std::size_t per = 0;
      if (!s.terms().empty()) per = coeff_bytes<R>(s.terms().begin()->second);
      stats->peak_bytes = std::max(stats->peak_bytes, estimate_bytes(s.size(), per));
    }
  };

  Series<R> s = Series<R>::one(ring, expr.vars, target_for(expr.vars));
  for (const auto& v : expr.elim_order) {
    std::vector<std::size_t> pending;
    for (std::size_t f = 0; f < nf; ++f) {
      if (absorbed[f] || f == delta_index) continue;
      if (std::find(fvars[f].begin(), fvars[f].end(), v) != fvars[f].end()) pending.push_back(f);
    }
    // Narrow factors first so the running product stays small.
    auto width = [&](std::size_t f) {
      long w = 1;
      for (const auto& win : b.slot_windows[f]) w *= (win.hi - win.lo + 1);
      return w;
    };
    std::stable_sort(pending.begin(), pending.end(),
                     [&](std::size_t x, std::size_t y) { return width(x) < width(y); });
    for (auto f : pending) {
      std::vector<Window> fw;
      fw.reserve(s.vars().size());
      for (const auto& u : s.vars()) {
        Window w{0, 0};
        for (std::size_t p = 0; p < fvars[f].size(); ++p) {
          if (fvars[f][p] == u) w = b.slot_windows[f][p];
        }
        fw.push_back(w);
      }
      Series<R> factor = expand_factor(ring, expr.factors[f], s.vars(), std::move(fw));
      absorbed[f] = true;
      s = series_mul(s, factor, target_for(s.vars()));
      note(s);
    }
    if (delta != nullptr && v == delta->v) {
      absorbed[delta_index] = true;
      s = delta_reduce(s, *delta);
      s.set_windows(target_for(s.vars()));
      note(s);
    } else {
      s = coeff(s, v, expr.residue_exponent(v));
    }
    if (s.is_zero()) return ring.zero();
  }
  typename R::value_type value = s.coefficient(std::span<const long>{});
  return ring.mul(value, ring.from_rat(expr.scale));
}

// Coefficients of the degree <= n-1 interpolant through (0, y0), ..., (n-1, y_{n-1}) mod p.
std::vector<std::uint64_t> interpolate_mod(const ModularRing& ring,
                                           const std::vector<std::uint64_t>& ys) {
  const std::size_t n = ys.size();
  std::vector<std::uint64_t> inv(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) inv[i] = ring.inverse(i);
  std::vector<std::uint64_t> dd = ys;
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      std::uint64_t diff = dd[i];
      ring.add(diff, ring.p - dd[i - 1]);
      dd[i] = ring.mul(diff, inv[level]);  // x_i - x_{i-level} == level
    }
  }
  std::vector<std::uint64_t> acc;  // Horner on the Newton form
  for (std::size_t i = n; i-- > 0;) {
    // acc = acc * (t - i) + dd[i]
    std::vector<std::uint64_t> next(acc.size() + 1, 0);
    const std::uint64_t neg_i = ring.reduce(-static_cast<long>(i));
    for (std::size_t k = 0; k < acc.size(); ++k) {
      ring.add(next[k + 1], acc[k]);
      ring.add_mul(next[k], acc[k], neg_i);
    }
    ring.add(next[0], dd[i]);
    acc = std::move(next);
  }
  acc.resize(n, 0);
  return acc;
}

std::uint64_t horner_mod(const ModularRing& ring, const std::vector<std::uint64_t>& c,
                         std::uint64_t x) {
  std::uint64_t acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = ring.mul(acc, x);
    ring.add(acc, c[k]);
  }
  return acc;
}

RatPoly interpolated_rational(const CTExpression& expr, const Bounds& b, long degree,
                              const EngineOptions& opts, CTStats& stats) {
  const std::size_t n = static_cast<std::size_t>(degree) + 2;
  std::vector<Rat> ys(n);
  std::vector<CTStats> per(n);
  parallel_for(n, opts.jobs, [&](std::size_t i) {
    ys[i] = run_sparse(expr, b, RationalRing{Rat(static_cast<long>(i))}, &per[i]);
  });
  for (const auto& st : per) {
    stats.peak_terms = std::max(stats.peak_terms, st.peak_terms);
    stats.peak_bytes = std::max(stats.peak_bytes, st.peak_bytes);
  }
  stats.samples = n;
  std::vector<InterpolationNode> nodes;
  for (std::size_t i = 0; i + 1 < n; ++i) nodes.push_back({Rat(static_cast<long>(i)), ys[i]});
  RatPoly p = interpolate(nodes);
  if (p(Rat(static_cast<long>(n - 1))) != ys[n - 1]) {
    throw DegreeBoundError("degree bound violated: t-degree exceeds " + std::to_string(degree));
  }
  return p;
}

RatPoly interpolated_modular(const CTExpression& expr, const Bounds& b, long degree,
                             const EngineOptions& opts, CTStats& stats) {
  const std::size_t n = static_cast<std::size_t>(degree) + 2;
  const std::size_t ncoef = n - 1;
  std::vector<Int> residues(ncoef, Int(0));
  Int modulus(1);
  std::vector<Rat> candidate;
  for (std::size_t k = 0; k < opts.max_primes; ++k) {
    const std::uint64_t p = word_primes(k + 1)[k];
    std::vector<std::uint64_t> ys(n);
    std::vector<CTStats> per(n);
    parallel_for(n, opts.jobs, [&](std::size_t i) {
      ys[i] = run_sparse(expr, b, ModularRing{p, i % p}, &per[i]);
    });
    for (const auto& st : per) {
      stats.peak_terms = std::max(stats.peak_terms, st.peak_terms);
      stats.peak_bytes = std::max(stats.peak_bytes, st.peak_bytes);
    }
    stats.samples += n;
    stats.primes = k + 1;
    const ModularRing ring{p, 0};
    std::vector<std::uint64_t> head(ys.begin(), ys.end() - 1);
    std::vector<std::uint64_t> coef = interpolate_mod(ring, head);
    if (horner_mod(ring, coef, (n - 1) % p) != ys.back()) {
      throw DegreeBoundError("degree bound violated: t-degree exceeds " + std::to_string(degree));
    }
    if (k > 0 && !candidate.empty()) {
      // The reconstruction from earlier primes must predict this prime.
      bool agrees = true;
      for (std::size_t i = 0; i < ncoef && agrees; ++i) {
        agrees = ring.from_rat(candidate[i]) == coef[i];
      }
      if (agrees) return RatPoly(candidate);
    }
    // Fold this prime in (CRT) and try to reconstruct.
    const Int P(p);
    for (std::size_t i = 0; i < ncoef; ++i) {
      Int r = residues[i] % P;
      Int diff = (Int(coef[i]) - r) % P;
      if (diff < 0) diff += P;
      Int minv;
      Int mmod = modulus % P;
      mpz_invert(minv.get_mpz_t(), mmod.get_mpz_t(), P.get_mpz_t());
      Int h = diff * minv % P;
      residues[i] += modulus * h;
    }
    modulus *= P;
    candidate.clear();
    for (std::size_t i = 0; i < ncoef; ++i) {
      auto q = rational_reconstruct(residues[i], modulus);
      if (!q) {
        candidate.clear();
        break;
      }
      candidate.push_back(*q);
    }
  }
  throw Error("modular reconstruction did not stabilize within " + std::to_string(opts.max_primes) +
              " primes");
}

}  // namespace

std::optional<Rat> rational_reconstruct(const Int& a, const Int& m) {
  Int bound;
  mpz_sqrt(bound.get_mpz_t(), Int(m / 2).get_mpz_t());
  Int r0 = m, r1 = a % m;
  if (r1 < 0) r1 += m;
  Int s0 = 0, s1 = 1;
  while (r1 > bound) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    Int s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (s1 == 0 || abs(s1) > bound) return std::nullopt;
  Int g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), s1.get_mpz_t());
  if (g != 1 && r1 != 0) return std::nullopt;
  Rat q(r1, s1);
  q.canonicalize();
  return q;
}

CTResult constant_term(const CTExpression& expr, const EngineOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Bounds b = propagate_bounds(expr, opts.window_slack);
  CTResult res;
  res.mode = opts.mode;
  res.stats.t_degree_bound = b.t_degree_bound;
  if (b.identically_zero) {
    res.value = RatPoly();
  } else if (opts.mode == Mode::Exact) {
    res.value = run_sparse(expr, b, ExactRing{}, &res.stats);
    res.stats.samples = 1;
  } else {
    const long degree = opts.degree_bound_override.value_or(b.t_degree_bound);
    if (opts.arithmetic == Arithmetic::Rational) {
      res.value = interpolated_rational(expr, b, degree, opts, res.stats);
    } else {
      res.value = interpolated_modular(expr, b, degree, opts, res.stats);
    }
  }
  res.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

Rat evaluate_at(const CTExpression& expr, const Rat& t, long window_slack) {
  Bounds b = propagate_bounds(expr, window_slack);
  return run_sparse(expr, b, RationalRing{t}, nullptr);
}

// ---------------------------------------------------------------------------
// Dense oracle
// ---------------------------------------------------------------------------

namespace {

struct DenseTerm {
  std::vector<long> exps;  // one per factor variable
  Rat coeff;
};

std::vector<DenseTerm> dense_terms(const Factor& f, const std::vector<Window>& slots, const Rat& t) {
  std::vector<DenseTerm> out;
  std::visit(
      [&](const auto& fac) {
        using T = std::decay_t<decltype(fac)>;
        if constexpr (std::is_same_v<T, Monomial>) {
          out.push_back({{fac.exponent}, Rat(1)});
        } else if constexpr (std::is_same_v<T, OnePlus>) {
          for (long k = std::max(0L, slots[0].lo); k <= slots[0].hi; ++k) {
            out.push_back({{k}, binom_rat(Rat(fac.a) * t + fac.b, static_cast<unsigned long>(k))});
          }
        } else if constexpr (std::is_same_v<T, Diff>) {
          for (long j = 0; j <= fac.exponent; ++j) {
            Rat c = binom_rat(Rat(fac.exponent), static_cast<unsigned long>(j));
            out.push_back({{fac.exponent - j, j}, j % 2 == 0 ? c : Rat(-c)});
          }
        } else if constexpr (std::is_same_v<T, GeomInv>) {
          for (long k = std::max(0L, slots[0].lo); k <= slots[0].hi; ++k) {
            out.push_back({{k, -k}, binom_rat(Rat(fac.power + k - 1), static_cast<unsigned long>(k))});
          }
        } else if constexpr (std::is_same_v<T, PolyFactor>) {
          for (std::size_t i = 0; i < fac.coeffs.size(); ++i) {
            out.push_back({{static_cast<long>(i)}, fac.coeffs[i]});
          }
        } else {
          // sum_n C(n, k) w^{n-k} v^{-n-1}
          for (long n = slots[0].lo + fac.order; n <= slots[0].hi + fac.order; ++n) {
            out.push_back({{n - fac.order, -n - 1}, binom_rat(Rat(n), static_cast<unsigned long>(fac.order))});
          }
        }
      },
      f);
  return out;
}

}  // namespace

Rat dense_oracle(const CTExpression& expr, const Rat& t, std::size_t cell_cap) {
  Bounds b = propagate_bounds(expr);
  if (b.identically_zero) return Rat(0);
  const std::size_t nv = expr.vars.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nv; ++i) index[expr.vars[i]] = i;
  // Minkowski window: contains every partial sum of slot contributions.
  std::vector<Window> win(nv, Window{0, 0});
  for (std::size_t f = 0; f < expr.factors.size(); ++f) {
    const auto fv = factor_vars(expr.factors[f]);
    for (std::size_t p = 0; p < fv.size(); ++p) {
      auto& w = win[index[fv[p]]];
      w.lo += std::min(0L, b.slot_windows[f][p].lo);
      w.hi += std::max(0L, b.slot_windows[f][p].hi);
    }
  }
  std::vector<std::size_t> stride(nv);
  std::size_t cells = 1;
  for (std::size_t i = nv; i-- > 0;) {
    stride[i] = cells;
    const auto width = static_cast<std::size_t>(win[i].hi - win[i].lo + 1);
    if (cells > cell_cap / width) {
      throw OracleCapError("dense oracle cap exceeded (" + std::to_string(cell_cap) +
                           " cells); use the sparse path only");
    }
    cells *= width;
  }
  auto offset = [&](const std::vector<long>& e) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < nv; ++i) off += static_cast<std::size_t>(e[i] - win[i].lo) * stride[i];
    return off;
  };
  std::vector<Rat> dense(cells);
  dense[offset(std::vector<long>(nv, 0))] = 1;
  std::vector<long> e(nv);
  for (std::size_t f = 0; f < expr.factors.size(); ++f) {
    const auto fv = factor_vars(expr.factors[f]);
    std::vector<std::size_t> which;
    for (const auto& v : fv) which.push_back(index[v]);
    const auto terms = dense_terms(expr.factors[f], b.slot_windows[f], t);
    std::vector<Rat> next(cells);
    for (std::size_t off = 0; off < cells; ++off) {
      if (sgn(dense[off]) == 0) continue;
      std::size_t rem = off;
      for (std::size_t i = 0; i < nv; ++i) {
        e[i] = static_cast<long>(rem / stride[i]) + win[i].lo;
        rem %= stride[i];
      }
      for (const auto& term : terms) {
        std::vector<long> g = e;
        bool inside = true;
        for (std::size_t p = 0; p < which.size(); ++p) {
          g[which[p]] += term.exps[p];
          if (!win[which[p]].contains(g[which[p]])) inside = false;
        }
        if (inside) next[offset(g)] += dense[off] * term.coeff;
      }
    }
    dense = std::move(next);
  }
  std::vector<long> target(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    target[i] = expr.residue_exponent(expr.vars[i]);
    if (!win[i].contains(target[i])) return Rat(0);
  }
  return dense[offset(target)] * expr.scale;
}

}  // namespace ctv
