#pragma once

#include <concepts>
#include <cstdint>
#include <vector>

#include "ctverify/rational.hpp"
#include "ctverify/ratpoly.hpp"

namespace ctv {

/// Coefficient domain for Series. Every ring knows how to produce the
/// binomial coefficients C(a*t + b, k) that the factor expansions need, so
/// the same series code runs symbolically in t, at a rational t, or modulo a
/// word-size prime.
template <class R>
concept CoeffRing = requires(const R& r, typename R::value_type& acc,
                             const typename R::value_type& x, const Int& n, const Rat& q,
                             long a, long b, unsigned long k) {
  { r.zero() } -> std::same_as<typename R::value_type>;
  { r.is_zero(x) } -> std::same_as<bool>;
  { r.add(acc, x) };
  { r.add_mul(acc, x, x) };
  { r.mul(x, x) } -> std::same_as<typename R::value_type>;
  { r.from_int(n) } -> std::same_as<typename R::value_type>;
  { r.from_rat(q) } -> std::same_as<typename R::value_type>;
  { r.binom_t(a, b, k) } -> std::same_as<typename R::value_type>;
};

/// Coefficients are polynomials in t.
struct ExactRing {
  using value_type = RatPoly;
  [[nodiscard]] RatPoly zero() const { return {}; }
  [[nodiscard]] bool is_zero(const RatPoly& x) const { return x.is_zero(); }
  void add(RatPoly& acc, const RatPoly& x) const { acc += x; }
  void add_mul(RatPoly& acc, const RatPoly& x, const RatPoly& y) const { acc += x * y; }
  [[nodiscard]] RatPoly mul(const RatPoly& x, const RatPoly& y) const { return x * y; }
  [[nodiscard]] RatPoly from_int(const Int& n) const { return RatPoly(Rat(n)); }
  [[nodiscard]] RatPoly from_rat(const Rat& q) const { return RatPoly(q); }
  [[nodiscard]] RatPoly binom_t(long a, long b, unsigned long k) const {
    return binom_poly(a, Rat(b), k);
  }
};

/// Coefficients are rationals; t is fixed.
struct RationalRing {
  using value_type = Rat;
  Rat t;
  [[nodiscard]] Rat zero() const { return Rat(0); }
  [[nodiscard]] bool is_zero(const Rat& x) const { return sgn(x) == 0; }
  void add(Rat& acc, const Rat& x) const { acc += x; }
  void add_mul(Rat& acc, const Rat& x, const Rat& y) const { acc += x * y; }
  [[nodiscard]] Rat mul(const Rat& x, const Rat& y) const { return x * y; }
  [[nodiscard]] Rat from_int(const Int& n) const { return Rat(n); }
  [[nodiscard]] Rat from_rat(const Rat& q) const { return q; }
  [[nodiscard]] Rat binom_t(long a, long b, unsigned long k) const {
    return binom_rat(Rat(a) * t + Rat(b), k);
  }
};

/// Arithmetic modulo a prime below 2^62; t is a fixed residue.
struct ModularRing {
  using value_type = std::uint64_t;
  std::uint64_t p;
  std::uint64_t t;  // t mod p

  [[nodiscard]] std::uint64_t zero() const { return 0; }
  [[nodiscard]] bool is_zero(std::uint64_t x) const { return x == 0; }
  void add(std::uint64_t& acc, std::uint64_t x) const {
    acc += x;
    if (acc >= p) acc -= p;
  }
  [[nodiscard]] std::uint64_t mul(std::uint64_t x, std::uint64_t y) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
  }
  void add_mul(std::uint64_t& acc, std::uint64_t x, std::uint64_t y) const { add(acc, mul(x, y)); }
  [[nodiscard]] std::uint64_t reduce(long v) const {
    long r = v % static_cast<long>(p);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<long>(p) : r);
  }
  [[nodiscard]] std::uint64_t from_int(const Int& n) const {
    Int r = n % Int(p);
    if (r < 0) r += p;
    return r.get_ui();
  }
  [[nodiscard]] std::uint64_t pow(std::uint64_t base, std::uint64_t e) const;
  [[nodiscard]] std::uint64_t inverse(std::uint64_t x) const;
  [[nodiscard]] std::uint64_t from_rat(const Rat& q) const;
  [[nodiscard]] std::uint64_t binom_t(long a, long b, unsigned long k) const;
};

static_assert(CoeffRing<ExactRing>);
static_assert(CoeffRing<RationalRing>);
static_assert(CoeffRing<ModularRing>);

/// Distinct primes in (2^61, 2^62), largest first; deterministic.
std::vector<std::uint64_t> word_primes(std::size_t count);

}  // namespace ctv
