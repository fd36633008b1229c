#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace ctv {

using Int = mpz_class;
using Rat = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// "num/den", or "num" when the denominator is one.
inline std::string to_string(const Rat& r) { return r.get_str(); }

inline Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) {
    throw Error("malformed rational: '" + s + "'");
  }
  if (r.get_den() == 0) {
    throw Error("zero denominator in rational: '" + s + "'");
  }
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int factorial(unsigned long n) {
  Int f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

// Ordinary binomial for nonnegative top; zero when k > n.
inline Int binomial(unsigned long n, unsigned long k) {
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

// Generalized binomial C(z, k) = z(z-1)...(z-k+1)/k! for integer z of either sign.
inline Int binomial(const Int& z, unsigned long k) {
  Int b;
  mpz_bin_ui(b.get_mpz_t(), z.get_mpz_t(), k);
  return b;
}

}  // namespace ctv
