#include "ctverify/rings.hpp"

#include <mutex>

namespace ctv {

std::uint64_t ModularRing::pow(std::uint64_t base, std::uint64_t e) const {
  std::uint64_t r = 1 % p;
  base %= p;
  while (e != 0) {
    if (e & 1U) r = mul(r, base);
    base = mul(base, base);
    e >>= 1U;
  }
  return r;
}

std::uint64_t ModularRing::inverse(std::uint64_t x) const {
  if (x % p == 0) {
    throw Error("value not invertible modulo " + std::to_string(p));
  }
  return pow(x, p - 2);
}

std::uint64_t ModularRing::from_rat(const Rat& q) const {
  return mul(from_int(q.get_num()), inverse(from_int(q.get_den())));
}

std::uint64_t ModularRing::binom_t(long a, long b, unsigned long k) const {
  // z = a*t + b (mod p); C(z, k) = z(z-1)...(z-k+1) / k!
  std::uint64_t z = mul(reduce(a), t);
  add(z, reduce(b));
  std::uint64_t num = 1 % p;
  std::uint64_t den = 1 % p;
  for (unsigned long j = 0; j < k; ++j) {
    std::uint64_t term = z;
    add(term, p - reduce(static_cast<long>(j)) % p);
    num = mul(num, term);
    den = mul(den, reduce(static_cast<long>(j + 1)));
  }
  return mul(num, inverse(den));
}

std::vector<std::uint64_t> word_primes(std::size_t count) {
  static std::mutex mu;
  static std::vector<std::uint64_t> primes;
  std::lock_guard lock(mu);
  Int candidate = (Int(1) << 62) - 1;
  if (!primes.empty()) {
    candidate = Int(primes.back()) - 2;
  }
  if (candidate % 2 == 0) {
    candidate -= 1;
  }
  while (primes.size() < count) {
    if (mpz_probab_prime_p(candidate.get_mpz_t(), 40) != 0) {
      primes.push_back(candidate.get_ui());
    }
    candidate -= 2;
  }
  return {primes.begin(), primes.begin() + static_cast<long>(count)};
}

}  // namespace ctv
