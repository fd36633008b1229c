#include "ctverify/ratpoly.hpp"

#include <algorithm>
#include <sstream>

namespace ctv {

RatPoly::RatPoly(const Rat& c) {
  if (c != 0) {
    coeffs_.push_back(c);
  }
}

RatPoly::RatPoly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) {
    c.canonicalize();
  }
  trim();
}

RatPoly RatPoly::x() { return RatPoly(std::vector<Rat>{Rat(0), Rat(1)}); }

RatPoly RatPoly::linear(const Rat& a, const Rat& b) { return RatPoly(std::vector<Rat>{b, a}); }

void RatPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) {
    coeffs_.pop_back();
  }
}

Degree RatPoly::degree() const {
  if (coeffs_.empty()) {
    return std::nullopt;
  }
  return coeffs_.size() - 1;
}

Rat RatPoly::coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rat(0); }

const Rat& RatPoly::leading() const {
  if (coeffs_.empty()) {
    throw Error("leading coefficient of the zero polynomial");
  }
  return coeffs_.back();
}

Rat RatPoly::operator()(const Rat& x) const {
  Rat acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

RatPoly RatPoly::compose(const RatPoly& inner) const {
  RatPoly acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * inner;
    acc += RatPoly(*it);
  }
  return acc;
}

RatPoly& RatPoly::operator+=(const RatPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) {
    coeffs_.resize(o.coeffs_.size());
  }
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
    coeffs_[i] += o.coeffs_[i];
  }
  trim();
  return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) {
    coeffs_.resize(o.coeffs_.size());
  }
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
    coeffs_[i] -= o.coeffs_[i];
  }
  trim();
  return *this;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) {
    return {};
  }
  std::vector<Rat> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  Rat tmp;
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) {
      continue;
    }
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      mpq_mul(tmp.get_mpq_t(), a.coeffs_[i].get_mpq_t(), b.coeffs_[j].get_mpq_t());
      out[i + j] += tmp;
    }
  }
  RatPoly r;
  r.coeffs_ = std::move(out);
  r.trim();
  return r;
}

RatPoly& RatPoly::operator*=(const RatPoly& o) { return *this = *this * o; }

RatPoly& RatPoly::operator*=(const Rat& c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& x : coeffs_) {
    x *= c;
  }
  return *this;
}

RatPoly operator-(RatPoly a) {
  for (auto& c : a.coeffs_) {
    c = -c;
  }
  return a;
}

std::string RatPoly::to_string(std::string_view var) const {
  if (coeffs_.empty()) {
    return "0";
  }
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const Rat& c = coeffs_[k];
    if (c == 0) {
      continue;
    }
    Rat mag = abs(c);
    if (first) {
      if (c < 0) {
        os << '-';
      }
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || mag != 1) {
      os << mag.get_str();
      if (k > 0) {
        os << '*';
      }
    }
    if (k >= 1) {
      os << var;
    }
    if (k >= 2) {
      os << '^' << k;
    }
  }
  return os.str();
}

RatPoly binom_poly(long a, const Rat& b, unsigned long k) {
  RatPoly acc(1);
  for (unsigned long j = 0; j < k; ++j) {
    acc *= RatPoly::linear(Rat(a), b - Rat(static_cast<long>(j)));
  }
  acc *= Rat(1, 1) / Rat(factorial(k));
  return acc;
}

Rat binom_rat(const Rat& z, unsigned long k) {
  Rat acc(1);
  for (unsigned long j = 0; j < k; ++j) {
    acc *= z - Rat(static_cast<long>(j));
  }
  acc /= Rat(factorial(k));
  return acc;
}

DivResult poly_divide(const RatPoly& f, const RatPoly& g) {
  if (g.is_zero()) {
    throw Error("polynomial division by zero");
  }
  const std::size_t dg = *g.degree();
  std::vector<Rat> rem = f.coeffs();
  if (rem.size() <= dg) {
    return {RatPoly(), f};
  }
  std::vector<Rat> quot(rem.size() - dg);
  const Rat inv_lead = 1 / g.leading();
  Rat tmp;
  for (std::size_t k = rem.size(); k-- > dg;) {
    if (rem[k] == 0) {
      continue;
    }
    Rat q = rem[k] * inv_lead;
    for (std::size_t j = 0; j <= dg; ++j) {
      mpq_mul(tmp.get_mpq_t(), q.get_mpq_t(), g.coeffs()[j].get_mpq_t());
      rem[k - dg + j] -= tmp;
    }
    quot[k - dg] = std::move(q);
  }
  rem.resize(dg);
  return {RatPoly(std::move(quot)), RatPoly(std::move(rem))};
}

namespace {
RatPoly monic(RatPoly f) {
  if (f.is_zero()) {
    return f;
  }
  Rat inv = 1 / f.leading();
  return f * inv;
}
}  // namespace

RatPoly poly_gcd(RatPoly f, RatPoly g) {
  if (f.is_zero() && g.is_zero()) {
    throw Error("gcd of two zero polynomials is undefined");
  }
  f = monic(std::move(f));
  g = monic(std::move(g));
  while (!g.is_zero()) {
    RatPoly r = poly_divide(f, g).remainder;
    f = std::move(g);
    g = monic(std::move(r));
  }
  return f;
}

InterpolationError::InterpolationError(std::size_t a, std::size_t b, const Rat& x)
    : Error("interpolation nodes " + std::to_string(a) + " and " + std::to_string(b) +
            " share the abscissa " + x.get_str()),
      first(a),
      second(b) {}

RatPoly interpolate(std::span<const InterpolationNode> nodes) {
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (nodes[i].x == nodes[j].x) {
        throw InterpolationError(i, j, nodes[i].x);
      }
    }
  }
  // Newton divided differences, then expand the Newton form.
  std::vector<Rat> dd(n);
  for (std::size_t i = 0; i < n; ++i) {
    dd[i] = nodes[i].y;
  }
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i].x - nodes[i - level].x);
    }
  }
  RatPoly acc;
  for (std::size_t i = n; i-- > 0;) {
    acc = acc * RatPoly::linear(1, -nodes[i].x);
    acc += RatPoly(dd[i]);
  }
  return acc;
}

PrimitiveForm primitive_normalize(const RatPoly& f) {
  if (f.is_zero()) {
    throw Error("primitive form of the zero polynomial");
  }
  Int den_lcm(1);
  for (const auto& c : f.coeffs()) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  Int num_gcd(0);
  for (const auto& c : f.coeffs()) {
    Int scaled = c.get_num() * (den_lcm / c.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
  }
  Rat scale(num_gcd, den_lcm);
  scale.canonicalize();
  if (f.leading() < 0) {
    scale = -scale;
  }
  return {f * (1 / scale), scale};
}

}  // namespace ctv
