#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctverify/rational.hpp"

namespace ctv {

/// Degree of a polynomial. The zero polynomial has degree "minus infinity",
/// represented by an empty optional; std::optional's ordering puts it below
/// every finite degree.
using Degree = std::optional<std::size_t>;

/// Univariate polynomial with exact rational coefficients, stored
/// lowest-degree-first with trailing zeros trimmed.
class RatPoly {
 public:
  RatPoly() = default;
  RatPoly(const Rat& c);  // NOLINT: constants convert implicitly
  RatPoly(long c) : RatPoly(Rat(c)) {}  // NOLINT
  explicit RatPoly(std::vector<Rat> coeffs);

  /// The indeterminate itself.
  static RatPoly x();
  /// a*x + b
  static RatPoly linear(const Rat& a, const Rat& b);

  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] Degree degree() const;
  [[nodiscard]] const std::vector<Rat>& coeffs() const { return coeffs_; }
  /// Coefficient of x^i; zero beyond the degree.
  [[nodiscard]] Rat coeff(std::size_t i) const;
  [[nodiscard]] const Rat& leading() const;

  [[nodiscard]] Rat operator()(const Rat& x) const;
  /// Substitute a polynomial for the indeterminate.
  [[nodiscard]] RatPoly compose(const RatPoly& inner) const;

  RatPoly& operator+=(const RatPoly& o);
  RatPoly& operator-=(const RatPoly& o);
  RatPoly& operator*=(const RatPoly& o);
  RatPoly& operator*=(const Rat& c);

  friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
  friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(RatPoly a, const Rat& c) { return a *= c; }
  friend RatPoly operator*(const Rat& c, RatPoly a) { return a *= c; }
  friend RatPoly operator-(RatPoly a);
  friend bool operator==(const RatPoly& a, const RatPoly& b) = default;

  [[nodiscard]] std::string to_string(std::string_view var = "t") const;

 private:
  void trim();
  std::vector<Rat> coeffs_;
};

struct DivResult {
  RatPoly quotient;
  RatPoly remainder;
};

/// C(a*t + b, k) as a polynomial in t.
RatPoly binom_poly(long a, const Rat& b, unsigned long k);
/// C(z, k) for rational z.
Rat binom_rat(const Rat& z, unsigned long k);

/// f = q*g + r with deg r < deg g. Throws on g == 0.
DivResult poly_divide(const RatPoly& f, const RatPoly& g);
/// Monic gcd. Throws when both inputs are zero.
RatPoly poly_gcd(RatPoly f, RatPoly g);

struct InterpolationNode {
  Rat x;
  Rat y;
};

/// Unique polynomial of degree <= n-1 through n nodes. Throws
/// InterpolationError naming the colliding pair on duplicate abscissae.
RatPoly interpolate(std::span<const InterpolationNode> nodes);

class InterpolationError : public Error {
 public:
  InterpolationError(std::size_t first, std::size_t second, const Rat& x);
  std::size_t first;
  std::size_t second;
};

struct PrimitiveForm {
  RatPoly primitive;  // integer coefficients, content 1, positive leading coefficient
  Rat scale;          // f == scale * primitive
};

PrimitiveForm primitive_normalize(const RatPoly& f);

}  // namespace ctv
