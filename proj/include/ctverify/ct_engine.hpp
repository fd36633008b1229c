#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctverify/laurent.hpp"
#include "ctverify/ratpoly.hpp"

namespace ctv {

/// One iterated-residue computation: the coefficient of
/// prod_v v^{residue_exponents[v]} in scale * prod(factors), taken variable
/// by variable in elim_order (innermost first).
struct CTExpression {
  std::vector<std::string> vars;
  std::vector<std::string> elim_order;
  std::vector<Factor> factors;
  std::map<std::string, long> residue_exponents;
  Rat scale{1};

  /// Throws Error when the expression violates its invariants.
  void validate() const;
  [[nodiscard]] long residue_exponent(const std::string& v) const;
};

/// Per-factor exponent ranges plus the derived per-variable windows.
struct Bounds {
  /// slot_windows[f][i] bounds the exponent factor f contributes to its
  /// i-th variable (factor_vars order).
  std::vector<std::vector<Window>> slot_windows;
  /// Hull of every slot range of v together with its residue exponent.
  std::map<std::string, Window> windows;
  /// Some slot range is empty: the residue is identically zero.
  bool identically_zero = false;
  /// Sum over OnePlus factors with a != 0 of their maximal expansion order.
  long t_degree_bound = 0;
};

class WindowError : public Error {
 public:
  explicit WindowError(const std::string& var);
  std::string var;
};

class DegreeBoundError : public Error {
 public:
  using Error::Error;
};

class OracleCapError : public Error {
 public:
  using Error::Error;
};

/// Interval constraint propagation over per-factor exponent ranges.
/// `slack` widens every range (within the factor's natural domain); used to
/// check that the windows are not cutting anything that matters.
Bounds propagate_bounds(const CTExpression& expr, long slack = 0);

enum class Mode { Exact, Interpolated };
enum class Arithmetic { Rational, Modular };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct EngineOptions {
  Mode mode = Mode::Interpolated;
  Arithmetic arithmetic = Arithmetic::Modular;
  unsigned jobs = 1;
  long window_slack = 0;
  /// Overrides the sample count of interpolated mode (for tests of the
  /// degree-bound check); the certified default is t_degree_bound.
  std::optional<long> degree_bound_override;
  std::size_t max_primes = 256;
};

struct CTStats {
  std::size_t peak_terms = 0;
  std::size_t peak_bytes = 0;
  std::size_t samples = 0;
  std::size_t primes = 0;
  long t_degree_bound = 0;
  double seconds = 0.0;
};

struct CTResult {
  RatPoly value;
  Mode mode = Mode::Exact;
  CTStats stats;
};

CTResult constant_term(const CTExpression& expr, const EngineOptions& opts = {});

/// Value of the expression at one rational t, through the sparse path.
Rat evaluate_at(const CTExpression& expr, const Rat& t, long window_slack = 0);

/// Independent check: dense tensor expansion of every factor (the delta
/// factor included, as a finite bivariate sum) over full Minkowski windows.
Rat dense_oracle(const CTExpression& expr, const Rat& t, std::size_t cell_cap = 4'000'000);

/// Rational reconstruction of a residue modulo m; nullopt when no fraction
/// with numerator and denominator below sqrt(m/2) exists.
std::optional<Rat> rational_reconstruct(const Int& a, const Int& m);

}  // namespace ctv
