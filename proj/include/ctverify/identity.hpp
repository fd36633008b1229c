#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ctverify/ct_engine.hpp"
#include "ctverify/ratpoly.hpp"

namespace ctv {

enum class CaseId { A1, A2, A3, A4, A5, A6, H, Htilde, F, Ftilde };

std::string to_string(CaseId id);
CaseId parse_case_id(const std::string& s);
const std::vector<CaseId>& all_case_ids();

/// Two readings of the x0 exponent: m^2p + mp - m(t+1) and m^2p + mp - (m+1)t.
enum class ExponentVariant { MTimesTPlus1, MPlus1TimesT };
std::string to_string(ExponentVariant v);
ExponentVariant parse_exponent_variant(const std::string& s);

/// Which variable a raw (u - v)^(-n) is expanded around: x0 whenever it
/// occurs, the first-written u, or the second-written v.
enum class Dominance { X0, FirstWritten, SecondWritten };
std::string to_string(Dominance d);
Dominance parse_dominance(const std::string& s);

/// Exponent of the x_1 ... x_{m+1} block in A2: 2p (balanced against the
/// x0 exponent and the right-hand degree) or 2mp (as printed).
enum class XiExponent { Balanced, Printed };
std::string to_string(XiExponent x);
XiExponent parse_xi_exponent(const std::string& s);

/// Numerator polynomial of the tilde-F residue.
enum class NumeratorVariant { Tabulated, Printed };
std::string to_string(NumeratorVariant n);
NumeratorVariant parse_numerator_variant(const std::string& s);

/// C(a t + b, k)
struct BinomialFactor {
  Rat a{1};
  Rat b{0};
  unsigned long k = 0;
};

/// prod_{i=1}^{count} ((t + shift)^2 - i^2/m^2)
struct ShiftedSquares {
  Rat shift;
  long count = 0;
  long m = 1;
};

/// prod_{i=lo}^{hi} (t + shift - i/m)
struct LinearRange {
  Rat shift;
  long lo = 0;
  long hi = -1;
  long m = 1;
};

using RhsFactor = std::variant<BinomialFactor, ShiftedSquares, LinearRange>;

RatPoly rhs_factor_poly(const RhsFactor& f);
std::string describe(const RhsFactor& f);

struct CaseOptions {
  std::optional<ExponentVariant> variant;  // default: registry choice
  std::optional<Dominance> dominance;      // default: registry choice
  NumeratorVariant numerator = NumeratorVariant::Tabulated;
  XiExponent xi_exponent = XiExponent::Balanced;
  /// Raises k of the first binomial factor by one (a deliberately false RHS).
  bool perturb_rhs = false;
};

struct IdentityCase {
  CaseId id = CaseId::A1;
  long m = 2;
  long p = 1;
  /// One residue display, or two when the identity equates them.
  std::vector<CTExpression> lhs;
  /// lhs[0] == display_factor * lhs[1]
  std::optional<Rat> display_factor;
  std::vector<RhsFactor> rhs;
  std::optional<ExponentVariant> variant;  // nullopt when the x0 exponent is unambiguous
  Dominance dominance = Dominance::X0;
  std::optional<NumeratorVariant> numerator;
  std::optional<XiExponent> xi_exponent;  // A2 only
  std::optional<long> residual_degree_bound;
  std::optional<CaseId> partner;  // coprimality partner
  bool perturbed = false;
};

/// Registry defaults, fixed by resolve_exponent_variant / dominance trials.
std::optional<ExponentVariant> default_variant(CaseId id);
Dominance default_dominance(CaseId id);

IdentityCase build_case(CaseId id, long m, long p, const CaseOptions& opts = {});

enum class RunMode { Exact, Interp, Both };
std::string to_string(RunMode m);
RunMode parse_run_mode(const std::string& s);

struct RunOptions {
  RunMode mode = RunMode::Interp;
  Arithmetic arithmetic = Arithmetic::Modular;
  unsigned jobs = 1;
};

struct IdentityReport {
  CaseId id = CaseId::A1;
  long m = 0;
  long p = 0;
  std::optional<ExponentVariant> variant;
  Dominance dominance = Dominance::X0;
  std::optional<NumeratorVariant> numerator;
  std::optional<XiExponent> xi_exponent;
  RunMode mode = RunMode::Interp;
  bool perturbed = false;

  std::vector<RatPoly> lhs_values;  // per display
  RatPoly rhs_product;
  std::vector<bool> display_division_exact;
  bool division_exact = false;
  RatPoly remainder;
  bool lhs_nonzero = false;
  RatPoly residual;  // primitive
  Rat scale{0};
  std::optional<bool> display_equality;
  std::optional<bool> mode_agreement;
  std::optional<long> residual_degree_bound;
  std::optional<bool> degree_bound_ok;
  std::optional<bool> coprime_with_partner;
  std::string error;  // set when the case could not be computed

  std::vector<CTStats> stats;  // per display and mode; kept out of reports

  [[nodiscard]] bool computed() const { return error.empty(); }
  [[nodiscard]] bool passed() const;
};

IdentityReport run_case(const IdentityCase& c, const RunOptions& opts = {});

struct PairReport {
  IdentityReport first;
  IdentityReport second;
  RatPoly gcd;
  bool coprime = false;
};

/// Runs the case and its coprimality partner (H with Htilde, F with Ftilde).
PairReport run_pair(CaseId id, long m, long p, const CaseOptions& opts = {},
                    const RunOptions& run = {});

/// One report per (m, p); failures are recorded in the report, never thrown.
std::vector<IdentityReport> verify_range(CaseId id, const std::vector<long>& ms,
                                         const std::vector<long>& ps, const CaseOptions& opts = {},
                                         const RunOptions& run = {});

struct VariantResolution {
  CaseId id = CaseId::A1;
  long m = 0;
  long p = 0;
  bool exact_m_t_plus_1 = false;
  bool exact_m_plus_1_t = false;
  std::optional<ExponentVariant> chosen;
  bool needs_review = true;
};

/// Runs both x0-exponent readings at the smallest admissible parameters.
VariantResolution resolve_exponent_variant(CaseId id, const RunOptions& run = {});

long min_m(CaseId id);

/// CT prod_{i != j} (1 - x_i/x_j)^p over n variables.
CTExpression dyson_expression(long n, long p);
/// (np)! / (p!)^n
Int dyson_closed_form(long n, long p);

}  // namespace ctv
