#include "ctverify/laurent.hpp"

#include <sstream>

namespace ctv {

std::vector<std::string> factor_vars(const Factor& f) {
  return std::visit(
      [](const auto& fac) -> std::vector<std::string> {
        using T = std::decay_t<decltype(fac)>;
        if constexpr (std::is_same_v<T, Monomial> || std::is_same_v<T, OnePlus> ||
                      std::is_same_v<T, PolyFactor>) {
          return {fac.var};
        } else if constexpr (std::is_same_v<T, Diff>) {
          return {fac.u, fac.v};
        } else if constexpr (std::is_same_v<T, GeomInv>) {
          return {fac.num, fac.den};
        } else {
          return {fac.w, fac.v};
        }
      },
      f);
}

std::string describe(const Factor& f) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& fac) {
        using T = std::decay_t<decltype(fac)>;
        if constexpr (std::is_same_v<T, Monomial>) {
          os << fac.var << "^(" << fac.exponent << ")";
        } else if constexpr (std::is_same_v<T, OnePlus>) {
          os << "(1+" << fac.var << ")^(" << fac.a << "*t+" << fac.b << ")";
        } else if constexpr (std::is_same_v<T, Diff>) {
          os << "(" << fac.u << "-" << fac.v << ")^(" << fac.exponent << ")";
        } else if constexpr (std::is_same_v<T, GeomInv>) {
          os << "(1-" << fac.num << "/" << fac.den << ")^(-" << fac.power << ")";
        } else if constexpr (std::is_same_v<T, DeltaDeriv>) {
          os << "d^" << fac.order << "/d" << fac.w << "^" << fac.order << "/" << fac.order << "! "
             << fac.v << "^-1 delta(" << fac.w << "/" << fac.v << ")";
        } else {
          os << "poly_" << fac.var << "(";
          for (std::size_t i = 0; i < fac.coeffs.size(); ++i) {
            os << (i ? "," : "") << fac.coeffs[i].get_str();
          }
          os << ")";
        }
      },
      f);
  return os.str();
}

NormalizedPower normalize_negative_power(const std::string& u, const std::string& v, long e,
                                         const std::string& dominant) {
  if (e >= 0) {
    throw Error("normalize_negative_power needs a negative exponent, got " + std::to_string(e));
  }
  if (dominant == u) {
    // (u - v)^e = u^e (1 - v/u)^e
    return {Rat(1), Monomial{u, e}, GeomInv{v, u, -e}};
  }
  if (dominant == v) {
    // (u - v)^e = (-1)^e v^e (1 - u/v)^e
    return {Rat(e % 2 == 0 ? 1 : -1), Monomial{v, e}, GeomInv{u, v, -e}};
  }
  throw Error("dominant variable " + dominant + " is neither " + u + " nor " + v);
}

}  // namespace ctv
