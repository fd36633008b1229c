#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctverify/ratpoly.hpp"

namespace ctv::zhu {

enum class Family { A, D };
std::string to_string(Family f);
Family parse_family(const std::string& s);

/// h_{i,j} = (i - jp + p - 1)(i - jp - p + 1) / (4p); i may be any rational.
Rat h_weight(const Rat& i, long j, long p);

RatPoly f_p(long p);
RatPoly ell_p(long p);
RatPoly g_p(long m, long p);
/// Monic: the scalar in front is not determined by the weights.
RatPoly v_p(long m, long p);

/// h_p(h_{i,m+1}) = f_p(h_{i,m+1}), h_p(h_{3p+1/2-j,1}) = -f_p(h_{3p+1/2-j,1}) / 2.
RatPoly h_p_interp(long m, long p);
/// u_p(h_{i,m+1}) = C(-mp - 1 + i, 2p - 1).
RatPoly u_p_interp(long m, long p);

struct Node {
  std::string label;  // e.g. "i=2" or "j=3"
  Rat x;
  Rat y;
};

std::vector<Node> h_p_nodes(long m, long p);
std::vector<Node> u_p_nodes(long m, long p);

class NodeCollision : public Error {
 public:
  NodeCollision(std::string first, std::string second, const Rat& x);
  std::string first;
  std::string second;
};

/// Throws NodeCollision naming both labels when two abscissae coincide.
RatPoly interpolate_nodes(const std::vector<Node>& nodes);

Rat phi(const Rat& t, long m, long p);

/// a + b*sqrt(-1); U^(m)(0) picks up i^m on the sigma-twisted rows.
struct GaussRat {
  Rat re{0};
  Rat im{0};
  friend bool operator==(const GaussRat&, const GaussRat&) = default;
};
std::string to_string(const GaussRat& z);

struct ZhuRow {
  std::string label;
  Rat L0;
  /// H^(2)(0) for the D family, H(0) for the A family. On two-dimensional
  /// lowest spaces this is the + eigenvalue; the other is its negative.
  Rat H;
  std::optional<GaussRat> U;  // D family only
  int dim_lowest = 1;         // A family: 1 or 2
};

/// One R(i,j,k) row. l is the external parameter of that row.
struct RParams {
  long i = 1;
  long j = 0;
  long k = 0;
  Rat l{0};
};

struct Table {
  Family family = Family::D;
  long m = 2;
  long p = 1;
  std::vector<ZhuRow> rows;
  long expected_count = 0;
  bool count_matches = false;
};

/// Lambda/Pi rows over i = 1..p with the j-ranges 1..floor((m-1)/2) (Lambda)
/// and 1..floor(m/2) (Pi); R(i,j,k) rows come from `r_rows` verbatim.
Table build_table(Family family, long m, long p, const std::vector<RParams>& r_rows = {});

/// R(i,j,k) rows the count formula leaves room for.
long r_row_count(Family family, long m, long p);

struct Collision {
  std::size_t a = 0;
  std::size_t b = 0;
};
/// Pairs of D-family rows with identical (L0, H, U).
std::vector<Collision> duplicate_weights(const Table& t);

std::string table_csv(const Table& t);
std::string table_markdown(const Table& t);

struct DimReport {
  Family family = Family::D;
  long m = 2;
  long p = 1;
  long zhu_dim = 0;
  long irreducible_count = 0;
  std::optional<long> center_dim;  // A family
  /// D: dim A_0 <= m^2 p + 5p - 1 and dim A_1 <= 3p. A: dim A_{+-1} <= p.
  std::optional<long> even_part_bound;
  long odd_part_bound = 0;
};

DimReport dims(Family family, long m, long p);

}  // namespace ctv::zhu
