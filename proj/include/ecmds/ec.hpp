#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ecmds/gf.hpp"

namespace ecmds {

struct CurveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an enumeration cap is hit; callers either raise the cap or
// fall back to sampling.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Curve;

// Affine point or the point at infinity.  Canonical ordering puts infinity
// first, then sorts by packed x, then packed y; enumerate_points and all
// subgroup listings use it.
struct Point {
  bool inf = true;
  FieldElement x, y;

  Point() = default;
  Point(FieldElement px, FieldElement py) : inf(false), x(px), y(py) {}
  static Point infinity() { return {}; }

  bool operator==(const Point& o) const {
    if (inf || o.inf) return inf == o.inf;
    return x == o.x && y == o.y;
  }
  bool operator!=(const Point& o) const { return !(*this == o); }
  bool operator<(const Point& o) const {
    if (inf != o.inf) return inf;
    if (inf) return false;
    if (x.v != o.x.v) return x.v < o.x.v;
    return y.v < o.y.v;
  }
};

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_q.
// Kept in long Weierstrass form so characteristics 2 and 3 work unchanged.
class Curve {
 public:
  const FieldCtx* F = nullptr;
  FieldElement a1, a2, a3, a4, a6;

  FieldElement discriminant() const;
  bool on_curve(const Point& P) const;
  // constant n as a field element (n may be any integer)
  FieldElement fe(int64_t n) const;
  std::string render() const;
};

// Validates coefficients and rejects singular equations.
Curve new_curve(const FieldCtx& F, FieldElement a1, FieldElement a2,
                FieldElement a3, FieldElement a4, FieldElement a6);
Curve new_curve(const FieldCtx& F, const std::vector<FieldElement>& a);

Point ec_neg(const Curve& E, const Point& P);
Point ec_add(const Curve& E, const Point& P, const Point& Q);
Point ec_sub(const Curve& E, const Point& P, const Point& Q);
Point scalar_mul(const Curve& E, int64_t n, const Point& P);
bool is_two_torsion(const Curve& E, const Point& P);

// All rational points in canonical order (infinity first).
std::vector<Point> enumerate_points(const Curve& E);
// #E(F_q) by summing fiber sizes; no point list is materialized.
int64_t count_points(const Curve& E);
int64_t point_order(const Curve& E, const Point& P);

// E(F_q) = Z_d1 x Z_d2 with d1 | d2 (d1 = 1 for cyclic groups).
// g2 has order d2; g1 has order d1 and meets <g2> trivially.
struct GroupStructure {
  Curve E;
  int64_t N = 0;
  int64_t d1 = 1, d2 = 1;
  Point g1, g2;  // g1 = infinity when d1 == 1
  std::vector<Point> points;                   // canonical order
  std::map<Point, std::pair<int64_t, int64_t>> coords;  // P = [i]g1 + [j]g2
};
GroupStructure group_structure(const Curve& E);

struct Subgroup {
  std::vector<Point> members;  // canonical order
  int64_t index = 1;           // in the full point group
  bool contains(const Point& P) const;
};

// Kernel of a character E -> {+-1}; selector 0 -> (i,j) |-> j mod 2,
// 1 -> i mod 2, 2 -> (i+j) mod 2.  Selectors 1 and 2 need d1 even.
Subgroup index2_subgroup(const GroupStructure& S, int selector = 0);
// Closure of explicit generators; index computed against #E(F_q).
Subgroup subgroup_span(const Curve& E, const std::vector<Point>& gens);

// Largest even order of an elliptic group over F_q (prime power q).
int64_t waterhouse_max_even_N(int64_t q);

// First curve in coefficient order (a1,a2,a3,a4,a6) with exactly target_N
// points.  max_candidates bounds the scan; 0 means no bound.
Curve search_curve(const FieldCtx& F, int64_t target_N,
                   int64_t max_candidates = 0);

std::string point_string(const Point& P);
Point parse_point(const FieldCtx& F, const std::string& s);

int64_t isqrt64(int64_t n);

}  // namespace ecmds
