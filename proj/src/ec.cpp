#include "ecmds/ec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace ecmds {

namespace {

std::vector<int64_t> prime_factors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

int64_t isqrt64(int64_t n) {
  if (n < 0) throw CurveError("isqrt of negative value");
  int64_t r = (int64_t)std::sqrt((double)n);
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

FieldElement Curve::fe(int64_t n) const {
  int64_t p = F->p();
  return F->el((int32_t)(((n % p) + p) % p));
}

FieldElement Curve::discriminant() const {
  FieldElement b2 = a1 * a1 + fe(4) * a2;
  FieldElement b4 = fe(2) * a4 + a1 * a3;
  FieldElement b6 = a3 * a3 + fe(4) * a6;
  FieldElement b8 = a1 * a1 * a6 + fe(4) * a2 * a6 - a1 * a3 * a4 +
                    a2 * a3 * a3 - a4 * a4;
  return -(b2 * b2 * b8) - fe(8) * b4 * b4 * b4 - fe(27) * b6 * b6 +
         fe(9) * b2 * b4 * b6;
}

bool Curve::on_curve(const Point& P) const {
  if (P.inf) return true;
  FieldElement lhs = P.y * P.y + a1 * P.x * P.y + a3 * P.y;
  FieldElement rhs = P.x * P.x * P.x + a2 * P.x * P.x + a4 * P.x + a6;
  return lhs == rhs;
}

std::string Curve::render() const {
  const FieldCtx& Fq = *F;
  std::ostringstream lhs, rhs;
  lhs << "y^2";
  if (!a1.is_zero()) lhs << " + " << (a1 == Fq.one() ? "" : Fq.render(a1) + "*") << "xy";
  if (!a3.is_zero()) lhs << " + " << (a3 == Fq.one() ? "" : Fq.render(a3) + "*") << "y";
  rhs << "x^3";
  if (!a2.is_zero()) rhs << " + " << (a2 == Fq.one() ? "" : Fq.render(a2) + "*") << "x^2";
  if (!a4.is_zero()) rhs << " + " << (a4 == Fq.one() ? "" : Fq.render(a4) + "*") << "x";
  if (!a6.is_zero()) rhs << " + " << Fq.render(a6);
  return lhs.str() + " = " + rhs.str();
}

Curve new_curve(const FieldCtx& F, FieldElement a1, FieldElement a2,
                FieldElement a3, FieldElement a4, FieldElement a6) {
  for (const FieldElement* e : {&a1, &a2, &a3, &a4, &a6})
    if (e->ctx != &F) throw CurveError("coefficient from a different field context");
  Curve E;
  E.F = &F;
  E.a1 = a1; E.a2 = a2; E.a3 = a3; E.a4 = a4; E.a6 = a6;
  if (E.discriminant().is_zero())
    throw CurveError("curve " + E.render() + " is singular over F_" +
                     std::to_string(F.q()));
  return E;
}

Curve new_curve(const FieldCtx& F, const std::vector<FieldElement>& a) {
  if (a.size() != 5) throw CurveError("expected 5 coefficients (a1,a2,a3,a4,a6)");
  return new_curve(F, a[0], a[1], a[2], a[3], a[4]);
}

Point ec_neg(const Curve& E, const Point& P) {
  if (P.inf) return P;
  return {P.x, -P.y - E.a1 * P.x - E.a3};
}

bool is_two_torsion(const Curve& E, const Point& P) {
  if (P.inf) return false;
  return (E.fe(2) * P.y + E.a1 * P.x + E.a3).is_zero();
}

Point ec_add(const Curve& E, const Point& P, const Point& Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  if (Q == ec_neg(E, P)) return Point::infinity();

  FieldElement lam, nu;
  if (P == Q) {
    FieldElement den = E.fe(2) * P.y + E.a1 * P.x + E.a3;  // nonzero here
    lam = (E.fe(3) * P.x * P.x + E.fe(2) * E.a2 * P.x + E.a4 - E.a1 * P.y) / den;
    nu = (-(P.x * P.x * P.x) + E.a4 * P.x + E.fe(2) * E.a6 - E.a3 * P.y) / den;
  } else {
    FieldElement dx = Q.x - P.x;  // nonzero: same x means Q == P or Q == -P
    lam = (Q.y - P.y) / dx;
    nu = (P.y * Q.x - Q.y * P.x) / dx;
  }
  FieldElement x3 = lam * lam + E.a1 * lam - E.a2 - P.x - Q.x;
  FieldElement y3 = -(lam + E.a1) * x3 - nu - E.a3;
  return {x3, y3};
}

Point ec_sub(const Curve& E, const Point& P, const Point& Q) {
  return ec_add(E, P, ec_neg(E, Q));
}

Point scalar_mul(const Curve& E, int64_t n, const Point& P) {
  if (n < 0) return scalar_mul(E, -n, ec_neg(E, P));
  Point acc = Point::infinity();
  Point base = P;
  while (n > 0) {
    if (n & 1) acc = ec_add(E, acc, base);
    base = ec_add(E, base, base);
    n >>= 1;
  }
  return acc;
}

std::vector<Point> enumerate_points(const Curve& E) {
  const FieldCtx& F = *E.F;
  std::vector<Point> pts;
  pts.push_back(Point::infinity());
  for (int32_t x = 0; x < F.q(); ++x)
    for (int32_t y = 0; y < F.q(); ++y) {
      Point P(F.el(x), F.el(y));
      if (E.on_curve(P)) pts.push_back(P);
    }
  return pts;  // already canonical: scan order matches Point ordering
}

int64_t count_points(const Curve& E) {
  const FieldCtx& F = *E.F;
  int64_t n = 1;
  for (int32_t xv = 0; xv < F.q(); ++xv) {
    FieldElement x = F.el(xv);
    FieldElement c1 = E.a1 * x + E.a3;
    FieldElement c0 = x * x * x + E.a2 * x * x + E.a4 * x + E.a6;
    if (F.p() == 2) {
      if (c1.is_zero())
        n += 1;  // y^2 = c0 has exactly one root
      else if (F.trace_to_prime(F.divv(c0.v, F.mulv(c1.v, c1.v))) == 0)
        n += 2;
    } else {
      FieldElement disc = c1 * c1 + E.fe(4) * c0;
      if (disc.is_zero())
        n += 1;
      else if (F.is_square(disc.v))
        n += 2;
    }
  }
  return n;
}

int64_t point_order(const Curve& E, const Point& P) {
  int64_t N = count_points(E);
  int64_t d = N;
  for (int64_t f : prime_factors(N))
    while (d % f == 0 && scalar_mul(E, d / f, P).inf) d /= f;
  return d;
}

GroupStructure group_structure(const Curve& E) {
  GroupStructure S;
  S.E = E;
  S.points = enumerate_points(E);
  S.N = (int64_t)S.points.size();
  auto factors = prime_factors(S.N);

  auto order_of = [&](const Point& P) {
    int64_t d = S.N;
    for (int64_t f : factors)
      while (d % f == 0 && scalar_mul(E, d / f, P).inf) d /= f;
    return d;
  };

  int64_t best = 1;
  for (const Point& P : S.points) {
    int64_t o = order_of(P);
    if (o > best) {
      best = o;
      S.g2 = P;
      if (o == S.N) break;  // cyclic, cannot improve
    }
  }
  S.d2 = best;
  S.d1 = S.N / S.d2;
  if (S.d2 == 1) S.g2 = Point::infinity();

  // multiples of g2, in index order
  std::vector<Point> g2_cyc(S.d2);
  std::set<Point> g2_set;
  {
    Point cur = Point::infinity();
    for (int64_t j = 0; j < S.d2; ++j) {
      g2_cyc[j] = cur;
      g2_set.insert(cur);
      cur = ec_add(E, cur, S.g2);
    }
  }

  if (S.d1 == 1) {
    S.g1 = Point::infinity();
    for (int64_t j = 0; j < S.d2; ++j) S.coords[g2_cyc[j]] = {0, j};
  } else {
    for (const Point& cand : S.points) {
      if (order_of(cand) != S.d1) continue;
      bool clean = true;
      Point cur = cand;
      for (int64_t i = 1; i < S.d1 && clean; ++i) {
        if (g2_set.count(cur)) clean = false;
        cur = ec_add(E, cur, cand);
      }
      if (!clean) continue;
      S.g1 = cand;
      S.coords.clear();
      Point rowbase = Point::infinity();
      for (int64_t i = 0; i < S.d1; ++i) {
        for (int64_t j = 0; j < S.d2; ++j)
          S.coords[ec_add(E, rowbase, g2_cyc[j])] = {i, j};
        rowbase = ec_add(E, rowbase, S.g1);
      }
      if ((int64_t)S.coords.size() == S.N) break;
    }
    if ((int64_t)S.coords.size() != S.N)
      throw CurveError("failed to split the point group (internal)");
  }

  if ((E.F->q() - 1) % S.d1 != 0)
    throw CurveError("group splitting violates d1 | q-1 (internal)");
  return S;
}

bool Subgroup::contains(const Point& P) const {
  return std::binary_search(members.begin(), members.end(), P);
}

Subgroup index2_subgroup(const GroupStructure& S, int selector) {
  if (S.N % 2 != 0)
    throw CurveError("point group has odd order: no index-2 subgroup");
  if (selector < 0 || selector > 2)
    throw CurveError("subgroup selector must be 0, 1 or 2");
  if (selector != 0 && S.d1 % 2 != 0)
    throw CurveError("selectors 1 and 2 need both invariant factors even");

  Subgroup H;
  H.index = 2;
  for (const Point& P : S.points) {
    auto [i, j] = S.coords.at(P);
    int64_t chi = selector == 0 ? j : selector == 1 ? i : i + j;
    if (chi % 2 == 0) H.members.push_back(P);
  }
  // points are canonical, so members already are; keep explicit for safety
  std::sort(H.members.begin(), H.members.end());
  if ((int64_t)H.members.size() * 2 != S.N)
    throw CurveError("index-2 character kernel has wrong size (internal)");
  return H;
}

Subgroup subgroup_span(const Curve& E, const std::vector<Point>& gens) {
  for (const Point& g : gens)
    if (!E.on_curve(g))
      throw CurveError("generator " + point_string(g) + " is not on the curve");
  std::set<Point> seen{Point::infinity()};
  std::vector<Point> frontier{Point::infinity()};
  while (!frontier.empty()) {
    std::vector<Point> next;
    for (const Point& s : frontier)
      for (const Point& g : gens) {
        Point t = ec_add(E, s, g);
        if (seen.insert(t).second) next.push_back(t);
      }
    frontier = std::move(next);
  }
  Subgroup H;
  H.members.assign(seen.begin(), seen.end());
  int64_t N = count_points(E);
  if (N % (int64_t)H.members.size() != 0)
    throw CurveError("span size does not divide group order (internal)");
  H.index = N / (int64_t)H.members.size();
  return H;
}

int64_t waterhouse_max_even_N(int64_t q) {
  if (q < 2) throw CurveError("q must be a prime power >= 2");
  int64_t p = 0, qq = q;
  for (int64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) p = q;
  int m = 0;
  while (qq > 1) {
    if (qq % p != 0) throw CurveError("q must be a prime power");
    qq /= p;
    ++m;
  }

  if (p != 2) return q + 1 + 2 * isqrt64(q);
  if (m % 2 == 0) return q + 2 * isqrt64(q);
  int64_t t = isqrt64(4 * q);  // floor(2*sqrt(q)), q an odd power of 2
  if (t % 2 == 0) return q + 2 * isqrt64(q);
  return q + 1 + t;
}

Curve search_curve(const FieldCtx& F, int64_t target_N, int64_t max_candidates) {
  int64_t q = F.q();
  int64_t dev = target_N - (q + 1);
  if (target_N < 1 || dev * dev > 4 * q)
    throw CurveError("target point count " + std::to_string(target_N) +
                     " is outside the Hasse-Weil window for q = " +
                     std::to_string(q));
  int64_t tried = 0;
  for (int32_t v1 = 0; v1 < q; ++v1)
    for (int32_t v2 = 0; v2 < q; ++v2)
      for (int32_t v3 = 0; v3 < q; ++v3)
        for (int32_t v4 = 0; v4 < q; ++v4)
          for (int32_t v6 = 0; v6 < q; ++v6) {
            if (max_candidates > 0 && ++tried > max_candidates)
              throw BudgetError("curve search budget exhausted");
            Curve E;
            E.F = &F;
            E.a1 = F.el(v1); E.a2 = F.el(v2); E.a3 = F.el(v3);
            E.a4 = F.el(v4); E.a6 = F.el(v6);
            if (E.discriminant().is_zero()) continue;
            if (count_points(E) == target_N) return E;
          }
  throw CurveError("no curve over F_" + std::to_string(q) + " with " +
                   std::to_string(target_N) + " points");
}

std::string point_string(const Point& P) {
  if (P.inf) return "[0:1:0]";
  const FieldCtx& F = *P.x.ctx;
  return "[" + F.render(P.x) + ":" + F.render(P.y) + ":1]";
}

Point parse_point(const FieldCtx& F, const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace((unsigned char)c)) t += c;
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw CurveError("bad point string: " + s);
  t = t.substr(1, t.size() - 2);
  std::vector<std::string> parts;
  size_t start = 0;
  for (size_t i = 0; i <= t.size(); ++i)
    if (i == t.size() || t[i] == ':') {
      parts.push_back(t.substr(start, i - start));
      start = i + 1;
    }
  if (parts.size() != 3) throw CurveError("bad point string: " + s);
  FieldElement z = F.parse(parts[2]);
  if (z.is_zero()) {
    if (!F.parse(parts[0]).is_zero())
      throw CurveError("bad point at infinity: " + s);
    return Point::infinity();
  }
  FieldElement zi = F.one() / z;
  return {F.parse(parts[0]) * zi, F.parse(parts[1]) * zi};
}

}  // namespace ecmds
