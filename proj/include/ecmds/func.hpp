#pragma once

#include <map>
#include <string>
#include <vector>

#include "ecmds/ec.hpp"

namespace ecmds {

struct FuncError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// evaluation at a pole of the function
struct PoleError : FuncError {
  using FuncError::FuncError;
};
// divisor support leaves the rational points
struct UnsupportedDivisorError : FuncError {
  using FuncError::FuncError;
};

// Dense univariate polynomial over F_q, packed coefficients low -> high,
// no trailing zeros (zero polynomial has an empty vector, degree -1).
class Poly {
 public:
  const FieldCtx* F = nullptr;
  std::vector<int32_t> c;

  Poly() = default;
  explicit Poly(const FieldCtx& Fq) : F(&Fq) {}
  Poly(const FieldCtx& Fq, std::vector<int32_t> coeffs);

  static Poly constant(const FieldCtx& Fq, int32_t v);
  static Poly X(const FieldCtx& Fq);

  int deg() const { return (int)c.size() - 1; }
  bool is_zero() const { return c.empty(); }
  int32_t lc() const { return c.empty() ? 0 : c.back(); }
  int32_t coeff(int i) const { return i < (int)c.size() && i >= 0 ? c[i] : 0; }
  void trim();

  FieldElement eval(const FieldElement& x) const;
  bool operator==(const Poly& o) const { return F == o.F && c == o.c; }
  bool operator!=(const Poly& o) const { return !(*this == o); }
};

Poly padd(const Poly& a, const Poly& b);
Poly psub(const Poly& a, const Poly& b);
Poly pneg(const Poly& a);
Poly pmul(const Poly& a, const Poly& b);
Poly pscale(const Poly& a, int32_t s);
// quotient and remainder; divisor must be nonzero
std::pair<Poly, Poly> pdivrem(const Poly& a, const Poly& b);
Poly pgcd(Poly a, Poly b);  // monic, or zero if both zero
Poly pmonic(const Poly& a);
// coefficients of a(x0 + t) as a polynomial in t
Poly ptaylor(const Poly& a, const FieldElement& x0);
// multiplicity of x0 as a root
int pord_at(const Poly& a, const FieldElement& x0);
std::string poly_render(const Poly& a, const std::string& var = "x");

// Element of the function field F_q(E), kept as (a(x) + b(x) y) / d(x)
// with d monic and gcd(a, b, d) = 1.
class RationalFunction {
 public:
  Curve E;
  Poly a, b, d;

  RationalFunction() = default;
  RationalFunction(const Curve& curve, Poly na, Poly nb, Poly nd);

  static RationalFunction zero(const Curve& E);
  static RationalFunction one(const Curve& E);
  static RationalFunction constant(const Curve& E, const FieldElement& v);
  static RationalFunction x(const Curve& E);
  static RationalFunction y(const Curve& E);
  static RationalFunction from_poly(const Curve& E, const Poly& num);

  bool is_zero() const { return a.is_zero() && b.is_zero(); }

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  RationalFunction operator-() const;
  bool operator==(const RationalFunction& o) const;
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

  // norm to F_q(x): f * conj(f), a polynomial when d = 1
  Poly norm_numerator() const;  // a^2 - a b h - b^2 g for the numerator a + by
  std::string render() const;
};

struct Divisor {
  Curve E;
  std::map<Point, int> coeff;  // only nonzero entries

  Divisor() = default;
  explicit Divisor(const Curve& curve) : E(curve) {}

  int degree() const;
  int at(const Point& P) const;
  void add_term(const Point& P, int n);
  std::vector<Point> support() const;  // canonical order
  bool operator==(const Divisor& o) const;
  std::string render() const;
};

// Order of vanishing of f at P (negative at poles).  f must be nonzero.
int valuation(const RationalFunction& f, const Point& P);
// Value at P; throws PoleError when valuation(f, P) < 0.
FieldElement evaluate(const RationalFunction& f, const Point& P);
// Principal divisor of f; every zero and pole must be a rational point.
Divisor divisor_of(const RationalFunction& f);
// degree zero and sums to the identity under the group law
bool is_principal(const Divisor& D);

// Affine line through P and Q (tangent when P = Q, vertical through
// x = x_P when Q = -P or one argument is at infinity).
RationalFunction line_through(const Curve& E, const Point& P, const Point& Q);
// f composed with translation by -Q: valuation shifts by Q,
// v_P(translate(f, Q)) = v_{P - Q}(f).
RationalFunction translate(const RationalFunction& f, const Point& Q);

// Basis of a Riemann-Roch space with its divisor and the valuations of each
// basis element at the support of G.
struct RRBasis {
  Divisor G;
  std::vector<RationalFunction> funcs;
  std::vector<std::map<Point, int>> vals;  // valuations at supp(G)
};

// L(kQ): translates of the monomial basis of L(kO); pole orders at Q are
// 0, 2, 3, ..., k in that order.
RRBasis rr_basis_kQ(const Curve& E, int k, const Point& Q);
// L((k-1)P + Q) for even k: functions 1, f_2, ..., f_{k-1} with poles only
// at P and nonzero values at Q, then one function g with simple poles at
// both P and Q.  g is last.
RRBasis rr_basis_mixed(const Curve& E, int k, const Point& P, const Point& Q);
// Linear-algebra fallback for arbitrary effective G with rational support;
// used as an independent cross-check of the structured constructions.
RRBasis rr_basis_generic(const Curve& E, const Divisor& G);

}  // namespace ecmds
