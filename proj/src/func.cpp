#include "ecmds/func.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ecmds {

namespace {

void require_same(const Poly& a, const Poly& b) {
  if (a.F == nullptr || a.F != b.F) throw FuncError("polynomial field mismatch");
}

bool same_curve(const Curve& A, const Curve& B) {
  return A.F == B.F && A.a1 == B.a1 && A.a2 == B.a2 && A.a3 == B.a3 &&
         A.a4 == B.a4 && A.a6 == B.a6;
}

void require_same_curve(const Curve& A, const Curve& B) {
  if (!same_curve(A, B)) throw FuncError("curve mismatch");
}

// y^2 + h(x) y = g(x)
Poly curve_h(const Curve& E) {
  return Poly(*E.F, {E.a3.v, E.a1.v});
}
Poly curve_g(const Curve& E) {
  return Poly(*E.F, {E.a6.v, E.a4.v, E.a2.v, E.F->one().v});
}

Poly ptrunc(const Poly& a, int len) {
  Poly r = a;
  if ((int)r.c.size() > len) r.c.resize(len);
  r.trim();
  return r;
}

int first_nonzero_index(const Poly& a) {
  for (int i = 0; i < (int)a.c.size(); ++i)
    if (a.c[i]) return i;
  return -1;
}

std::vector<Point> fiber_points(const Curve& E, const FieldElement& x0) {
  const FieldCtx& F = *E.F;
  std::vector<Point> out;
  for (int32_t yv = 0; yv < F.q(); ++yv) {
    Point P(x0, F.el(yv));
    if (E.on_curve(P)) out.push_back(P);
  }
  return out;
}

}  // namespace

// --- Poly --------------------------------------------------------------------

Poly::Poly(const FieldCtx& Fq, std::vector<int32_t> coeffs)
    : F(&Fq), c(std::move(coeffs)) {
  for (int32_t v : c)
    if (v < 0 || v >= Fq.q()) throw FuncError("coefficient out of range");
  trim();
}

Poly Poly::constant(const FieldCtx& Fq, int32_t v) {
  return Poly(Fq, {v});
}

Poly Poly::X(const FieldCtx& Fq) {
  return Poly(Fq, {0, 1});
}

void Poly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

FieldElement Poly::eval(const FieldElement& x) const {
  const FieldCtx& Fq = *F;
  int32_t acc = 0;
  for (int i = (int)c.size() - 1; i >= 0; --i)
    acc = Fq.addv(Fq.mulv(acc, x.v), c[i]);
  return Fq.el(acc);
}

Poly padd(const Poly& a, const Poly& b) {
  require_same(a, b);
  const FieldCtx& F = *a.F;
  Poly r(F);
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.c.size(); ++i)
    r.c[i] = F.addv(a.coeff((int)i), b.coeff((int)i));
  r.trim();
  return r;
}

Poly psub(const Poly& a, const Poly& b) {
  require_same(a, b);
  const FieldCtx& F = *a.F;
  Poly r(F);
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.c.size(); ++i)
    r.c[i] = F.subv(a.coeff((int)i), b.coeff((int)i));
  r.trim();
  return r;
}

Poly pneg(const Poly& a) {
  const FieldCtx& F = *a.F;
  Poly r = a;
  for (auto& v : r.c) v = F.negv(v);
  return r;
}

Poly pmul(const Poly& a, const Poly& b) {
  require_same(a, b);
  const FieldCtx& F = *a.F;
  if (a.is_zero() || b.is_zero()) return Poly(F);
  Poly r(F);
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (!a.c[i]) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = F.addv(r.c[i + j], F.mulv(a.c[i], b.c[j]));
  }
  r.trim();
  return r;
}

Poly pscale(const Poly& a, int32_t s) {
  const FieldCtx& F = *a.F;
  Poly r = a;
  for (auto& v : r.c) v = F.mulv(v, s);
  r.trim();
  return r;
}

std::pair<Poly, Poly> pdivrem(const Poly& a, const Poly& b) {
  require_same(a, b);
  const FieldCtx& F = *a.F;
  if (b.is_zero()) throw FuncError("polynomial division by zero");
  Poly rem = a, quo(F);
  quo.c.assign(std::max((int)a.c.size() - (int)b.c.size() + 1, 0), 0);
  int32_t lci = F.invv(b.lc());
  for (int i = rem.deg(); i >= b.deg(); --i) {
    int32_t cv = rem.coeff(i);
    if (!cv) continue;
    int32_t f = F.mulv(cv, lci);
    int off = i - b.deg();
    quo.c[off] = f;
    for (int j = 0; j <= b.deg(); ++j)
      rem.c[off + j] = F.subv(rem.c[off + j], F.mulv(f, b.c[j]));
  }
  quo.trim();
  rem.trim();
  return {quo, rem};
}

Poly pmonic(const Poly& a) {
  if (a.is_zero()) return a;
  return pscale(a, a.F->invv(a.lc()));
}

Poly pgcd(Poly a, Poly b) {
  require_same(a, b);
  while (!b.is_zero()) {
    Poly r = pdivrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return pmonic(a);
}

Poly ptaylor(const Poly& a, const FieldElement& x0) {
  // repeated synthetic division by (x - x0) collects the shifted coefficients
  const FieldCtx& F = *a.F;
  Poly rest = a, out(F);
  Poly lin(F, {F.negv(x0.v), 1});
  if (a.is_zero()) return out;
  out.c.reserve(a.c.size());
  while (!rest.is_zero()) {
    auto [q, r] = pdivrem(rest, lin);
    out.c.push_back(r.is_zero() ? 0 : r.c[0]);
    rest = std::move(q);
  }
  out.trim();
  return out;
}

int pord_at(const Poly& a, const FieldElement& x0) {
  if (a.is_zero()) throw FuncError("root order of the zero polynomial");
  const FieldCtx& F = *a.F;
  Poly lin(F, {F.negv(x0.v), 1});
  Poly rest = a;
  int ord = 0;
  while (true) {
    auto [q, r] = pdivrem(rest, lin);
    if (!r.is_zero()) return ord;
    ++ord;
    rest = std::move(q);
  }
}

std::string poly_render(const Poly& a, const std::string& var) {
  if (a.is_zero()) return "0";
  const FieldCtx& F = *a.F;
  std::ostringstream out;
  bool first = true;
  for (int i = a.deg(); i >= 0; --i) {
    if (!a.c[i]) continue;
    if (!first) out << " + ";
    first = false;
    std::string cs = F.render(F.el(a.c[i]));
    if (i == 0) {
      out << cs;
    } else {
      if (cs != "1") out << cs << "*";
      out << var;
      if (i > 1) out << "^" << i;
    }
  }
  return out.str();
}

// --- RationalFunction ---------------------------------------------------------

RationalFunction::RationalFunction(const Curve& curve, Poly na, Poly nb, Poly nd)
    : E(curve), a(std::move(na)), b(std::move(nb)), d(std::move(nd)) {
  if (a.F != E.F || b.F != E.F || d.F != E.F)
    throw FuncError("polynomial field does not match the curve");
  if (d.is_zero()) throw FuncError("zero denominator");
  if (a.is_zero() && b.is_zero()) {
    d = Poly::constant(*E.F, 1);
    return;
  }
  Poly g = pgcd(pgcd(a, b), d);
  if (g.deg() > 0) {
    a = pdivrem(a, g).first;
    b = pdivrem(b, g).first;
    d = pdivrem(d, g).first;
  }
  int32_t s = E.F->invv(d.lc());
  a = pscale(a, s);
  b = pscale(b, s);
  d = pscale(d, s);
}

RationalFunction RationalFunction::zero(const Curve& E) {
  return {E, Poly(*E.F), Poly(*E.F), Poly::constant(*E.F, 1)};
}
RationalFunction RationalFunction::one(const Curve& E) {
  return {E, Poly::constant(*E.F, 1), Poly(*E.F), Poly::constant(*E.F, 1)};
}
RationalFunction RationalFunction::constant(const Curve& E, const FieldElement& v) {
  return {E, Poly(*E.F, {v.v}), Poly(*E.F), Poly::constant(*E.F, 1)};
}
RationalFunction RationalFunction::x(const Curve& E) {
  return {E, Poly::X(*E.F), Poly(*E.F), Poly::constant(*E.F, 1)};
}
RationalFunction RationalFunction::y(const Curve& E) {
  return {E, Poly(*E.F), Poly::constant(*E.F, 1), Poly::constant(*E.F, 1)};
}
RationalFunction RationalFunction::from_poly(const Curve& E, const Poly& num) {
  return {E, num, Poly(*E.F), Poly::constant(*E.F, 1)};
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  require_same_curve(E, o.E);
  return {E, padd(pmul(a, o.d), pmul(o.a, d)), padd(pmul(b, o.d), pmul(o.b, d)),
          pmul(d, o.d)};
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  require_same_curve(E, o.E);
  return {E, psub(pmul(a, o.d), pmul(o.a, d)), psub(pmul(b, o.d), pmul(o.b, d)),
          pmul(d, o.d)};
}

RationalFunction RationalFunction::operator-() const {
  return {E, pneg(a), pneg(b), d};
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  require_same_curve(E, o.E);
  Poly h = curve_h(E), g = curve_g(E);
  Poly na = padd(pmul(a, o.a), pmul(pmul(b, o.b), g));
  Poly nb = psub(padd(pmul(a, o.b), pmul(b, o.a)), pmul(pmul(b, o.b), h));
  return {E, na, nb, pmul(d, o.d)};
}

Poly RationalFunction::norm_numerator() const {
  Poly h = curve_h(E), g = curve_g(E);
  return psub(psub(pmul(a, a), pmul(pmul(a, b), h)), pmul(pmul(b, b), g));
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  require_same_curve(E, o.E);
  if (o.is_zero()) throw FuncError("division by the zero function");
  Poly h = curve_h(E);
  Poly N = o.norm_numerator();
  if (N.is_zero()) throw FuncError("vanishing norm (internal)");
  // 1/o = d * ((a - b h) - b y) / N
  RationalFunction inv(E, pmul(o.d, psub(o.a, pmul(o.b, h))),
                       pmul(o.d, pneg(o.b)), N);
  return *this * inv;
}

bool RationalFunction::operator==(const RationalFunction& o) const {
  return same_curve(E, o.E) && a == o.a && b == o.b && d == o.d;
}

std::string RationalFunction::render() const {
  std::string num = "(" + poly_render(a) + ")";
  if (!b.is_zero()) num += " + (" + poly_render(b) + ")*y";
  if (d.deg() == 0) return num;
  return "[" + num + "] / (" + poly_render(d) + ")";
}

// --- Divisor -------------------------------------------------------------------

int Divisor::degree() const {
  int s = 0;
  for (const auto& [P, n] : coeff) s += n;
  return s;
}

int Divisor::at(const Point& P) const {
  auto it = coeff.find(P);
  return it == coeff.end() ? 0 : it->second;
}

void Divisor::add_term(const Point& P, int n) {
  if (n == 0) return;
  auto it = coeff.try_emplace(P, 0).first;
  it->second += n;
  if (it->second == 0) coeff.erase(it);
}

std::vector<Point> Divisor::support() const {
  std::vector<Point> out;
  for (const auto& [P, n] : coeff) out.push_back(P);
  return out;
}

bool Divisor::operator==(const Divisor& o) const {
  return same_curve(E, o.E) && coeff == o.coeff;
}

std::string Divisor::render() const {
  if (coeff.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [P, n] : coeff) {
    if (!first) out << " + ";
    first = false;
    if (n != 1) out << n << "*";
    out << point_string(P);
  }
  return out.str();
}

// --- valuation / evaluation -----------------------------------------------------

namespace {

// truncated series of W(xs(t), ys(t)) where W(x,y) = y^2 + h y - g
Poly curve_residual(const Curve& E, const Poly& xs, const Poly& ys, int len) {
  const FieldCtx& F = *E.F;
  Poly h = ptrunc(padd(pmul(Poly(F, {E.a1.v}), xs), Poly(F, {E.a3.v})), len);
  Poly x2 = ptrunc(pmul(xs, xs), len);
  Poly x3 = ptrunc(pmul(x2, xs), len);
  Poly g = padd(padd(x3, ptrunc(pscale(x2, E.a2.v), len)),
                padd(ptrunc(pscale(xs, E.a4.v), len), Poly(F, {E.a6.v})));
  Poly w = padd(ptrunc(pmul(ys, ys), len), ptrunc(pmul(h, ys), len));
  return ptrunc(psub(w, g), len);
}

// series of (x, y) around P in the local uniformizer, to `len` coefficients
std::pair<Poly, Poly> local_xy_series(const Curve& E, const Point& P, int len) {
  const FieldCtx& F = *E.F;
  if (len < 1) len = 1;
  if (!is_two_torsion(E, P)) {
    // uniformizer x - x0; solve for y by linear Hensel steps
    Poly xs(F, {P.x.v, 1});
    xs = ptrunc(xs, len);
    Poly ys(F, {P.y.v});
    FieldElement Wy = E.fe(2) * P.y + E.a1 * P.x + E.a3;
    for (int n = 1; n < len; ++n) {
      Poly res = curve_residual(E, xs, ys, n + 1);
      int32_t cn = res.coeff(n);
      if (cn) {
        int32_t delta = F.negv(F.divv(cn, Wy.v));
        if ((int)ys.c.size() <= n) ys.c.resize(n + 1, 0);
        ys.c[n] = F.addv(ys.c[n], delta);
        ys.trim();
      }
    }
    return {xs, ys};
  }
  // two-torsion: uniformizer y - y0; solve for x
  Poly ys(F, {P.y.v, 1});
  ys = ptrunc(ys, len);
  Poly xs(F, {P.x.v});
  FieldElement Wx = E.a1 * P.y -
                    (E.fe(3) * P.x * P.x + E.fe(2) * E.a2 * P.x + E.a4);
  if (Wx.is_zero()) throw FuncError("singular point in series expansion (internal)");
  for (int n = 1; n < len; ++n) {
    Poly res = curve_residual(E, xs, ys, n + 1);
    int32_t cn = res.coeff(n);
    if (cn) {
      int32_t delta = F.negv(F.divv(cn, Wx.v));
      if ((int)xs.c.size() <= n) xs.c.resize(n + 1, 0);
      xs.c[n] = F.addv(xs.c[n], delta);
      xs.trim();
    }
  }
  return {xs, ys};
}

Poly compose_trunc(const Poly& p, const Poly& s, int len) {
  const FieldCtx& F = *p.F;
  Poly acc(F);
  for (int i = p.deg(); i >= 0; --i) {
    acc = ptrunc(pmul(acc, s), len);
    acc = padd(acc, Poly(F, {p.c[i]}));
  }
  return acc;
}

}  // namespace

int valuation(const RationalFunction& f, const Point& P) {
  if (f.is_zero()) throw FuncError("valuation of the zero function");
  const FieldCtx& F = *f.E.F;
  if (P.inf) {
    int W = INT32_MIN;
    if (!f.a.is_zero()) W = std::max(W, 2 * f.a.deg());
    if (!f.b.is_zero()) W = std::max(W, 3 + 2 * f.b.deg());
    return 2 * f.d.deg() - W;
  }
  if (!f.E.on_curve(P)) throw FuncError("valuation at a point off the curve");

  int e = is_two_torsion(f.E, P) ? 2 : 1;
  int vden = e * (f.d.is_zero() ? 0 : pord_at(f.d, P.x));
  int vnum;
  if (e == 2) {
    Poly N = f.norm_numerator();
    if (N.is_zero()) throw FuncError("vanishing norm (internal)");
    vnum = pord_at(N, P.x);
  } else {
    Poly lin(F, {F.negv(P.x.v), 1});
    Poly a2 = f.a, b2 = f.b;
    int ja = a2.is_zero() ? INT32_MAX : pord_at(a2, P.x);
    int jb = b2.is_zero() ? INT32_MAX : pord_at(b2, P.x);
    int j = std::min(ja, jb);
    for (int i = 0; i < j; ++i) {
      if (!a2.is_zero()) a2 = pdivrem(a2, lin).first;
      if (!b2.is_zero()) b2 = pdivrem(b2, lin).first;
    }
    FieldElement at = a2.eval(P.x) + b2.eval(P.x) * P.y;
    if (!at.is_zero()) {
      vnum = j;
    } else {
      RationalFunction u2(f.E, a2, b2, Poly::constant(F, 1));
      Poly N = u2.norm_numerator();
      if (N.is_zero()) throw FuncError("vanishing norm (internal)");
      vnum = j + pord_at(N, P.x);
    }
  }
  return vnum - vden;
}

FieldElement evaluate(const RationalFunction& f, const Point& P) {
  const FieldCtx& F = *f.E.F;
  if (f.is_zero()) return F.zero();
  if (P.inf) {
    int Wa = f.a.is_zero() ? INT32_MIN : 2 * f.a.deg();
    int Wb = f.b.is_zero() ? INT32_MIN : 3 + 2 * f.b.deg();
    int Wn = std::max(Wa, Wb), Wd = 2 * f.d.deg();
    if (Wn > Wd) throw PoleError("pole at " + point_string(P));
    if (Wn < Wd) return F.zero();
    return F.el(F.divv(f.a.lc(), f.d.lc()));  // equal weights are even
  }
  if (!f.E.on_curve(P)) throw FuncError("evaluation at a point off the curve");

  FieldElement dv = f.d.eval(P.x);
  if (!dv.is_zero())
    return (f.a.eval(P.x) + f.b.eval(P.x) * P.y) / dv;

  // denominator vanishes: compare local series orders
  int e = is_two_torsion(f.E, P) ? 2 : 1;
  int vden = e * pord_at(f.d, P.x);
  int len = vden + 1;
  auto [xs, ys] = local_xy_series(f.E, P, len);
  Poly num = padd(compose_trunc(f.a, xs, len),
                  ptrunc(pmul(compose_trunc(f.b, xs, len), ys), len));
  Poly den = compose_trunc(f.d, xs, len);
  int on = first_nonzero_index(num);
  int od = first_nonzero_index(den);
  if (od != vden) throw FuncError("series order mismatch (internal)");
  if (on >= 0 && on < od) throw PoleError("pole at " + point_string(P));
  if (on < 0 || on > od) return F.zero();
  return F.el(F.divv(num.c[on], den.c[od]));
}

Divisor divisor_of(const RationalFunction& f) {
  if (f.is_zero()) throw FuncError("divisor of the zero function");
  const FieldCtx& F = *f.E.F;
  Divisor D(f.E);
  D.add_term(Point::infinity(), valuation(f, Point::infinity()));

  Poly N = f.norm_numerator();
  if (N.is_zero()) throw FuncError("vanishing norm (internal)");
  Poly dd = f.d, NN = N;

  for (int32_t xv = 0; xv < F.q(); ++xv) {
    FieldElement x0 = F.el(xv);
    int od = pord_at(f.d, x0);
    int on = pord_at(N, x0);
    if (od == 0 && on == 0) continue;
    Poly lin(F, {F.negv(xv), 1});
    for (int i = 0; i < od; ++i) dd = pdivrem(dd, lin).first;
    for (int i = 0; i < on; ++i) NN = pdivrem(NN, lin).first;
    std::vector<Point> fiber = fiber_points(f.E, x0);
    if (fiber.empty())
      throw UnsupportedDivisorError(
          "zero or pole over x = " + F.render(x0) +
          " lies outside the rational points");
    for (const Point& P : fiber)
      D.add_term(P, valuation(f, P));
  }
  if (dd.deg() > 0)
    throw UnsupportedDivisorError("denominator keeps a factor without rational roots: " +
                                  poly_render(dd));
  if (NN.deg() > 0)
    throw UnsupportedDivisorError("zero set leaves the rational points: norm factor " +
                                  poly_render(NN));
  if (D.degree() != 0)
    throw FuncError("principal divisor of nonzero degree (internal)");
  return D;
}

bool is_principal(const Divisor& D) {
  if (D.degree() != 0) return false;
  Point acc = Point::infinity();
  for (const auto& [P, n] : D.coeff)
    acc = ec_add(D.E, acc, scalar_mul(D.E, n, P));
  return acc.inf;
}

RationalFunction line_through(const Curve& E, const Point& P, const Point& Q) {
  const FieldCtx& F = *E.F;
  if (P.inf && Q.inf)
    throw FuncError("no affine line through two points at infinity");
  if (P.inf) return RationalFunction(E, Poly(F, {F.negv(Q.x.v), 1}), Poly(F),
                                     Poly::constant(F, 1));
  if (Q.inf) return RationalFunction(E, Poly(F, {F.negv(P.x.v), 1}), Poly(F),
                                     Poly::constant(F, 1));
  if (!E.on_curve(P) || !E.on_curve(Q))
    throw FuncError("line through a point off the curve");
  if (Q == ec_neg(E, P))
    return RationalFunction(E, Poly(F, {F.negv(P.x.v), 1}), Poly(F),
                            Poly::constant(F, 1));

  FieldElement lam, nu;
  if (P == Q) {
    FieldElement den = E.fe(2) * P.y + E.a1 * P.x + E.a3;  // nonzero here
    lam = (E.fe(3) * P.x * P.x + E.fe(2) * E.a2 * P.x + E.a4 - E.a1 * P.y) / den;
  } else {
    lam = (Q.y - P.y) / (Q.x - P.x);  // x_P != x_Q since Q != -P
  }
  nu = P.y - lam * P.x;
  // y - lam*x - nu
  return RationalFunction(E, Poly(F, {F.negv(nu.v), F.negv(lam.v)}),
                          Poly::constant(F, 1), Poly::constant(F, 1));
}

namespace {

RationalFunction compose_poly(const Poly& p, const RationalFunction& X,
                              const Curve& E) {
  RationalFunction acc = RationalFunction::zero(E);
  for (int i = p.deg(); i >= 0; --i) {
    acc = acc * X;
    acc = acc + RationalFunction::constant(E, E.F->el(p.c[i]));
  }
  return acc;
}

}  // namespace

RationalFunction translate(const RationalFunction& f, const Point& Q) {
  if (Q.inf || f.is_zero()) return f;
  const Curve& E = f.E;
  if (!E.on_curve(Q)) throw FuncError("translation by a point off the curve");
  if (f.b.is_zero() && f.a.deg() <= 0 && f.d.deg() == 0) return f;  // constant

  Point C = ec_neg(E, Q);  // X |-> X - Q
  RationalFunction xr = RationalFunction::x(E);
  RationalFunction yr = RationalFunction::y(E);
  RationalFunction cx = RationalFunction::constant(E, C.x);
  RationalFunction cy = RationalFunction::constant(E, C.y);
  RationalFunction a1 = RationalFunction::constant(E, E.a1);
  RationalFunction a2 = RationalFunction::constant(E, E.a2);
  RationalFunction a3 = RationalFunction::constant(E, E.a3);

  RationalFunction den = cx - xr;
  RationalFunction lam = (cy - yr) / den;
  RationalFunction nu = (yr * cx - cy * xr) / den;
  RationalFunction x3 = lam * lam + a1 * lam - a2 - xr - cx;
  RationalFunction y3 = -(lam + a1) * x3 - nu - a3;

  RationalFunction num =
      compose_poly(f.a, x3, E) + compose_poly(f.b, x3, E) * y3;
  RationalFunction dcomp = compose_poly(f.d, x3, E);
  return num / dcomp;
}

// --- Riemann-Roch bases ----------------------------------------------------------

namespace {

// monomial x^a y^b of pole weight wgt at infinity (2a + 3b = wgt, b <= 1)
RationalFunction monomial_of_weight(const Curve& E, int wgt) {
  const FieldCtx& F = *E.F;
  if (wgt == 0) return RationalFunction::one(E);
  if (wgt == 1) throw FuncError("no function has a simple pole only at one point");
  int b = wgt % 2, a = (wgt - 3 * b) / 2;
  Poly xa = Poly::constant(F, 1);
  Poly xp = Poly::X(F);
  for (int i = 0; i < a; ++i) xa = pmul(xa, xp);
  if (b == 0) return RationalFunction::from_poly(E, xa);
  return {E, Poly(F), xa, Poly::constant(F, 1)};
}

void check_val(const RationalFunction& f, const Point& P, int expect) {
  if (valuation(f, P) != expect)
    throw FuncError("basis element misses its target pole order (internal)");
}

}  // namespace

RRBasis rr_basis_kQ(const Curve& E, int k, const Point& Q) {
  if (k < 2) throw FuncError("k must be at least 2");
  if (!E.on_curve(Q)) throw FuncError("Q is not on the curve");
  RRBasis B;
  B.G = Divisor(E);
  B.G.add_term(Q, k);
  for (int wgt = 0; wgt <= k; ++wgt) {
    if (wgt == 1) continue;
    RationalFunction f = translate(monomial_of_weight(E, wgt), Q);
    check_val(f, Q, -wgt);
    B.funcs.push_back(std::move(f));
    B.vals.push_back({{Q, -wgt}});
  }
  return B;
}

RRBasis rr_basis_mixed(const Curve& E, int k, const Point& P, const Point& Q) {
  const FieldCtx& F = *E.F;
  if (k < 2 || k % 2 != 0) throw FuncError("k must be even and at least 2");
  if (P == Q) throw FuncError("P and Q must be distinct");
  if (!E.on_curve(P) || !E.on_curve(Q))
    throw FuncError("support point off the curve");

  RRBasis B;
  B.G = Divisor(E);
  B.G.add_term(P, k - 1);
  B.G.add_term(Q, 1);

  B.funcs.push_back(RationalFunction::one(E));
  B.vals.push_back({{P, 0}, {Q, 0}});

  for (int wgt = 2; wgt <= k - 1; ++wgt) {
    RationalFunction f = translate(monomial_of_weight(E, wgt), P);
    if (evaluate(f, Q).is_zero())
      f = f + RationalFunction::one(E);
    check_val(f, P, -wgt);
    if (evaluate(f, Q).is_zero())
      throw FuncError("basis element still vanishes at Q (internal)");
    B.funcs.push_back(std::move(f));
    B.vals.push_back({{P, -wgt}, {Q, 0}});
  }

  // the mixed-pole element: simple poles at both P and Q
  RationalFunction g;
  if (P.inf) {
    // divisor A + B - Q - O with B = Q - A
    Point A, Bp;
    bool found = false;
    for (const Point& cand : enumerate_points(E)) {
      if (cand.inf || cand == Q) continue;
      Point c2 = ec_sub(E, Q, cand);
      if (c2.inf || c2 == cand) continue;
      A = cand;
      Bp = c2;
      found = true;
      break;
    }
    if (!found) throw FuncError("no chord support available (group too small)");
    g = line_through(E, A, Bp) /
        RationalFunction::from_poly(E, Poly(F, {F.negv(Q.x.v), 1}));
  } else if (Q.inf) {
    // divisor A + (P - A) - P - O
    Point A;
    bool found = false;
    Point negP = ec_neg(E, P);
    for (const Point& cand : enumerate_points(E)) {
      if (cand.inf || cand == P || cand == negP) continue;
      A = cand;
      found = true;
      break;
    }
    if (!found) throw FuncError("no chord support available (group too small)");
    g = line_through(E, negP, A) /
        RationalFunction::from_poly(E, Poly(F, {F.negv(P.x.v), 1}));
  } else {
    Point R = ec_add(E, P, Q);
    if (R.inf) {
      // Q = -P: quotient of verticals, divisor A + (-A) - P - Q
      Point A;
      bool found = false;
      for (const Point& cand : enumerate_points(E)) {
        if (cand.inf || cand.x == P.x) continue;
        A = cand;
        found = true;
        break;
      }
      if (!found) throw FuncError("no vertical support available");
      g = RationalFunction::from_poly(E, Poly(F, {F.negv(A.x.v), 1})) /
          RationalFunction::from_poly(E, Poly(F, {F.negv(P.x.v), 1}));
    } else {
      // divisor R + O - P - Q
      g = RationalFunction::from_poly(E, Poly(F, {F.negv(R.x.v), 1})) /
          line_through(E, P, Q);
    }
  }
  check_val(g, P, -1);
  check_val(g, Q, -1);
  B.funcs.push_back(std::move(g));
  B.vals.push_back({{P, -1}, {Q, -1}});
  return B;
}

RRBasis rr_basis_generic(const Curve& E, const Divisor& G) {
  const FieldCtx& F = *E.F;
  require_same_curve(E, G.E);
  if (G.coeff.empty() || G.degree() < 1)
    throw FuncError("need an effective divisor of positive degree");
  for (const auto& [P, n] : G.coeff) {
    if (n < 0) throw FuncError("need an effective divisor");
    if (!E.on_curve(P)) throw FuncError("divisor point off the curve");
  }

  int cO = G.at(Point::infinity());
  std::vector<std::pair<Point, int>> finite;
  for (const auto& [P, n] : G.coeff)
    if (!P.inf) finite.push_back({P, n});

  Poly Z = Poly::constant(F, 1);
  int csum = 0;
  for (const auto& [P, n] : finite) {
    Poly lin(F, {F.negv(P.x.v), 1});
    for (int i = 0; i < n; ++i) Z = pmul(Z, lin);
    csum += n;
  }
  int K = cO + 2 * csum;

  // monomial spanning set of L(K * O)
  std::vector<RationalFunction> mono;
  std::vector<std::pair<int, int>> mono_ab;  // (a, b) exponents
  for (int wgt = 0; wgt <= K; ++wgt) {
    if (wgt == 1) continue;
    mono.push_back(monomial_of_weight(E, wgt));
    int b = wgt == 0 ? 0 : wgt % 2;
    int a = wgt == 0 ? 0 : (wgt - 3 * b) / 2;
    mono_ab.push_back({a, b});
  }
  int cols = (int)mono.size();

  // vanishing constraints at the zeros of Z that G does not excuse
  std::set<Point> cpoints;
  for (const auto& [P, n] : finite) {
    cpoints.insert(P);
    cpoints.insert(ec_neg(E, P));
  }
  std::vector<std::vector<int32_t>> rows;
  for (const Point& S : cpoints) {
    int e = is_two_torsion(E, S) ? 2 : 1;
    int rS = e * pord_at(Z, S.x) - G.at(S);
    if (rS <= 0) continue;
    auto [xs, ys] = local_xy_series(E, S, rS);
    // series of each monomial at S
    for (int t = 0; t < rS; ++t) rows.push_back(std::vector<int32_t>(cols, 0));
    size_t base = rows.size() - rS;
    for (int j = 0; j < cols; ++j) {
      auto [ea, eb] = mono_ab[j];
      Poly s = Poly::constant(F, 1);
      for (int i = 0; i < ea; ++i) s = ptrunc(pmul(s, xs), rS);
      if (eb) s = ptrunc(pmul(s, ys), rS);
      for (int t = 0; t < rS; ++t) rows[base + t][j] = s.coeff(t);
    }
  }

  // kernel by Gauss-Jordan
  int nrows = (int)rows.size();
  std::vector<int> pivot_col;
  int r = 0;
  for (int cidx = 0; cidx < cols && r < nrows; ++cidx) {
    int sel = -1;
    for (int i = r; i < nrows; ++i)
      if (rows[i][cidx]) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[r], rows[sel]);
    int32_t inv = F.invv(rows[r][cidx]);
    for (int j = 0; j < cols; ++j) rows[r][j] = F.mulv(rows[r][j], inv);
    for (int i = 0; i < nrows; ++i) {
      if (i == r || !rows[i][cidx]) continue;
      int32_t fmul = rows[i][cidx];
      for (int j = 0; j < cols; ++j)
        rows[i][j] = F.subv(rows[i][j], F.mulv(fmul, rows[r][j]));
    }
    pivot_col.push_back(cidx);
    ++r;
  }

  RRBasis B;
  B.G = G;
  std::set<int> pivots(pivot_col.begin(), pivot_col.end());
  for (int fc = 0; fc < cols; ++fc) {
    if (pivots.count(fc)) continue;
    // kernel vector: free column fc set to 1
    std::vector<int32_t> vec(cols, 0);
    vec[fc] = 1;
    for (int i = 0; i < (int)pivot_col.size(); ++i)
      vec[pivot_col[i]] = F.negv(rows[i][fc]);
    Poly A(F), Bp(F);
    for (int j = 0; j < cols; ++j) {
      if (!vec[j]) continue;
      auto [ea, eb] = mono_ab[j];
      Poly t = Poly::constant(F, vec[j]);
      Poly xp = Poly::X(F);
      for (int i = 0; i < ea; ++i) t = pmul(t, xp);
      if (eb)
        Bp = padd(Bp, t);
      else
        A = padd(A, t);
    }
    RationalFunction f(E, A, Bp, Z);
    std::map<Point, int> tag;
    for (const auto& [P, n] : G.coeff) {
      int v = valuation(f, P);
      if (v < -n) throw FuncError("basis element exceeds allowed pole order (internal)");
      tag[P] = v;
    }
    // no stray poles: check the full divisor balances
    B.funcs.push_back(std::move(f));
    B.vals.push_back(std::move(tag));
  }
  if ((int)B.funcs.size() != G.degree())
    throw FuncError("Riemann-Roch dimension mismatch (internal): got " +
                    std::to_string(B.funcs.size()) + " expected " +
                    std::to_string(G.degree()));
  // audit: no poles outside supp(G)
  for (const RationalFunction& f : B.funcs) {
    if (valuation(f, Point::infinity()) < -cO)
      throw FuncError("stray pole at infinity (internal)");
    if (!f.d.is_zero())
      for (int32_t xv = 0; xv < F.q(); ++xv) {
        FieldElement x0 = F.el(xv);
        if (pord_at(f.d, x0) == 0) continue;
        for (const Point& P : fiber_points(E, x0))
          if (valuation(f, P) < -G.at(P))
            throw FuncError("stray pole at " + point_string(P) + " (internal)");
      }
  }
  return B;
}

}  // namespace ecmds
