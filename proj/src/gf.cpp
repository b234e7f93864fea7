#include "ecmds/gf.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ecmds {

namespace {

constexpr int32_t kMulTableMaxQ = 256;   // full q*q product table below this
constexpr int32_t kMaxQ = 1 << 20;

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; (int64_t)d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// --- dense polynomials over F_p, coefficients low -> high ------------------
// Only used during context construction (modulus checks, default modulus).

using PPoly = std::vector<int>;

int pdeg(const PPoly& a) {
  for (int i = (int)a.size() - 1; i >= 0; --i)
    if (a[i] != 0) return i;
  return -1;
}

// remainder of a mod b (b monic)
PPoly pmod(PPoly a, const PPoly& b, int p) {
  int db = pdeg(b);
  for (int i = pdeg(a); i >= db; --i) {
    int c = a[i] % p;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j)
      a[i - db + j] = ((a[i - db + j] - c * b[j]) % p + p * p) % p;
  }
  a.resize(std::max(db, 1));
  return a;
}

PPoly digits_of(int64_t v, int p, int len) {
  PPoly d(len, 0);
  for (int i = 0; i < len; ++i) {
    d[i] = (int)(v % p);
    v /= p;
  }
  return d;
}

// Returns a monic proper factor if reducible, nullopt if irreducible.
std::optional<PPoly> find_factor(const PPoly& f, int p) {
  int n = pdeg(f);
  for (int d = 1; 2 * d <= n; ++d) {
    int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int64_t t = 0; t < count; ++t) {
      PPoly g = digits_of(t, p, d + 1);
      g[d] = 1;
      if (pdeg(pmod(f, g, p)) < 0) return g;
    }
  }
  return std::nullopt;
}

std::vector<int64_t> prime_factors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

// --- FieldElement operators -------------------------------------------------

int32_t FieldCtx::check(const FieldElement& e) const {
  if (e.ctx != this)
    throw FieldError("field context mismatch");
  return e.v;
}

static const FieldCtx& same_ctx(const FieldElement& a, const FieldElement& b) {
  if (a.ctx == nullptr || a.ctx != b.ctx)
    throw FieldError("field context mismatch");
  return *a.ctx;
}

bool FieldElement::operator==(const FieldElement& o) const {
  same_ctx(*this, o);
  return v == o.v;
}
FieldElement FieldElement::operator+(const FieldElement& o) const {
  const FieldCtx& F = same_ctx(*this, o);
  return {F, F.addv(v, o.v)};
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
  const FieldCtx& F = same_ctx(*this, o);
  return {F, F.subv(v, o.v)};
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
  const FieldCtx& F = same_ctx(*this, o);
  return {F, F.mulv(v, o.v)};
}
FieldElement FieldElement::operator/(const FieldElement& o) const {
  const FieldCtx& F = same_ctx(*this, o);
  return {F, F.divv(v, o.v)};
}
FieldElement FieldElement::operator-() const {
  if (!ctx) throw FieldError("field context mismatch");
  return {*ctx, ctx->negv(v)};
}

// --- FieldCtx ----------------------------------------------------------------

FieldElement FieldCtx::el(int32_t packed) const {
  if (packed < 0 || packed >= q_)
    throw FieldError("packed value out of range");
  return {*this, packed};
}

FieldElement FieldCtx::from_coeffs(const std::vector<int>& c) const {
  if ((int)c.size() > m_)
    throw FieldError("coefficient vector longer than m");
  int32_t v = 0, mult = 1;
  for (size_t i = 0; i < c.size(); ++i) {
    int d = ((c[i] % p_) + p_) % p_;
    v += d * mult;
    mult *= p_;
  }
  return {*this, v};
}

std::vector<int> FieldCtx::coeffs(const FieldElement& e) const {
  int32_t v = check(e);
  std::vector<int> c(m_);
  for (int i = 0; i < m_; ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  return c;
}

int32_t FieldCtx::addv(int32_t a, int32_t b) const {
  int32_t r = 0, mult = 1;
  for (int i = 0; i < m_; ++i) {
    r += ((a % p_ + b % p_) % p_) * mult;
    a /= p_;
    b /= p_;
    mult *= p_;
  }
  return r;
}

int32_t FieldCtx::subv(int32_t a, int32_t b) const {
  int32_t r = 0, mult = 1;
  for (int i = 0; i < m_; ++i) {
    r += ((a % p_ - b % p_ + p_) % p_) * mult;
    a /= p_;
    b /= p_;
    mult *= p_;
  }
  return r;
}

int32_t FieldCtx::negv(int32_t a) const { return subv(0, a); }

int32_t FieldCtx::mul_poly(int32_t a, int32_t b) const {
  std::vector<int64_t> conv(2 * m_ - 1, 0);
  std::vector<int> da(m_), db(m_);
  for (int i = 0; i < m_; ++i) { da[i] = a % p_; a /= p_; }
  for (int i = 0; i < m_; ++i) { db[i] = b % p_; b /= p_; }
  for (int i = 0; i < m_; ++i) {
    if (!da[i]) continue;
    for (int j = 0; j < m_; ++j) conv[i + j] += (int64_t)da[i] * db[j];
  }
  for (int i = 2 * m_ - 2; i >= m_; --i) {
    int64_t c = conv[i] % p_;
    if (!c) continue;
    const std::vector<int>& red = redtab_[i - m_];
    for (int j = 0; j < m_; ++j) conv[j] += c * red[j];
  }
  int32_t r = 0, mult = 1;
  for (int i = 0; i < m_; ++i) {
    r += (int32_t)(conv[i] % p_) * mult;
    mult *= p_;
  }
  return r;
}

int32_t FieldCtx::mulv(int32_t a, int32_t b) const {
  if (!multab_.empty()) return multab_[(size_t)a * q_ + b];
  if (a == 0 || b == 0) return 0;
  if (!log_.empty())
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
  return mul_poly(a, b);
}

int32_t FieldCtx::invv(int32_t a) const {
  if (a == 0) throw FieldError("division by zero");
  return inv_[a];
}

int32_t FieldCtx::divv(int32_t a, int32_t b) const {
  return mulv(a, invv(b));
}

int32_t FieldCtx::pow_nolog(int32_t a, int64_t e) const {
  int32_t r = 1, base = a;
  while (e > 0) {
    if (e & 1) r = mul_poly(r, base);
    base = mul_poly(base, base);
    e >>= 1;
  }
  return r;
}

int32_t FieldCtx::powv(int32_t a, int64_t e) const {
  if (a == 0) {
    if (e > 0) return 0;
    if (e == 0) return 1;
    throw FieldError("division by zero");
  }
  int64_t n = q_ - 1;
  int64_t k = ((e % n) + n) % n;
  return exp_[((int64_t)log_[a] * k) % n];
}

int32_t FieldCtx::dlogv(int32_t a) const {
  if (a == 0) throw FieldError("dlog of zero");
  return log_[a];
}

bool FieldCtx::is_square(int32_t a) const {
  if (p_ == 2 || a == 0) return true;
  return log_[a] % 2 == 0;
}

int FieldCtx::trace_to_prime(int32_t a) const {
  int32_t acc = a, t = a;
  for (int i = 1; i < m_; ++i) {
    t = powv(t, p_);
    acc = addv(acc, t);
  }
  if (acc >= p_) throw FieldError("trace left the prime subfield");
  return acc;
}

std::string FieldCtx::render(const FieldElement& e) const {
  int32_t v = check(e);
  if (v < p_) return std::to_string(v);
  int32_t k = log_[v];
  if (k == 1) return "w";
  return "w^" + std::to_string(k);
}

FieldElement FieldCtx::parse(const std::string& s) const {
  std::string t;
  for (char c : s)
    if (!std::isspace((unsigned char)c)) t += c;
  if (t.empty()) throw FieldError("empty element string");
  if (t == "w") return w();
  if (t.rfind("w^", 0) == 0) {
    size_t pos = 0;
    int64_t k;
    try {
      k = std::stoll(t.substr(2), &pos);
    } catch (const std::exception&) {
      throw FieldError("bad element string: " + s);
    }
    if (pos != t.size() - 2) throw FieldError("bad element string: " + s);
    return {*this, powv(w_, k)};
  }
  size_t pos = 0;
  int64_t c;
  try {
    c = std::stoll(t, &pos);
  } catch (const std::exception&) {
    throw FieldError("bad element string: " + s);
  }
  if (pos != t.size()) throw FieldError("bad element string: " + s);
  return {*this, (int32_t)(((c % p_) + p_) % p_)};
}

void FieldCtx::build_tables() {
  // reduction rows for x^m .. x^(2m-2)
  redtab_.clear();
  if (m_ >= 1) {
    std::vector<int> r(m_);
    for (int j = 0; j < m_; ++j) r[j] = (p_ - mod_[j]) % p_;
    redtab_.push_back(r);
    for (int i = 1; i <= m_ - 2; ++i) {
      std::vector<int> nr(m_, 0);
      int carry = r[m_ - 1];
      for (int j = m_ - 1; j >= 1; --j) nr[j] = r[j - 1];
      nr[0] = 0;
      if (carry)
        for (int j = 0; j < m_; ++j)
          nr[j] = (nr[j] + carry * redtab_[0][j]) % p_;
      redtab_.push_back(nr);
      r = nr;
    }
  }

  // distinguished generator: smallest packed value of full order
  if (q_ == 2) {
    w_ = 1;
  } else {
    auto factors = prime_factors(q_ - 1);
    w_ = 0;
    for (int32_t cand = 2; cand < q_; ++cand) {
      bool full = true;
      for (int64_t f : factors)
        if (pow_nolog(cand, (q_ - 1) / f) == 1) {
          full = false;
          break;
        }
      if (full) {
        w_ = cand;
        break;
      }
    }
    if (w_ == 0) throw FieldError("no generator found (modulus not irreducible?)");
  }

  exp_.assign(q_ - 1, 0);
  log_.assign(q_, -1);
  int32_t cur = 1;
  for (int32_t i = 0; i < q_ - 1; ++i) {
    exp_[i] = cur;
    if (log_[cur] != -1)
      throw FieldError("generator order check failed (modulus not irreducible?)");
    log_[cur] = i;
    cur = mul_poly(cur, w_);
  }
  if (cur != 1) throw FieldError("generator order check failed");

  inv_.assign(q_, 0);
  for (int32_t i = 0; i < q_ - 1; ++i)
    inv_[exp_[i]] = exp_[(q_ - 1 - i) % (q_ - 1)];

  if (q_ <= kMulTableMaxQ) {
    multab_.assign((size_t)q_ * q_, 0);
    for (int32_t a = 1; a < q_; ++a)
      for (int32_t b = 1; b < q_; ++b)
        multab_[(size_t)a * q_ + b] = exp_[(log_[a] + log_[b]) % (q_ - 1)];
  }
}

FieldCtx make_field(int p, int m, const std::optional<std::vector<int>>& modulus) {
  if (!is_prime(p)) throw FieldError("p = " + std::to_string(p) + " is not prime");
  if (m < 1) throw FieldError("m must be >= 1");
  int64_t q = 1;
  for (int i = 0; i < m; ++i) {
    q *= p;
    if (q > kMaxQ) throw FieldError("field too large (q > 2^20)");
  }

  FieldCtx F;
  F.p_ = p;
  F.m_ = m;
  F.q_ = (int32_t)q;

  if (modulus) {
    const auto& md = *modulus;
    if ((int)md.size() != m + 1 || md[m] != 1)
      throw FieldError("modulus must be monic of degree m");
    for (int c : md)
      if (c < 0 || c >= p) throw FieldError("modulus coefficients must lie in [0, p)");
    if (auto f = find_factor(md, p))
      throw FieldError("modulus " + poly_string(md) + " is reducible: divisible by " +
                       poly_string(*f));
    F.mod_ = md;
  } else {
    // smallest packed monic irreducible of degree m
    int64_t count = 1;
    for (int i = 0; i < m; ++i) count *= p;
    for (int64_t t = 0; t < count; ++t) {
      PPoly cand = digits_of(t, p, m + 1);
      cand[m] = 1;
      if (m == 1 || !find_factor(cand, p)) {
        F.mod_ = cand;
        break;
      }
    }
    if (F.mod_.empty()) throw FieldError("no irreducible modulus found");
  }

  F.build_tables();
  return F;
}

// --- polynomial strings -------------------------------------------------------

std::string poly_string(const std::vector<int>& coeffs) {
  std::ostringstream out;
  bool first = true;
  for (int i = (int)coeffs.size() - 1; i >= 0; --i) {
    int c = coeffs[i];
    if (c == 0) continue;
    if (!first) out << "+";
    first = false;
    if (i == 0 || c != 1) out << c;
    if (i >= 1) {
      out << "x";
      if (i >= 2) out << "^" << i;
    }
  }
  if (first) out << "0";
  return out.str();
}

std::vector<int> parse_poly_string(const std::string& s, int p) {
  std::string t;
  for (char c : s)
    if (!std::isspace((unsigned char)c)) t += c;
  if (t.empty()) throw FieldError("empty polynomial string");
  std::vector<int> coeffs;
  size_t i = 0;
  while (i < t.size()) {
    if (t[i] == '+') ++i;
    int coef = 1;
    bool saw_digit = false;
    size_t j = i;
    while (j < t.size() && std::isdigit((unsigned char)t[j])) ++j;
    if (j > i) {
      coef = std::stoi(t.substr(i, j - i));
      saw_digit = true;
      i = j;
    }
    int exp = 0;
    if (i < t.size() && t[i] == 'x') {
      ++i;
      exp = 1;
      if (i < t.size() && t[i] == '^') {
        ++i;
        j = i;
        while (j < t.size() && std::isdigit((unsigned char)t[j])) ++j;
        if (j == i) throw FieldError("bad polynomial string: " + s);
        exp = std::stoi(t.substr(i, j - i));
        i = j;
      }
    } else if (!saw_digit) {
      throw FieldError("bad polynomial string: " + s);
    }
    if ((int)coeffs.size() <= exp) coeffs.resize(exp + 1, 0);
    coeffs[exp] = (coeffs[exp] + coef) % p;
    if (i < t.size() && t[i] != '+')
      throw FieldError("bad polynomial string: " + s);
  }
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  return coeffs;
}

std::pair<int, int> factor_prime_power(int64_t q) {
  if (q < 2) throw FieldError("field size must be at least 2");
  int64_t p = q;
  for (int64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  int m = 0;
  for (int64_t t = q; t > 1; t /= p, ++m)
    if (t % p)
      throw FieldError(std::to_string(q) + " is not a prime power");
  return {(int)p, m};
}

}  // namespace ecmds
