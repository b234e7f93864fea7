#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ecmds {

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FieldCtx;

// Element of F_{p^m} in polynomial basis.  `v` packs the coefficient vector
// (c_0, ..., c_{m-1}) as sum c_i * p^i, so packed values enumerate elements
// in coefficient-lexicographic order.  Elements hold a pointer to their
// context; operations on elements from different contexts throw FieldError.
struct FieldElement {
  const FieldCtx* ctx = nullptr;
  int32_t v = 0;

  FieldElement() = default;
  FieldElement(const FieldCtx& c, int32_t packed) : ctx(&c), v(packed) {}

  bool is_zero() const { return v == 0; }
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
};

// Immutable arithmetic context for F_{p^m}.  Construct through make_field;
// keep it alive (and at a fixed address) for as long as elements exist.
class FieldCtx {
public:
  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;
  FieldCtx(FieldCtx&&) = default;
  FieldCtx& operator=(FieldCtx&&) = default;

  int p() const { return p_; }
  int m() const { return m_; }
  int32_t q() const { return q_; }
  // Monic irreducible modulus, coefficients low -> high, length m+1.
  const std::vector<int>& modulus() const { return mod_; }

  FieldElement zero() const { return {*this, 0}; }
  FieldElement one() const { return {*this, 1}; }
  // Distinguished generator of the multiplicative group: the element with
  // smallest packed value among those of order q-1 (for q = 2 this is 1).
  FieldElement w() const { return {*this, w_}; }
  FieldElement el(int32_t packed) const;
  FieldElement from_coeffs(const std::vector<int>& c) const;
  std::vector<int> coeffs(const FieldElement& e) const;

  // Packed-value arithmetic.  Element operators forward here.
  int32_t addv(int32_t a, int32_t b) const;
  int32_t subv(int32_t a, int32_t b) const;
  int32_t negv(int32_t a) const;
  int32_t mulv(int32_t a, int32_t b) const;
  int32_t invv(int32_t a) const;  // a != 0
  int32_t divv(int32_t a, int32_t b) const;
  int32_t powv(int32_t a, int64_t e) const;  // negative e inverts (a != 0)
  int32_t dlogv(int32_t a) const;            // a = w^result, result in [0, q-1)
  bool is_square(int32_t a) const;
  int trace_to_prime(int32_t a) const;  // absolute trace, value in [0, p)

  // Notation used throughout: "0", "1", ..., constants as decimal digits of
  // the prime subfield, everything else as "w" / "w^k".
  std::string render(const FieldElement& e) const;
  FieldElement parse(const std::string& s) const;

  int64_t dlog(const FieldElement& e) const { return dlogv(check(e)); }

private:
  friend FieldCtx make_field(int, int, const std::optional<std::vector<int>>&);
  FieldCtx() = default;

  int32_t check(const FieldElement& e) const;
  int32_t mul_poly(int32_t a, int32_t b) const;
  int32_t pow_nolog(int32_t a, int64_t e) const;
  void build_tables();

  int p_ = 0, m_ = 0;
  int32_t q_ = 0;
  std::vector<int> mod_;
  int32_t w_ = 0;
  std::vector<int32_t> exp_;               // exp_[i] = w^i, size q-1
  std::vector<int32_t> log_;               // inverse of exp_, log_[0] = -1
  std::vector<int32_t> inv_;               // size q, entry 0 unused
  std::vector<int32_t> multab_;            // full q*q table for small q only
  std::vector<std::vector<int>> redtab_;   // digits of x^(m+i) mod modulus
};

// Builds F_{p^m}.  Without an explicit modulus, picks the monic irreducible
// of degree m with the smallest packed coefficient value.  An explicit
// modulus must be monic of degree m with coefficients in [0, p); if it is
// reducible the error message names a proper factor.
FieldCtx make_field(int p, int m,
                    const std::optional<std::vector<int>>& modulus = {});

// "x^3+x+1" <-> {1, 1, 0, 1}; used for modulus display and CLI input.
std::string poly_string(const std::vector<int>& coeffs);
std::vector<int> parse_poly_string(const std::string& s, int p);

// q = p^m with p prime; throws FieldError for anything else.
std::pair<int, int> factor_prime_power(int64_t q);

}  // namespace ecmds
