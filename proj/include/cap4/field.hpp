#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cap4 {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

enum class FieldKind { Rational, Finite, Multiquadratic };

// Element of a runtime field. Fields are interned, so pointer equality is field equality.
class Fe {
 public:
  Fe() = default;

  const Field* field() const { return f_; }
  bool is_zero() const;
  bool is_one() const;

  Fe operator-() const;
  Fe inv() const;
  Fe& operator+=(const Fe& o);
  Fe& operator-=(const Fe& o);
  Fe& operator*=(const Fe& o);
  Fe& operator/=(const Fe& o);
  friend Fe operator+(Fe a, const Fe& b) { return a += b; }
  friend Fe operator-(Fe a, const Fe& b) { return a -= b; }
  friend Fe operator*(Fe a, const Fe& b) { return a *= b; }
  friend Fe operator/(Fe a, const Fe& b) { return a /= b; }
  bool operator==(const Fe& o) const;
  bool operator!=(const Fe& o) const { return !(*this == o); }

  const mpq_class& rat() const { return q_; }
  const std::vector<mpq_class>& coords() const { return v_; }
  uint64_t packed() const { return g_; }

  std::string str() const;

 private:
  friend class Field;
  const Field* f_ = nullptr;
  mpq_class q_;
  std::vector<mpq_class> v_;
  uint64_t g_ = 0;
};

class Field {
 public:
  static FieldPtr rationals();
  // modulus: monic, coefficients low to high, length k + 1; empty picks the first irreducible
  static FieldPtr finite(uint64_t p, int k = 1, std::vector<uint64_t> modulus = {});
  // Q(sqrt d_1, ..., sqrt d_r); radicands must be square-free and independent mod squares
  static FieldPtr multiquadratic(std::vector<long> radicands);

  FieldKind kind() const { return kind_; }
  uint64_t characteristic() const { return kind_ == FieldKind::Finite ? p_ : 0; }
  uint64_t p() const { return p_; }
  int k() const { return k_; }
  uint64_t order() const { return q_; }
  const std::vector<uint64_t>& modulus() const { return mod_; }
  const std::vector<long>& radicands() const { return rad_; }
  int mq_dim() const { return 1 << rad_.size(); }
  std::string describe() const;

  Fe zero() const;
  Fe one() const;
  Fe from_int(long n) const;
  Fe from_rational(const mpq_class& x) const;
  Fe from_packed(uint64_t g) const;
  Fe from_poly(const std::vector<uint64_t>& coeffs) const;
  Fe from_coords(const std::vector<mpq_class>& c) const;
  Fe sqrt_radicand(int i) const;

  std::optional<Fe> sqrt(const Fe& a) const;
  bool is_square(const Fe& a) const { return sqrt(a).has_value(); }
  std::optional<mpq_class> to_rational(const Fe& a) const;
  std::vector<uint64_t> poly_coeffs(const Fe& a) const;
  Fe primitive_element() const;
  // trace to the prime field, as an integer in [0, p)
  uint64_t absolute_trace(const Fe& a) const;
  Fe pow(const Fe& a, mpz_class e) const;
  std::vector<Fe> elements() const;

  // internal arithmetic used by Fe
  void add(Fe& a, const Fe& b) const;
  void sub(Fe& a, const Fe& b) const;
  void mul(Fe& a, const Fe& b) const;
  void neg(Fe& a) const;
  Fe inverse(const Fe& a) const;
  bool equal(const Fe& a, const Fe& b) const;

  Field(FieldKind kind) : kind_(kind) {}

 private:
  uint64_t add_packed(uint64_t a, uint64_t b) const;
  uint64_t neg_packed(uint64_t a) const;
  uint64_t mul_packed(uint64_t a, uint64_t b) const;
  uint64_t mul_slow(uint64_t a, uint64_t b) const;
  uint64_t pow_packed(uint64_t a, mpz_class e) const;
  std::optional<std::vector<mpq_class>> mq_sqrt(const std::vector<mpq_class>& a, int level) const;
  std::vector<mpq_class> mq_mul(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) const;
  std::optional<std::vector<mpq_class>> mq_inv(const std::vector<mpq_class>& a) const;
  void init_finite();

  FieldKind kind_;
  uint64_t p_ = 0, q_ = 0;
  int k_ = 1;
  std::vector<uint64_t> mod_;
  std::vector<uint64_t> pw_;
  std::vector<uint32_t> exp_, log_;
  uint64_t gen_ = 0;
  std::vector<long> rad_;
  std::vector<std::vector<mpz_class>> mqfac_;
};

struct Extension {
  FieldPtr field;
  bool identity;
};

// F(sqrt d) for a rational or multiquadratic F; identity when d is already a square
Extension extend_scalars(const FieldPtr& F, const Fe& d);
// image of x under the canonical embedding of its field into target
Fe embed(const Fe& x, const FieldPtr& target);
bool square_class_equal(const Fe& a, const Fe& b);

// square-free integer representative of the square class of a nonzero rational
mpz_class squarefree_part(const mpq_class& x);
std::vector<std::pair<mpz_class, int>> factorize(mpz_class n);

constexpr long kRealPlace = 0;
// Hilbert symbol over Q_p (place = prime) or R (place = kRealPlace); a, b nonzero rationals
int hilbert_symbol(const mpq_class& a, const mpq_class& b, long place);

}  // namespace cap4
