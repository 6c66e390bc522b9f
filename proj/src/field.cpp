#include "cap4/field.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace cap4 {

namespace {

using Poly = std::vector<uint64_t>;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) { return (unsigned __int128)a * b % p; }

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& f, uint64_t p) {
  trim(a);
  int df = int(f.size()) - 1;
  uint64_t lead_inv = powmod(f.back(), p - 2, p);
  while (int(a.size()) - 1 >= df) {
    uint64_t c = mulmod(a.back(), lead_inv, p);
    int shift = int(a.size()) - 1 - df;
    for (int i = 0; i <= df; ++i) a[shift + i] = (a[shift + i] + p - mulmod(c, f[i], p)) % p;
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  return poly_mod(r, f, p);
}

Poly poly_powmod(Poly a, uint64_t e, const Poly& f, uint64_t p) {
  Poly r{1};
  while (e) {
    if (e & 1) r = poly_mulmod(r, a, f, p);
    a = poly_mulmod(a, a, f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = b;
    b = r;
  }
  return a;
}

bool irreducible(const Poly& f, uint64_t p) {
  int k = int(f.size()) - 1;
  Poly x{0, 1};
  Poly h = x;
  for (int i = 1; i <= k / 2; ++i) {
    h = poly_powmod(h, p, f, p);
    Poly d = h;
    d.resize(std::max<size_t>(d.size(), 2), 0);
    d[1] = (d[1] + p - 1) % p;
    Poly g = poly_gcd(f, d, p);
    if (g.size() > 1) return false;
  }
  return true;
}

std::vector<uint64_t> small_prime_factors(uint64_t n) {
  std::vector<uint64_t> r;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      r.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) r.push_back(n);
  return r;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, FieldPtr>& registry() {
  static std::map<std::string, FieldPtr> r;
  return r;
}

void check_same(const Fe& a, const Fe& b) {
  if (a.field() != b.field() || a.field() == nullptr) throw std::logic_error("field mismatch");
}

std::optional<mpq_class> rational_sqrt(const mpq_class& x) {
  if (sgn(x) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t())) return std::nullopt;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

bool Fe::is_zero() const {
  switch (f_->kind()) {
    case FieldKind::Rational: return sgn(q_) == 0;
    case FieldKind::Finite: return g_ == 0;
    default:
      for (auto& c : v_)
        if (sgn(c) != 0) return false;
      return true;
  }
}

bool Fe::is_one() const { return *this == f_->one(); }

Fe Fe::operator-() const {
  Fe r = *this;
  f_->neg(r);
  return r;
}

Fe Fe::inv() const { return f_->inverse(*this); }

Fe& Fe::operator+=(const Fe& o) {
  check_same(*this, o);
  f_->add(*this, o);
  return *this;
}

Fe& Fe::operator-=(const Fe& o) {
  check_same(*this, o);
  f_->sub(*this, o);
  return *this;
}

Fe& Fe::operator*=(const Fe& o) {
  check_same(*this, o);
  f_->mul(*this, o);
  return *this;
}

Fe& Fe::operator/=(const Fe& o) {
  check_same(*this, o);
  f_->mul(*this, f_->inverse(o));
  return *this;
}

bool Fe::operator==(const Fe& o) const {
  check_same(*this, o);
  return f_->equal(*this, o);
}

std::string Fe::str() const {
  switch (f_->kind()) {
    case FieldKind::Rational: return q_.get_str();
    case FieldKind::Finite: return std::to_string(g_);
    default: {
      std::string s = "[";
      for (size_t i = 0; i < v_.size(); ++i) s += (i ? "," : "") + v_[i].get_str();
      return s + "]";
    }
  }
}

FieldPtr Field::rationals() {
  static FieldPtr q = std::make_shared<Field>(FieldKind::Rational);
  return q;
}

FieldPtr Field::finite(uint64_t p, int k, std::vector<uint64_t> modulus) {
  if (p < 2 || !mpz_probab_prime_p(mpz_class(std::to_string(p)).get_mpz_t(), 30))
    throw std::invalid_argument("characteristic must be prime");
  if (k < 1) throw std::invalid_argument("degree must be positive");
  if (k == 1 && p >= (uint64_t(1) << 62)) throw std::invalid_argument("prime too large");
  uint64_t q = 1;
  for (int i = 0; i < k; ++i) {
    if (q > (uint64_t(1) << 20) / p && k > 1) throw std::invalid_argument("field order above 2^20");
    q *= p;
  }
  if (k == 1) {
    modulus = {0, 1};
  } else if (modulus.empty()) {
    for (uint64_t c = 0; c < q; ++c) {
      Poly f(k + 1, 0);
      uint64_t t = c;
      for (int i = 0; i < k; ++i) f[i] = t % p, t /= p;
      f[k] = 1;
      if (f[0] != 0 && irreducible(f, p)) {
        modulus = f;
        break;
      }
    }
  } else {
    if (int(modulus.size()) != k + 1 || modulus.back() != 1) throw std::invalid_argument("modulus must be monic of degree k");
    for (auto& c : modulus) c %= p;
    if (!irreducible(modulus, p)) throw std::invalid_argument("modulus is reducible");
  }
  std::ostringstream key;
  key << "GF(" << p << "^" << k << ")";
  for (auto c : modulus) key << "," << c;
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = registry().find(key.str());
  if (it != registry().end()) return it->second;
  auto f = std::make_shared<Field>(FieldKind::Finite);
  f->p_ = p;
  f->k_ = k;
  f->q_ = q;
  f->mod_ = modulus;
  f->init_finite();
  registry()[key.str()] = f;
  return f;
}

void Field::init_finite() {
  pw_.assign(k_ + 1, 1);
  for (int i = 1; i <= k_; ++i) pw_[i] = pw_[i - 1] * p_;
  if (k_ == 1) return;
  auto factors = small_prime_factors(q_ - 1);
  for (uint64_t c = 1; c < q_; ++c) {
    bool ok = true;
    for (auto r : factors)
      if (pow_packed(c, (q_ - 1) / r) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      gen_ = c;
      break;
    }
  }
  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  uint64_t x = 1;
  for (uint64_t i = 0; i + 1 < q_; ++i) {
    exp_[i] = uint32_t(x);
    log_[x] = uint32_t(i);
    x = mul_slow(x, gen_);
  }
}

FieldPtr Field::multiquadratic(std::vector<long> radicands) {
  if (radicands.empty()) return rationals();
  if (radicands.size() > 5) throw std::invalid_argument("at most 5 radicands");
  size_t r = radicands.size();
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    mpz_class prod = 1;
    for (size_t i = 0; i < r; ++i)
      if (mask >> i & 1) prod *= radicands[i];
    if (squarefree_part(mpq_class(prod)) == 1) throw std::invalid_argument("radicands are dependent mod squares");
  }
  for (auto d : radicands)
    if (squarefree_part(mpq_class(d)) != d) throw std::invalid_argument("radicands must be square-free");
  std::ostringstream key;
  key << "Q";
  for (auto d : radicands) key << "," << d;
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = registry().find(key.str());
  if (it != registry().end()) return it->second;
  auto f = std::make_shared<Field>(FieldKind::Multiquadratic);
  f->rad_ = radicands;
  size_t n = size_t(1) << r;
  f->mqfac_.assign(n, std::vector<mpz_class>(n, 1));
  for (size_t s = 0; s < n; ++s)
    for (size_t t = 0; t < n; ++t)
      for (size_t i = 0; i < r; ++i)
        if ((s & t) >> i & 1) f->mqfac_[s][t] *= radicands[i];
  registry()[key.str()] = f;
  return f;
}

std::string Field::describe() const {
  std::ostringstream s;
  switch (kind_) {
    case FieldKind::Rational: return "Q";
    case FieldKind::Finite:
      s << "GF(" << p_;
      if (k_ > 1) s << "^" << k_;
      s << ")";
      return s.str();
    default:
      s << "Q(";
      for (size_t i = 0; i < rad_.size(); ++i) s << (i ? "," : "") << "sqrt(" << rad_[i] << ")";
      s << ")";
      return s.str();
  }
}

Fe Field::zero() const { return from_int(0); }
Fe Field::one() const { return from_int(1); }

Fe Field::from_int(long n) const {
  Fe r;
  r.f_ = this;
  switch (kind_) {
    case FieldKind::Rational: r.q_ = n; break;
    case FieldKind::Finite: {
      long m = n % long(p_);
      if (m < 0) m += long(p_);
      r.g_ = uint64_t(m);
      break;
    }
    default:
      r.v_.assign(mq_dim(), mpq_class(0));
      r.v_[0] = n;
  }
  return r;
}

Fe Field::from_rational(const mpq_class& x) const {
  Fe r;
  r.f_ = this;
  switch (kind_) {
    case FieldKind::Rational:
      r.q_ = x;
      r.q_.canonicalize();
      break;
    case FieldKind::Finite: {
      uint64_t num = mpz_fdiv_ui(x.get_num_mpz_t(), p_);
      uint64_t den = mpz_fdiv_ui(x.get_den_mpz_t(), p_);
      if (den == 0) throw std::domain_error("denominator divisible by the characteristic");
      r.g_ = mulmod(num, powmod(den, p_ - 2, p_), p_);
      break;
    }
    default:
      r.v_.assign(mq_dim(), mpq_class(0));
      r.v_[0] = x;
      r.v_[0].canonicalize();
  }
  return r;
}

Fe Field::from_packed(uint64_t g) const {
  if (kind_ != FieldKind::Finite || g >= q_) throw std::invalid_argument("bad finite field element");
  Fe r;
  r.f_ = this;
  r.g_ = g;
  return r;
}

Fe Field::from_poly(const std::vector<uint64_t>& c) const {
  if (kind_ != FieldKind::Finite) throw std::invalid_argument("not a finite field");
  Poly a = poly_mod(Poly(c.begin(), c.end()), mod_, p_);
  if (k_ == 1) return from_packed(a.empty() ? 0 : a[0] % p_);
  uint64_t g = 0;
  for (size_t i = 0; i < a.size(); ++i) g += a[i] * pw_[i];
  return from_packed(g);
}

std::vector<uint64_t> Field::poly_coeffs(const Fe& a) const {
  std::vector<uint64_t> c(k_);
  uint64_t g = a.g_;
  for (int i = 0; i < k_; ++i) c[i] = g % p_, g /= p_;
  return c;
}

Fe Field::from_coords(const std::vector<mpq_class>& c) const {
  if (kind_ != FieldKind::Multiquadratic || int(c.size()) != mq_dim()) throw std::invalid_argument("bad coordinates");
  Fe r;
  r.f_ = this;
  r.v_ = c;
  for (auto& x : r.v_) x.canonicalize();
  return r;
}

Fe Field::sqrt_radicand(int i) const {
  Fe r = zero();
  r.v_[size_t(1) << i] = 1;
  return r;
}

uint64_t Field::add_packed(uint64_t a, uint64_t b) const {
  if (p_ == 2) return a ^ b;
  if (k_ == 1) {
    uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  uint64_t r = 0;
  for (int i = 0; i < k_; ++i) {
    uint64_t d = (a % p_ + b % p_) % p_;
    r += d * pw_[i];
    a /= p_;
    b /= p_;
  }
  return r;
}

uint64_t Field::neg_packed(uint64_t a) const {
  if (p_ == 2) return a;
  if (k_ == 1) return a == 0 ? 0 : p_ - a;
  uint64_t r = 0;
  for (int i = 0; i < k_; ++i) {
    uint64_t d = a % p_;
    r += ((p_ - d) % p_) * pw_[i];
    a /= p_;
  }
  return r;
}

uint64_t Field::mul_slow(uint64_t a, uint64_t b) const {
  Poly pa(k_), pb(k_);
  for (int i = 0; i < k_; ++i) pa[i] = a % p_, a /= p_, pb[i] = b % p_, b /= p_;
  trim(pa);
  trim(pb);
  Poly r = poly_mulmod(pa, pb, mod_, p_);
  uint64_t g = 0;
  for (size_t i = 0; i < r.size(); ++i) g += r[i] * pw_[i];
  return g;
}

uint64_t Field::mul_packed(uint64_t a, uint64_t b) const {
  if (k_ == 1) return mulmod(a, b, p_);
  if (a == 0 || b == 0) return 0;
  if (exp_.empty()) return mul_slow(a, b);
  uint64_t s = uint64_t(log_[a]) + log_[b];
  if (s >= q_ - 1) s -= q_ - 1;
  return exp_[s];
}

uint64_t Field::pow_packed(uint64_t a, mpz_class e) const {
  uint64_t r = 1;
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (k_ > 1 && !exp_.empty()) {
    mpz_class m = (q_ - 1);
    mpz_class t = (mpz_class(log_[a]) * e) % m;
    if (t < 0) t += m;
    return exp_[t.get_ui()];
  }
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = k_ == 1 ? mulmod(r, a, p_) : mul_slow(r, a);
    a = k_ == 1 ? mulmod(a, a, p_) : mul_slow(a, a);
    e >>= 1;
  }
  return r;
}

std::vector<mpq_class> Field::mq_mul(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) const {
  size_t n = a.size();
  std::vector<mpq_class> r(n, mpq_class(0));
  for (size_t s = 0; s < n; ++s) {
    if (sgn(a[s]) == 0) continue;
    for (size_t t = 0; t < n; ++t) {
      if (sgn(b[t]) == 0) continue;
      r[s ^ t] += a[s] * b[t] * mqfac_[s][t];
    }
  }
  return r;
}

std::optional<std::vector<mpq_class>> Field::mq_inv(const std::vector<mpq_class>& a) const {
  size_t n = a.size();
  // columns: a * e_t
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n + 1, mpq_class(0)));
  for (size_t t = 0; t < n; ++t)
    for (size_t s = 0; s < n; ++s)
      if (sgn(a[s]) != 0) m[s ^ t][t] += a[s] * mqfac_[s][t];
  m[0][n] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && sgn(m[piv][c]) == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[c]);
    mpq_class iv = 1 / m[c][c];
    for (size_t j = c; j <= n; ++j) m[c][j] *= iv;
    for (size_t i = 0; i < n; ++i) {
      if (i == c || sgn(m[i][c]) == 0) continue;
      mpq_class f = m[i][c];
      for (size_t j = c; j <= n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  std::vector<mpq_class> r(n);
  for (size_t i = 0; i < n; ++i) r[i] = m[i][n];
  return r;
}

void Field::add(Fe& a, const Fe& b) const {
  switch (kind_) {
    case FieldKind::Rational: a.q_ += b.q_; break;
    case FieldKind::Finite: a.g_ = add_packed(a.g_, b.g_); break;
    default:
      for (size_t i = 0; i < a.v_.size(); ++i) a.v_[i] += b.v_[i];
  }
}

void Field::sub(Fe& a, const Fe& b) const {
  switch (kind_) {
    case FieldKind::Rational: a.q_ -= b.q_; break;
    case FieldKind::Finite: a.g_ = add_packed(a.g_, neg_packed(b.g_)); break;
    default:
      for (size_t i = 0; i < a.v_.size(); ++i) a.v_[i] -= b.v_[i];
  }
}

void Field::mul(Fe& a, const Fe& b) const {
  switch (kind_) {
    case FieldKind::Rational: a.q_ *= b.q_; break;
    case FieldKind::Finite: a.g_ = mul_packed(a.g_, b.g_); break;
    default: a.v_ = mq_mul(a.v_, b.v_);
  }
}

void Field::neg(Fe& a) const {
  switch (kind_) {
    case FieldKind::Rational: a.q_ = -a.q_; break;
    case FieldKind::Finite: a.g_ = neg_packed(a.g_); break;
    default:
      for (auto& c : a.v_) c = -c;
  }
}

Fe Field::inverse(const Fe& a) const {
  if (a.is_zero()) throw std::domain_error("division by zero");
  Fe r = a;
  switch (kind_) {
    case FieldKind::Rational: r.q_ = 1 / a.q_; break;
    case FieldKind::Finite:
      if (k_ == 1)
        r.g_ = powmod(a.g_, p_ - 2, p_);
      else
        r.g_ = exp_[(q_ - 1 - log_[a.g_]) % (q_ - 1)];
      break;
    default: r.v_ = *mq_inv(a.v_);
  }
  return r;
}

bool Field::equal(const Fe& a, const Fe& b) const {
  switch (kind_) {
    case FieldKind::Rational: return a.q_ == b.q_;
    case FieldKind::Finite: return a.g_ == b.g_;
    default: return a.v_ == b.v_;
  }
}

Fe Field::pow(const Fe& a, mpz_class e) const {
  if (e < 0) return pow(inverse(a), -e);
  if (kind_ == FieldKind::Finite) return from_packed(pow_packed(a.g_, e));
  Fe r = one(), b = a;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

std::optional<std::vector<mpq_class>> Field::mq_sqrt(const std::vector<mpq_class>& a, int level) const {
  size_t n = a.size();
  if (level == 0) {
    for (size_t i = 1; i < n; ++i)
      if (sgn(a[i]) != 0) return std::nullopt;
    auto s = rational_sqrt(a[0]);
    if (!s) return std::nullopt;
    std::vector<mpq_class> r(n, mpq_class(0));
    r[0] = *s;
    return r;
  }
  size_t bit = size_t(1) << (level - 1);
  mpq_class d = rad_[level - 1];
  std::vector<mpq_class> alpha(n, mpq_class(0)), beta(n, mpq_class(0));
  bool beta_zero = true;
  for (size_t m = 0; m < n; ++m) {
    if (m & bit) {
      beta[m ^ bit] = a[m];
      if (sgn(a[m]) != 0) beta_zero = false;
    } else {
      alpha[m] = a[m];
    }
  }
  auto shift = [&](const std::vector<mpq_class>& x) {
    std::vector<mpq_class> r(n, mpq_class(0));
    for (size_t m = 0; m < n; ++m)
      if (sgn(x[m]) != 0) r[m | bit] = x[m];
    return r;
  };
  if (beta_zero) {
    if (auto r = mq_sqrt(alpha, level - 1)) return r;
    std::vector<mpq_class> ad = alpha;
    for (auto& c : ad) c /= d;
    if (auto t = mq_sqrt(ad, level - 1)) return shift(*t);
    return std::nullopt;
  }
  std::vector<mpq_class> a2 = mq_mul(alpha, alpha), b2 = mq_mul(beta, beta);
  for (size_t m = 0; m < n; ++m) a2[m] -= d * b2[m];
  auto nr = mq_sqrt(a2, level - 1);
  if (!nr) return std::nullopt;
  for (int sign : {1, -1}) {
    std::vector<mpq_class> t(n);
    for (size_t m = 0; m < n; ++m) t[m] = (alpha[m] + sign * (*nr)[m]) / (2 * d);
    auto y = mq_sqrt(t, level - 1);
    if (!y) continue;
    auto yi = mq_inv(*y);
    if (!yi) continue;
    std::vector<mpq_class> x = mq_mul(beta, *yi);
    for (auto& c : x) c /= 2;
    std::vector<mpq_class> r = shift(*y);
    for (size_t m = 0; m < n; ++m) r[m] += x[m];
    if (mq_mul(r, r) == a) return r;
  }
  return std::nullopt;
}

std::optional<Fe> Field::sqrt(const Fe& a) const {
  if (a.field() != this) throw std::logic_error("field mismatch");
  if (a.is_zero()) return a;
  switch (kind_) {
    case FieldKind::Rational: {
      auto s = rational_sqrt(a.q_);
      if (!s) return std::nullopt;
      return from_rational(*s);
    }
    case FieldKind::Finite: {
      if (p_ == 2) return from_packed(pow_packed(a.g_, mpz_class(q_ / 2)));
      if (k_ > 1) {
        uint32_t l = log_[a.g_];
        if (l % 2) return std::nullopt;
        return from_packed(exp_[l / 2]);
      }
      uint64_t x = a.g_;
      if (powmod(x, (p_ - 1) / 2, p_) != 1) return std::nullopt;
      uint64_t qq = p_ - 1, s = 0;
      while (qq % 2 == 0) qq /= 2, ++s;
      uint64_t z = 2;
      while (powmod(z, (p_ - 1) / 2, p_) != p_ - 1) ++z;
      uint64_t m = s, c = powmod(z, qq, p_), t = powmod(x, qq, p_), r = powmod(x, (qq + 1) / 2, p_);
      while (t != 1) {
        uint64_t i = 0, tt = t;
        while (tt != 1) tt = mulmod(tt, tt, p_), ++i;
        uint64_t b = c;
        for (uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p_);
        m = i;
        c = mulmod(b, b, p_);
        t = mulmod(t, c, p_);
        r = mulmod(r, b, p_);
      }
      return from_packed(r);
    }
    default: {
      auto r = mq_sqrt(a.v_, int(rad_.size()));
      if (!r) return std::nullopt;
      return from_coords(*r);
    }
  }
}

std::optional<mpq_class> Field::to_rational(const Fe& a) const {
  if (kind_ == FieldKind::Rational) return a.q_;
  if (kind_ == FieldKind::Multiquadratic) {
    for (size_t i = 1; i < a.v_.size(); ++i)
      if (sgn(a.v_[i]) != 0) return std::nullopt;
    return a.v_[0];
  }
  return std::nullopt;
}

Fe Field::primitive_element() const {
  if (kind_ != FieldKind::Finite) throw std::invalid_argument("not a finite field");
  if (k_ > 1) return from_packed(gen_);
  if (p_ == 2) return one();
  auto fs = factorize(mpz_class(std::to_string(p_ - 1)));
  for (uint64_t c = 2;; ++c) {
    bool ok = true;
    for (auto& [r, e] : fs)
      if (powmod(c, (p_ - 1) / mpz_class(r).get_ui(), p_) == 1) {
        ok = false;
        break;
      }
    if (ok) return from_packed(c);
  }
}

uint64_t Field::absolute_trace(const Fe& a) const {
  if (kind_ != FieldKind::Finite) throw std::invalid_argument("not a finite field");
  uint64_t s = 0, x = a.g_;
  for (int i = 0; i < k_; ++i) {
    s = add_packed(s, x);
    x = pow_packed(x, mpz_class(std::to_string(p_)));
  }
  return s;
}

std::vector<Fe> Field::elements() const {
  if (kind_ != FieldKind::Finite || q_ > (uint64_t(1) << 22)) throw std::invalid_argument("field too large to enumerate");
  std::vector<Fe> r;
  r.reserve(q_);
  for (uint64_t g = 0; g < q_; ++g) r.push_back(from_packed(g));
  return r;
}

Extension extend_scalars(const FieldPtr& F, const Fe& d) {
  if (F->kind() == FieldKind::Finite) throw std::invalid_argument("scalar extension needs a field of characteristic 0");
  if (d.is_zero()) throw std::domain_error("zero radicand");
  if (F->is_square(d)) return {F, true};
  auto r = F->to_rational(d);
  if (!r) throw std::invalid_argument("radicand must be rational");
  auto rad = F->radicands();
  rad.push_back(squarefree_part(*r).get_si());
  return {Field::multiquadratic(rad), false};
}

Fe embed(const Fe& x, const FieldPtr& target) {
  const Field* src = x.field();
  if (src == target.get()) return x;
  if (src->kind() == FieldKind::Rational) return target->from_rational(x.rat());
  if (src->kind() == FieldKind::Multiquadratic && target->kind() == FieldKind::Multiquadratic) {
    auto& a = src->radicands();
    auto& b = target->radicands();
    if (a.size() > b.size() || !std::equal(a.begin(), a.end(), b.begin())) throw std::invalid_argument("no embedding");
    std::vector<mpq_class> c(target->mq_dim(), mpq_class(0));
    for (size_t i = 0; i < x.coords().size(); ++i) c[i] = x.coords()[i];
    return target->from_coords(c);
  }
  throw std::invalid_argument("no embedding");
}

bool square_class_equal(const Fe& a, const Fe& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return a.field()->is_square(a / b);
}

namespace {

mpz_class pollard(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1;
    auto f = [&](const mpz_class& v) { return mpz_class((v * v + c) % n); };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      mpz_class diff = abs(x - y);
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

void factor_rec(mpz_class n, std::map<mpz_class, int>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
    out[n]++;
    return;
  }
  mpz_class d = pollard(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<mpz_class, int>> factorize(mpz_class n) {
  n = abs(n);
  std::map<mpz_class, int> out;
  if (n == 0) throw std::domain_error("factorize(0)");
  for (unsigned long d = 2; d < 10000 && mpz_class(d) * d <= n; ++d)
    while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      out[mpz_class(d)]++;
      n /= d;
    }
  factor_rec(n, out);
  return {out.begin(), out.end()};
}

mpz_class squarefree_part(const mpq_class& x) {
  if (sgn(x) == 0) throw std::domain_error("square class of zero");
  mpz_class n = x.get_num() * x.get_den();
  mpz_class r = sgn(n) < 0 ? -1 : 1;
  for (auto& [p, e] : factorize(n))
    if (e % 2) r *= p;
  return r;
}

int hilbert_symbol(const mpq_class& a, const mpq_class& b, long place) {
  if (sgn(a) == 0 || sgn(b) == 0) throw std::domain_error("Hilbert symbol of zero");
  if (place == kRealPlace) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
  mpz_class A = a.get_num() * a.get_den(), B = b.get_num() * b.get_den();
  mpz_class p = place;
  auto split = [&](mpz_class v, long& e) {
    e = 0;
    while (mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t())) v /= p, ++e;
    return v;
  };
  long al, be;
  mpz_class u = split(A, al), v = split(B, be);
  if (place != 2) {
    int s = 1;
    if ((al * be) % 2 && (place % 4 == 3)) s = -s;
    if (be % 2) s *= mpz_legendre(u.get_mpz_t(), p.get_mpz_t());
    if (al % 2) s *= mpz_legendre(v.get_mpz_t(), p.get_mpz_t());
    return s;
  }
  auto eps = [](const mpz_class& x) { return int((mpz_fdiv_ui(x.get_mpz_t(), 4) - 1) / 2 % 2); };
  auto omega = [](const mpz_class& x) {
    unsigned long r = mpz_fdiv_ui(x.get_mpz_t(), 8);
    return int(((r * r - 1) / 8) % 2);
  };
  int e = eps(u) * eps(v) + int(al % 2) * omega(v) + int(be % 2) * omega(u);
  return e % 2 ? -1 : 1;
}

}  // namespace cap4
