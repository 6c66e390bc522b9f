#include "cap4/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace cap4 {

QuadForm::QuadForm(FieldPtr F, int n) : F_(std::move(F)), c_(*F_, n, n) {}

QuadForm::QuadForm(FieldPtr F, Mat upper) : F_(std::move(F)), c_(std::move(upper)) {
  if (c_.rows != c_.cols) throw std::invalid_argument("coefficient matrix must be square");
  for (int i = 0; i < c_.rows; ++i)
    for (int j = 0; j < i; ++j)
      if (!c_(i, j).is_zero()) {
        c_(j, i) += c_(i, j);
        c_(i, j) = F_->zero();
      }
}

QuadForm QuadForm::diagonal(FieldPtr F, const std::vector<Fe>& d) {
  QuadForm q(F, int(d.size()));
  for (size_t i = 0; i < d.size(); ++i) q.c_(int(i), int(i)) = d[i];
  return q;
}

QuadForm QuadForm::diagonal(FieldPtr F, const std::vector<long>& d) {
  std::vector<Fe> e;
  for (long x : d) e.push_back(F->from_int(x));
  return diagonal(F, e);
}

QuadForm QuadForm::block(FieldPtr F, const Fe& a, const Fe& b) {
  QuadForm q(F, 2);
  q.c_(0, 0) = a;
  q.c_(0, 1) = F->one();
  q.c_(1, 1) = b;
  return q;
}

QuadForm QuadForm::hyperbolic(FieldPtr F, int n) {
  int N = 1 << n;
  QuadForm q(F, N);
  for (int i = 0; i + 1 < N; i += 2) q.c_(i, i + 1) = F->one();
  return q;
}

Fe QuadForm::eval(const Vec& x) const {
  Fe s = c_.F->zero();
  int n = dim();
  for (int i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    Fe t = c_.F->zero();
    for (int j = i; j < n; ++j)
      if (!c_(i, j).is_zero() && !x[j].is_zero()) t += c_(i, j) * x[j];
    s += x[i] * t;
  }
  return s;
}

Mat QuadForm::polar_matrix() const {
  int n = dim();
  Mat b(*c_.F, n, n);
  for (int i = 0; i < n; ++i) {
    b(i, i) = c_(i, i) + c_(i, i);
    for (int j = i + 1; j < n; ++j) b(i, j) = b(j, i) = c_(i, j);
  }
  return b;
}

Fe QuadForm::polar(const Vec& x, const Vec& y) const { return dot(x, polar_matrix() * y); }

QuadForm QuadForm::scaled(const Fe& c) const {
  QuadForm r = *this;
  for (auto& x : r.c_.a)
    if (!x.is_zero()) x *= c;
  return r;
}

QuadForm QuadForm::restrict_to(const std::vector<Vec>& basis) const {
  int k = int(basis.size());
  QuadForm r(F_, k);
  Mat B = polar_matrix();
  std::vector<Vec> Bv;
  for (auto& v : basis) Bv.push_back(B * v);
  for (int i = 0; i < k; ++i) {
    r.c_(i, i) = eval(basis[i]);
    for (int j = i + 1; j < k; ++j) r.c_(i, j) = dot(basis[i], Bv[j]);
  }
  return r;
}

QuadForm QuadForm::base_change(const FieldPtr& target) const {
  QuadForm r(target, dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) r.c_(i, j) = embed(c_(i, j), target);
  return r;
}

Diagonalization diagonalize(const QuadForm& q) {
  const Field& F = *q.field();
  if (F.characteristic() == 2) throw std::invalid_argument("diagonalization needs characteristic not 2");
  int n = q.dim();
  Fe half = F.from_int(2).inv();
  Mat S(F, n, n);
  for (int i = 0; i < n; ++i) {
    S(i, i) = q.coeffs()(i, i);
    for (int j = i + 1; j < n; ++j) S(i, j) = S(j, i) = q.coeffs()(i, j) * half;
  }
  Mat T = identity(F, n);
  auto swap_idx = [&](int i, int j) {
    for (int k = 0; k < n; ++k) std::swap(S(i, k), S(j, k));
    for (int k = 0; k < n; ++k) std::swap(S(k, i), S(k, j));
    for (int k = 0; k < n; ++k) std::swap(T(k, i), T(k, j));
  };
  // e_i <- e_i + c e_j
  auto add_idx = [&](int i, int j, const Fe& c) {
    for (int k = 0; k < n; ++k) S(i, k) += c * S(j, k);
    for (int k = 0; k < n; ++k) S(k, i) += c * S(k, j);
    for (int k = 0; k < n; ++k) T(k, i) += c * T(k, j);
  };
  for (int i = 0; i < n; ++i) {
    if (S(i, i).is_zero()) {
      int j = i + 1;
      while (j < n && S(j, j).is_zero()) ++j;
      if (j < n) {
        swap_idx(i, j);
      } else {
        j = i + 1;
        while (j < n && S(i, j).is_zero()) ++j;
        if (j == n) continue;
        add_idx(i, j, F.one());
      }
    }
    Fe iv = S(i, i).inv();
    for (int j = i + 1; j < n; ++j)
      if (!S(i, j).is_zero()) add_idx(j, i, -(S(i, j) * iv));
  }
  Diagonalization d;
  for (int i = 0; i < n; ++i) d.diag.push_back(S(i, i));
  d.T = T;
  return d;
}

Char2NormalForm char2_normal_form(const QuadForm& q) {
  const Field& F = *q.field();
  if (F.characteristic() != 2) throw std::invalid_argument("normal form needs characteristic 2");
  int n = q.dim();
  Mat B = q.polar_matrix();
  auto b = [&](const Vec& x, const Vec& y) { return dot(x, B * y); };
  std::vector<Vec> rest;
  for (int i = 0; i < n; ++i) rest.push_back(unit_vec(F, n, i));
  Char2NormalForm out;
  std::vector<Vec> cols;
  for (;;) {
    int xi = -1, yi = -1;
    Fe bxy;
    for (size_t i = 0; i < rest.size() && xi < 0; ++i)
      for (size_t j = i + 1; j < rest.size(); ++j) {
        Fe v = b(rest[i], rest[j]);
        if (!v.is_zero()) {
          xi = int(i), yi = int(j), bxy = v;
          break;
        }
      }
    if (xi < 0) break;
    Vec e = rest[xi], f = scale(bxy.inv(), rest[yi]);
    std::vector<Vec> nr;
    for (size_t k = 0; k < rest.size(); ++k) {
      if (int(k) == xi || int(k) == yi) continue;
      Vec z = rest[k];
      Fe zf = b(z, f), ze = b(z, e);
      axpy(z, -zf, e);
      axpy(z, -ze, f);
      nr.push_back(z);
    }
    rest = nr;
    out.blocks.emplace_back(q.eval(e), q.eval(f));
    cols.push_back(e);
    cols.push_back(f);
  }
  for (auto& r : rest) {
    out.rad_values.push_back(q.eval(r));
    cols.push_back(r);
  }
  out.T = from_columns(F, n, cols);
  return out;
}

namespace {

FieldKind kind_of(const QuadForm& q) { return q.field()->kind(); }

bool is_rational(const QuadForm& q) { return kind_of(q) == FieldKind::Rational; }

void require_decidable(const QuadForm& q) {
  if (kind_of(q) == FieldKind::Multiquadratic)
    throw std::invalid_argument("isotropy decision unavailable over multiquadratic fields");
}

std::vector<long> primes_of(const mpz_class& n) {
  std::vector<long> r;
  for (auto& [p, e] : factorize(n)) {
    if (!p.fits_slong_p()) throw std::overflow_error("prime too large");
    r.push_back(p.get_si());
  }
  return r;
}

bool qp_square(const mpq_class& x, long p) {
  mpz_class n = x.get_num() * x.get_den();
  if (sgn(n) < 0 && p == kRealPlace) return false;
  long v = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= p, ++v;
  if (v % 2) return false;
  if (p == 2) return mpz_fdiv_ui(n.get_mpz_t(), 8) == 1;
  mpz_class pp = p;
  return mpz_legendre(n.get_mpz_t(), pp.get_mpz_t()) == 1;
}

bool q_square(const mpq_class& x) {
  return sgn(x) > 0 && mpz_perfect_square_p(x.get_num_mpz_t()) && mpz_perfect_square_p(x.get_den_mpz_t());
}

// invariants of a regular diagonal form over Q with square-free integer entries
struct QTuple {
  int n = 0, r = 0, s = 0;
  mpq_class d = 1;
  std::set<long> places;
  std::map<long, int> eps;
};

std::set<long> bad_places(const std::vector<mpz_class>& m) {
  std::set<long> pl{2};
  for (auto& x : m)
    for (long p : primes_of(x)) pl.insert(p);
  return pl;
}

int hasse_at(const std::vector<mpz_class>& m, long p) {
  int e = 1;
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = i + 1; j < m.size(); ++j) e *= hilbert_symbol(mpq_class(m[i]), mpq_class(m[j]), p);
  return e;
}

QTuple build_tuple(const std::vector<mpz_class>& m, std::set<long> places) {
  QTuple t;
  t.n = int(m.size());
  for (auto& x : m) {
    t.d *= x;
    (sgn(x) > 0 ? t.r : t.s)++;
  }
  t.places = std::move(places);
  for (long p : t.places) t.eps[p] = hasse_at(m, p);
  return t;
}

bool local_isotropic(const QTuple& t, long p) {
  int e = t.eps.at(p);
  switch (t.n) {
    case 0:
    case 1: return false;
    case 2: return qp_square(-t.d, p);
    case 3: return hilbert_symbol(-1, -t.d, p) == e;
    case 4: return !qp_square(t.d, p) || e == hilbert_symbol(-1, -1, p);
    default: return true;
  }
}

bool tuple_isotropic(const QTuple& t) {
  if (t.n <= 1 || t.r == 0 || t.s == 0) return false;
  if (t.n == 2) return q_square(-t.d);
  for (long p : t.places)
    if (!local_isotropic(t, p)) return false;
  return true;
}

QTuple split_plane(const QTuple& t) {
  QTuple u = t;
  u.n -= 2;
  u.r -= 1;
  u.s -= 1;
  u.d = -t.d;
  for (long p : u.places) u.eps[p] = t.eps.at(p) * hilbert_symbol(-t.d, -1, p);
  return u;
}

int tuple_witt_index(QTuple t) {
  int w = 0;
  while (tuple_isotropic(t)) {
    t = split_plane(t);
    ++w;
  }
  return w;
}

struct RationalDiag {
  Diagonalization D;
  std::vector<mpz_class> m;  // square-free classes of the diagonal
  std::vector<mpq_class> s;  // diag_i = s_i^2 m_i
  int zero_index = -1;
};

RationalDiag rational_diag(const QuadForm& q) {
  RationalDiag r;
  r.D = diagonalize(q);
  for (size_t i = 0; i < r.D.diag.size(); ++i) {
    mpq_class a = r.D.diag[i].rat();
    if (sgn(a) == 0) {
      if (r.zero_index < 0) r.zero_index = int(i);
      r.m.push_back(0);
      r.s.push_back(0);
      continue;
    }
    mpz_class m = squarefree_part(a);
    mpq_class t = a / mpq_class(m);
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), t.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), t.get_den_mpz_t());
    mpq_class s(n, d);
    s.canonicalize();
    r.m.push_back(m);
    r.s.push_back(s);
  }
  return r;
}

std::vector<mpz_class> rational_classes(const QuadForm& q) {
  auto r = rational_diag(q);
  if (r.zero_index >= 0) throw std::invalid_argument("degenerate form");
  return r.m;
}

bool isotropic_classes(const std::vector<mpz_class>& m) { return tuple_isotropic(build_tuple(m, bad_places(m))); }

// GF(2) trace of an element of GF(2^k)
int arf_of(const Char2NormalForm& nf, const Field& F) {
  Fe s = F.zero();
  for (auto& [a, b] : nf.blocks) s += a * b;
  return int(F.absolute_trace(s));
}

bool char2_regular(const Char2NormalForm& nf) {
  if (nf.rad_values.size() > 1) return false;
  return nf.rad_values.empty() || !nf.rad_values[0].is_zero();
}

using i128 = __int128;

i128 isqrt128(i128 v) {
  if (v < 0) return -1;
  i128 r = (i128)std::sqrt((long double)v);
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// enumerate integer solutions of sum m_i z_i^2 = 0 over the index subset, shell by shell
void enumerate_subset(const std::vector<mpz_class>& m, const std::vector<int>& S, int H, long& budget,
                      const std::function<bool(const std::vector<long>&)>& emit) {
  int k = int(S.size());
  std::vector<i128> c(k);
  for (int i = 0; i < k; ++i) {
    if (abs(m[S[i]]) > mpz_class(1) << 50) return;
    c[i] = (i128)m[S[i]].get_si();
  }
  int f = k - 1;
  std::vector<long> z(k, 0);
  auto emit_signs = [&](std::vector<long> w) {
    std::vector<int> nz;
    for (int i = 1; i < k; ++i)
      if (w[i] != 0) nz.push_back(i);
    for (unsigned mask = 0; mask < (1u << nz.size()); ++mask) {
      std::vector<long> v = w;
      for (size_t b = 0; b < nz.size(); ++b)
        if (mask >> b & 1) v[nz[b]] = -v[nz[b]];
      if (!emit(v)) return false;
    }
    return true;
  };
  for (long h = 1; h <= H; ++h) {
    // j is the first free coordinate equal to h
    for (int j = 0; j < f; ++j) {
      std::vector<long> lo(f, 0), hi(f, h);
      for (int i = 0; i < j; ++i) hi[i] = h - 1;
      lo[j] = hi[j] = h;
      std::vector<long> x = lo;
      for (;;) {
        if (--budget <= 0) return;
        i128 sum = 0;
        for (int i = 0; i < f; ++i) sum += c[i] * x[i] * x[i];
        i128 num = -sum;
        if (num % c[f] == 0) {
          i128 t = num / c[f];
          i128 r = isqrt128(t);
          if (r >= 0 && r * r == t) {
            for (int i = 0; i < f; ++i) z[i] = x[i];
            z[f] = long(r);
            if (!emit_signs(z)) return;
          }
        }
        int p = 0;
        while (p < f && ++x[p] > hi[p]) x[p] = lo[p], ++p;
        if (p == f) break;
      }
    }
  }
}

// small-height search in the given coordinates, solving the quadratic in the last coordinate
void direct_search(const QuadForm& q, int max_count, std::vector<Vec>& out, std::set<std::vector<std::string>>& seen) {
  const Field& F = *q.field();
  int n = q.dim();
  if (n < 2) return;
  mpz_class den = 1;
  for (auto& x : q.coeffs().a) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.rat().get_den_mpz_t());
  std::vector<std::vector<i128>> c(n, std::vector<i128>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      mpz_class v = q.coeffs()(i, j).rat().get_num() * (den / q.coeffs()(i, j).rat().get_den());
      if (abs(v) > mpz_class(1) << 40) return;
      c[i][j] = (i128)v.get_si();
    }
  int f = n - 1;
  long h0 = 1;
  while (h0 < 8) {
    double cnt = std::pow(2.0 * (h0 + 1) + 1, f);
    if (cnt > 2e6) break;
    ++h0;
  }
  std::vector<long> x(f);
  for (long h = 1; h <= h0; ++h) {
    for (int j = 0; j < f; ++j) {
      std::vector<long> lo(f, -h), hi(f, h);
      for (int i = 0; i < j; ++i) lo[i] = -(h - 1), hi[i] = h - 1;
      lo[j] = hi[j] = h;
      x = lo;
      for (;;) {
        i128 A = c[f][f], B = 0, C = 0;
        for (int i = 0; i < f; ++i) {
          B += c[i][f] * x[i];
          for (int k = i; k < f; ++k) C += c[i][k] * x[i] * x[k];
        }
        std::vector<mpq_class> roots;
        if (A == 0) {
          if (B != 0) {
            mpq_class root(mpz_class(std::to_string((long long)-C)), mpz_class(std::to_string((long long)B)));
            root.canonicalize();
            roots.push_back(root);
          } else if (C == 0) {
            roots.push_back(0);
          }
        } else {
          i128 disc = B * B - 4 * A * C;
          i128 r = isqrt128(disc);
          if (r >= 0 && r * r == disc) {
            for (int sg : {1, -1}) {
              mpq_class root(mpz_class(std::to_string((long long)(-B + sg * r))), mpz_class(std::to_string((long long)(2 * A))));
              root.canonicalize();
              roots.push_back(root);
              if (r == 0) break;
            }
          }
        }
        for (auto& rt : roots) {
          Vec v;
          for (int i = 0; i < f; ++i) v.push_back(F.from_int(x[i]));
          v.push_back(F.from_rational(rt));
          std::vector<std::string> key;
          for (auto& e : v) key.push_back(e.str());
          if (seen.insert(key).second) out.push_back(v);
          if (int(out.size()) >= max_count) return;
        }
        int p = 0;
        while (p < f && ++x[p] > hi[p]) x[p] = lo[p], ++p;
        if (p == f) break;
      }
    }
  }
}

void rational_isotropic_search(const QuadForm& q, int H, int max_count, std::vector<Vec>& out) {
  const Field& F = *q.field();
  auto r = rational_diag(q);
  int n = q.dim();
  if (r.zero_index >= 0) {
    for (int i = 0; i < n && int(out.size()) < max_count; ++i)
      if (r.D.diag[i].is_zero()) out.push_back(r.D.T.col(i));
    if (int(out.size()) >= max_count) return;
  }
  std::vector<int> live;
  for (int i = 0; i < n; ++i)
    if (sgn(r.m[i]) != 0) live.push_back(i);
  long budget = 20000000;
  auto make_vec = [&](const std::vector<int>& S, const std::vector<long>& z) {
    Vec y = zero_vec(F, n);
    for (size_t i = 0; i < S.size(); ++i) y[S[i]] = F.from_rational(mpq_class(z[i]) / r.s[S[i]]);
    return r.D.T * y;
  };
  std::set<std::vector<std::string>> seen;
  if (r.zero_index < 0) {
    direct_search(q, max_count, out, seen);
    if (int(out.size()) >= max_count) return;
  }
  auto push = [&](const Vec& v) {
    std::vector<std::string> key;
    for (auto& x : v) key.push_back(x.str());
    if (seen.insert(key).second) out.push_back(v);
  };
  for (int k = 2; k <= std::min<int>(5, int(live.size())) && int(out.size()) < max_count; ++k) {
    std::vector<int> sel(k);
    std::function<void(int, int)> rec = [&](int pos, int start) {
      if (int(out.size()) >= max_count || budget <= 0) return;
      if (pos == k) {
        std::vector<mpz_class> sub;
        for (int i : sel) sub.push_back(r.m[i]);
        if (!isotropic_classes(sub)) return;
        enumerate_subset(r.m, sel, H, budget, [&](const std::vector<long>& z) {
          push(make_vec(sel, z));
          return int(out.size()) < max_count;
        });
        return;
      }
      for (int i = start; i < int(live.size()); ++i) {
        sel[pos] = live[i];
        rec(pos + 1, i + 1);
      }
    };
    rec(0, 0);
  }
}

void finite_isotropic_search(const QuadForm& q, int max_count, std::vector<Vec>& out) {
  const Field& F = *q.field();
  int n = q.dim();
  Mat T = F.characteristic() == 2 ? char2_normal_form(q).T : diagonalize(q).T;
  auto elems = F.elements();
  uint64_t Q = F.order();
  for (int m = 1; m <= std::min(n, 5) && int(out.size()) < max_count; ++m) {
    uint64_t total = 1;
    bool too_big = false;
    for (int i = 0; i < m; ++i) {
      if (total > (uint64_t(1) << 22) / Q) too_big = true;
      total *= Q;
    }
    if (too_big) break;
    std::vector<Vec> basis;
    for (int i = 0; i < m; ++i) basis.push_back(T.col(i));
    QuadForm sub = q.restrict_to(basis);
    std::vector<uint64_t> idx(m, 0);
    for (uint64_t t = 1; t < total && int(out.size()) < max_count; ++t) {
      int p = 0;
      while (++idx[p] == Q) idx[p++] = 0;
      if (idx[m - 1] == 0) continue;
      Vec c;
      for (int i = 0; i < m; ++i) c.push_back(elems[idx[i]]);
      if (!sub.eval(c).is_zero()) continue;
      Vec v = zero_vec(F, n);
      for (int i = 0; i < m; ++i) axpy(v, c[i], basis[i]);
      out.push_back(v);
    }
  }
}

std::vector<mpz_class> signed_products(const std::vector<long>& primes) {
  std::vector<mpz_class> out;
  size_t k = std::min<size_t>(primes.size(), 14);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    mpz_class c = 1;
    for (size_t i = 0; i < k; ++i)
      if (mask >> i & 1) c *= primes[i];
    out.push_back(c);
    out.push_back(-c);
  }
  std::stable_sort(out.begin(), out.end(), [](const mpz_class& a, const mpz_class& b) {
    if (abs(a) != abs(b)) return abs(a) < abs(b);
    return a > b;
  });
  return out;
}

bool rational_isometric(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  if (a.size() != b.size()) return false;
  auto pa = bad_places(a), pb = bad_places(b);
  pa.insert(pb.begin(), pb.end());
  QTuple ta = build_tuple(a, pa), tb = build_tuple(b, pa);
  if (ta.r != tb.r || ta.s != tb.s) return false;
  if (squarefree_part(ta.d) != squarefree_part(tb.d)) return false;
  return ta.eps == tb.eps;
}

}  // namespace

bool is_regular(const QuadForm& q) {
  if (q.field()->characteristic() == 2) return char2_regular(char2_normal_form(q));
  for (auto& d : diagonalize(q).diag)
    if (d.is_zero()) return false;
  return true;
}

FormInvariants invariants(const QuadForm& q) {
  FormInvariants inv;
  inv.dim = q.dim();
  const Field& F = *q.field();
  if (F.characteristic() == 2) {
    auto nf = char2_normal_form(q);
    if (!char2_regular(nf)) throw std::invalid_argument("degenerate form");
    if (nf.rad_values.empty()) inv.arf = arf_of(nf, F);
    return inv;
  }
  auto D = diagonalize(q);
  Fe det = F.one();
  for (auto& d : D.diag) {
    if (d.is_zero()) throw std::invalid_argument("degenerate form");
    det *= d;
  }
  inv.det = det;
  if (F.kind() == FieldKind::Rational) {
    auto m = rational_classes(q);
    auto t = build_tuple(m, bad_places(m));
    inv.det_class = squarefree_part(det.rat());
    inv.hasse = t.eps;
    inv.hasse[kRealPlace] = hasse_at(m, kRealPlace);
    inv.signature = std::make_pair(t.r, t.s);
  }
  return inv;
}

bool is_isotropic(const QuadForm& q) {
  require_decidable(q);
  if (!is_regular(q)) return true;
  const Field& F = *q.field();
  int n = q.dim();
  if (F.kind() == FieldKind::Rational) return isotropic_classes(rational_classes(q));
  if (F.characteristic() == 2) {
    auto nf = char2_normal_form(q);
    if (n >= 3) return true;
    if (n == 2) return arf_of(nf, F) == 0;
    return false;
  }
  if (n >= 3) return true;
  if (n <= 1) return false;
  auto D = diagonalize(q);
  return F.is_square(-(D.diag[0] * D.diag[1]));
}

int witt_index(const QuadForm& q) {
  require_decidable(q);
  const Field& F = *q.field();
  int n = q.dim();
  if (F.kind() == FieldKind::Rational) {
    auto m = rational_classes(q);
    return tuple_witt_index(build_tuple(m, bad_places(m)));
  }
  if (F.characteristic() == 2) {
    auto nf = char2_normal_form(q);
    if (!char2_regular(nf)) throw std::invalid_argument("degenerate form");
    int blocks = int(nf.blocks.size());
    if (!nf.rad_values.empty()) return blocks;
    return arf_of(nf, F) == 0 ? blocks : blocks - 1;
  }
  auto D = diagonalize(q);
  Fe det = F.one();
  for (auto& d : D.diag) {
    if (d.is_zero()) throw std::invalid_argument("degenerate form");
    det *= d;
  }
  if (n % 2) return (n - 1) / 2;
  Fe disc = (n / 2) % 2 ? -det : det;
  return F.is_square(disc) ? n / 2 : n / 2 - 1;
}

std::vector<Vec> isotropic_vectors(const QuadForm& q, int height_bound, int max_count) {
  std::vector<Vec> out;
  switch (kind_of(q)) {
    case FieldKind::Rational: rational_isotropic_search(q, height_bound, max_count, out); break;
    case FieldKind::Finite: finite_isotropic_search(q, max_count, out); break;
    default: break;
  }
  return out;
}

std::optional<Vec> isotropic_vector(const QuadForm& q, int height_bound) {
  auto v = isotropic_vectors(q, height_bound, 1);
  if (v.empty()) return std::nullopt;
  return v[0];
}

bool is_isometric(const QuadForm& a, const QuadForm& b) {
  if (a.field() != b.field()) throw std::invalid_argument("field mismatch");
  require_decidable(a);
  if (a.dim() != b.dim()) return false;
  const Field& F = *a.field();
  if (F.kind() == FieldKind::Rational) return rational_isometric(rational_classes(a), rational_classes(b));
  if (F.characteristic() == 2) {
    auto na = char2_normal_form(a), nb = char2_normal_form(b);
    if (!char2_regular(na) || !char2_regular(nb)) throw std::invalid_argument("degenerate form");
    if (na.rad_values.size() != nb.rad_values.size()) return false;
    if (!na.rad_values.empty()) return true;
    return arf_of(na, F) == arf_of(nb, F);
  }
  auto ia = invariants(a), ib = invariants(b);
  return square_class_equal(*ia.det, *ib.det);
}

std::optional<Fe> similarity_factor(const QuadForm& a, const QuadForm& b) {
  if (a.field() != b.field()) throw std::invalid_argument("field mismatch");
  require_decidable(a);
  if (a.dim() != b.dim()) return std::nullopt;
  const Field& F = *a.field();
  if (F.kind() == FieldKind::Rational) {
    auto ma = rational_classes(a), mb = rational_classes(b);
    std::set<long> pl = bad_places(ma);
    auto pb = bad_places(mb);
    pl.insert(pb.begin(), pb.end());
    for (const mpz_class& c : signed_products(std::vector<long>(pl.begin(), pl.end()))) {
      std::vector<mpz_class> sc;
      for (auto& x : ma) sc.push_back(squarefree_part(mpq_class(x * c)));
      if (rational_isometric(sc, mb)) return F.from_rational(mpq_class(c));
    }
    return std::nullopt;
  }
  std::vector<Fe> cands{F.one()};
  if (F.characteristic() != 2) cands.push_back(F.primitive_element());
  for (auto& c : cands)
    if (is_isometric(a.scaled(c), b)) return c;
  return std::nullopt;
}

QuadForm pfister_form(FieldPtr F, const std::vector<Fe>& slots) {
  std::vector<Fe> d{F->one()};
  for (auto& a : slots) {
    std::vector<Fe> nd;
    for (auto& x : d) nd.push_back(x);
    for (auto& x : d) nd.push_back(-(x * a));
    d = nd;
  }
  return QuadForm::diagonal(F, d);
}

PfisterForm pfister_normalize(const QuadForm& q, int n) {
  if (n < 0 || q.dim() != (1 << n)) throw std::invalid_argument("dimension is not 2^n");
  const Field& F = *q.field();
  PfisterForm p;
  p.n = n;
  if (F.kind() != FieldKind::Multiquadratic) {
    bool hyp = is_isotropic(q);
    p.hyperbolic = hyp;
    if (hyp) {
      p.form = QuadForm::hyperbolic(q.field(), n);
      if (F.characteristic() != 2) p.slots = std::vector<Fe>(n, F.one());
      return p;
    }
  }
  Fe c = F.zero();
  if (F.characteristic() == 2) {
    for (int i = 0; i < q.dim() && c.is_zero(); ++i) c = q.coeffs()(i, i);
  } else {
    for (auto& d : diagonalize(q).diag)
      if (!d.is_zero()) {
        c = d;
        break;
      }
  }
  if (c.is_zero()) throw std::invalid_argument("form has no nonzero value on the search basis");
  p.form = q.scaled(c.inv());
  return p;
}

std::optional<std::vector<Fe>> pfister_slots(const PfisterForm& p, int height_bound) {
  const FieldPtr& F = p.form.field();
  if (F->kind() != FieldKind::Rational) throw std::invalid_argument("slot search is implemented over Q");
  if (is_isotropic(p.form)) return std::vector<Fe>(p.n, F->one());
  if (p.n == 0) return std::vector<Fe>{};
  auto D = diagonalize(p.form);
  std::set<mpz_class> vals;
  int m = std::min(p.form.dim(), 5);
  int h = std::max(1, std::min(height_bound, 2));
  std::vector<int> z(m, -h);
  for (;;) {
    mpq_class v = 0;
    for (int i = 0; i < m; ++i) v += D.diag[i].rat() * z[i] * z[i];
    if (sgn(v) != 0) vals.insert(squarefree_part(v));
    int i = 0;
    while (i < m && ++z[i] > h) z[i++] = -h;
    if (i == m) break;
  }
  std::vector<mpz_class> cand{-1};
  for (auto& v : vals)
    if (std::find(cand.begin(), cand.end(), mpz_class(-v)) == cand.end()) cand.push_back(-v);
  std::stable_sort(cand.begin(), cand.end(), [](const mpz_class& a, const mpz_class& b) {
    if (abs(a) != abs(b)) return abs(a) < abs(b);
    return a < b;
  });
  if (cand.size() > 24) cand.resize(24);
  std::vector<int> idx(p.n, 0);
  long budget = 20000;
  for (;;) {
    std::vector<Fe> slots;
    for (int i : idx) slots.push_back(F->from_rational(mpq_class(cand[i])));
    if (is_isometric(pfister_form(F, slots), p.form)) return slots;
    if (--budget <= 0) return std::nullopt;
    int i = p.n - 1;
    while (i >= 0 && idx[i] == int(cand.size()) - 1) --i;
    if (i < 0) return std::nullopt;
    int v = idx[i] + 1;
    for (int j = i; j < p.n; ++j) idx[j] = v;
  }
}

bool quadratic_ext_isotropy(const QuadForm& q, long d) {
  if (!is_rational(q)) throw std::invalid_argument("quadratic extension criterion is implemented over Q");
  if (q_square(mpq_class(d))) throw std::invalid_argument("d is a square");
  if (is_isotropic(q)) return true;
  auto m = rational_classes(q);
  std::set<long> pl = bad_places(m);
  for (long p : primes_of(mpz_class(d))) pl.insert(p);
  for (const mpz_class& a : signed_products(std::vector<long>(pl.begin(), pl.end()))) {
    auto mm = m;
    mm.push_back(squarefree_part(mpq_class(-a)));
    mm.push_back(squarefree_part(mpq_class(a * d)));
    if (tuple_witt_index(build_tuple(mm, bad_places(mm))) >= 2) return true;
  }
  return false;
}

QuadForm tensor(const std::vector<Fe>& b, const QuadForm& q) {
  int n = q.dim();
  QuadForm r(q.field(), int(b.size()) * n);
  Mat c(*q.field(), int(b.size()) * n, int(b.size()) * n);
  for (size_t k = 0; k < b.size(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) c(int(k) * n + i, int(k) * n + j) = b[k] * q.coeffs()(i, j);
  return QuadForm(q.field(), c);
}

QuadForm orth_sum(const QuadForm& a, const QuadForm& b) {
  if (a.field() != b.field()) throw std::invalid_argument("field mismatch");
  int n = a.dim(), m = b.dim();
  Mat c(*a.field(), n + m, n + m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = a.coeffs()(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) c(n + i, n + j) = b.coeffs()(i, j);
  return QuadForm(a.field(), c);
}

}  // namespace cap4
