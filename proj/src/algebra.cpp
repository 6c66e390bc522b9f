#include "cap4/algebra.hpp"

#include <stdexcept>

namespace cap4 {

namespace {

struct Sparse {
  Vec acc;
  std::vector<int> touched;
  std::vector<char> mark;

  Sparse(const Field& F, int n) : acc(zero_vec(F, n)), mark(n, 0) {}
  void add(int k, const Fe& c) {
    if (!mark[k]) {
      mark[k] = 1;
      touched.push_back(k);
    }
    acc[k] += c;
  }
  void clear(const Field& F) {
    for (int k : touched) {
      acc[k] = F.zero();
      mark[k] = 0;
    }
    touched.clear();
  }
};

void verify_structure(const Algebra& A) {
  const Field& F = *A.field();
  int n = A.dim();
  Sparse lhs(F, n), rhs(F, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        for (auto& t : A.product(i, j))
          for (auto& s : A.product(t.k, k)) lhs.add(s.k, t.c * s.c);
        for (auto& t : A.product(j, k))
          for (auto& s : A.product(i, t.k)) rhs.add(s.k, t.c * s.c);
        for (int m : lhs.touched)
          if (lhs.acc[m] != rhs.acc[m]) throw std::invalid_argument("structure constants are not associative");
        for (int m : rhs.touched)
          if (lhs.acc[m] != rhs.acc[m]) throw std::invalid_argument("structure constants are not associative");
        lhs.clear(F);
        rhs.clear(F);
      }
  for (int i = 0; i < n; ++i) {
    Vec e = A.basis(i);
    if (A.mul(A.unit(), e) != e || A.mul(e, A.unit()) != e) throw std::invalid_argument("unit is not a two-sided identity");
  }
}

AlgebraPtr make(FieldPtr F, int dim, std::vector<std::vector<Term>> table, Vec unit, std::vector<std::string> labels,
                AlgebraProvenance prov) {
  auto A = std::make_shared<Algebra>(std::move(F), dim, std::move(table), std::move(unit), std::move(labels),
                                     std::move(prov));
  verify_structure(*A);
  return A;
}

std::vector<Term> terms(std::initializer_list<std::pair<int, Fe>> l) {
  std::vector<Term> out;
  for (auto& [k, c] : l)
    if (!c.is_zero()) out.push_back({k, c});
  return out;
}

Mat mat2(const Field& E, const Fe& a, const Fe& b, const Fe& c, const Fe& d) {
  Mat m(E, 2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

struct NeedRoot {
  mpq_class r;
};

using Rep = std::vector<Mat>;

// images of (1, u, v, uv) given images of u and v
Rep quaternion_rep(const Field& E, const Mat& U, const Mat& V) { return {identity(E, 2), U, V, U * V}; }

Rep factor_rep(const Algebra& X, const FieldPtr& E);

Rep quaternion_split(const Algebra& X, const FieldPtr& E) {
  const Field& K = *E;
  Fe a = embed(X.provenance().a, E), b = embed(X.provenance().b, E);
  Fe z = K.zero(), o = K.one();
  if (K.characteristic() == 2) {
    auto s = K.sqrt(b);
    return quaternion_rep(K, mat2(K, z, a, o, z), mat2(K, *s, o, z, *s));
  }
  if (auto r = K.sqrt(a)) return quaternion_rep(K, mat2(K, *r, z, z, -*r), mat2(K, z, b, o, z));
  if (auto s = K.sqrt(b)) return quaternion_rep(K, mat2(K, z, a, o, z), mat2(K, *s, z, z, -*s));
  if (K.kind() == FieldKind::Finite) {
    auto els = K.elements();
    size_t lim = std::min<size_t>(els.size(), 256);
    for (size_t i = 0; i < lim; ++i)
      for (size_t j = 0; j < lim; ++j) {
        const Fe &al = els[i], &be = els[j];
        Fe t = al * al * a + be * be * b;
        if (t.is_zero()) continue;
        auto s = K.sqrt(t);
        if (!s) continue;
        Mat Xm = mat2(K, *s, z, z, -*s), Ym = mat2(K, z, a * b * t, o, z);
        Fe dt = -t;
        Mat U = scale(dt.inv(), scale(-(al * a), Xm) - scale(be, Ym));
        Mat V = scale(dt.inv(), scale(-(be * b), Xm) + scale(al, Ym));
        return quaternion_rep(K, U, V);
      }
    throw std::runtime_error("no splitting found for finite quaternion algebra");
  }
  auto ra = X.field()->to_rational(X.provenance().a);
  if (!ra) throw std::runtime_error("quaternion parameter is not rational");
  throw NeedRoot{*ra};
}

Rep factor_rep(const Algebra& X, const FieldPtr& E) {
  const Field& K = *E;
  auto& pv = X.provenance();
  switch (pv.kind) {
    case AlgebraProvenance::Scalar: {
      Mat m(K, 1, 1);
      m(0, 0) = K.one();
      return {m};
    }
    case AlgebraProvenance::Quaternion:
      return quaternion_split(X, E);
    case AlgebraProvenance::Matrix: {
      Rep out;
      for (int i = 0; i < pv.n; ++i)
        for (int j = 0; j < pv.n; ++j) {
          Mat m(K, pv.n, pv.n);
          m(i, j) = K.one();
          out.push_back(m);
        }
      return out;
    }
    case AlgebraProvenance::Etale: {
      Fe d = embed(pv.a, E);
      std::optional<Fe> root;
      if (K.characteristic() == 2) {
        for (auto& x : K.elements())
          if (x * x + x == d) {
            root = x;
            break;
          }
        if (!root) throw std::runtime_error("centre does not split over a finite field extension in scope");
      } else {
        root = K.sqrt(d);
        if (!root) {
          auto r = X.field()->to_rational(pv.a);
          if (!r || K.kind() == FieldKind::Finite) throw std::runtime_error("centre does not split");
          throw NeedRoot{*r};
        }
      }
      Mat one(K, 1, 1), t(K, 1, 1);
      one(0, 0) = K.one();
      t(0, 0) = *root;
      return {one, t};
    }
    case AlgebraProvenance::Double: {
      Rep base = factor_rep(*pv.factors[0], E);
      int d = base[0].rows;
      Rep out = base;
      for (size_t i = 0; i < base.size(); ++i) out.push_back(Mat(K, d, d));
      return out;
    }
    case AlgebraProvenance::Tensor: {
      Rep acc = factor_rep(*pv.factors[0], E);
      for (size_t f = 1; f < pv.factors.size(); ++f) {
        Rep nxt = factor_rep(*pv.factors[f], E);
        Rep out;
        out.reserve(acc.size() * nxt.size());
        for (auto& x : acc)
          for (auto& y : nxt) out.push_back(kron(x, y));
        acc = std::move(out);
      }
      return acc;
    }
    case AlgebraProvenance::Raw:
      break;
  }
  throw std::runtime_error("no splitting data for a raw algebra");
}

void verify_rep(const Algebra& A, const FieldPtr& E, const Rep& rep) {
  int n = A.dim(), d = rep[0].rows;
  Mat id(*E, d, d), one(*E, d, d);
  for (int i = 0; i < d; ++i) id(i, i) = E->one();
  for (int k = 0; k < n; ++k)
    if (!A.unit()[k].is_zero()) one = one + scale(embed(A.unit()[k], E), rep[k]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat rhs(*E, d, d);
      for (auto& t : A.product(i, j)) rhs = rhs + scale(embed(t.c, E), rep[t.k]);
      if (rep[i] * rep[j] != rhs) throw std::runtime_error("splitting representation is not multiplicative");
    }
  if (one != id) throw std::runtime_error("splitting representation is not unital");
}

}  // namespace

Algebra::Algebra(FieldPtr F, int dim, std::vector<std::vector<Term>> table, Vec unit, std::vector<std::string> labels,
                 AlgebraProvenance prov)
    : F_(std::move(F)),
      dim_(dim),
      table_(std::move(table)),
      unit_(std::move(unit)),
      labels_(std::move(labels)),
      prov_(std::move(prov)) {
  if (dim_ < 1) throw std::invalid_argument("algebra dimension must be positive");
  if (table_.size() != size_t(dim_) * dim_) throw std::invalid_argument("structure table has the wrong size");
  if (int(unit_.size()) != dim_) throw std::invalid_argument("unit has the wrong length");
  if (labels_.empty())
    for (int i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i));
}

std::optional<Fe> Algebra::as_scalar(const Vec& x) const {
  int p = 0;
  while (unit_[p].is_zero()) ++p;
  Fe c = x[p] / unit_[p];
  if (scale(c, unit_) != x) return std::nullopt;
  return c;
}

Vec Algebra::mul(const Vec& x, const Vec& y) const {
  Vec out = zero();
  std::vector<int> nx, ny;
  for (int i = 0; i < dim_; ++i) {
    if (!x[i].is_zero()) nx.push_back(i);
    if (!y[i].is_zero()) ny.push_back(i);
  }
  for (int i : nx)
    for (int j : ny) {
      auto& pr = product(i, j);
      if (pr.empty()) continue;
      Fe c = x[i] * y[j];
      for (auto& t : pr) out[t.k] += c * t.c;
    }
  return out;
}

Mat Algebra::left_mat(const Vec& x) const {
  Mat m(*F_, dim_, dim_);
  for (int j = 0; j < dim_; ++j) m.set_col(j, mul(x, basis(j)));
  return m;
}

Mat Algebra::right_mat(const Vec& x) const {
  Mat m(*F_, dim_, dim_);
  for (int j = 0; j < dim_; ++j) m.set_col(j, mul(basis(j), x));
  return m;
}

std::vector<AlgebraPtr> Algebra::factors() const {
  if (prov_.kind == AlgebraProvenance::Tensor) return prov_.factors;
  return {};
}

const Splitting& Algebra::splitting() const {
  std::call_once(split_once_, [this] {
    try {
      FieldPtr E = F_;
      for (int round = 0;; ++round) {
        try {
          Rep rep = factor_rep(*this, E);
          verify_rep(*this, E, rep);
          split_ = std::make_shared<Splitting>(Splitting{E, rep[0].rows, std::move(rep)});
          return;
        } catch (const NeedRoot& need) {
          if (round > 16) throw std::runtime_error("splitting field search did not terminate");
          E = extend_scalars(E, E->from_rational(need.r)).field;
        }
      }
    } catch (const std::exception& e) {
      split_error_ = e.what();
    }
  });
  if (!split_) throw std::runtime_error(split_error_);
  return *split_;
}

AlgebraPtr scalar_algebra(FieldPtr F) {
  AlgebraProvenance pv;
  pv.kind = AlgebraProvenance::Scalar;
  Vec unit{F->one()};
  std::vector<std::vector<Term>> tab{{Term{0, F->one()}}};
  return make(F, 1, std::move(tab), std::move(unit), {"1"}, pv);
}

AlgebraPtr quaternion_algebra(FieldPtr F, const Fe& a, const Fe& b) {
  if (a.is_zero() || b.is_zero()) throw std::invalid_argument("quaternion parameters must be nonzero");
  Fe t = F->characteristic() == 2 ? F->one() : F->zero();
  Fe o = F->one();
  std::vector<std::vector<Term>> tab(16);
  auto set = [&](int i, int j, std::vector<Term> v) { tab[i * 4 + j] = std::move(v); };
  for (int i = 0; i < 4; ++i) {
    set(0, i, terms({{i, o}}));
    set(i, 0, terms({{i, o}}));
  }
  set(1, 1, terms({{0, a}}));
  set(1, 2, terms({{3, o}}));
  set(1, 3, terms({{2, a}}));
  set(2, 1, terms({{0, t}, {3, -o}}));
  set(2, 2, terms({{0, b}}));
  set(2, 3, terms({{2, t}, {1, -b}}));
  set(3, 1, terms({{1, t}, {2, -a}}));
  set(3, 2, terms({{1, b}}));
  set(3, 3, terms({{3, t}, {0, -(a * b)}}));
  AlgebraProvenance pv;
  pv.kind = AlgebraProvenance::Quaternion;
  pv.a = a;
  pv.b = b;
  return make(F, 4, std::move(tab), unit_vec(*F, 4, 0), {"1", "u", "v", "uv"}, pv);
}

AlgebraPtr matrix_algebra(FieldPtr F, int n) {
  if (n < 1) throw std::invalid_argument("matrix size must be positive");
  int d = n * n;
  std::vector<std::vector<Term>> tab(size_t(d) * d);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      labels.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
      for (int l = 0; l < n; ++l) tab[size_t(i * n + j) * d + (j * n + l)] = {Term{i * n + l, F->one()}};
    }
  Vec unit = zero_vec(*F, d);
  for (int i = 0; i < n; ++i) unit[i * n + i] = F->one();
  AlgebraProvenance pv;
  pv.kind = AlgebraProvenance::Matrix;
  pv.n = n;
  return make(F, d, std::move(tab), std::move(unit), std::move(labels), pv);
}

AlgebraPtr etale_quadratic(FieldPtr F, const Fe& d) {
  Fe o = F->one();
  Fe s = F->characteristic() == 2 ? o : F->zero();
  std::vector<std::vector<Term>> tab{terms({{0, o}}), terms({{1, o}}), terms({{1, o}}), terms({{0, d}, {1, s}})};
  AlgebraProvenance pv;
  pv.kind = AlgebraProvenance::Etale;
  pv.a = d;
  return make(F, 2, std::move(tab), unit_vec(*F, 2, 0), {"1", "t"}, pv);
}

AlgebraPtr tensor_product(const AlgebraPtr& A, const AlgebraPtr& B) {
  if (A->field() != B->field()) throw std::invalid_argument("tensor factors over different fields");
  if (B->dim() == 1) return A;
  if (A->dim() == 1) return B;
  const FieldPtr& F = A->field();
  int da = A->dim(), db = B->dim(), d = da * db;
  std::vector<std::vector<Term>> tab(size_t(d) * d);
  for (int i1 = 0; i1 < da; ++i1)
    for (int j1 = 0; j1 < da; ++j1) {
      auto& pa = A->product(i1, j1);
      if (pa.empty()) continue;
      for (int i2 = 0; i2 < db; ++i2)
        for (int j2 = 0; j2 < db; ++j2) {
          auto& pb = B->product(i2, j2);
          auto& out = tab[size_t(i1 * db + i2) * d + (j1 * db + j2)];
          for (auto& s : pa)
            for (auto& t : pb) out.push_back({s.k * db + t.k, s.c * t.c});
        }
    }
  std::vector<std::string> labels;
  for (auto& x : A->labels())
    for (auto& y : B->labels()) labels.push_back(x + "*" + y);
  AlgebraProvenance pv;
  pv.kind = AlgebraProvenance::Tensor;
  for (auto* X : {&A, &B}) {
    if ((*X)->provenance().kind == AlgebraProvenance::Tensor)
      for (auto& f : (*X)->provenance().factors) pv.factors.push_back(f);
    else
      pv.factors.push_back(*X);
  }
  return make(F, d, std::move(tab), kron_vec(A->unit(), B->unit()), std::move(labels), pv);
}

AlgebraPtr double_algebra(const AlgebraPtr& A0) {
  const FieldPtr& F = A0->field();
  int n = A0->dim(), d = 2 * n;
  std::vector<std::vector<Term>> tab(size_t(d) * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto& p = A0->product(i, j);
      auto& first = tab[size_t(i) * d + j];
      for (auto& t : p) first.push_back(t);
      auto& second = tab[size_t(n + j) * d + (n + i)];
      for (auto& t : p) second.push_back({n + t.k, t.c});
    }
  Vec unit = zero_vec(*F, d);
  for (int i = 0; i < n; ++i) unit[i] = unit[n + i] = A0->unit()[i];
  std::vector<std::string> labels;
  for (auto& x : A0->labels()) labels.push_back("(" + x + ",0)");
  for (auto& x : A0->labels()) labels.push_back("(0," + x + ")");
  AlgebraProvenance pv;
  pv.kind = AlgebraProvenance::Double;
  pv.factors = {A0};
  return make(F, d, std::move(tab), std::move(unit), std::move(labels), pv);
}

AlgebraPtr raw_algebra(FieldPtr F, int dim, std::vector<std::vector<Term>> table, Vec unit) {
  return make(std::move(F), dim, std::move(table), std::move(unit), {}, AlgebraProvenance{});
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out;
  out.reserve(a.size() * b.size());
  for (auto& x : a)
    for (auto& y : b) out.push_back(x * y);
  return out;
}

Vec embed_vec(const Vec& x, const FieldPtr& target) {
  Vec out;
  out.reserve(x.size());
  for (auto& c : x) out.push_back(embed(c, target));
  return out;
}

AlgebraPtr base_change(const AlgebraPtr& A, const FieldPtr& target) {
  int n = A->dim();
  std::vector<std::vector<Term>> tab(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (auto& term : A->product(i, j)) tab[size_t(i) * n + j].push_back({term.k, embed(term.c, target)});
  AlgebraProvenance p = A->provenance();
  if (p.kind == AlgebraProvenance::Quaternion || p.kind == AlgebraProvenance::Etale) {
    p.a = embed(p.a, target);
    if (p.kind == AlgebraProvenance::Quaternion) p.b = embed(p.b, target);
  }
  for (auto& f : p.factors) f = base_change(f, target);
  return std::make_shared<Algebra>(target, n, std::move(tab), embed_vec(A->unit(), target), A->labels(), std::move(p));
}

Vec embed_factor(const Algebra& A, int t, const Vec& x) {
  auto fs = A.factors();
  if (fs.empty()) {
    if (t != 0) throw std::out_of_range("factor index");
    return x;
  }
  if (t < 0 || t >= int(fs.size())) throw std::out_of_range("factor index");
  Vec out{A.field()->one()};
  for (int i = 0; i < int(fs.size()); ++i) out = kron_vec(out, i == t ? x : fs[i]->unit());
  return out;
}

InverseResult inverse(const Algebra& A, const Vec& x) {
  Mat L = A.left_mat(x);
  if (auto y = solve(L, A.unit())) {
    if (A.mul(x, *y) == A.unit() && A.mul(*y, x) == A.unit()) return {*y, {}};
  }
  auto ker = kernel(L);
  if (ker.empty()) throw std::logic_error("left multiplication is injective but no inverse was found");
  return {std::nullopt, ker[0]};
}

std::vector<Vec> centralizer(const Algebra& A, const std::vector<Vec>& S) {
  const Field& F = *A.field();
  int n = A.dim();
  std::vector<Vec> cur;
  for (int i = 0; i < n; ++i) cur.push_back(A.basis(i));
  for (auto& s : S) {
    if (cur.empty()) break;
    std::vector<Vec> cols;
    for (auto& b : cur) cols.push_back(A.commutator(b, s));
    auto ker = kernel(from_columns(F, n, cols));
    std::vector<Vec> nxt;
    for (auto& k : ker) {
      Vec v = A.zero();
      for (size_t i = 0; i < cur.size(); ++i)
        if (!k[i].is_zero()) axpy(v, k[i], cur[i]);
      nxt.push_back(v);
    }
    cur = std::move(nxt);
  }
  return span_basis(cur, n);
}

std::vector<Vec> center(const Algebra& A) {
  std::vector<Vec> all;
  for (int i = 0; i < A.dim(); ++i) all.push_back(A.basis(i));
  return centralizer(A, all);
}

bool is_subalgebra(const Algebra& A, const std::vector<Vec>& basis) {
  if (basis.empty()) return false;
  Subspace S(*A.field(), A.dim(), basis);
  if (!S.contains(A.unit())) return false;
  for (auto& x : basis)
    for (auto& y : basis)
      if (!S.contains(A.mul(x, y))) return false;
  return true;
}

std::vector<Vec> generated_subalgebra(const Algebra& A, const std::vector<Vec>& gens) {
  int n = A.dim();
  std::vector<Vec> cur{A.unit()};
  for (auto& g : gens) cur.push_back(g);
  cur = independent_subset(cur);
  for (;;) {
    std::vector<Vec> all = cur;
    for (auto& x : cur)
      for (auto& g : gens) all.push_back(A.mul(x, g));
    auto nxt = independent_subset(all);
    if (nxt.size() == cur.size()) return span_basis(cur, n);
    cur = std::move(nxt);
  }
}

std::optional<std::pair<Fe, Fe>> quadratic_relation(const Algebra& A, const Vec& x) {
  if (A.as_scalar(x)) return std::nullopt;
  Mat m = from_columns(*A.field(), A.dim(), {x, A.unit()});
  auto c = solve(m, A.mul(x, x));
  if (!c) return std::nullopt;
  return std::make_pair((*c)[0], (*c)[1]);
}

std::optional<Fe> descend(const Fe& x, const Field& F) {
  const Field& E = *x.field();
  if (&E == &F) return x;
  if (F.kind() == FieldKind::Rational) {
    auto r = E.to_rational(x);
    if (!r) return std::nullopt;
    return F.from_rational(*r);
  }
  if (F.kind() == FieldKind::Multiquadratic && E.kind() == FieldKind::Multiquadratic) {
    auto& c = x.coords();
    for (size_t i = F.mq_dim(); i < c.size(); ++i)
      if (c[i] != 0) return std::nullopt;
    return F.from_coords(std::vector<mpq_class>(c.begin(), c.begin() + F.mq_dim()));
  }
  return std::nullopt;
}

Fe reduced_norm_split(const Algebra& A, const Vec& x) {
  auto& sp = A.splitting();
  Mat m(*sp.E, sp.deg, sp.deg);
  for (int i = 0; i < A.dim(); ++i)
    if (!x[i].is_zero()) m = m + scale(embed(x[i], sp.E), sp.images[i]);
  return det(m);
}

Fe reduced_norm(const Algebra& A, const Vec& x) {
  Fe v = reduced_norm_split(A, x);
  auto r = descend(v, *A.field());
  if (!r) throw std::runtime_error("reduced norm does not lie in the ground field");
  return *r;
}

}  // namespace cap4
