#include "cap4/etale.hpp"

#include <map>
#include <random>
#include <set>

namespace cap4 {

namespace {

std::string key_of(const std::vector<Vec>& basis) {
  std::string k;
  for (auto& v : basis) {
    for (auto& x : v) k += x.str() + ",";
    k += ";";
  }
  return k;
}

std::vector<Vec> echelon(const std::vector<Vec>& vs, int n) { return span_basis(vs, n); }

bool commute(const Algebra& A, const Vec& x, const Vec& y) { return A.mul(x, y) == A.mul(y, x); }

Vec conj_of(const Algebra& A, const QuadraticElement& q) { return sub(A.scalar(q.s), q.x); }

// candidates inside one algebra, in its own coordinates
std::vector<Vec> structural_candidates(const Algebra& X) {
  const Field& F = *X.field();
  auto& pv = X.provenance();
  std::vector<Vec> out;
  switch (pv.kind) {
    case AlgebraProvenance::Scalar:
      out.push_back(X.unit());
      break;
    case AlgebraProvenance::Quaternion:
    case AlgebraProvenance::Etale:
    case AlgebraProvenance::Raw:
      for (int i = 0; i < X.dim(); ++i) out.push_back(X.basis(i));
      break;
    case AlgebraProvenance::Matrix: {
      int n = pv.n;
      for (int mask = 0; mask < (1 << n); ++mask) {
        Vec v = X.zero();
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1) v[i * n + i] = F.one();
        out.push_back(v);
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (long sg : {1L, -1L}) {
            Vec v = X.zero();
            v[i * n + j] = F.one();
            v[j * n + i] = F.from_int(sg);
            out.push_back(v);
          }
      break;
    }
    case AlgebraProvenance::Double: {
      for (auto& c : structural_candidates(*pv.factors[0])) {
        Vec v = c;
        v.insert(v.end(), c.begin(), c.end());
        out.push_back(v);
      }
      break;
    }
    case AlgebraProvenance::Tensor: {
      std::vector<Vec> acc{Vec{F.one()}};
      for (auto& f : pv.factors) {
        auto cs = structural_candidates(*f);
        std::vector<Vec> nxt;
        for (auto& a : acc)
          for (auto& c : cs) nxt.push_back(kron_vec(a, c));
        acc = std::move(nxt);
      }
      out = std::move(acc);
      break;
    }
  }
  return out;
}

Mat sub_mult_matrix(const Algebra& A, const Subspace& S, const Vec& x) {
  int k = S.dim();
  Mat m(*A.field(), k, k);
  for (int j = 0; j < k; ++j) {
    auto c = S.coords(A.mul(x, S.basis()[j]));
    if (!c) throw std::invalid_argument("subspace is not closed under multiplication");
    m.set_col(j, *c);
  }
  return m;
}

Fe trace(const Mat& m) {
  Fe t = m.F->zero();
  for (int i = 0; i < m.rows; ++i) t += m(i, i);
  return t;
}

std::optional<Vec> split_idempotent(const Algebra& A, const QuadraticElement& q) {
  auto r = quadratic_roots(*A.field(), q.s, q.p);
  if (!r || r->first == r->second) return std::nullopt;
  // (x - r2) / (r1 - r2)
  return scale((r->first - r->second).inv(), sub(q.x, A.scalar(r->second)));
}

}  // namespace

std::optional<QuadraticElement> as_quadratic(const Algebra& A, const Vec& x) {
  auto r = quadratic_relation(A, x);
  if (!r) return std::nullopt;
  return QuadraticElement{x, r->first, r->second};
}

bool is_etale_quadratic(const QuadraticElement& q) {
  const Field& F = *q.s.field();
  if (F.characteristic() == 2) return !q.s.is_zero();
  return !(q.s * q.s + F.from_int(4) * q.p).is_zero();
}

std::optional<std::pair<Fe, Fe>> quadratic_roots(const Field& F, const Fe& s, const Fe& p) {
  if (F.characteristic() != 2) {
    Fe disc = s * s + F.from_int(4) * p;
    auto r = F.sqrt(disc);
    if (!r) return std::nullopt;
    Fe half = F.from_int(2).inv();
    return std::make_pair((s + *r) * half, (s - *r) * half);
  }
  if (s.is_zero()) {
    auto r = F.sqrt(p);
    return std::make_pair(*r, *r);
  }
  Fe c = p / (s * s);
  for (auto& y : F.elements())
    if (y * y + y == c) return std::make_pair(s * y, s * y + s);
  return std::nullopt;
}

bool is_etale(const Algebra& A, const std::vector<Vec>& S) {
  for (size_t i = 0; i < S.size(); ++i)
    for (size_t j = i + 1; j < S.size(); ++j)
      if (!commute(A, S[i], S[j])) throw std::invalid_argument("subalgebra is not commutative");
  Subspace sp(*A.field(), A.dim(), S);
  int k = sp.dim();
  std::vector<Mat> M;
  for (auto& b : sp.basis()) M.push_back(sub_mult_matrix(A, sp, b));
  Mat T(*A.field(), k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) T(i, j) = trace(M[i] * M[j]);
  return !det(T).is_zero();
}

Vec BiquadraticL::element(const Vec& c) const {
  Vec v = zero_vec(*c[0].field(), int(basis[0].size()));
  for (int k = 0; k < 4; ++k)
    if (!c[k].is_zero()) axpy(v, c[k], basis[k]);
  return v;
}

Vec BiquadraticL::apply(int i, const Vec& y) const {
  auto c = coords(y);
  if (!c) throw std::invalid_argument("element is not in L");
  return element(gamma[i] * *c);
}

std::vector<Vec> BiquadraticL::fixed(int i) const { return {basis[0], gen[i]}; }

BiquadraticL make_biquadratic(const Algebra& A, const Vec& u1, const Vec& u2) {
  const Field& F = *A.field();
  auto q1 = as_quadratic(A, u1), q2 = as_quadratic(A, u2);
  if (!q1 || !q2) throw std::invalid_argument("generators of L must be quadratic over F");
  if (!is_etale_quadratic(*q1) || !is_etale_quadratic(*q2)) throw std::invalid_argument("generators of L must be separable");
  if (!commute(A, u1, u2)) throw std::invalid_argument("generators of L must commute");
  BiquadraticL L;
  L.u1 = u1;
  L.u2 = u2;
  L.basis = {A.unit(), u1, u2, A.mul(u1, u2)};
  if (rank(L.basis) != 4) throw std::invalid_argument("generators of L are dependent");
  L.space = Subspace(F, A.dim(), L.basis);
  Vec c1 = conj_of(A, *q1), c2 = conj_of(A, *q2);
  auto gamma_of = [&](const Vec& a, const Vec& b) {
    std::vector<Vec> img{A.unit(), a, b, A.mul(a, b)};
    Mat m(F, 4, 4);
    for (int k = 0; k < 4; ++k) m.set_col(k, *L.space.coords(img[k]));
    return m;
  };
  L.gamma = {gamma_of(u1, c2), gamma_of(c1, u2), gamma_of(c1, c2)};
  L.gen[0] = u1;
  L.gen[1] = u2;
  Mat fix3 = L.gamma[2];
  for (int k = 0; k < 4; ++k) fix3(k, k) -= F.one();
  for (auto& v : kernel(fix3)) {
    Vec e = L.element(v);
    if (A.as_scalar(e)) continue;
    v[0] = F.zero();
    L.gen[2] = L.element(v);
    break;
  }
  if (L.gen[2].empty()) throw std::logic_error("third fixed algebra is missing");
  if (!is_etale(A, L.basis)) throw std::invalid_argument("L is not etale");
  Mat id = identity(F, 4);
  for (int i = 0; i < 3; ++i) {
    if (L.gamma[i] * L.gamma[i] != id || L.gamma[i] == id) throw std::logic_error("automorphism is not of order two");
    if (L.gamma[i] * L.gamma[(i + 1) % 3] != L.gamma[(i + 2) % 3]) throw std::logic_error("automorphisms do not form a Klein group");
  }
  return L;
}

BiquadraticL galois_group_biquadratic(const Algebra& A, const std::vector<Vec>& Lb) {
  const Field& F = *A.field();
  if (!is_subalgebra(A, Lb) || rank(Lb) != 4) throw std::invalid_argument("L must be a 4-dimensional subalgebra");
  if (!is_etale(A, Lb)) throw std::invalid_argument("L is not etale");
  auto basis = span_basis(Lb, A.dim());
  std::vector<QuadraticElement> quads;
  std::set<std::string> seen;
  const long H = 2;
  std::vector<long> c(4, -H);
  for (;;) {
    Vec x = A.zero();
    for (int k = 0; k < 4; ++k)
      if (c[k] != 0) axpy(x, F.from_int(c[k]), basis[k]);
    if (auto q = as_quadratic(A, x); q && is_etale_quadratic(*q)) {
      auto key = key_of(echelon({A.unit(), x}, A.dim()));
      if (seen.insert(key).second) quads.push_back(*q);
    }
    int i = 0;
    while (i < 4 && ++c[i] > H) c[i++] = -H;
    if (i == 4) break;
  }
  for (size_t i = 0; i < quads.size(); ++i)
    for (size_t j = i + 1; j < quads.size(); ++j)
      if (rank(std::vector<Vec>{A.unit(), quads[i].x, quads[j].x, A.mul(quads[i].x, quads[j].x)}) == 4)
        return make_biquadratic(A, quads[i].x, quads[j].x);
  throw std::invalid_argument("L is not biquadratic: no two independent quadratic subalgebras");
}

EtaleSub etale_components(const Algebra& A, const std::vector<Vec>& Lb) {
  const Field& F = *A.field();
  EtaleSub out;
  out.basis = span_basis(Lb, A.dim());
  int d = int(out.basis.size());
  if (!is_etale(A, out.basis)) throw std::invalid_argument("subalgebra is not etale");
  std::vector<QuadraticElement> gens;
  if (d == 2) {
    for (auto& b : out.basis)
      if (!A.as_scalar(b)) {
        gens.push_back(*as_quadratic(A, b));
        break;
      }
  } else if (d == 4) {
    auto L = galois_group_biquadratic(A, out.basis);
    for (int i = 0; i < 3; ++i) gens.push_back(*as_quadratic(A, L.gen[i]));
  } else if (d != 1) {
    throw std::invalid_argument("etale components are implemented up to dimension 4");
  }
  std::vector<Vec> comps{A.unit()};
  for (auto& g : gens) {
    auto f = split_idempotent(A, g);
    if (!f) continue;
    Vec fc = sub(A.unit(), *f);
    std::vector<Vec> nxt;
    for (auto& e : comps)
      for (auto* h : {&*f, &fc}) {
        Vec p = A.mul(e, *h);
        if (!is_zero(p)) nxt.push_back(p);
      }
    comps = std::move(nxt);
  }
  for (auto& e : comps) {
    std::vector<Vec> eL;
    for (auto& b : out.basis) eL.push_back(A.mul(e, b));
    out.idempotents.push_back(e);
    out.degrees.push_back(rank(eL));
  }
  (void)F;
  return out;
}

bool is_neat(const Involution& s, const std::vector<Vec>& Lb) {
  const Algebra& A = s.alg();
  Subspace symm(*A.field(), A.dim(), s.spaces().symm);
  for (auto& x : Lb)
    if (!symm.contains(x)) throw std::invalid_argument("subalgebra is not contained in the symmetric elements");
  if (!is_subalgebra(A, Lb)) return false;
  EtaleSub E;
  try {
    E = etale_components(A, Lb);
  } catch (const std::invalid_argument&) {
    return false;
  }
  std::optional<long> ratio;
  for (size_t i = 0; i < E.idempotents.size(); ++i) {
    long r = rank(A.left_mat(E.idempotents[i]));
    if (r % E.degrees[i] != 0) return false;
    long q = r / E.degrees[i];
    if (ratio && *ratio != q) return false;
    ratio = q;
  }
  return true;
}

std::vector<QuadraticElement> quadratic_candidates(const Involution& s, bool with_sums) {
  const Algebra& A = s.alg();
  Subspace symd(*A.field(), A.dim(), s.spaces().symd);
  std::vector<Vec> mono;
  std::set<std::string> mseen;
  for (auto& m : structural_candidates(A)) {
    if (A.as_scalar(m) || is_zero(m)) continue;
    if (mseen.insert(key_of({m})).second) mono.push_back(m);
  }
  std::vector<QuadraticElement> out;
  std::set<std::string> seen;
  auto consider = [&](const Vec& x) {
    if (!symd.contains(x)) return;
    auto q = as_quadratic(A, x);
    if (!q || !is_etale_quadratic(*q)) return;
    if (seen.insert(key_of(echelon({A.unit(), x}, A.dim()))).second) out.push_back(*q);
  };
  for (auto& m : mono) consider(m);
  if (with_sums) {
    bool two = A.field()->characteristic() == 2;
    for (size_t i = 0; i < mono.size(); ++i)
      for (size_t j = i + 1; j < mono.size(); ++j) {
        consider(add(mono[i], mono[j]));
        if (!two) consider(sub(mono[i], mono[j]));
      }
  }
  return out;
}

std::vector<BiquadraticL> find_neat_biquadratics(const Involution& s, const NeatSearchOptions& opt) {
  const Algebra& A = s.alg();
  const Field& F = *A.field();
  s.require_one_in_symd();
  if (s.classification().capacity != 4) throw std::invalid_argument("neat biquadratic search needs capacity 4");
  Subspace symd(F, A.dim(), s.spaces().symd);
  std::vector<BiquadraticL> found;
  std::set<std::string> found_keys, tried;
  auto try_pair = [&](const Vec& a, const Vec& b) {
    if (int(found.size()) >= opt.max_results) return;
    if (!commute(A, a, b)) return;
    Vec ab = A.mul(a, b);
    std::vector<Vec> Lb{A.unit(), a, b, ab};
    if (rank(Lb) != 4 || !symd.contains(ab)) return;
    auto key = key_of(echelon(Lb, A.dim()));
    if (found_keys.count(key) || !tried.insert(key).second) return;
    if (!is_neat(s, Lb)) return;
    auto L = make_biquadratic(A, a, b);
    if (int(L.basis.size()) > s.classification().capacity) throw std::logic_error("etale subalgebra exceeds the capacity");
    found_keys.insert(key);
    found.push_back(std::move(L));
  };
  for (bool sums : {false, true}) {
    auto cands = quadratic_candidates(s, sums);
    for (size_t i = 0; i < cands.size() && int(found.size()) < opt.max_results; ++i)
      for (size_t j = i + 1; j < cands.size() && int(found.size()) < opt.max_results; ++j)
        try_pair(cands[i].x, cands[j].x);
    if (int(found.size()) >= opt.max_results) return found;
  }
  std::mt19937_64 rng(opt.seed);
  // conjugates by Cayley transforms (1 - a)(1 + a)^-1 of sparse skew a, which are sigma-similitudes
  auto& skew = s.spaces().skew;
  if (F.characteristic() != 2 && !found.empty() && !skew.empty()) {
    auto base = found;
    std::uniform_int_distribution<size_t> pick(0, skew.size() - 1);
    for (int t = 0; t < 40 && int(found.size()) < opt.max_results; ++t) {
      Vec a = A.zero();
      for (int k = 0; k < 2; ++k) axpy(a, F.from_int(1 + k), skew[pick(rng)]);
      auto inv = inverse(A, add(A.unit(), a));
      if (!inv.inverse) continue;
      Vec g = A.mul(sub(A.unit(), a), *inv.inverse);
      auto gi = inverse(A, g);
      if (!gi.inverse) continue;
      auto& L0 = base[t % base.size()];
      try_pair(A.mul(A.mul(g, L0.u1), *gi.inverse), A.mul(A.mul(g, L0.u2), *gi.inverse));
    }
  }
  // random low-height symmetric elements commuting with a structural candidate
  auto cands = quadratic_candidates(s, false);
  long h = std::max(1, std::min(opt.height_bound, 3));
  std::uniform_int_distribution<long> dist(-h, h);
  for (size_t i = 0; i < cands.size() && i < 8 && int(found.size()) < opt.max_results; ++i) {
    auto cent = centralizer(A, {cands[i].x});
    auto V = intersection(cent, s.spaces().symd, A.dim());
    for (int t = 0; t < 200 && int(found.size()) < opt.max_results; ++t) {
      Vec y = A.zero();
      for (auto& v : V) axpy(y, F.from_int(dist(rng)), v);
      auto q = as_quadratic(A, y);
      if (!q || !is_etale_quadratic(*q)) continue;
      try_pair(cands[i].x, y);
    }
  }
  return found;
}

std::optional<BiquadraticL> find_neat_biquadratic(const Involution& s, int height_bound, uint64_t seed) {
  auto r = find_neat_biquadratics(s, {height_bound, seed, 1});
  if (r.empty()) return std::nullopt;
  return r[0];
}

}  // namespace cap4
