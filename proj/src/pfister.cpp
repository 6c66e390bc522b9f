#include "cap4/pfister.hpp"

namespace cap4 {

Fe SFunctional::operator()(const Vec& y) const {
  auto c = space.coords(y);
  if (!c) throw std::logic_error("element is outside the fixed algebra of s" + std::to_string(index));
  return factor * (*c)[1];
}

SFunctional s_functional(const Algebra& A, const std::vector<Vec>& fixed, int index) {
  const Field& F = *A.field();
  Vec g;
  for (auto& v : fixed)
    if (!A.as_scalar(v)) g = v;
  if (g.empty()) throw std::invalid_argument("fixed algebra has no generator");
  auto q = as_quadratic(A, g);
  if (!q || !is_etale_quadratic(*q)) throw std::invalid_argument("fixed algebra is not quadratic etale");
  SFunctional s;
  s.index = index;
  s.factor = F.one();
  if (F.characteristic() == 2) {
    s.u = scale(q->s.inv(), g);
  } else {
    Fe half = F.from_int(2).inv();
    Vec t = sub(g, A.scalar(q->s * half));
    Fe delta = q->p + q->s * q->s * half * half;
    if (auto r = F.sqrt(delta)) t = scale(r->inv(), t);
    s.u = t;
  }
  s.space = Subspace(F, A.dim(), {A.unit(), s.u});
  return s;
}

int pfister_fold(const Algebra& A) {
  int d = A.dim(), l = 0;
  while ((1 << l) < d) ++l;
  if ((1 << l) != d || l < 4) throw std::invalid_argument("dimension of A is not a power of two at least 16");
  return l - 3;
}

std::vector<Vec> w_space(const Involution& s, const BiquadraticL& L, int i) {
  const Algebra& A = s.alg();
  const Field& F = *A.field();
  auto& symd = s.spaces().symd;
  int m = int(symd.size()), n = A.dim();
  Mat M(F, 2 * n, m);
  int r = 0;
  for (auto* y : {&L.u1, &L.u2}) {
    Vec gy = L.apply(i - 1, *y);
    for (int k = 0; k < m; ++k) {
      Vec c = sub(A.mul(*y, symd[k]), A.mul(symd[k], gy));
      for (int t = 0; t < n; ++t) M(r + t, k) = c[t];
    }
    r += n;
  }
  std::vector<Vec> out;
  for (auto& c : kernel(M)) {
    Vec x = A.zero();
    for (int k = 0; k < m; ++k)
      if (!c[k].is_zero()) axpy(x, c[k], symd[k]);
    out.push_back(x);
  }
  int expect = 1 << pfister_fold(A);
  if (int(out.size()) != expect)
    throw std::invalid_argument("W" + std::to_string(i) + " has dimension " + std::to_string(out.size()) + ", expected " +
                                std::to_string(expect) + "; L is not neat or the instance is invalid");
  return out;
}

QuadForm squaring_form(const Algebra& A, const std::vector<Vec>& basis, const SFunctional& s) {
  int k = int(basis.size());
  Mat c(*A.field(), k, k);
  for (int a = 0; a < k; ++a) {
    c(a, a) = s(A.mul(basis[a], basis[a]));
    for (int b = a + 1; b < k; ++b) c(a, b) = s(star_compose(A, basis[a], basis[b]));
  }
  return QuadForm(A.field(), c);
}

Fe normalize_c(const Algebra& A, const BiquadraticL& L, const SFunctional& s1, const SFunctional& s2, SFunctional& s3) {
  Vec z = A.mul(s1.u, s2.u);
  Fe c = s3(add(L.apply(0, z), L.apply(1, z)));
  if (c.is_zero()) throw std::logic_error("normalization constant vanishes");
  s3.factor = s3.factor / c;
  for (auto& x : {A.unit(), s1.u})
    for (auto& y : {A.unit(), s2.u}) {
      Vec xy = A.mul(x, y);
      if (s3(add(L.apply(0, xy), L.apply(1, xy))) != s1(x) * s2(y)) throw std::logic_error("bilinear identity fails after normalization");
    }
  return c;
}

CompositionReport verify_composition(const Algebra& A, const std::array<WSpace, 3>& W, const std::array<SFunctional, 3>& s) {
  CompositionReport rep;
  Subspace w3(*A.field(), A.dim(), W[2].basis);
  for (size_t a = 0; a < W[0].basis.size(); ++a)
    for (size_t b = 0; b < W[1].basis.size(); ++b) {
      auto& x = W[0].basis[a];
      auto& y = W[1].basis[b];
      Vec z = star_compose(A, x, y);
      ++rep.pairs;
      std::string at = " at pair (" + std::to_string(a) + ", " + std::to_string(b) + ")";
      if (!w3.contains(z)) {
        rep.ok = false;
        rep.detail = "x*y is not in W3" + at;
        return rep;
      }
      try {
        if (s[2](A.mul(z, z)) != s[0](A.mul(x, x)) * s[1](A.mul(y, y))) {
          rep.ok = false;
          rep.detail = "composition identity fails" + at;
          return rep;
        }
      } catch (const std::logic_error& e) {
        rep.ok = false;
        rep.detail = e.what() + at;
        return rep;
      }
    }
  return rep;
}

bool direct_sum_check(const Involution& s, const BiquadraticL& L, const std::array<WSpace, 3>& W) {
  std::vector<Vec> all = L.basis;
  for (auto& w : W) all.insert(all.end(), w.basis.begin(), w.basis.end());
  int expect = 4 + 3 * (1 << pfister_fold(s.alg()));
  return rank(all) == expect && int(s.spaces().symd.size()) == expect;
}

DiscPfister discriminant_pfister_along(const Involution& s, const BiquadraticL& L) {
  const Algebra& A = s.alg();
  s.require_one_in_symd();
  if (s.classification().capacity != 4) throw std::invalid_argument("discriminant Pfister form needs capacity 4");
  DiscPfister D;
  D.n = pfister_fold(A);
  D.L = L;
  for (int i = 1; i <= 3; ++i) {
    D.W[i - 1].index = i;
    D.W[i - 1].basis = w_space(s, L, i);
    D.s[i - 1] = s_functional(A, L.fixed(i - 1), i);
  }
  D.c = normalize_c(A, L, D.s[0], D.s[1], D.s[2]);
  for (int i = 0; i < 3; ++i) D.W[i].q = squaring_form(A, D.W[i].basis, D.s[i]);
  D.composition = verify_composition(A, D.W, D.s);
  if (!D.composition.ok) throw std::logic_error(D.composition.detail);
  D.direct_sum = direct_sum_check(s, L, D.W);
  if (!D.direct_sum) throw std::logic_error("Symd is not the direct sum of L and the W spaces");
  D.pfister = pfister_normalize(D.W[0].q, D.n);
  if (A.field()->kind() != FieldKind::Multiquadratic)
    for (int i = 0; i < 3; ++i)
      if (!is_similar(D.pfister.form, D.W[i].q)) throw std::logic_error("q" + std::to_string(i + 1) + " is not similar to the Pfister form");
  return D;
}

DiscPfister discriminant_pfister(const Involution& s, const std::optional<BiquadraticL>& L, const PfisterOptions& opt) {
  s.require_one_in_symd();
  if (s.classification().capacity != 4) throw std::invalid_argument("discriminant Pfister form needs capacity 4");
  std::vector<BiquadraticL> found;
  if (!L || opt.check_independence)
    found = find_neat_biquadratics(s, {opt.height_bound, opt.seed, opt.check_independence ? 3 : 1});
  std::optional<BiquadraticL> first = L;
  if (!first) {
    if (found.empty()) throw NotFound("no neat biquadratic subalgebra found within the search bound");
    first = found[0];
  }
  DiscPfister D = discriminant_pfister_along(s, *first);
  if (opt.check_independence && s.alg().field()->kind() != FieldKind::Multiquadratic) {
    Subspace mine(*s.alg().field(), s.alg().dim(), first->basis);
    for (auto& other : found) {
      bool same = true;
      for (auto& b : other.basis) same = same && mine.contains(b);
      if (same) continue;
      D.independent_of_L = is_isometric(D.pfister.form, discriminant_pfister_along(s, other).pfister.form);
      break;
    }
  }
  return D;
}

FunctorialityReport functoriality_check(const InvolutionPtr& s, const DiscPfister& D, const Fe& d) {
  FunctorialityReport r;
  auto ext = extend_scalars(s->alg().field(), d);
  r.field = ext.field;
  r.identity = ext.identity;
  const FieldPtr& E = ext.field;
  auto A2 = base_change(s->algebra(), E);
  auto s2 = base_change(s, A2);
  auto L2 = make_biquadratic(*A2, embed_vec(D.L.u1, E), embed_vec(D.L.u2, E));
  for (int i = 0; i < 3; ++i) {
    std::vector<Vec> basis;
    for (auto& b : D.W[i].basis) basis.push_back(embed_vec(b, E));
    auto W2 = w_space(*s2, L2, i + 1);
    Subspace W2sp(*E, A2->dim(), W2);
    bool inside = W2.size() == basis.size();
    for (auto& b : basis) inside = inside && W2sp.contains(b);
    if (!inside) {
      r.detail = "W" + std::to_string(i + 1) + " does not extend to the W space over the extension";
      return r;
    }
    SFunctional si;
    si.index = D.s[i].index;
    si.u = embed_vec(D.s[i].u, E);
    si.factor = embed(D.s[i].factor, E);
    si.space = Subspace(*E, A2->dim(), {A2->unit(), si.u});
    r.extended[i] = D.W[i].q.base_change(E);
    r.recomputed[i] = squaring_form(*A2, basis, si);
    if (!(r.extended[i].coeffs() == r.recomputed[i].coeffs())) {
      r.detail = "Gram matrix of q" + std::to_string(i + 1) + " changes under extension";
      return r;
    }
  }
  r.ok = true;
  return r;
}

}  // namespace cap4
