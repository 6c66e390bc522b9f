#include "cap4/decomposer.hpp"

namespace cap4 {

namespace {

std::vector<Vec> combine(const Algebra& A, const std::vector<Vec>& basis, const std::vector<Vec>& coeffs) {
  std::vector<Vec> out;
  for (auto& c : coeffs) {
    Vec x = A.zero();
    for (size_t k = 0; k < c.size(); ++k)
      if (!c[k].is_zero()) axpy(x, c[k], basis[k]);
    out.push_back(x);
  }
  return out;
}

// elements x of span(basis) with x k = kappa(k) x for the generator k, i.e. k' x = x k
std::vector<Vec> twisted(const Algebra& A, const std::vector<Vec>& basis, const Vec& k, const Vec& kbar) {
  std::vector<Vec> cols;
  for (auto& b : basis) cols.push_back(sub(A.mul(k, b), A.mul(b, kbar)));
  if (cols.empty()) return {};
  return combine(A, basis, kernel(from_columns(*A.field(), A.dim(), cols)));
}

Vec conj(const Algebra& A, const Vec& x) {
  auto q = as_quadratic(A, x);
  if (!q) throw std::invalid_argument("element is not quadratic");
  return sub(A.scalar(q->s), x);
}

bool in_span(const Algebra& A, const std::vector<Vec>& basis, const Vec& x) {
  return Subspace(*A.field(), A.dim(), basis).contains(x);
}

struct SquareSearch {
  const Algebra& A;
  const std::vector<Vec>& basis;
  const SFunctional& s;
  bool kmodule;
  std::optional<Fe> target;
  int height;
  std::optional<Vec> fallback;

  std::optional<Fe> square(const Vec& x) const { return A.as_scalar(A.mul(x, x)); }

  bool accept(const Vec& x) {
    auto c = square(x);
    if (!c || c->is_zero()) return false;
    if (!target || square_class_equal(*c, *target)) return true;
    if (!fallback) fallback = x;
    return false;
  }

  std::optional<Vec> run() {
    for (auto& b : basis)
      if (accept(b)) return b;
    std::optional<QuadForm> q;
    try {
      q = squaring_form(A, basis, s);
    } catch (const std::logic_error&) {
    }
    std::vector<Vec> nil;
    if (q) {
      for (auto& y : combine(A, basis, isotropic_vectors(*q, height, 24))) {
        if (accept(y)) return y;
        if (auto c = square(y); c && c->is_zero()) nil.push_back(y);
      }
    }
    const Field& F = *A.field();
    if (target) {
      std::vector<Vec> ys = basis;
      ys.insert(ys.end(), nil.begin(), nil.end());
      for (auto& y : ys)
        for (auto& z : basis) {
          if (rank(std::vector<Vec>{y, z}) < 2) continue;
          try {
            Fe a = s(A.mul(z, z)), b = s(add(A.mul(y, z), A.mul(z, y))), c = s(A.mul(y, y));
            std::vector<Fe> lams;
            if (a.is_zero()) {
              if (!b.is_zero()) lams.push_back(-c / b);
            } else if (F.characteristic() != 2) {
              Fe disc = b * b - F.from_int(4) * a * c;
              if (auto r = F.sqrt(disc)) {
                Fe two_a = F.from_int(2) * a;
                lams.push_back((-b + *r) / two_a);
                lams.push_back((-b - *r) / two_a);
              }
            } else {
              for (auto& l : F.elements())
                if ((a * l * l + b * l + c).is_zero()) lams.push_back(l);
            }
            for (auto& l : lams) {
              Vec x = add(y, scale(l, z));
              if (accept(x)) return x;
            }
          } catch (const std::logic_error&) {
          }
        }
    }
    for (auto& y : nil) {
      for (auto& z : basis) {
        Vec beta = add(A.mul(y, z), A.mul(z, y));
        if (kmodule) {
          auto inv = inverse(A, beta);
          if (inv.inverse) {
            Vec z2 = A.mul(*inv.inverse, z);
            Vec a = A.mul(z2, z2);
            Fe c = target ? *target : F.one();
            Vec x = add(A.mul(sub(A.scalar(c), a), y), z2);
            if (in_span(A, basis, x) && accept(x)) return x;
          }
        }
        try {
          Fe sb = s(beta), sc = s(A.mul(z, z));
          if (sc.is_zero()) continue;
          Fe lam = -sb / sc;
          if (lam.is_zero()) continue;
          Vec x = add(y, scale(lam, z));
          if (accept(x)) return x;
        } catch (const std::logic_error&) {
        }
      }
    }
    return fallback;
  }
};

QuatBasis quat_from(const Algebra& A, const Vec& i, const Vec& j) {
  auto q = as_quadratic(A, i);
  QuatBasis b;
  b.basis = {A.unit(), i, j, A.mul(i, j)};
  b.alpha = q->p;
  b.beta = q->s;
  b.delta = *A.as_scalar(A.mul(j, j));
  return b;
}

}  // namespace

VerifyResult verify_certificate(const Involution& s, const DecompositionCertificate& cert) {
  const Algebra& A = s.alg();
  const Field& F = *A.field();
  auto fail = [](std::string d) { return VerifyResult{false, std::move(d)}; };
  if (cert.quats.empty()) return fail("structure: no quaternion bases");
  for (auto& q : cert.quats)
    for (auto& b : q.basis)
      if (int(b.size()) != A.dim()) return fail("structure: vector of the wrong length");
  for (auto& b : cert.aligned_L)
    if (int(b.size()) != A.dim()) return fail("structure: vector of the wrong length");
  std::vector<Vec> gens;
  for (size_t t = 0; t < cert.quats.size(); ++t) {
    auto& q = cert.quats[t];
    auto& b = q.basis;
    std::string tag = " in Q" + std::to_string(t + 1);
    if (b[0] != A.unit()) return fail("closure: first basis vector is not 1" + tag);
    if (b[3] != A.mul(b[1], b[2])) return fail("closure: last basis vector is not the product" + tag);
    if (A.mul(b[1], b[1]) != add(A.scalar(q.alpha), scale(q.beta, b[1]))) return fail("closure: relation for i" + tag);
    bool sep = F.characteristic() == 2 ? !q.beta.is_zero() : !(q.beta * q.beta + F.from_int(4) * q.alpha).is_zero();
    if (!sep) return fail("closure: i is not separable" + tag);
    if (q.delta.is_zero() || A.mul(b[2], b[2]) != A.scalar(q.delta)) return fail("closure: relation for j" + tag);
    if (A.mul(b[2], b[1]) != A.mul(sub(A.scalar(q.beta), b[1]), b[2])) return fail("closure: j does not twist i" + tag);
    std::vector<Vec> bv(b.begin(), b.end());
    if (rank(bv) != 4 || !is_subalgebra(A, bv)) return fail("closure: basis does not span a subalgebra" + tag);
    Subspace sp(F, A.dim(), bv);
    for (auto& x : bv)
      if (!sp.contains(s.apply(x))) return fail("stability: subalgebra is not sigma-stable" + tag);
    gens.push_back(b[1]);
    gens.push_back(b[2]);
  }
  for (size_t t = 0; t < cert.quats.size(); ++t)
    for (size_t u = t + 1; u < cert.quats.size(); ++u)
      for (auto& x : cert.quats[t].basis)
        for (auto& y : cert.quats[u].basis)
          if (A.mul(x, y) != A.mul(y, x)) return fail("independence: Q" + std::to_string(t + 1) + " and Q" + std::to_string(u + 1) + " do not commute");
  std::vector<Vec> prods{A.unit()};
  for (auto& q : cert.quats) {
    std::vector<Vec> nxt;
    for (auto& p : prods)
      for (auto& b : q.basis) nxt.push_back(A.mul(p, b));
    prods = std::move(nxt);
  }
  if (rank(prods) != int(prods.size())) return fail("independence: product map is not injective");
  auto comp = centralizer(A, gens);
  if (comp.size() * prods.size() != size_t(A.dim())) return fail("independence: complement has the wrong dimension");
  if (!cert.aligned_L.empty()) {
    if (rank(cert.aligned_L) != 4 || !is_subalgebra(A, cert.aligned_L)) return fail("alignment: L is not a 4-dimensional subalgebra");
    Subspace Lsp(F, A.dim(), cert.aligned_L);
    for (auto& x : cert.aligned_L)
      if (s.apply(x) != x) return fail("alignment: L is not symmetric");
    std::vector<Vec> is{A.unit()};
    for (auto& q : cert.quats) {
      if (!Lsp.contains(q.basis[1])) return fail("alignment: generator of a quaternion factor lies outside L");
      std::vector<Vec> nxt;
      for (auto& p : is) {
        nxt.push_back(p);
        nxt.push_back(A.mul(p, q.basis[1]));
      }
      is = std::move(nxt);
    }
    if (rank(is) != 4) return fail("alignment: L is not generated by the quaternion generators");
  }
  return {};
}

std::optional<int> split_fixed_index(const Algebra& A, const BiquadraticL& L) {
  for (int k = 0; k < 3; ++k) {
    auto q = as_quadratic(A, L.gen[k]);
    auto r = quadratic_roots(*A.field(), q->s, q->p);
    if (r && r->first != r->second) return k;
  }
  return std::nullopt;
}

BiquadraticL reorder_biquadratic(const Algebra& A, const BiquadraticL& L, int k, int which) {
  const Vec& a = L.gen[k];
  const Vec& b = L.gen[(k + 1) % 3];
  return which == 0 ? make_biquadratic(A, a, b) : make_biquadratic(A, b, a);
}

DecomposeResult decompose_along_L(const Involution& s, const BiquadraticL& L, const DecomposeOptions& opt) {
  const Algebra& A = s.alg();
  const Field& F = *A.field();
  DiscPfister D = discriminant_pfister_along(s, L);
  if (!D.pfister.hyperbolic.value_or(false)) throw std::invalid_argument("the Pfister form along L is not hyperbolic");
  DecomposeResult res;
  std::optional<Fe> target;
  if (opt.metabolic_q2) target = -F.one();
  SquareSearch sx{A, D.W[0].basis, D.s[0], true, target, opt.height_bound, {}};
  auto x = sx.run();
  if (!x) {
    res.diagnostics = "no element of W1 with invertible scalar square within the height bound";
    return res;
  }
  const Vec& u1 = L.u1;
  const Vec& u2 = L.u2;
  auto Ap = centralizer(A, {u2, *x});
  auto V = intersection(Ap, s.spaces().symd, A.dim());
  auto T = twisted(A, V, u1, conj(A, u1));
  SquareSearch sz{A, T, D.s[0], false, target, opt.height_bound, {}};
  auto z = sz.run();
  if (!z) {
    res.diagnostics = "no twisted symmetric element with invertible scalar square in the centralizer of Q2";
    return res;
  }
  DecompositionCertificate cert;
  cert.quats = {quat_from(A, u1, *z), quat_from(A, u2, *x)};
  cert.aligned_L = L.basis;
  auto v = verify_certificate(s, cert);
  if (!v) throw std::logic_error("constructed certificate fails verification: " + v.detail);
  res.cert = std::move(cert);
  return res;
}

bool verify_hyperbolic_witness(const Involution& s, const Vec& e) {
  const Algebra& A = s.alg();
  return A.mul(e, e) == e && s.apply(e) == sub(A.unit(), e);
}

bool verify_metabolic_witness(const Involution& s, const Vec& e, const std::vector<Vec>& sub_basis) {
  const Algebra& A = s.alg();
  if (A.mul(e, e) != e || !is_zero(A.mul(s.apply(e), e))) return false;
  std::vector<Vec> S = sub_basis;
  if (S.empty())
    for (int i = 0; i < A.dim(); ++i) S.push_back(A.basis(i));
  else if (!in_span(A, S, e))
    return false;
  std::vector<Vec> eS;
  for (auto& b : S) eS.push_back(A.mul(e, b));
  return 2 * rank(eS) == rank(S);
}

std::array<Vec, 4> metabolic_quat_from_uv(const Involution& s, const Vec& u, const Vec& v) {
  const Algebra& A = s.alg();
  const Field& F = *A.field();
  Vec one = A.unit(), uv = A.mul(u, v);
  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("relation fails: ") + what);
  };
  need(A.mul(u, u) == u, "u^2 = u");
  need(A.mul(v, v) == one, "v^2 = 1");
  need(add(uv, A.mul(v, u)) == v, "uv + vu = v");
  need(s.apply(u) == add(sub(one, u), uv), "sigma(u) = 1 - u + uv");
  Vec sv = add(add(scale(-F.one(), one), scale(F.from_int(2), u)), sub(v, uv));
  need(s.apply(v) == sv, "sigma(v) = -1 + 2u + v - uv");
  std::array<Vec, 4> b{one, u, v, uv};
  std::vector<Vec> bv(b.begin(), b.end());
  need(rank(bv) == 4 && is_subalgebra(A, bv), "span of 1, u, v, uv is a subalgebra");
  Subspace sp(F, A.dim(), bv);
  Mat m(F, 4, 4);
  for (int k = 0; k < 4; ++k) {
    auto c = sp.coords(s.apply(b[k]));
    need(c.has_value(), "sigma-stability");
    m.set_col(k, *c);
    m(k, k) -= F.one();
  }
  need(int(kernel(m).size()) == 3, "orthogonal restriction");
  need(is_zero(A.mul(s.apply(u), u)), "sigma(u) u = 0");
  return b;
}

std::optional<Vec> split_metabolic_idempotent(const Involution& s, const QuatBasis& q) {
  const Algebra& A = s.alg();
  const Field& F = *A.field();
  auto& b = q.basis;
  if (s.apply(b[1]) != b[1] || s.apply(b[2]) != b[2]) return std::nullopt;
  auto r = quadratic_roots(F, q.beta, q.alpha);
  if (!r || r->first == r->second) return std::nullopt;
  auto t = F.sqrt(-q.delta);
  if (!t) return std::nullopt;
  Vec f1 = scale((r->first - r->second).inv(), sub(b[1], A.scalar(r->second)));
  Vec f2 = sub(A.unit(), f1);
  Vec e = add(f1, scale(*t / q.delta, A.mul(f2, b[2])));
  std::vector<Vec> bv(b.begin(), b.end());
  if (!verify_metabolic_witness(s, e, bv)) return std::nullopt;
  return e;
}

std::optional<SplitFactorDecomposition> decompose_with_split_factor(const Involution& s, const DecomposeOptions& opt) {
  const Algebra& A = s.alg();
  NeatSearchOptions nopt;
  nopt.height_bound = opt.height_bound;
  nopt.seed = opt.seed;
  nopt.max_results = 6;
  DecomposeOptions dopt = opt;
  dopt.metabolic_q2 = true;
  for (auto& L0 : find_neat_biquadratics(s, nopt)) {
    for (int k = 0; k < 3; ++k) {
      auto q = as_quadratic(A, L0.gen[k]);
      auto r = quadratic_roots(*A.field(), q->s, q->p);
      if (!r || r->first == r->second) continue;
      for (int which = 0; which < 2; ++which) {
        BiquadraticL L = reorder_biquadratic(A, L0, k, which);
        DecomposeResult res;
        try {
          res = decompose_along_L(s, L, dopt);
        } catch (const std::invalid_argument&) {
          return std::nullopt;
        }
        if (!res.cert) continue;
        for (size_t f = 0; f < res.cert->quats.size(); ++f)
          if (auto e = split_metabolic_idempotent(s, res.cert->quats[f])) return SplitFactorDecomposition{*res.cert, f, *e};
      }
    }
  }
  return std::nullopt;
}

MetabolicQuat existmetabolic_construct(const Involution& s, const Vec& k, const Vec& e) {
  const Algebra& A = s.alg();
  const Field& F = *A.field();
  if (!verify_hyperbolic_witness(s, e)) throw std::invalid_argument("e is not a hyperbolic idempotent");
  if (s.apply(k) != k) throw std::invalid_argument("k is not symmetric");
  auto q = as_quadratic(A, k);
  if (!q || !is_etale_quadratic(*q)) throw std::invalid_argument("k does not generate a quadratic etale algebra");
  Vec kb = sub(A.scalar(q->s), k);
  std::vector<Vec> all;
  for (int i = 0; i < A.dim(); ++i) all.push_back(A.basis(i));
  auto C = centralizer(A, {k});
  auto Cp = twisted(A, all, kb, k);
  if (C.size() + Cp.size() != size_t(A.dim())) throw std::logic_error("A is not the sum of C and C'");
  std::vector<Vec> cols = C;
  cols.insert(cols.end(), Cp.begin(), Cp.end());
  auto coef = solve(from_columns(F, A.dim(), cols), e);
  if (!coef) throw std::logic_error("e does not decompose along C and C'");
  Vec v = A.zero(), w = A.zero();
  for (size_t i = 0; i < cols.size(); ++i)
    if (!(*coef)[i].is_zero()) axpy(i < C.size() ? v : w, (*coef)[i], cols[i]);
  auto inv = inverse(A, v);
  if (!inv.inverse) {
    std::vector<Vec> vc;
    for (auto& c : C) vc.push_back(A.mul(v, c));
    auto ker = combine(A, C, kernel(from_columns(F, A.dim(), vc)));
    Vec x = ker.empty() ? inv.kernel : ker[0];
    if (!is_zero(A.mul(s.apply(x), x))) throw std::logic_error("kernel element of v is not isotropic");
    throw SingularPart("the restriction of sigma to the centralizer of K is isotropic", x);
  }
  MetabolicQuat out;
  out.wv = A.mul(w, *inv.inverse);
  if (s.apply(out.wv) != scale(-F.one(), out.wv)) throw std::logic_error("w v' is not skew");
  if (A.mul(out.wv, out.wv) != A.unit()) throw std::logic_error("(w v')^2 is not 1");
  out.basis = {A.unit(), k, out.wv, A.mul(k, out.wv)};
  std::vector<Vec> bv(out.basis.begin(), out.basis.end());
  if (rank(bv) != 4 || !is_subalgebra(A, bv)) throw std::logic_error("K + K w v' is not a subalgebra");
  Subspace sp(F, A.dim(), bv);
  Mat m(F, 4, 4);
  for (int i = 0; i < 4; ++i) {
    auto c = sp.coords(s.apply(out.basis[i]));
    if (!c) throw std::logic_error("Q is not sigma-stable");
    m.set_col(i, *c);
    m(i, i) -= F.one();
  }
  if (kernel(m).size() != 3) throw std::logic_error("restriction to Q is not orthogonal");
  Vec x = add(A.unit(), out.wv);
  if (!is_zero(A.mul(s.apply(x), x))) throw std::logic_error("1 + w v' is not isotropic");
  if (F.characteristic() != 2) {
    out.idempotent = scale(F.from_int(2).inv(), x);
    if (!verify_metabolic_witness(s, out.idempotent, bv)) throw std::logic_error("restriction to Q is not metabolic");
  }
  return out;
}

std::optional<Vec> adjoint_hyperbolic_idempotent(const Algebra& M, const Mat& gram, int height_bound) {
  const Field& F = *M.field();
  if (F.characteristic() == 2) throw std::invalid_argument("Lagrangian idempotents need characteristic not 2");
  int n = gram.rows;
  if (n % 2 != 0 || M.dim() != n * n) return std::nullopt;
  auto b = [&](const Vec& x, const Vec& y) { return dot(x, gram * y); };
  std::vector<Vec> W;
  for (int i = 0; i < n; ++i) W.push_back(unit_vec(F, n, i));
  std::vector<Vec> U, Up;
  while (!W.empty()) {
    int k = int(W.size());
    Mat c(F, k, k);
    for (int i = 0; i < k; ++i) {
      c(i, i) = b(W[i], W[i]);
      for (int j = i + 1; j < k; ++j) c(i, j) = F.from_int(2) * b(W[i], W[j]);
    }
    auto iso = isotropic_vector(QuadForm(M.field(), c), height_bound);
    if (!iso) return std::nullopt;
    Vec v = zero_vec(F, n);
    for (int i = 0; i < k; ++i) axpy(v, (*iso)[i], W[i]);
    Vec w;
    for (auto& x : W)
      if (!b(v, x).is_zero()) {
        w = scale(b(v, x).inv(), x);
        break;
      }
    if (w.empty()) return std::nullopt;
    w = sub(w, scale(b(w, w) * F.from_int(2).inv(), v));
    U.push_back(v);
    Up.push_back(w);
    Mat cond(F, 2, k);
    for (int i = 0; i < k; ++i) {
      cond(0, i) = b(v, W[i]);
      cond(1, i) = b(w, W[i]);
    }
    std::vector<Vec> nxt;
    for (auto& cf : kernel(cond)) {
      Vec x = zero_vec(F, n);
      for (int i = 0; i < k; ++i) axpy(x, cf[i], W[i]);
      nxt.push_back(x);
    }
    W = std::move(nxt);
  }
  std::vector<Vec> cols = U;
  cols.insert(cols.end(), Up.begin(), Up.end());
  Mat P = from_columns(F, n, cols);
  auto Pi = inverse(P);
  if (!Pi) return std::nullopt;
  Mat D(F, n, n);
  for (size_t i = 0; i < U.size(); ++i) D(int(i), int(i)) = F.one();
  Mat E = P * D * *Pi;
  Vec e = M.zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e[i * n + j] = E(i, j);
  return e;
}

}  // namespace cap4
