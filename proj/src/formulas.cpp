#include "cap4/formulas.hpp"

#include <random>

namespace cap4 {

std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::Orthogonal: return "orthogonal";
    case ShapeKind::Unitary: return "unitary";
    case ShapeKind::Symplectic: return "symplectic";
    default: return "generic";
  }
}

namespace {

InvolutionPtr tensor_all(const std::vector<InvolutionPtr>& fs) {
  InvolutionPtr out;
  for (auto& f : fs) out = out ? tensor_involution(out, f) : f;
  return out;
}

bool orthogonal_deg4(const InvolutionPtr& s) {
  if (!s) return false;
  auto& c = s->classification();
  return c.type == InvType::Orthogonal && c.kind == InvKind::First && c.deg == 4;
}

void require_odd(const Field& F) {
  if (F.characteristic() == 2) throw std::invalid_argument("closed-form formulas need characteristic not 2");
}

}  // namespace

Cap4Shape recognize_shape(const std::vector<InvolutionPtr>& factors) {
  Cap4Shape sh;
  if (factors.empty()) return sh;
  auto all = tensor_all(factors);
  if (orthogonal_deg4(all)) {
    sh.kind = ShapeKind::Orthogonal;
    sh.B = all;
  } else {
    for (int t = int(factors.size()) - 1; t >= 0 && sh.kind == ShapeKind::Generic; --t) {
      auto& f = factors[t];
      auto& pv = f->alg().provenance();
      std::vector<InvolutionPtr> rest;
      for (int u = 0; u < int(factors.size()); ++u)
        if (u != t) rest.push_back(factors[u]);
      auto B = tensor_all(rest);
      if (!orthogonal_deg4(B)) continue;
      if (pv.kind == AlgebraProvenance::Etale && f->classification().kind == InvKind::Second) {
        sh.kind = ShapeKind::Unitary;
        sh.z = pv.a;
        sh.B = B;
      } else if (pv.kind == AlgebraProvenance::Quaternion && f->classification().type == InvType::Symplectic) {
        sh.kind = ShapeKind::Symplectic;
        sh.quat = std::make_pair(pv.a, pv.b);
        sh.B = B;
      }
    }
  }
  if (sh.B && sh.B->alg().field()->characteristic() != 2) sh.d = orth_discriminant(*sh.B);
  return sh;
}

QuadForm formula_orthogonal(const Involution& tau) {
  const FieldPtr& F = tau.alg().field();
  require_odd(*F);
  Fe d = orth_discriminant(tau);
  return QuadForm::diagonal(F, std::vector<Fe>{F->one(), -d});
}

QuadForm formula_unitary(const Cap4Shape& sh) {
  if (sh.kind != ShapeKind::Unitary) throw std::invalid_argument("instance does not have the unitary shape");
  const FieldPtr& F = sh.B->alg().field();
  require_odd(*F);
  return tensor({F->one(), -*sh.d}, QuadForm::diagonal(F, std::vector<Fe>{F->one(), -*sh.z}));
}

QuadForm norm_form_quaternion(const FieldPtr& F, const Fe& a, const Fe& b) {
  return QuadForm::diagonal(F, std::vector<Fe>{F->one(), -a, -b, a * b});
}

QuadForm formula_symplectic(const Cap4Shape& sh) {
  if (sh.kind != ShapeKind::Symplectic) throw std::invalid_argument("instance does not have the symplectic shape");
  const FieldPtr& F = sh.B->alg().field();
  require_odd(*F);
  return tensor({F->one(), -*sh.d}, norm_form_quaternion(F, sh.quat->first, sh.quat->second));
}

std::optional<UnitaryW> formula_unitary_w(const Involution& s, const BiquadraticL& L, int height_bound, uint64_t seed) {
  const Algebra& A = s.alg();
  const FieldPtr& F = A.field();
  require_odd(*F);
  if (s.classification().type != InvType::Unitary) throw std::invalid_argument("involution is not unitary");
  auto W = w_space(s, L, 1);
  std::optional<Vec> w;
  for (auto& b : W)
    if (inverse(A, b).inverse) {
      w = b;
      break;
    }
  std::mt19937_64 rng(seed);
  int h = std::max(1, std::min(height_bound, 3));
  for (int t = 0; !w && t < 200; ++t) {
    Vec x = A.zero();
    for (auto& b : W) axpy(x, F->from_int(long(rng() % (2 * h + 1)) - h), b);
    if (!is_zero(x) && inverse(A, x).inverse) w = x;
  }
  if (!w) return std::nullopt;
  UnitaryW out;
  out.w = *w;
  for (auto& l : L.basis)
    if (A.mul(*w, l) != A.mul(L.apply(0, l), *w)) throw std::logic_error("w does not twist L by gamma1");
  const Vec& g = L.gen[0];
  auto rel = as_quadratic(A, g);
  auto c = Subspace(*F, A.dim(), {A.unit(), g}).coords(A.mul(*w, *w));
  if (!c) throw std::logic_error("w^2 does not lie in L^gamma1");
  Fe a = (*c)[0], b = (*c)[1];
  out.nrd = a * a + a * b * rel->s - b * b * rel->p;
  // N = (L^gamma2 Z)^(gamma1 (x) sigma|Z)
  Vec g2 = L.gen[1];
  Vec zc;
  for (auto& z : s.center_basis())
    if (!A.as_scalar(z)) zc = z;
  std::vector<Vec> P{A.unit(), g2, zc, A.mul(g2, zc)};
  Subspace Psp(*F, A.dim(), P);
  Vec g2b = L.apply(0, g2), zb = s.apply(zc);
  std::vector<Vec> img{A.unit(), g2b, zb, A.mul(g2b, zb)};
  Mat m(*F, 4, 4);
  for (int k = 0; k < 4; ++k) {
    auto col = Psp.coords(img[k]);
    if (!col) throw std::logic_error("gamma1 (x) sigma does not preserve L^gamma2 Z");
    m.set_col(k, *col);
    m(k, k) -= F->one();
  }
  std::optional<Vec> gen;
  for (auto& v : kernel(m)) {
    Vec x = A.zero();
    for (int k = 0; k < 4; ++k) axpy(x, v[k], P[k]);
    if (!A.as_scalar(x)) gen = x;
  }
  if (!gen) throw std::logic_error("N is not two-dimensional");
  auto q = as_quadratic(A, *gen);
  Vec t = sub(*gen, A.scalar(q->s * F->from_int(2).inv()));
  auto t2 = A.as_scalar(A.mul(t, t));
  if (!t2) throw std::logic_error("trace-zero generator of N has non-scalar square");
  out.delta = *t2;
  out.form = tensor({F->one(), -out.nrd}, QuadForm::diagonal(F, std::vector<Fe>{F->one(), -out.delta}));
  return out;
}

QuadForm quadratic_norm_form(const Algebra& A, const Vec& e) {
  auto q = as_quadratic(A, e);
  if (!q) throw std::invalid_argument("element is not quadratic");
  const FieldPtr& F = A.field();
  Mat c(*F, 2, 2);
  c(0, 0) = F->one();
  c(0, 1) = q->s;
  c(1, 1) = -q->p;
  return QuadForm(F, c);
}

bool neat_norm_represents_disc(const Involution& tau, const Vec& e) {
  const FieldPtr& F = tau.alg().field();
  require_odd(*F);
  Fe d = orth_discriminant(tau);
  return is_isotropic(orth_sum(quadratic_norm_form(tau.alg(), e), QuadForm::diagonal(F, std::vector<Fe>{-d})));
}

TwoFoldShape unitary_two_fold_shape(const Involution& s, int height_bound) {
  TwoFoldShape out;
  if (s.classification().type != InvType::Unitary) throw std::invalid_argument("involution is not unitary");
  auto D = discriminant_pfister(s);
  out.pfister = D.pfister;
  const FieldPtr& F = s.alg().field();
  const QuadForm& q = D.pfister.form;
  out.represents_one = q.dim() == 4 && q.eval(unit_vec(*F, 4, 0)) == F->one();
  if (!out.represents_one && q.dim() == 4 && F->kind() != FieldKind::Multiquadratic)
    out.represents_one = is_isotropic(orth_sum(q, QuadForm::diagonal(F, std::vector<Fe>{-F->one()})));
  out.ok = D.n == 2 && out.represents_one;
  if (D.pfister.hyperbolic == std::optional<bool>(true)) {
    out.quaternion = std::make_pair(F->one(), F->one());
  } else if (F->kind() == FieldKind::Rational && F->characteristic() != 2) {
    auto slots = D.pfister.slots;
    if (!slots) slots = pfister_slots(D.pfister, height_bound);
    if (slots && slots->size() == 2 && is_isometric(pfister_form(F, *slots), q))
      out.quaternion = std::make_pair((*slots)[0], (*slots)[1]);
  }
  return out;
}

Crosscheck crosscheck(const std::vector<InvolutionPtr>& factors, const Involution& s, const PfisterOptions& opt) {
  Crosscheck out;
  out.shape = recognize_shape(factors);
  auto D = discriminant_pfister(s, std::nullopt, opt);
  out.pipeline = D.pfister.form;
  const Field& F = *s.alg().field();
  if (out.shape.kind == ShapeKind::Generic) {
    out.detail = "no closed-form shape recognized";
    return out;
  }
  if (F.characteristic() == 2) {
    out.detail = "closed-form formulas need characteristic not 2";
    return out;
  }
  switch (out.shape.kind) {
    case ShapeKind::Orthogonal: out.formula = formula_orthogonal(*out.shape.B); break;
    case ShapeKind::Unitary: out.formula = formula_unitary(out.shape); break;
    default: out.formula = formula_symplectic(out.shape); break;
  }
  out.agree = is_isometric(*out.formula, out.pipeline);
  if (out.shape.kind == ShapeKind::Unitary) {
    out.w_variant = formula_unitary_w(s, D.L, opt.height_bound, opt.seed);
    if (!out.w_variant) {
      out.detail = "no invertible w within the height bound";
    } else if (!is_isometric(out.w_variant->form, out.pipeline)) {
      out.agree = false;
      out.detail = "w-construction disagrees with the pipeline";
    }
  }
  if (!out.agree && out.detail.empty()) out.detail = "formula disagrees with the pipeline";
  return out;
}

}  // namespace cap4
