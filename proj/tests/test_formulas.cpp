#include <random>

#include "cap4/formulas.hpp"
#include "doctest.h"

using namespace cap4;

namespace {

FieldPtr Q() { return Field::rationals(); }

InvolutionPtr adjoint(const FieldPtr& F, std::vector<long> d) {
  std::vector<Fe> v;
  for (long x : d) v.push_back(F->from_int(x));
  return adjoint_involution(matrix_algebra(F, int(d.size())), v);
}

InvolutionPtr quat_can(const FieldPtr& F, long a, long b) {
  return canonical_involution(quaternion_algebra(F, F->from_int(a), F->from_int(b)));
}

InvolutionPtr center(const FieldPtr& F, long z) { return canonical_involution(etale_quadratic(F, F->from_int(z))); }

// signed discriminant of the diagonal form <a1,...,a4>: (-1)^(4*3/2) times the product
long disc_oracle(const std::vector<long>& d) {
  long p = 1;
  for (long x : d) p *= x;
  return p;
}

QuadForm diag(const FieldPtr& F, std::vector<long> d) { return QuadForm::diagonal(F, d); }

}  // namespace

TEST_SUITE("formulas8") {
  TEST_CASE("orthogonal formula") {
    auto F = Q();
    CHECK(is_isotropic(formula_orthogonal(*adjoint(F, {1, 1, 1, 1}))));
    for (auto d : std::vector<std::vector<long>>{{1, 1, 1, 1}, {1, 1, 1, -1}, {1, 1, 1, 7}, {2, 3, 5, 7}}) {
      auto tau = adjoint(F, d);
      auto f = formula_orthogonal(*tau);
      CHECK(is_isometric(f, diag(F, {1, -disc_oracle(d)})));
      std::vector<InvolutionPtr> fs{tau};
      auto c = crosscheck(fs, *tau);
      CHECK(c.shape.kind == ShapeKind::Orthogonal);
      CHECK_MESSAGE(c.agree, c.detail);
    }
    CHECK_FALSE(is_isotropic(formula_orthogonal(*adjoint(F, {1, 1, 1, -1}))));
  }

  TEST_CASE("unitary formula and the w construction") {
    auto F = Q();
    std::vector<InvolutionPtr> a{adjoint(F, {1, 1, 1, -1}), center(F, -1)};
    auto s = tensor_involution(a[0], a[1]);
    auto sh = recognize_shape(a);
    REQUIRE(sh.kind == ShapeKind::Unitary);
    auto f = formula_unitary(sh);
    CHECK(is_isometric(f, diag(F, {1, 1, 1, 1})));
    CHECK_FALSE(is_isotropic(f));
    auto c = crosscheck(a, *s);
    CHECK_MESSAGE(c.agree, c.detail);
    REQUIRE(c.w_variant);
    CHECK(is_isometric(c.w_variant->form, f));
    const Algebra& A = s->alg();
    CHECK(s->apply(c.w_variant->w) == c.w_variant->w);
    CHECK(inverse(A, c.w_variant->w).inverse.has_value());

    std::vector<InvolutionPtr> b{adjoint(F, {1, 1, 1, 1}), center(F, 3)};
    auto s2 = tensor_involution(b[0], b[1]);
    auto f2 = formula_unitary(recognize_shape(b));
    CHECK(is_isotropic(f2));
    auto c2 = crosscheck(b, *s2);
    CHECK_MESSAGE(c2.agree, c2.detail);
    REQUIRE(c2.w_variant);
    CHECK(is_isotropic(c2.w_variant->form));
  }

  TEST_CASE("symplectic formula") {
    auto F = Q();
    auto H = quat_can(F, -1, -1);
    std::vector<InvolutionPtr> a{adjoint(F, {1, 1, 1, -1}), H};
    auto sh = recognize_shape(a);
    REQUIRE(sh.kind == ShapeKind::Symplectic);
    auto f = formula_symplectic(sh);
    CHECK(is_isometric(f, diag(F, {1, 1, 1, 1, 1, 1, 1, 1})));
    CHECK_FALSE(is_isotropic(f));
    // 7 = 2^2 + 1 + 1 + 1 is a norm of the Hamilton quaternions
    std::vector<InvolutionPtr> b{adjoint(F, {1, 1, 1, 7}), H};
    CHECK(is_isotropic(formula_symplectic(recognize_shape(b))));
    std::vector<InvolutionPtr> c{adjoint(F, {1, 1, 1, 1}), quat_can(F, 2, 3)};
    CHECK(is_isotropic(formula_symplectic(recognize_shape(c))));
    for (auto& fs : {a, b, c}) {
      auto r = crosscheck(fs, *tensor_involution(fs[0], fs[1]));
      CHECK_MESSAGE(r.agree, r.detail);
    }
  }

  TEST_CASE("shape recognition from factors") {
    auto F = Q();
    auto H = quat_can(F, -1, -1);
    auto sh = recognize_shape({H, H, H});
    CHECK(sh.kind == ShapeKind::Symplectic);
    REQUIRE(sh.d);
    CHECK(square_class_equal(*sh.d, F->one()));
    CHECK(recognize_shape({H, H}).kind == ShapeKind::Orthogonal);
    CHECK(recognize_shape({H, H, center(F, 5)}).kind == ShapeKind::Unitary);
    CHECK(recognize_shape({H}).kind == ShapeKind::Generic);
    auto G = Field::finite(2);
    auto c2 = canonical_involution(quaternion_algebra(G, G->one(), G->one()));
    // in characteristic 2 the product of two canonical involutions is symplectic, so no orthogonal part exists
    auto s2 = recognize_shape({c2, c2, c2});
    CHECK(s2.kind == ShapeKind::Generic);
    auto r = crosscheck({c2, c2, c2}, *tensor_involution(tensor_involution(c2, c2), c2));
    CHECK_FALSE(r.formula);
  }

  TEST_CASE("neat quadratic norms represent the discriminant") {
    auto F = Q();
    auto tau = adjoint(F, {1, 1, 1, -1});
    Vec e = tau->alg().zero();
    e[0] = F->one();
    e[5] = F->one();
    CHECK(is_isotropic(quadratic_norm_form(tau->alg(), e)));
    CHECK(neat_norm_represents_disc(*tau, e));
    auto t1 = adjoint(F, {1, 1, 1, 1});
    auto L1 = find_neat_biquadratic(*t1);
    REQUIRE(L1);
    for (int k = 0; k < 3; ++k) CHECK(neat_norm_represents_disc(*t1, L1->gen[k]));
    std::mt19937 rng(11);
    int tested = 0;
    for (int t = 0; t < 12; ++t) {
      std::vector<long> d(4);
      for (auto& x : d) {
        x = long(rng() % 13) + 1;
        if (rng() % 2) x = -x;
      }
      auto tau2 = adjoint(F, d);
      auto L = find_neat_biquadratic(*tau2);
      if (!L) continue;
      ++tested;
      for (int k = 0; k < 3; ++k) CHECK(neat_norm_represents_disc(*tau2, L->gen[k]));
    }
    CHECK(tested >= 10);
  }

  TEST_CASE("unitary two-fold shape") {
    auto F = Q();
    auto s = tensor_involution(adjoint(F, {1, 1, 1, -1}), center(F, -1));
    auto r = unitary_two_fold_shape(*s);
    CHECK(r.ok);
    CHECK(r.represents_one);
    REQUIRE(r.quaternion);
    CHECK(is_isometric(norm_form_quaternion(F, r.quaternion->first, r.quaternion->second), diag(F, {1, 1, 1, 1})));
    auto h = unitary_two_fold_shape(*tensor_involution(adjoint(F, {1, 1, 1, 1}), center(F, 3)));
    CHECK(h.ok);
    REQUIRE(h.quaternion);
    CHECK(h.quaternion->first == F->one());
    CHECK(h.quaternion->second == F->one());
  }
}
