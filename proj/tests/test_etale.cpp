#include <algorithm>
#include <numeric>
#include <set>

#include "cap4/etale.hpp"
#include "doctest.h"

using namespace cap4;

namespace {

FieldPtr Q() { return Field::rationals(); }

// F[x]/(f) for monic f given by its lower coefficients c_0..c_{n-1}
AlgebraPtr poly_quotient(const FieldPtr& F, std::vector<long> low) {
  int n = int(low.size());
  std::vector<Vec> pw;
  for (int e = 0; e <= 2 * n - 2; ++e) {
    Vec v = zero_vec(*F, n);
    if (e < n) {
      v[e] = F->one();
    } else {
      // x^e = x * x^{e-1}, with x^n = -sum c_i x^i
      Vec prev = pw[e - 1];
      Vec sh = zero_vec(*F, n);
      for (int i = 0; i + 1 < n; ++i) sh[i + 1] = prev[i];
      for (int i = 0; i < n; ++i) sh[i] -= prev[n - 1] * F->from_int(low[i]);
      v = sh;
    }
    pw.push_back(v);
  }
  std::vector<std::vector<Term>> table(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (!pw[i + j][k].is_zero()) table[i * n + j].push_back({k, pw[i + j][k]});
  return raw_algebra(F, n, table, unit_vec(*F, n, 0));
}

Vec diag_unit(const Algebra& M, int n, int i) {
  Vec v = M.zero();
  v[i * n + i] = M.field()->one();
  return v;
}

void check_found(const Involution& s, const BiquadraticL& L) {
  const Algebra& A = s.alg();
  Subspace symd(*A.field(), A.dim(), s.spaces().symd);
  for (auto& b : L.basis) CHECK(symd.contains(b));
  CHECK(A.mul(L.u1, L.u2) == A.mul(L.u2, L.u1));
  CHECK(is_neat(s, L.basis));
  for (int i = 0; i < 3; ++i) {
    CHECK(L.apply(i, L.gen[i]) == L.gen[i]);
    for (auto& x : L.basis)
      for (auto& y : L.basis) CHECK(L.apply(i, A.mul(x, y)) == A.mul(L.apply(i, x), L.apply(i, y)));
  }
}

}  // namespace

TEST_SUITE("etale_neat") {
  TEST_CASE("etale examples") {
    auto F = Q();
    auto E = poly_quotient(F, {-2, 0});
    CHECK(is_etale(*E, {E->basis(0), E->basis(1)}));
    auto N = poly_quotient(F, {0, 0});
    CHECK_FALSE(is_etale(*N, {N->basis(0), N->basis(1)}));
    auto G = Field::finite(2);
    auto E2 = poly_quotient(G, {1, 1});
    CHECK(is_etale(*E2, {E2->basis(0), E2->basis(1)}));
    auto N2 = poly_quotient(G, {1, 0});
    CHECK_FALSE(is_etale(*N2, {N2->basis(0), N2->basis(1)}));
  }

  TEST_CASE("quadratic roots") {
    auto F = Q();
    auto r = quadratic_roots(*F, F->from_int(1), F->from_int(6));
    REQUIRE(r);
    CHECK(std::set<std::string>{r->first.str(), r->second.str()} == std::set<std::string>{"3", "-2"});
    CHECK_FALSE(quadratic_roots(*F, F->zero(), F->from_int(2)));
    auto G = Field::finite(2, 2);
    // t^2 + t + 1 splits over GF(4) and not over GF(2)
    auto g = quadratic_roots(*G, G->one(), G->one());
    REQUIRE(g);
    for (auto t : {g->first, g->second}) CHECK(t * t == t + G->one());
    CHECK_FALSE(quadratic_roots(*Field::finite(2), Field::finite(2)->one(), Field::finite(2)->one()));
  }

  TEST_CASE("galois group of a field biquadratic") {
    auto F = Q();
    auto A = tensor_product(etale_quadratic(F, F->from_int(2)), etale_quadratic(F, F->from_int(3)));
    std::vector<Vec> Lb;
    for (int i = 0; i < 4; ++i) Lb.push_back(A->basis(i));
    auto L = galois_group_biquadratic(*A, Lb);
    Mat id = identity(*F, 4);
    for (int i = 0; i < 3; ++i) {
      CHECK(L.gamma[i] != id);
      CHECK(L.gamma[i] * L.gamma[i] == id);
      CHECK(L.apply(i, L.gen[i]) == L.gen[i]);
    }
    // each fixed algebra is generated by a square root of 2, 3 or 6 up to squares
    std::set<long> seen;
    for (int i = 0; i < 3; ++i) {
      auto q = *as_quadratic(*A, L.gen[i]);
      Fe disc = q.s * q.s + F->from_int(4) * q.p;
      for (long d : {2, 3, 6})
        if (square_class_equal(disc, F->from_int(d))) seen.insert(d);
    }
    CHECK(seen == std::set<long>{2, 3, 6});
  }

  TEST_CASE("galois group of the split algebra") {
    auto F = Q();
    int n = 4;
    auto M = matrix_algebra(F, n);
    std::vector<Vec> e;
    for (int i = 0; i < n; ++i) e.push_back(diag_unit(*M, n, i));
    auto L = galois_group_biquadratic(*M, e);
    std::set<std::vector<int>> perms;
    std::vector<int> p(4);
    for (int i = 0; i < 3; ++i) {
      std::iota(p.begin(), p.end(), 0);
      std::optional<std::vector<int>> match;
      // all 24 permutations of the idempotents
      do {
        bool ok = true;
        for (int k = 0; k < 4 && ok; ++k) ok = L.apply(i, e[k]) == e[p[k]];
        if (ok) match = p;
      } while (std::next_permutation(p.begin(), p.end()));
      REQUIRE(match);
      int fixed = 0;
      for (int k = 0; k < 4; ++k) {
        fixed += (*match)[k] == k;
        CHECK((*match)[(*match)[k]] == k);
      }
      CHECK(fixed == 0);
      perms.insert(*match);
    }
    CHECK(perms.size() == 3);
  }

  TEST_CASE("cyclic quartic is rejected") {
    auto F = Q();
    auto C = poly_quotient(F, {1, 1, 1, 1});
    std::vector<Vec> Lb;
    for (int i = 0; i < 4; ++i) Lb.push_back(C->basis(i));
    CHECK(is_etale(*C, Lb));
    CHECK_THROWS_AS(galois_group_biquadratic(*C, Lb), std::invalid_argument);
  }

  TEST_CASE("etale components") {
    auto F = Q();
    auto M = matrix_algebra(F, 4);
    std::vector<Vec> e;
    for (int i = 0; i < 4; ++i) e.push_back(diag_unit(*M, 4, i));
    auto E = etale_components(*M, e);
    CHECK(E.idempotents.size() == 4);
    CHECK(E.degrees == std::vector<int>{1, 1, 1, 1});
    Vec sum = M->zero();
    for (auto& x : E.idempotents) sum = add(sum, x);
    CHECK(sum == M->unit());
    auto A = tensor_product(etale_quadratic(F, F->from_int(2)), etale_quadratic(F, F->from_int(3)));
    std::vector<Vec> Lb;
    for (int i = 0; i < 4; ++i) Lb.push_back(A->basis(i));
    auto EF = etale_components(*A, Lb);
    CHECK(EF.idempotents.size() == 1);
    CHECK(EF.degrees == std::vector<int>{4});
    auto B = tensor_product(etale_quadratic(F, F->from_int(2)), etale_quadratic(F, F->from_int(8)));
    std::vector<Vec> Bb;
    for (int i = 0; i < 4; ++i) Bb.push_back(B->basis(i));
    auto EB = etale_components(*B, Bb);
    CHECK(EB.degrees == std::vector<int>{2, 2});
  }

  TEST_CASE("neatness examples") {
    auto F = Q();
    auto M2 = matrix_algebra(F, 2);
    auto t2 = transpose_involution(M2);
    CHECK(is_neat(*t2, {diag_unit(*M2, 2, 0), diag_unit(*M2, 2, 1)}));
    auto M3 = matrix_algebra(F, 3);
    auto t3 = transpose_involution(M3);
    CHECK_FALSE(is_neat(*t3, {diag_unit(*M3, 3, 0), add(diag_unit(*M3, 3, 1), diag_unit(*M3, 3, 2))}));
    Vec e12 = M2->zero();
    e12[1] = F->one();
    CHECK_THROWS(is_neat(*t2, {M2->unit(), e12}));
  }

  TEST_CASE("neat search on the Hamilton cube") {
    auto F = Q();
    auto c = canonical_involution(quaternion_algebra(F, F->from_int(-1), F->from_int(-1)));
    auto c3 = tensor_involution(tensor_involution(c, c), c);
    auto L = find_neat_biquadratic(*c3);
    REQUIRE(L);
    check_found(*c3, *L);
    auto many = find_neat_biquadratics(*c3, {200, 0, 3});
    CHECK(many.size() == 3);
    for (auto& x : many) check_found(*c3, x);
  }

  TEST_CASE("neat search on an orthogonal and quaternion product") {
    auto F = Q();
    auto ad = adjoint_involution(matrix_algebra(F, 4), {F->one(), F->one(), F->one(), F->from_int(-1)});
    auto c = canonical_involution(quaternion_algebra(F, F->from_int(-1), F->from_int(-1)));
    auto s = tensor_involution(ad, c);
    CHECK(s->classification().type == InvType::Symplectic);
    auto L = find_neat_biquadratic(*s);
    REQUIRE(L);
    check_found(*s, *L);
    auto o = tensor_involution(c, c);
    auto Lo = find_neat_biquadratic(*o);
    REQUIRE(Lo);
    check_found(*o, *Lo);
  }

  TEST_CASE("neat search preconditions") {
    auto F = Q();
    auto c = canonical_involution(quaternion_algebra(F, F->from_int(-1), F->from_int(-1)));
    auto s = tensor_involution(transpose_involution(matrix_algebra(F, 2)), c);
    CHECK(s->classification().capacity == 2);
    CHECK_THROWS_AS(find_neat_biquadratic(*s), std::invalid_argument);
    auto G = Field::finite(2);
    auto t = transpose_involution(matrix_algebra(G, 4));
    CHECK_THROWS_AS(find_neat_biquadratic(*t), GateError);
  }

  TEST_CASE("neat search in characteristic two") {
    for (auto G : {Field::finite(2), Field::finite(2, 2)}) {
      auto q = quaternion_algebra(G, G->one(), G->one());
      auto c = canonical_involution(q);
      auto c3 = tensor_involution(tensor_involution(c, c), c);
      auto L = find_neat_biquadratic(*c3);
      REQUIRE(L);
      check_found(*c3, *L);
    }
  }
}
