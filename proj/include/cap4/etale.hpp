#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cap4/involution.hpp"

namespace cap4 {

// x^2 = s x + p with x not scalar
struct QuadraticElement {
  Vec x;
  Fe s, p;
};

std::optional<QuadraticElement> as_quadratic(const Algebra& A, const Vec& x);
// nonzero discriminant of the relation (separable in characteristic 2)
bool is_etale_quadratic(const QuadraticElement& q);
// roots of t^2 - s t - p in F
std::optional<std::pair<Fe, Fe>> quadratic_roots(const Field& F, const Fe& s, const Fe& p);

// S spans a commutative subalgebra; nonsingular trace form
bool is_etale(const Algebra& A, const std::vector<Vec>& S);

struct EtaleSub {
  std::vector<Vec> basis;
  std::vector<Vec> idempotents;  // primitive, orthogonal, summing to 1
  std::vector<int> degrees;      // dimension over F of each component e L
};

struct BiquadraticL {
  std::vector<Vec> basis;  // 1, u1, u2, u1 u2
  Vec u1, u2;
  // gamma[i] fixes gen[i]; gamma[0] fixes u1, gamma[1] fixes u2, gamma[2] is their product
  std::array<Mat, 3> gamma;  // on coordinates relative to basis
  std::array<Vec, 3> gen;
  Subspace space;

  std::optional<Vec> coords(const Vec& y) const { return space.coords(y); }
  Vec element(const Vec& c) const;
  // gamma_{i+1}(y) for y in L
  Vec apply(int i, const Vec& y) const;
  std::vector<Vec> fixed(int i) const;
};

// L = F[u1, u2] for commuting etale quadratic u1, u2 with [L:F] = 4
BiquadraticL make_biquadratic(const Algebra& A, const Vec& u1, const Vec& u2);
// Klein four-group of a biquadratic subalgebra given by any basis; throws when none exists
BiquadraticL galois_group_biquadratic(const Algebra& A, const std::vector<Vec>& L);

// primitive idempotents of an etale subalgebra of dimension at most 4
EtaleSub etale_components(const Algebra& A, const std::vector<Vec>& L);
bool is_neat(const Involution& s, const std::vector<Vec>& L);

// a bounded search ended without a result; never a mathematical negative
struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NeatSearchOptions {
  int height_bound = 200;
  uint64_t seed = 0;
  int max_results = 1;
};
std::vector<BiquadraticL> find_neat_biquadratics(const Involution& s, const NeatSearchOptions& opt);
std::optional<BiquadraticL> find_neat_biquadratic(const Involution& s, int height_bound = 200, uint64_t seed = 0);

// candidate symmetric etale quadratic elements built from construction data
std::vector<QuadraticElement> quadratic_candidates(const Involution& s, bool with_sums);

}  // namespace cap4
