#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cap4/etale.hpp"
#include "cap4/quadform.hpp"

namespace cap4 {

// s(a + b u) = factor * b on the quadratic algebra F + F u
struct SFunctional {
  int index = 0;
  Vec u;
  Fe factor;
  Subspace space;

  Fe operator()(const Vec& y) const;
};

// char not 2: trace-zero generator, scaled to square 1 when the algebra is split
// char 2: the trace form, with u of trace 1
SFunctional s_functional(const Algebra& A, const std::vector<Vec>& fixed, int index);

struct WSpace {
  int index = 0;
  std::vector<Vec> basis;
  QuadForm q;
};

int pfister_fold(const Algebra& A);
// x in Symd with y x = x gamma_i(y) for the generators y of L; i in 1..3
std::vector<Vec> w_space(const Involution& s, const BiquadraticL& L, int i);
// q(x) = s(x^2) on the basis, Gram entries by polarization
QuadForm squaring_form(const Algebra& A, const std::vector<Vec>& basis, const SFunctional& s);

// c = s3(gamma1(u1 u2) + gamma2(u1 u2)); s3 is divided by c and the identity checked on the basis grid
Fe normalize_c(const Algebra& A, const BiquadraticL& L, const SFunctional& s1, const SFunctional& s2, SFunctional& s3);

inline Vec star_compose(const Algebra& A, const Vec& x, const Vec& y) { return add(A.mul(x, y), A.mul(y, x)); }

struct CompositionReport {
  bool ok = true;
  int pairs = 0;
  std::string detail;
};
CompositionReport verify_composition(const Algebra& A, const std::array<WSpace, 3>& W, const std::array<SFunctional, 3>& s);

bool direct_sum_check(const Involution& s, const BiquadraticL& L, const std::array<WSpace, 3>& W);

struct DiscPfister {
  int n = 0;
  PfisterForm pfister;
  BiquadraticL L;
  std::array<WSpace, 3> W;
  std::array<SFunctional, 3> s;
  Fe c;
  CompositionReport composition;
  bool direct_sum = false;
  std::optional<bool> independent_of_L;
};

struct PfisterOptions {
  int height_bound = 200;
  uint64_t seed = 0;
  bool check_independence = false;
};

DiscPfister discriminant_pfister_along(const Involution& s, const BiquadraticL& L);
DiscPfister discriminant_pfister(const Involution& s, const std::optional<BiquadraticL>& L = std::nullopt,
                                 const PfisterOptions& opt = {});

struct FunctorialityReport {
  bool ok = false;
  bool identity = false;  // d was already a square
  FieldPtr field;
  std::array<QuadForm, 3> extended, recomputed;
  std::string detail;
};

// extends to F(sqrt d), rebuilds W_i over the extension from L and the extended u_i, s_i, and compares Gram matrices entrywise
FunctorialityReport functoriality_check(const InvolutionPtr& s, const DiscPfister& D, const Fe& d);

}  // namespace cap4
