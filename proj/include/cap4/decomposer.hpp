#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cap4/pfister.hpp"

namespace cap4 {

// basis 1, i, j, ij with i^2 = alpha + beta i, j^2 = delta, j i = (beta - i) j
struct QuatBasis {
  std::array<Vec, 4> basis;
  Fe alpha, beta, delta;
};

struct DecompositionCertificate {
  std::vector<QuatBasis> quats;
  std::vector<Vec> aligned_L;
};

struct VerifyResult {
  bool ok = true;
  std::string detail;
  explicit operator bool() const { return ok; }
};

// recomputes every claim from the involution and the raw vectors
VerifyResult verify_certificate(const Involution& s, const DecompositionCertificate& cert);

struct DecomposeOptions {
  int height_bound = 200;
  uint64_t seed = 0;
  // aim for x^2 = -1 in Q2 so that a split L^{gamma2} yields a metabolic factor
  bool metabolic_q2 = false;
};

struct DecomposeResult {
  std::optional<DecompositionCertificate> cert;
  std::string diagnostics;
};

// requires the Pfister form along L to be hyperbolic
DecomposeResult decompose_along_L(const Involution& s, const BiquadraticL& L, const DecomposeOptions& opt = {});
// same L with generators reordered so that L^{gamma_k} becomes L^{gamma_{which}}
BiquadraticL reorder_biquadratic(const Algebra& A, const BiquadraticL& L, int k, int which);
// index of a fixed algebra L^{gamma_k} that is split, if any
std::optional<int> split_fixed_index(const Algebra& A, const BiquadraticL& L);

bool verify_hyperbolic_witness(const Involution& s, const Vec& e);
// metabolic inside the sigma-stable subalgebra spanned by sub, or inside A when sub is empty
bool verify_metabolic_witness(const Involution& s, const Vec& e, const std::vector<Vec>& sub = {});

// relations u^2 = u, v^2 = 1, uv + vu = v, sigma(u) = 1 - u + uv, sigma(v) = -1 + 2u + v - uv
std::array<Vec, 4> metabolic_quat_from_uv(const Involution& s, const Vec& u, const Vec& v);

// metabolic idempotent in a split quaternion factor with orthogonal restriction, if one exists
std::optional<Vec> split_metabolic_idempotent(const Involution& s, const QuatBasis& q);

struct SplitFactorDecomposition {
  DecompositionCertificate cert;
  size_t factor;
  Vec idempotent;
};

// decomposition along some neat L whose factor `factor` is split with metabolic orthogonal restriction
std::optional<SplitFactorDecomposition> decompose_with_split_factor(const Involution& s, const DecomposeOptions& opt = {});

struct MetabolicQuat {
  std::array<Vec, 4> basis;  // 1, k, w v', k w v'
  Vec wv;
  Vec idempotent;
};

struct SingularPart : std::runtime_error {
  Vec x;  // nonzero x in C with sigma(x) x = 0
  SingularPart(const std::string& m, Vec v) : std::runtime_error(m), x(std::move(v)) {}
};

// K = F[k] a quadratic field in Symm, e with e^2 = e and sigma(e) = 1 - e
MetabolicQuat existmetabolic_construct(const Involution& s, const Vec& k, const Vec& e);

// idempotent onto a Lagrangian along a complementary Lagrangian of a hyperbolic Gram matrix, as an element of M_n
std::optional<Vec> adjoint_hyperbolic_idempotent(const Algebra& M, const Mat& gram, int height_bound);

}  // namespace cap4
