#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cap4/algebra.hpp"

namespace cap4 {

enum class InvKind { First, Second };
enum class InvType { Orthogonal, Symplectic, Unitary };

std::string to_string(InvKind k);
std::string to_string(InvType t);

struct Classification {
  InvKind kind;
  InvType type;
  int center_dim;
  int deg;
  int capacity;
};

struct SymSpaces {
  std::vector<Vec> symm, skew, symd, alt;
  bool syms_is_symd;
  const std::vector<Vec>& syms() const { return syms_is_symd ? symd : symm; }
};

// raised when a capacity-4 pipeline receives an orthogonal involution in characteristic 2
struct GateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Involution;
using InvolutionPtr = std::shared_ptr<const Involution>;

// F-linear anti-automorphism of order two, given by its matrix on the basis
class Involution {
 public:
  Involution(AlgebraPtr A, Mat m);

  const AlgebraPtr& algebra() const { return A_; }
  const Algebra& alg() const { return *A_; }
  const Mat& matrix() const { return m_; }
  Vec apply(const Vec& x) const { return m_ * x; }
  const Classification& classification() const { return cls_; }
  const SymSpaces& spaces() const { return sp_; }
  const std::vector<Vec>& center_basis() const { return center_; }
  bool one_in_symd() const;
  void require_one_in_symd() const;

 private:
  AlgebraPtr A_;
  Mat m_;
  std::vector<Vec> center_;
  SymSpaces sp_;
  Classification cls_;
};

InvolutionPtr involution_from_matrix(AlgebraPtr A, Mat m);
InvolutionPtr transpose_involution(const AlgebraPtr& A);
// x -> Trd(x) - x on a quaternion algebra or quadratic etale algebra
InvolutionPtr canonical_involution(const AlgebraPtr& A);
// Int(s) composed with the canonical involution; s invertible of trace zero
InvolutionPtr orthogonal_quaternion_involution(const AlgebraPtr& Q, const Vec& s);
// adjoint involution of the diagonal form on F^n, acting on M_n(F)
InvolutionPtr adjoint_involution(const AlgebraPtr& M, const std::vector<Fe>& diag);
// adjoint involution of a symmetric Gram matrix on F^n
InvolutionPtr adjoint_gram_involution(const AlgebraPtr& M, const Mat& gram);
InvolutionPtr switch_involution(const AlgebraPtr& D);
InvolutionPtr tensor_involution(const InvolutionPtr& s1, const InvolutionPtr& s2);
InvolutionPtr identity_involution(const FieldPtr& F);
// Int(g) o s o Int(g)^-1
InvolutionPtr conjugate_involution(const InvolutionPtr& s, const Vec& g);

// the same matrix over the base change A2 of s's algebra
InvolutionPtr base_change(const InvolutionPtr& s, const AlgebraPtr& A2);

SymSpaces sym_spaces(const Algebra& A, const Mat& m);

// (-1)^m Nrd(y) for invertible alternating y, checked on a second sample
Fe orth_discriminant(const Involution& s);

}  // namespace cap4
