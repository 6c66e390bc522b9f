#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cap4/linalg.hpp"

namespace cap4 {

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

struct Term {
  int k;
  Fe c;
};

struct AlgebraProvenance {
  enum Kind { Raw, Scalar, Quaternion, Matrix, Etale, Tensor, Double } kind = Raw;
  Fe a, b;  // quaternion parameters; Etale keeps its radicand in a
  int n = 0;
  std::vector<AlgebraPtr> factors;  // flattened tensor factors, or the base of a double
};

struct Splitting {
  FieldPtr E;
  int deg = 0;
  std::vector<Mat> images;  // image of each basis element in M_deg(E)
};

// finite-dimensional associative unital algebra given by structure constants
class Algebra {
 public:
  Algebra(FieldPtr F, int dim, std::vector<std::vector<Term>> table, Vec unit, std::vector<std::string> labels,
          AlgebraProvenance prov);

  const FieldPtr& field() const { return F_; }
  int dim() const { return dim_; }
  const Vec& unit() const { return unit_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const AlgebraProvenance& provenance() const { return prov_; }
  const std::vector<Term>& product(int i, int j) const { return table_[size_t(i) * dim_ + j]; }

  Vec basis(int i) const { return unit_vec(*F_, dim_, i); }
  Vec zero() const { return zero_vec(*F_, dim_); }
  Vec scalar(const Fe& c) const { return cap4::scale(c, unit_); }
  std::optional<Fe> as_scalar(const Vec& x) const;
  Vec mul(const Vec& x, const Vec& y) const;
  Vec commutator(const Vec& x, const Vec& y) const { return sub(mul(x, y), mul(y, x)); }
  Mat left_mat(const Vec& x) const;
  Mat right_mat(const Vec& x) const;
  // tensor factors in order; a non-tensor algebra is its own single factor
  std::vector<AlgebraPtr> factors() const;
  const Splitting& splitting() const;

 private:
  FieldPtr F_;
  int dim_;
  std::vector<std::vector<Term>> table_;
  Vec unit_;
  std::vector<std::string> labels_;
  AlgebraProvenance prov_;
  mutable std::once_flag split_once_;
  mutable std::shared_ptr<Splitting> split_;
  mutable std::string split_error_;
};

AlgebraPtr scalar_algebra(FieldPtr F);
// char not 2: u^2 = a, v^2 = b, uv = -vu; char 2: uv + vu = 1
AlgebraPtr quaternion_algebra(FieldPtr F, const Fe& a, const Fe& b);
AlgebraPtr matrix_algebra(FieldPtr F, int n);
// F[t] with t^2 = d, or t^2 + t = d in characteristic 2
AlgebraPtr etale_quadratic(FieldPtr F, const Fe& d);
AlgebraPtr tensor_product(const AlgebraPtr& A, const AlgebraPtr& B);
AlgebraPtr double_algebra(const AlgebraPtr& A0);
AlgebraPtr raw_algebra(FieldPtr F, int dim, std::vector<std::vector<Term>> table, Vec unit);

Vec embed_vec(const Vec& x, const FieldPtr& target);
// same structure constants and provenance read over an extension field
AlgebraPtr base_change(const AlgebraPtr& A, const FieldPtr& target);

// element of A = A_1 (x) ... (x) A_m placed in factor t
Vec embed_factor(const Algebra& A, int t, const Vec& x);
Vec kron_vec(const Vec& a, const Vec& b);

struct InverseResult {
  std::optional<Vec> inverse;
  Vec kernel;  // nonzero y with x y = 0 when singular
};
InverseResult inverse(const Algebra& A, const Vec& x);

std::vector<Vec> centralizer(const Algebra& A, const std::vector<Vec>& S);
std::vector<Vec> center(const Algebra& A);
// products of basis pairs stay in the span and the span contains 1
bool is_subalgebra(const Algebra& A, const std::vector<Vec>& basis);
std::vector<Vec> generated_subalgebra(const Algebra& A, const std::vector<Vec>& gens);
// minimal polynomial relation x^2 = s x + p when 1, x, x^2 are dependent
std::optional<std::pair<Fe, Fe>> quadratic_relation(const Algebra& A, const Vec& x);

Fe reduced_norm(const Algebra& A, const Vec& x);
// determinant in the splitting field, before descent
Fe reduced_norm_split(const Algebra& A, const Vec& x);
// projection of an element of an extension back to the subfield F, if it lies there
std::optional<Fe> descend(const Fe& x, const Field& F);

}  // namespace cap4
