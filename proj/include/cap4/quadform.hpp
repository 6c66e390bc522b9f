#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cap4/linalg.hpp"

namespace cap4 {

// q(x) = sum_{i <= j} c_ij x_i x_j, stored upper triangular
class QuadForm {
 public:
  QuadForm() = default;
  QuadForm(FieldPtr F, int n);
  QuadForm(FieldPtr F, Mat upper);
  static QuadForm diagonal(FieldPtr F, const std::vector<Fe>& d);
  static QuadForm diagonal(FieldPtr F, const std::vector<long>& d);
  // [a, b] = a x^2 + x y + b y^2
  static QuadForm block(FieldPtr F, const Fe& a, const Fe& b);
  // 2^n-dimensional hyperbolic form
  static QuadForm hyperbolic(FieldPtr F, int n);

  const FieldPtr& field() const { return F_; }
  int dim() const { return c_.rows; }
  const Mat& coeffs() const { return c_; }
  Fe eval(const Vec& x) const;
  Fe polar(const Vec& x, const Vec& y) const;
  Mat polar_matrix() const;
  QuadForm scaled(const Fe& c) const;
  QuadForm restrict_to(const std::vector<Vec>& basis) const;
  QuadForm base_change(const FieldPtr& target) const;

 private:
  FieldPtr F_;
  Mat c_;
};

struct Diagonalization {
  std::vector<Fe> diag;
  Mat T;  // columns are the new basis
};
// characteristic not 2
Diagonalization diagonalize(const QuadForm& q);

struct Char2NormalForm {
  std::vector<std::pair<Fe, Fe>> blocks;
  std::vector<Fe> rad_values;
  Mat T;  // columns e1, f1, e2, f2, ..., radical
};
Char2NormalForm char2_normal_form(const QuadForm& q);

struct FormInvariants {
  int dim = 0;
  std::optional<Fe> det;
  std::optional<mpz_class> det_class;
  std::optional<int> arf;
  std::map<long, int> hasse;
  std::optional<std::pair<int, int>> signature;
};

bool is_regular(const QuadForm& q);
FormInvariants invariants(const QuadForm& q);
bool is_isotropic(const QuadForm& q);
int witt_index(const QuadForm& q);
std::optional<Vec> isotropic_vector(const QuadForm& q, int height_bound);
// distinct nonzero isotropic vectors found by the bounded search, at most max_count
std::vector<Vec> isotropic_vectors(const QuadForm& q, int height_bound, int max_count);
bool is_isometric(const QuadForm& a, const QuadForm& b);
// c with c * a isometric to b
std::optional<Fe> similarity_factor(const QuadForm& a, const QuadForm& b);
inline bool is_similar(const QuadForm& a, const QuadForm& b) { return similarity_factor(a, b).has_value(); }

struct PfisterForm {
  int n = 0;
  QuadForm form;
  std::optional<std::vector<Fe>> slots;
  std::optional<bool> hyperbolic;
};
PfisterForm pfister_normalize(const QuadForm& q, int n);
// <<a_1, ..., a_n>> = (x) <1, -a_i>, characteristic not 2
QuadForm pfister_form(FieldPtr F, const std::vector<Fe>& slots);
std::optional<std::vector<Fe>> pfister_slots(const PfisterForm& p, int height_bound);
bool quadratic_ext_isotropy(const QuadForm& q, long d);

QuadForm tensor(const std::vector<Fe>& bilinear_diag, const QuadForm& q);
QuadForm orth_sum(const QuadForm& a, const QuadForm& b);

}  // namespace cap4
