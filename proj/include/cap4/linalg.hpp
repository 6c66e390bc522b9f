#pragma once

#include <optional>
#include <vector>

#include "cap4/field.hpp"

namespace cap4 {

using Vec = std::vector<Fe>;

struct Mat {
  const Field* F = nullptr;
  int rows = 0, cols = 0;
  std::vector<Fe> a;

  Mat() = default;
  Mat(const Field& f, int r, int c) : F(&f), rows(r), cols(c), a(size_t(r) * c, f.zero()) {}
  Fe& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  const Fe& operator()(int i, int j) const { return a[size_t(i) * cols + j]; }
  Vec row(int i) const;
  Vec col(int j) const;
  void set_col(int j, const Vec& v);
  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

Vec zero_vec(const Field& F, int n);
Vec unit_vec(const Field& F, int n, int i);
bool is_zero(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Fe& c, const Vec& v);
void axpy(Vec& y, const Fe& c, const Vec& x);
Fe dot(const Vec& a, const Vec& b);

Mat identity(const Field& F, int n);
Mat transpose(const Mat& m);
Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat scale(const Fe& c, const Mat& m);
Vec operator*(const Mat& m, const Vec& v);
Mat from_columns(const Field& F, int rows, const std::vector<Vec>& cols);
Mat kron(const Mat& a, const Mat& b);

// reduced row echelon form in place; returns pivot columns
std::vector<int> rref(Mat& m);
int rank(Mat m);
int rank(const std::vector<Vec>& vs);
// basis of {x : m x = 0}, one vector per free column
std::vector<Vec> kernel(const Mat& m);
std::optional<Vec> solve(const Mat& m, const Vec& b);
std::optional<Mat> inverse(const Mat& m);
Fe det(Mat m);

// echelon basis of the span
std::vector<Vec> span_basis(const std::vector<Vec>& vs, int n);
// subset of vs that is a basis of their span, in order
std::vector<Vec> independent_subset(const std::vector<Vec>& vs);
std::vector<Vec> intersection(const std::vector<Vec>& U, const std::vector<Vec>& V, int n);

// membership and coordinates relative to a fixed subspace basis
class Subspace {
 public:
  Subspace() = default;
  Subspace(const Field& F, int n, std::vector<Vec> basis);
  int dim() const { return int(basis_.size()); }
  int ambient() const { return n_; }
  const std::vector<Vec>& basis() const { return basis_; }
  bool contains(const Vec& v) const;
  std::optional<Vec> coords(const Vec& v) const;

 private:
  const Field* F_ = nullptr;
  int n_ = 0;
  std::vector<Vec> basis_;
  Mat red_;
  std::vector<int> piv_;
  Mat tr_;
};

}  // namespace cap4
