#include "cap4/involution.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace cap4 {

std::string to_string(InvKind k) { return k == InvKind::First ? "first" : "second"; }

std::string to_string(InvType t) {
  switch (t) {
    case InvType::Orthogonal:
      return "orthogonal";
    case InvType::Symplectic:
      return "symplectic";
    case InvType::Unitary:
      return "unitary";
  }
  return "";
}

namespace {

Mat op_plus(const Mat& m, int sign) {
  Mat r = m;
  for (int i = 0; i < m.rows; ++i) r(i, i) += sign > 0 ? m.F->one() : -m.F->one();
  return r;
}

std::vector<Vec> image(const Mat& m) {
  std::vector<Vec> cols;
  for (int j = 0; j < m.cols; ++j) cols.push_back(m.col(j));
  return span_basis(cols, m.rows);
}

std::string pair_name(const Algebra& A, int i, int j) { return "(" + A.labels()[i] + ", " + A.labels()[j] + ")"; }

void validate(const Algebra& A, const Mat& m) {
  int n = A.dim();
  if (m.rows != n || m.cols != n) throw std::invalid_argument("involution matrix has the wrong size");
  std::vector<Vec> img(n);
  for (int i = 0; i < n; ++i) img[i] = m.col(i);
  for (int i = 0; i < n; ++i)
    if (m * img[i] != A.basis(i)) throw std::invalid_argument("map is not of order two at " + A.labels()[i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec lhs = A.zero();
      for (auto& t : A.product(i, j)) axpy(lhs, t.c, img[t.k]);
      if (lhs != A.mul(img[j], img[i]))
        throw std::invalid_argument("map is not an anti-automorphism at the basis pair " + pair_name(A, i, j));
    }
}

Classification classify(const Algebra& A, const std::vector<Vec>& center, const SymSpaces& sp) {
  Classification c{};
  c.center_dim = int(center.size());
  if (c.center_dim > 2) throw std::invalid_argument("centre is larger than a quadratic extension");
  c.kind = c.center_dim == 1 ? InvKind::First : InvKind::Second;
  int d2 = A.dim() / c.center_dim;
  int d = int(std::lround(std::sqrt(double(d2))));
  if (d * d != d2 || d2 * c.center_dim != A.dim()) throw std::invalid_argument("dimension is not a square over the centre");
  c.deg = d;
  int s = int(sp.syms().size());
  if (c.kind == InvKind::Second) {
    if (s != d * d) throw std::invalid_argument("symmetric dimension matches no involution type");
    c.type = InvType::Unitary;
  } else if (s == d * (d + 1) / 2) {
    c.type = InvType::Orthogonal;
  } else if (s == d * (d - 1) / 2) {
    c.type = InvType::Symplectic;
  } else {
    throw std::invalid_argument("symmetric dimension matches no involution type");
  }
  c.capacity = c.type == InvType::Symplectic ? d / 2 : d;
  return c;
}

Mat map_matrix(const Algebra& A, const std::function<Vec(const Vec&)>& f) {
  Mat m(*A.field(), A.dim(), A.dim());
  for (int j = 0; j < A.dim(); ++j) m.set_col(j, f(A.basis(j)));
  return m;
}

}  // namespace

SymSpaces sym_spaces(const Algebra& A, const Mat& m) {
  SymSpaces sp;
  Mat plus = op_plus(m, 1), minus = op_plus(m, -1);
  sp.symm = kernel(minus);
  sp.skew = kernel(plus);
  sp.symd = image(plus);
  sp.alt = image(minus);
  sp.syms_is_symd = Subspace(*A.field(), A.dim(), sp.symd).contains(A.unit());
  return sp;
}

Involution::Involution(AlgebraPtr A, Mat m) : A_(std::move(A)), m_(std::move(m)) {
  validate(*A_, m_);
  center_ = center(*A_);
  sp_ = sym_spaces(*A_, m_);
  auto zs = intersection(center_, sp_.symm, A_->dim());
  if (zs.size() != 1) throw std::invalid_argument("symmetric central elements are not the ground field");
  cls_ = classify(*A_, center_, sp_);
}

bool Involution::one_in_symd() const { return sp_.syms_is_symd; }

void Involution::require_one_in_symd() const {
  if (!one_in_symd()) throw GateError("orthogonal involution in characteristic 2 is outside the supported range");
}

InvolutionPtr involution_from_matrix(AlgebraPtr A, Mat m) { return std::make_shared<Involution>(std::move(A), std::move(m)); }

InvolutionPtr base_change(const InvolutionPtr& s, const AlgebraPtr& A2) {
  const Mat& m = s->matrix();
  Mat out(*A2->field(), m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = embed(m(i, j), A2->field());
  return involution_from_matrix(A2, std::move(out));
}

InvolutionPtr transpose_involution(const AlgebraPtr& A) {
  if (A->provenance().kind != AlgebraProvenance::Matrix) throw std::invalid_argument("transpose needs a matrix algebra");
  int n = A->provenance().n;
  Mat m(*A->field(), A->dim(), A->dim());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(j * n + i, i * n + j) = A->field()->one();
  return involution_from_matrix(A, m);
}

InvolutionPtr canonical_involution(const AlgebraPtr& A) {
  auto k = A->provenance().kind;
  const Field& F = *A->field();
  if (k != AlgebraProvenance::Quaternion && k != AlgebraProvenance::Etale)
    throw std::invalid_argument("canonical involution needs a quaternion or quadratic etale algebra");
  Mat m(F, A->dim(), A->dim());
  bool two = F.characteristic() == 2;
  if (k == AlgebraProvenance::Quaternion) {
    m(0, 0) = F.one();
    for (int i = 1; i < 4; ++i) m(i, i) = -F.one();
    if (two) m(0, 3) = F.one();
  } else {
    m(0, 0) = F.one();
    m(1, 1) = -F.one();
    if (two) m(0, 1) = F.one();
  }
  return involution_from_matrix(A, m);
}

InvolutionPtr orthogonal_quaternion_involution(const AlgebraPtr& Q, const Vec& s) {
  if (Q->provenance().kind != AlgebraProvenance::Quaternion) throw std::invalid_argument("needs a quaternion algebra");
  auto inv = inverse(*Q, s);
  if (!inv.inverse) throw std::invalid_argument("s is not invertible");
  auto can = canonical_involution(Q);
  if (can->apply(s) != scale(-Q->field()->one(), s)) throw std::invalid_argument("s does not have trace zero");
  Mat m = map_matrix(*Q, [&](const Vec& x) { return Q->mul(Q->mul(s, can->apply(x)), *inv.inverse); });
  return involution_from_matrix(Q, m);
}

InvolutionPtr adjoint_gram_involution(const AlgebraPtr& M, const Mat& gram) {
  if (M->provenance().kind != AlgebraProvenance::Matrix) throw std::invalid_argument("adjoint involution needs a matrix algebra");
  int n = M->provenance().n;
  if (gram.rows != n || gram.cols != n || transpose(gram) != gram) throw std::invalid_argument("Gram matrix must be symmetric of size n");
  auto binv = inverse(gram);
  if (!binv) throw std::invalid_argument("form is degenerate");
  const Field& F = *M->field();
  Mat m(F, n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat e(F, n, n);
      e(i, j) = F.one();
      Mat r = *binv * transpose(e) * gram;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m(a * n + b, i * n + j) = r(a, b);
    }
  return involution_from_matrix(M, m);
}

InvolutionPtr adjoint_involution(const AlgebraPtr& M, const std::vector<Fe>& diag) {
  const Field& F = *M->field();
  int n = int(diag.size());
  Mat g(F, n, n);
  for (int i = 0; i < n; ++i) g(i, i) = diag[i];
  return adjoint_gram_involution(M, g);
}

InvolutionPtr switch_involution(const AlgebraPtr& D) {
  if (D->provenance().kind != AlgebraProvenance::Double) throw std::invalid_argument("switch needs a double algebra");
  int n = D->dim() / 2;
  Mat m(*D->field(), D->dim(), D->dim());
  for (int i = 0; i < n; ++i) {
    m(n + i, i) = D->field()->one();
    m(i, n + i) = D->field()->one();
  }
  return involution_from_matrix(D, m);
}

InvolutionPtr tensor_involution(const InvolutionPtr& s1, const InvolutionPtr& s2) {
  auto T = tensor_product(s1->algebra(), s2->algebra());
  if (T == s1->algebra()) return s1;
  if (T == s2->algebra()) return s2;
  return involution_from_matrix(T, kron(s1->matrix(), s2->matrix()));
}

InvolutionPtr identity_involution(const FieldPtr& F) { return involution_from_matrix(scalar_algebra(F), identity(*F, 1)); }

InvolutionPtr conjugate_involution(const InvolutionPtr& s, const Vec& g) {
  const Algebra& A = s->alg();
  auto gi = inverse(A, g);
  if (!gi.inverse) throw std::invalid_argument("conjugating element is not invertible");
  Mat m = map_matrix(A, [&](const Vec& x) {
    Vec y = A.mul(A.mul(*gi.inverse, x), g);
    return A.mul(A.mul(g, s->apply(y)), *gi.inverse);
  });
  return involution_from_matrix(s->algebra(), m);
}

Fe orth_discriminant(const Involution& s) {
  auto& c = s.classification();
  if (c.type != InvType::Orthogonal || c.kind != InvKind::First) throw std::invalid_argument("discriminant needs an orthogonal involution");
  if (c.deg % 2 != 0) throw std::invalid_argument("discriminant needs even degree");
  const Algebra& A = s.alg();
  const Field& F = *A.field();
  auto& alt = s.spaces().alt;
  std::mt19937 rng(12345);
  std::uniform_int_distribution<long> d(-3, 3);
  std::vector<Fe> found;
  for (int attempt = 0; attempt < 400 && found.size() < 2; ++attempt) {
    Vec y = A.zero();
    for (auto& a : alt) axpy(y, F.from_int(d(rng)), a);
    if (is_zero(y)) continue;
    Fe n = reduced_norm(A, y);
    if (n.is_zero()) continue;
    if ((c.deg / 2) % 2 == 1) n = -n;
    found.push_back(n);
  }
  if (found.size() < 2) throw std::runtime_error("no invertible alternating element found");
  if (!square_class_equal(found[0], found[1])) throw std::logic_error("discriminant depends on the chosen element");
  return found[0];
}

}  // namespace cap4
