#include "cap4/linalg.hpp"

#include <stdexcept>

namespace cap4 {

Vec Mat::row(int i) const { return Vec(a.begin() + size_t(i) * cols, a.begin() + size_t(i + 1) * cols); }

Vec Mat::col(int j) const {
  Vec v;
  v.reserve(rows);
  for (int i = 0; i < rows; ++i) v.push_back((*this)(i, j));
  return v;
}

void Mat::set_col(int j, const Vec& v) {
  for (int i = 0; i < rows; ++i) (*this)(i, j) = v[i];
}

Vec zero_vec(const Field& F, int n) { return Vec(n, F.zero()); }

Vec unit_vec(const Field& F, int n, int i) {
  Vec v = zero_vec(F, n);
  v[i] = F.one();
  return v;
}

bool is_zero(const Vec& v) {
  for (auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Vec add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (size_t i = 0; i < r.size(); ++i)
    if (!b[i].is_zero()) r[i] += b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r = a;
  for (size_t i = 0; i < r.size(); ++i)
    if (!b[i].is_zero()) r[i] -= b[i];
  return r;
}

Vec scale(const Fe& c, const Vec& v) {
  Vec r = v;
  for (auto& x : r)
    if (!x.is_zero()) x *= c;
  return r;
}

void axpy(Vec& y, const Fe& c, const Vec& x) {
  if (c.is_zero()) return;
  for (size_t i = 0; i < y.size(); ++i)
    if (!x[i].is_zero()) y[i] += c * x[i];
}

Fe dot(const Vec& a, const Vec& b) {
  Fe s = a.at(0).field()->zero();
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

Mat identity(const Field& F, int n) {
  Mat m(F, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = F.one();
  return m;
}

Mat transpose(const Mat& m) {
  Mat t(*m.F, m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("shape mismatch");
  Mat r(*a.F, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const Fe& x = a(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.cols; ++j)
        if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
    }
  return r;
}

Mat operator+(const Mat& a, const Mat& b) {
  Mat r = a;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += b.a[i];
  return r;
}

Mat operator-(const Mat& a, const Mat& b) {
  Mat r = a;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= b.a[i];
  return r;
}

Mat scale(const Fe& c, const Mat& m) {
  Mat r = m;
  for (auto& x : r.a) x *= c;
  return r;
}

Vec operator*(const Mat& m, const Vec& v) {
  Vec r = zero_vec(*m.F, m.rows);
  for (int j = 0; j < m.cols; ++j) {
    if (v[j].is_zero()) continue;
    for (int i = 0; i < m.rows; ++i)
      if (!m(i, j).is_zero()) r[i] += m(i, j) * v[j];
  }
  return r;
}

Mat from_columns(const Field& F, int rows, const std::vector<Vec>& cols) {
  Mat m(F, rows, int(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) m.set_col(int(j), cols[j]);
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat r(*a.F, a.rows * b.rows, a.cols * b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) {
      if (a(i, j).is_zero()) continue;
      for (int k = 0; k < b.rows; ++k)
        for (int l = 0; l < b.cols; ++l)
          if (!b(k, l).is_zero()) r(i * b.rows + k, j * b.cols + l) = a(i, j) * b(k, l);
    }
  return r;
}

std::vector<int> rref(Mat& m) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = r;
    while (p < m.rows && m(p, c).is_zero()) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    Fe iv = m(r, c).inv();
    for (int j = c; j < m.cols; ++j)
      if (!m(r, j).is_zero()) m(r, j) *= iv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Fe f = m(i, c);
      for (int j = c; j < m.cols; ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

int rank(Mat m) { return int(rref(m).size()); }

int rank(const std::vector<Vec>& vs) {
  if (vs.empty()) return 0;
  return int(independent_subset(vs).size());
}

std::vector<Vec> kernel(const Mat& m) {
  Mat r = m;
  auto piv = rref(r);
  std::vector<int> pivrow(m.cols, -1);
  for (size_t i = 0; i < piv.size(); ++i) pivrow[piv[i]] = int(i);
  std::vector<Vec> out;
  for (int f = 0; f < m.cols; ++f) {
    if (pivrow[f] >= 0) continue;
    Vec x = zero_vec(*m.F, m.cols);
    x[f] = m.F->one();
    for (size_t i = 0; i < piv.size(); ++i)
      if (!r(int(i), f).is_zero()) x[piv[i]] = -r(int(i), f);
    out.push_back(std::move(x));
  }
  return out;
}

std::optional<Vec> solve(const Mat& m, const Vec& b) {
  Mat a(*m.F, m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) a(i, j) = m(i, j);
    a(i, m.cols) = b[i];
  }
  auto piv = rref(a);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
  Vec x = zero_vec(*m.F, m.cols);
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = a(int(i), m.cols);
  return x;
}

std::optional<Mat> inverse(const Mat& m) {
  if (m.rows != m.cols) return std::nullopt;
  int n = m.rows;
  Mat a(*m.F, n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = m(i, j);
    a(i, n + i) = m.F->one();
  }
  auto piv = rref(a);
  if (int(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
  Mat r(*m.F, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = a(i, n + j);
  return r;
}

Fe det(Mat m) {
  int n = m.rows;
  Fe d = m.F->one();
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return m.F->zero();
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    Fe iv = m(c, c).inv();
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Fe f = m(i, c) * iv;
      for (int j = c; j < n; ++j)
        if (!m(c, j).is_zero()) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

std::vector<Vec> span_basis(const std::vector<Vec>& vs, int n) {
  if (vs.empty()) return {};
  const Field& F = *vs[0][0].field();
  Mat m(F, int(vs.size()), n);
  for (size_t i = 0; i < vs.size(); ++i)
    for (int j = 0; j < n; ++j) m(int(i), j) = vs[i][j];
  auto piv = rref(m);
  std::vector<Vec> out;
  for (size_t i = 0; i < piv.size(); ++i) out.push_back(m.row(int(i)));
  return out;
}

std::vector<Vec> independent_subset(const std::vector<Vec>& vs) {
  std::vector<std::pair<int, Vec>> ech;
  std::vector<Vec> out;
  for (auto& v : vs) {
    Vec w = v;
    for (auto& [p, e] : ech)
      if (!w[p].is_zero()) axpy(w, -w[p], e);
    int p = 0;
    while (p < int(w.size()) && w[p].is_zero()) ++p;
    if (p == int(w.size())) continue;
    w = scale(w[p].inv(), w);
    ech.emplace_back(p, std::move(w));
    out.push_back(v);
  }
  return out;
}

std::vector<Vec> intersection(const std::vector<Vec>& U, const std::vector<Vec>& V, int n) {
  if (U.empty() || V.empty()) return {};
  const Field& F = *U[0][0].field();
  Mat m(F, n, int(U.size() + V.size()));
  for (size_t j = 0; j < U.size(); ++j) m.set_col(int(j), U[j]);
  for (size_t j = 0; j < V.size(); ++j)
    for (int i = 0; i < n; ++i) m(i, int(U.size() + j)) = -V[j][i];
  std::vector<Vec> out;
  for (auto& k : kernel(m)) {
    Vec x = zero_vec(F, n);
    for (size_t j = 0; j < U.size(); ++j) axpy(x, k[j], U[j]);
    out.push_back(std::move(x));
  }
  return span_basis(out, n);
}

Subspace::Subspace(const Field& F, int n, std::vector<Vec> basis) : F_(&F), n_(n), basis_(std::move(basis)) {
  int k = int(basis_.size());
  Mat m(F, k, n + k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = basis_[i][j];
    m(i, n + i) = F.one();
  }
  auto piv = rref(m);
  for (auto p : piv)
    if (p >= n) throw std::invalid_argument("subspace basis is dependent");
  piv_ = piv;
  red_ = Mat(F, k, n);
  tr_ = Mat(F, k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j) red_(i, j) = m(i, j);
    for (int j = 0; j < k; ++j) tr_(i, j) = m(i, n + j);
  }
}

std::optional<Vec> Subspace::coords(const Vec& v) const {
  Vec w = v;
  int k = dim();
  Vec c = zero_vec(*F_, k);
  for (int i = 0; i < k; ++i) {
    Fe x = w[piv_[i]];
    if (x.is_zero()) continue;
    for (int j = 0; j < n_; ++j)
      if (!red_(i, j).is_zero()) w[j] -= x * red_(i, j);
    for (int j = 0; j < k; ++j)
      if (!tr_(i, j).is_zero()) c[j] += x * tr_(i, j);
  }
  if (!is_zero(w)) return std::nullopt;
  return c;
}

bool Subspace::contains(const Vec& v) const {
  Vec w = v;
  for (int i = 0; i < dim(); ++i) {
    Fe x = w[piv_[i]];
    if (x.is_zero()) continue;
    for (int j = 0; j < n_; ++j)
      if (!red_(i, j).is_zero()) w[j] -= x * red_(i, j);
  }
  return is_zero(w);
}

}  // namespace cap4
