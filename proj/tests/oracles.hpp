#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline long isqrt(long v) {
  if (v < 0) return -1;
  long r = long(std::sqrt(double(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// nonzero integer zero of sum a_i x_i^2 with all |x_i| <= H, found by enumeration
inline bool diagonal_isotropic(const std::vector<long>& a, long H) {
  int n = int(a.size());
  if (n < 2) return false;
  bool pos = false, neg = false;
  for (long x : a) (x > 0 ? pos : neg) = true;
  if (!pos || !neg) return false;
  long last = a[n - 1];
  std::vector<long> x(n - 1, 0);
  for (;;) {
    int i = 0;
    while (i < n - 1 && ++x[i] > H) x[i++] = 0;
    if (i == n - 1) return false;
    long s = 0;
    for (int j = 0; j < n - 1; ++j) s += a[j] * x[j] * x[j];
    if (-s % last != 0) continue;
    long t = -s / last;
    long r = isqrt(t);
    if (r >= 0 && r * r == t && r <= H) return true;
  }
}

// totally isotropic plane spanned by two integer vectors with entries in [-H, H]
inline bool diagonal_isotropic_plane(const std::vector<long>& a, long H) {
  int n = int(a.size());
  std::vector<std::vector<long>> iso;
  std::vector<long> x(n, -H);
  for (;;) {
    long s = 0;
    bool nz = false;
    for (int j = 0; j < n; ++j) {
      s += a[j] * x[j] * x[j];
      nz |= x[j] != 0;
    }
    if (nz && s == 0) iso.push_back(x);
    int i = 0;
    while (i < n && ++x[i] > H) x[i++] = -H;
    if (i == n) break;
  }
  for (size_t i = 0; i < iso.size(); ++i)
    for (size_t j = i + 1; j < iso.size(); ++j) {
      long b = 0;
      for (int k = 0; k < n; ++k) b += a[k] * iso[i][k] * iso[j][k];
      if (b != 0) continue;
      bool prop = true;
      for (int k = 0; k < n && prop; ++k)
        for (int l = k + 1; l < n && prop; ++l)
          if (iso[i][k] * iso[j][l] != iso[i][l] * iso[j][k]) prop = false;
      if (!prop) return true;
    }
  return false;
}

// Sylvester criterion on an integer symmetric matrix given row-major
inline bool positive_definite(std::vector<std::vector<double>> m) {
  int n = int(m.size());
  for (int k = 0; k < n; ++k) {
    if (m[k][k] <= 1e-12) return false;
    for (int i = k + 1; i < n; ++i) {
      double f = m[i][k] / m[k][k];
      for (int j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return true;
}

}  // namespace oracle
