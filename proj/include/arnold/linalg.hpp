#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace arnold {

// Row-major dense matrix, just large enough for the truncated Newton systems.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct LuResult {
  bool ok = false;        // false when a pivot fell below the threshold
  int det_sign = 0;       // sign of det, 0 if singular
  double min_pivot = 0.0;
  double max_pivot = 0.0;
};

// In-place LU with partial pivoting; solves A x = b. A and b are overwritten,
// the solution lands in b.
inline LuResult lu_solve_inplace(Matrix& A, std::vector<double>& b,
                                 double pivot_tol = 1e-14) {
  const std::size_t n = A.rows;
  LuResult res;
  int sign = 1;
  double minp = 0.0, maxp = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::fabs(A(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::fabs(A(r, col));
      if (v > best) { best = v; piv = r; }
    }
    if (col == 0) { minp = best; maxp = best; }
    minp = std::min(minp, best);
    maxp = std::max(maxp, best);
    if (best < pivot_tol) {
      res.ok = false;
      res.det_sign = 0;
      res.min_pivot = minp;
      res.max_pivot = maxp;
      return res;
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(col, j), A(piv, j));
      std::swap(b[col], b[piv]);
      sign = -sign;
    }
    if (A(col, col) < 0.0) sign = -sign;
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = A(r, col) / A(col, col);
      A(r, col) = 0.0;
      for (std::size_t j = col + 1; j < n; ++j) A(r, j) -= f * A(col, j);
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * b[j];
    b[i] = s / A(i, i);
  }
  res.ok = true;
  res.det_sign = sign;
  res.min_pivot = minp;
  res.max_pivot = maxp;
  return res;
}

// Sign of det(A) together with a pivot-ratio condition proxy.
inline LuResult lu_det_sign(Matrix A, double pivot_tol = 1e-14) {
  std::vector<double> dummy(A.rows, 0.0);
  return lu_solve_inplace(A, dummy, pivot_tol);
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

inline void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace arnold
