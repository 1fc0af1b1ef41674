#pragma once

#include <cstddef>
#include <vector>

#include "tfv/dual.hpp"
#include "tfv/types.hpp"

namespace tfv::linalg {

/// Tiny row-major dense matrix over an arbitrary scalar (double or Dual
/// chains). Only the handful of operations the dual-number code paths need;
/// double-precision work uses Eigen directly.
template <class T>
struct MatT {
  int rows = 0, cols = 0;
  std::vector<T> a;

  MatT() = default;
  MatT(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, T(0)) {}

  T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

/// Solve A x = b by Gaussian elimination with partial pivoting (pivot chosen
/// on the value part). A must be square.
template <class T>
std::vector<T> solve(MatT<T> A, std::vector<T> b) {
  const int n = A.rows;
  double scale = 0;
  for (const T& e : A.a) scale = std::max(scale, std::abs(value(e)));
  if (scale == 0) throw NumericError("solve: zero matrix");
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(value(A(i, k))) > std::abs(value(A(piv, k)))) piv = i;
    if (std::abs(value(A(piv, k))) < 1e-14 * scale)
      throw NumericError("solve: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      T m = A(i, k) / A(k, k);
      for (int j = k; j < n; ++j) A(i, j) -= m * A(k, j);
      b[i] -= m * b[k];
    }
  }
  std::vector<T> x(n, T(0));
  for (int i = n - 1; i >= 0; --i) {
    T s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

template <class T>
MatT<T> inverse(const MatT<T>& A) {
  const int n = A.rows;
  MatT<T> inv(n, n);
  for (int c = 0; c < n; ++c) {
    std::vector<T> e(n, T(0));
    e[c] = T(1);
    std::vector<T> col = solve(A, e);
    for (int i = 0; i < n; ++i) inv(i, c) = col[i];
  }
  return inv;
}

/// Least squares min ||A x - b|| by Householder QR, m >= n, full column rank.
/// On return *residual_norm (if given) holds the Euclidean residual of the
/// value parts.
template <class T>
std::vector<T> lstsq(MatT<T> A, std::vector<T> b, double* residual_norm = nullptr) {
  using std::sqrt;
  const int m = A.rows, n = A.cols;
  if (m < n) throw NumericError("lstsq: underdetermined system");
  for (int k = 0; k < n; ++k) {
    T nrm2 = T(0);
    for (int i = k; i < m; ++i) nrm2 += A(i, k) * A(i, k);
    if (value(nrm2) <= 0) throw NumericError("lstsq: rank-deficient column");
    T alpha = sqrt(nrm2);
    if (value(A(k, k)) > 0) alpha = -alpha;
    // Householder vector v = x - alpha*e1, stored in place
    A(k, k) -= alpha;
    T vtv = T(0);
    for (int i = k; i < m; ++i) vtv += A(i, k) * A(i, k);
    if (value(vtv) > 0) {
      for (int j = k + 1; j < n; ++j) {
        T d = T(0);
        for (int i = k; i < m; ++i) d += A(i, k) * A(i, j);
        T f = 2.0 * d / vtv;
        for (int i = k; i < m; ++i) A(i, j) -= f * A(i, k);
      }
      T d = T(0);
      for (int i = k; i < m; ++i) d += A(i, k) * b[i];
      T f = 2.0 * d / vtv;
      for (int i = k; i < m; ++i) b[i] -= f * A(i, k);
    }
    A(k, k) = alpha;
  }
  std::vector<T> x(n, T(0));
  for (int i = n - 1; i >= 0; --i) {
    T s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  if (residual_norm) {
    double r2 = 0;
    for (int i = n; i < m; ++i) r2 += value(b[i]) * value(b[i]);
    *residual_norm = std::sqrt(r2);
  }
  return x;
}

}  // namespace tfv::linalg
