#pragma once

// Small exact rational linear algebra shared by the library's translation
// units.  All matrices are dense row-major vectors of vectors.

#include <optional>
#include <stdexcept>
#include <vector>

#include "ribbonvol/rational.hpp"

namespace ribbonvol::detail {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;

inline QMat to_qmat(const std::vector<std::vector<long>>& rows) {
  QMat A;
  A.reserve(rows.size());
  for (const auto& r : rows) {
    QVec q(r.size());
    for (size_t j = 0; j < r.size(); ++j) q[j] = Rat(r[j]);
    A.push_back(std::move(q));
  }
  return A;
}

inline int q_rank(QMat A) {
  if (A.empty()) return 0;
  const size_t m = A.size(), n = A[0].size();
  size_t row = 0;
  for (size_t col = 0; col < n && row < m; ++col) {
    size_t piv = row;
    while (piv < m && A[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(A[piv], A[row]);
    for (size_t i = 0; i < m; ++i) {
      if (i != row && A[i][col] != 0) {
        Rat f = A[i][col] / A[row][col];
        for (size_t j = col; j < n; ++j) A[i][j] -= f * A[row][j];
      }
    }
    ++row;
  }
  return static_cast<int>(row);
}

// Solves the square system A x = b exactly; nullopt if A is singular.
inline std::optional<QVec> q_solve_square(QMat A, QVec b) {
  const size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (size_t i = 0; i < n; ++i) {
      if (i != col && A[i][col] != 0) {
        Rat f = A[i][col] / A[col][col];
        for (size_t j = col; j < n; ++j) A[i][j] -= f * A[col][j];
        b[i] -= f * b[col];
      }
    }
  }
  QVec x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

// Determinant of a square matrix.
inline Rat q_det(QMat A) {
  const size_t n = A.size();
  Rat det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) return Rat(0);
    if (piv != col) {
      std::swap(A[piv], A[col]);
      det = -det;
    }
    det *= A[col][col];
    for (size_t i = col + 1; i < n; ++i) {
      if (A[i][col] != 0) {
        Rat f = A[i][col] / A[col][col];
        for (size_t j = col; j < n; ++j) A[i][j] -= f * A[col][j];
      }
    }
  }
  return det;
}

// Kernel vector of a matrix with m rows, n columns and rank n-1.
inline QVec q_nullvec(QMat A) {
  const size_t m = A.size(), n = A.empty() ? 0 : A[0].size();
  std::vector<int> pivot_of_col(n, -1);
  size_t row = 0;
  for (size_t col = 0; col < n && row < m; ++col) {
    size_t piv = row;
    while (piv < m && A[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(A[piv], A[row]);
    for (size_t i = 0; i < m; ++i) {
      if (i != row && A[i][col] != 0) {
        Rat f = A[i][col] / A[row][col];
        for (size_t j = col; j < n; ++j) A[i][j] -= f * A[row][j];
      }
    }
    pivot_of_col[col] = static_cast<int>(row);
    ++row;
  }
  size_t free_col = n;
  for (size_t col = 0; col < n; ++col) {
    if (pivot_of_col[col] < 0) {
      free_col = col;
      break;
    }
  }
  if (free_col == n) throw std::logic_error("q_nullvec: matrix has full column rank");
  QVec x(n, Rat(0));
  x[free_col] = 1;
  for (size_t col = 0; col < n; ++col) {
    int r = pivot_of_col[col];
    if (r >= 0) x[col] = -A[r][free_col] / A[r][col];
  }
  return x;
}

inline Rat q_dot(const QVec& a, const QVec& b) {
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace ribbonvol::detail
