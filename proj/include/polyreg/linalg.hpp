#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "polyreg/rational.hpp"

namespace polyreg {

/// Reduced row echelon form together with its pivot columns.
struct RowEchelon {
  RatMatrix reduced;
  std::vector<std::size_t> pivots;
};

inline RowEchelon row_reduce(RatMatrix m) {
  RowEchelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const RatMatrix& m) { return row_reduce(m).pivots.size(); }

inline std::size_t rank(const std::vector<RatVector>& vectors, std::size_t n) {
  if (vectors.empty()) return 0;
  return rank(RatMatrix::from_rows(vectors, n));
}

inline Rational det(RatMatrix m) {
  if (!m.is_square()) throw UsageError("det: matrix is not square");
  const std::size_t n = m.rows();
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

/// Basis of {x : m x = 0}, one vector per free column of the echelon form.
inline std::vector<RatVector> kernel_basis(const RatMatrix& m) {
  RowEchelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector v = zeros(m.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Linearly independent subset of the columns of m spanning its column space.
inline std::vector<RatVector> column_space_basis(const RatMatrix& m) {
  std::vector<RatVector> basis;
  for (auto p : row_reduce(m).pivots) basis.push_back(m.col(p));
  return basis;
}

/// Independent subset of `vectors` with the same span (vectors of length n).
inline std::vector<RatVector> span_basis(const std::vector<RatVector>& vectors, std::size_t n) {
  if (vectors.empty()) return {};
  return column_space_basis(RatMatrix::from_columns(vectors, n));
}

/// Basis of the orthogonal complement of span(vectors) in R^n.
inline std::vector<RatVector> orthogonal_complement(const std::vector<RatVector>& vectors, std::size_t n) {
  if (vectors.empty()) {
    std::vector<RatVector> all;
    for (std::size_t i = 0; i < n; ++i) all.push_back(unit_vector(n, i));
    return all;
  }
  return kernel_basis(RatMatrix::from_rows(vectors, n));
}

inline bool in_span(const RatVector& v, const std::vector<RatVector>& vectors, std::size_t n) {
  if (is_zero(v)) return true;
  std::vector<RatVector> extended = vectors;
  extended.push_back(v);
  return rank(extended, n) == rank(vectors, n);
}

struct LinearSolution {
  RatVector particular;
  std::vector<RatVector> kernel;
};

/// Solves m x = b exactly. Returns nullopt iff the system is inconsistent.
inline std::optional<LinearSolution> solve_linear(const RatMatrix& m, const RatVector& b) {
  if (b.size() != m.rows()) throw UsageError("solve_linear: right-hand side has wrong length");
  RatMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  LinearSolution sol;
  sol.particular = zeros(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) sol.particular[e.pivots[r]] = e.reduced(r, m.cols());
  sol.kernel = kernel_basis(m);
  return sol;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (!m.is_square()) throw UsageError("inverse: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return RatMatrix();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

}  // namespace polyreg
