#pragma once

#include <optional>
#include <vector>

#include "momentgaps/common.hpp"

namespace mgap {

// Moore-Penrose inverse. Exact: full-rank factorization from the reduced row
// echelon form. Float: truncated SVD with cutoff eps_rank * scale * n.
template <class T>
Matrix<T> pinv(const Matrix<T>& a, const Tolerance& tol = {});

// Complement of the leading split x split block: D - C A^+ B. M may be
// rectangular as long as the leading block is square.
template <class T>
Matrix<T> schur(const Matrix<T>& m, Index split, const Tolerance& tol = {});

// Complement of the trailing block x block block, via a symmetric permutation.
template <class T>
Matrix<T> schur_trailing(const Matrix<T>& m, Index block, const Tolerance& tol = {});

template <class T>
bool is_psd(const Matrix<T>& a, const Tolerance& tol = {});

template <class T>
bool is_pd(const Matrix<T>& a, const Tolerance& tol = {});

// Works for rectangular input. Exact: Bareiss elimination with full pivoting.
template <class T>
Index rank(const Matrix<T>& a, const Tolerance& tol = {});

template <class T>
bool in_col_space(const Matrix<T>& a, const Vector<T>& v, const Tolerance& tol = {});

// v placed at positions rows of a zero vector of length n.
template <class T>
Vector<T> embed_kernel_vector(const Vector<T>& v, const std::vector<Index>& rows, Index n);

// (e_0, e_1, ..., e_n) with det(t I - A) = sum_k (-1)^k e_k t^(n-k), by Faddeev-LeVerrier.
template <class T>
std::vector<T> charpoly_invariants(const Matrix<T>& a);

// A vector x with x^T A x < 0, or nothing when A is psd. Exact: symmetric
// pivoted elimination. Float: eigenvector of the smallest eigenvalue.
template <class T>
std::optional<Vector<T>> negative_direction(const Matrix<T>& a, const Tolerance& tol = {});

// Columns span ker A.
template <class T>
Matrix<T> kernel_basis(const Matrix<T>& a, const Tolerance& tol = {});

// Solution of A x = b for nonsingular square A.
template <class T>
Vector<T> solve(const Matrix<T>& a, const Vector<T>& b);

template <class T>
Matrix<T> principal_submatrix(const Matrix<T>& a, const std::vector<Index>& idx) {
  Matrix<T> out(static_cast<Index>(idx.size()), static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = a(idx[i], idx[j]);
  return out;
}

// u^T P w for a precomputed (pseudo)inverse P.
template <class T>
T bilinear(const Vector<T>& u, const Matrix<T>& p, const Vector<T>& w) {
  T acc(0);
  for (Index i = 0; i < u.size(); ++i) {
    if (Field<T>::exact && u(i) == T(0)) continue;
    T row(0);
    for (Index j = 0; j < w.size(); ++j) row += p(i, j) * w(j);
    acc += u(i) * row;
  }
  return acc;
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if constexpr (Field<T>::exact) {
    Matrix<T> out(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < b.cols(); ++j) {
        T acc(0);
        for (Index l = 0; l < a.cols(); ++l)
          if (!a(i, l).is_zero() && !b(l, j).is_zero()) acc += a(i, l) * b(l, j);
        out(i, j) = acc;
      }
    return out;
  } else {
    return a * b;
  }
}

double min_eigenvalue(const Matrix<double>& a);

}  // namespace mgap
