#include "momentgaps/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <numeric>

namespace mgap {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SingularLeadCorner: return "SingularLeadCorner";
    case ErrorCode::NumericalRootFailure: return "NumericalRootFailure";
    case ErrorCode::NotPpsd: return "NotPpsd";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::MissingMoment: return "MissingMoment";
    case ErrorCode::MissingExtraMoment: return "MissingExtraMoment";
    case ErrorCode::HypothesisFailure: return "HypothesisFailure";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

struct Echelon {
  Matrix<Surd> reduced;
  std::vector<Index> pivots;
};

// Reduced row echelon form over the exact field.
Echelon rref(Matrix<Surd> m) {
  Echelon out;
  Index row = 0;
  for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Index p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row) m.row(p).swap(m.row(row));
    const Surd inv = Surd(1) / m(row, col);
    for (Index j = col; j < m.cols(); ++j)
      if (!m(row, j).is_zero()) m(row, j) *= inv;
    for (Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const Surd f = m(i, col);
      for (Index j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

Matrix<Surd> inverse_exact(const Matrix<Surd>& a) {
  const Index n = a.rows();
  Matrix<Surd> aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = Matrix<Surd>::Identity(n, n);
  Echelon e = rref(aug);
  if (static_cast<Index>(e.pivots.size()) < n || (n > 0 && e.pivots[n - 1] != n - 1))
    throw Error(ErrorCode::Internal, "inverse of a singular matrix");
  return e.reduced.rightCols(n);
}

double rank_cutoff(const Matrix<double>& a, const Tolerance& tol) {
  return tol.eps_rank * scale_of(a) * static_cast<double>(std::max<Index>(1, std::max(a.rows(), a.cols())));
}

}  // namespace

template <class T>
Matrix<T> pinv(const Matrix<T>& a, const Tolerance& tol) {
  if (a.size() == 0) return Matrix<T>(a.cols(), a.rows());
  if constexpr (Field<T>::exact) {
    (void)tol;
    Echelon e = rref(a);
    const Index r = static_cast<Index>(e.pivots.size());
    if (r == 0) return Matrix<T>::Zero(a.cols(), a.rows());
    Matrix<T> b(a.rows(), r);
    for (Index j = 0; j < r; ++j) b.col(j) = a.col(e.pivots[j]);
    Matrix<T> c = e.reduced.topRows(r);
    Matrix<T> ct = c.transpose();
    Matrix<T> bt = b.transpose();
    Matrix<T> cct_inv = inverse_exact(multiply(c, ct));
    Matrix<T> btb_inv = inverse_exact(multiply(bt, b));
    return multiply(multiply(ct, cct_inv), multiply(btb_inv, bt));
  } else {
    Eigen::JacobiSVD<Matrix<double>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cut = rank_cutoff(a, tol);
    Vector<double> s = svd.singularValues();
    for (Index i = 0; i < s.size(); ++i) s(i) = s(i) > cut ? 1.0 / s(i) : 0.0;
    return svd.matrixV() * s.asDiagonal() * svd.matrixU().transpose();
  }
}

template <class T>
Matrix<T> schur(const Matrix<T>& m, Index split, const Tolerance& tol) {
  if (split < 0 || split > m.rows() || split > m.cols()) throw Error(ErrorCode::OutOfRange, "schur: split out of range");
  const Index rows = m.rows() - split, cols = m.cols() - split;
  if (split == 0) return m;
  Matrix<T> a = m.topLeftCorner(split, split);
  Matrix<T> b = m.topRightCorner(split, cols);
  Matrix<T> c = m.bottomLeftCorner(rows, split);
  Matrix<T> d = m.bottomRightCorner(rows, cols);
  return d - multiply(multiply(c, pinv(a, tol)), b);
}

template <class T>
Matrix<T> schur_trailing(const Matrix<T>& m, Index block, const Tolerance& tol) {
  const Index n = m.rows();
  if (block < 0 || block > n) throw Error(ErrorCode::OutOfRange, "schur_trailing: block out of range");
  std::vector<Index> order;
  for (Index i = n - block; i < n; ++i) order.push_back(i);
  for (Index i = 0; i < n - block; ++i) order.push_back(i);
  return schur(principal_submatrix(m, order), block, tol);
}

template <class T>
std::vector<T> charpoly_invariants(const Matrix<T>& a) {
  const Index n = a.rows();
  // c_n = 1, M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
  std::vector<T> c(static_cast<std::size_t>(n + 1), T(0));
  c[n] = T(1);
  Matrix<T> mk = Matrix<T>::Zero(n, n);
  for (Index k = 1; k <= n; ++k) {
    Matrix<T> next = multiply(a, mk);
    for (Index i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    T trace(0);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) trace += a(i, j) * mk(j, i);
    c[n - k] = -trace / T(static_cast<long>(k));
  }
  std::vector<T> e(static_cast<std::size_t>(n + 1));
  for (Index k = 0; k <= n; ++k) e[k] = (k % 2 == 0) ? c[n - k] : T(-c[n - k]);
  return e;
}

template <class T>
std::optional<Vector<T>> negative_direction(const Matrix<T>& a, const Tolerance& tol) {
  const Index n = a.rows();
  if (n == 0) return std::nullopt;
  if constexpr (Field<T>::exact) {
    (void)tol;
    // Eliminate positive pivots; a vector y on the remaining indices lifts to
    // x with x^T A x = y^T S y, S the current complement.
    Matrix<T> s = a;
    std::vector<Index> active(static_cast<std::size_t>(n));
    std::iota(active.begin(), active.end(), Index{0});
    std::vector<std::pair<Index, Matrix<T>>> steps;  // pivot and its row
    std::optional<Vector<T>> y;
    while (!active.empty()) {
      Index neg = -1, pos = -1;
      for (Index i : active) {
        const int sg = s(i, i).sign();
        if (sg < 0 && neg < 0) neg = i;
        if (sg > 0 && pos < 0) pos = i;
      }
      if (neg >= 0) {
        y = Vector<T>::Zero(n);
        (*y)(neg) = T(1);
        break;
      }
      if (pos < 0) {
        // all remaining diagonals vanish
        for (Index i : active) {
          for (Index j : active)
            if (i != j && !s(i, j).is_zero()) {
              y = Vector<T>::Zero(n);
              (*y)(i) = T(1);
              (*y)(j) = T(s(i, j).sign() > 0 ? -1 : 1);
              break;
            }
          if (y) break;
        }
        break;
      }
      const T piv = s(pos, pos);
      std::erase(active, pos);
      Matrix<T> row = s.row(pos);
      for (Index i : active) {
        if (s(i, pos).is_zero()) continue;
        const T f = s(i, pos) / piv;
        for (Index j : active)
          if (!s(pos, j).is_zero()) s(i, j) -= f * s(pos, j);
      }
      steps.emplace_back(pos, std::move(row));
    }
    if (!y) return std::nullopt;
    Vector<T> x = *y;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      const Index p = it->first;
      T acc(0);
      for (Index j = 0; j < n; ++j)
        if (j != p && !x(j).is_zero()) acc += it->second(0, j) * x(j);
      x(p) = -acc / it->second(0, p);
    }
    return x;
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix<double>> es(a);
    if (es.eigenvalues()(0) >= -tol.eps_psd * scale_of(a)) return std::nullopt;
    return Vector<double>(es.eigenvectors().col(0));
  }
}

template <class T>
bool is_psd(const Matrix<T>& a, const Tolerance& tol) {
  if (a.rows() == 0) return true;
  if constexpr (Field<T>::exact) {
    // symmetric elimination on positive pivots, O(n^3)
    return !negative_direction(a, tol).has_value();
  } else {
    return min_eigenvalue(a) >= -tol.eps_psd * scale_of(a);
  }
}

template <class T>
bool is_pd(const Matrix<T>& a, const Tolerance& tol) {
  return rank(a, tol) == a.rows() && is_psd(a, tol);
}

template <class T>
Index rank(const Matrix<T>& a, const Tolerance& tol) {
  if (a.size() == 0) return 0;
  if constexpr (Field<T>::exact) {
    (void)tol;
    Matrix<T> m = a;
    const Index rows = m.rows(), cols = m.cols();
    T prev(1);
    Index r = 0;
    for (Index k = 0; k < std::min(rows, cols); ++k) {
      Index pi = -1, pj = -1;
      for (Index j = k; j < cols && pi < 0; ++j)
        for (Index i = k; i < rows; ++i)
          if (!m(i, j).is_zero()) {
            pi = i;
            pj = j;
            break;
          }
      if (pi < 0) break;
      m.row(k).swap(m.row(pi));
      m.col(k).swap(m.col(pj));
      for (Index i = k + 1; i < rows; ++i)
        for (Index j = k + 1; j < cols; ++j) {
          T v = m(k, k) * m(i, j);
          if (!m(i, k).is_zero() && !m(k, j).is_zero()) v -= m(i, k) * m(k, j);
          m(i, j) = v / prev;
        }
      prev = m(k, k);
      ++r;
    }
    return r;
  } else {
    Eigen::JacobiSVD<Matrix<double>> svd(a);
    const double cut = rank_cutoff(a, tol);
    Index r = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > cut) ++r;
    return r;
  }
}

template <class T>
bool in_col_space(const Matrix<T>& a, const Vector<T>& v, const Tolerance& tol) {
  if (v.size() != a.rows()) throw Error(ErrorCode::InvalidInput, "in_col_space: dimension mismatch");
  if (a.rows() == 0) return true;
  Matrix<T> vm = v;
  Matrix<T> back = multiply(a, multiply(pinv(a, tol), vm));
  if constexpr (Field<T>::exact) {
    return back == vm;
  } else {
    double scale = scale_of(a);
    for (Index i = 0; i < v.size(); ++i) scale = std::max(scale, std::abs(v(i)));
    return (back - vm).norm() <= tol.eps_rank * scale;
  }
}

template <class T>
Vector<T> embed_kernel_vector(const Vector<T>& v, const std::vector<Index>& rows, Index n) {
  if (static_cast<Index>(rows.size()) != v.size() || v.size() > n)
    throw Error(ErrorCode::InvalidInput, "embed_kernel_vector: size mismatch");
  Vector<T> out = Vector<T>::Zero(n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= n) throw Error(ErrorCode::OutOfRange, "embed_kernel_vector: index out of range");
    out(rows[i]) = v(static_cast<Index>(i));
  }
  return out;
}

template <class T>
Matrix<T> kernel_basis(const Matrix<T>& a, const Tolerance& tol) {
  const Index n = a.cols();
  if constexpr (Field<T>::exact) {
    (void)tol;
    Echelon e = rref(a);
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (Index p : e.pivots) is_pivot[p] = true;
    Matrix<T> basis(n, n - static_cast<Index>(e.pivots.size()));
    Index col = 0;
    for (Index f = 0; f < n; ++f) {
      if (is_pivot[f]) continue;
      Vector<T> x = Vector<T>::Zero(n);
      x(f) = T(1);
      for (std::size_t r = 0; r < e.pivots.size(); ++r) x(e.pivots[r]) = -e.reduced(static_cast<Index>(r), f);
      basis.col(col++) = x;
    }
    return basis;
  } else {
    if (a.rows() == 0) return Matrix<double>::Identity(n, n);
    Eigen::JacobiSVD<Matrix<double>> svd(a, Eigen::ComputeFullV);
    const double cut = rank_cutoff(a, tol);
    Index r = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > cut) ++r;
    return svd.matrixV().rightCols(n - r);
  }
}

template <class T>
Vector<T> solve(const Matrix<T>& a, const Vector<T>& b) {
  if constexpr (Field<T>::exact) {
    const Index n = a.rows();
    Matrix<T> aug(n, n + 1);
    aug.leftCols(n) = a;
    aug.col(n) = b;
    Echelon e = rref(aug);
    if (static_cast<Index>(e.pivots.size()) < n || (n > 0 && e.pivots[n - 1] != n - 1))
      throw Error(ErrorCode::Internal, "solve: singular system");
    return e.reduced.col(n);
  } else {
    return a.fullPivLu().solve(b);
  }
}

double min_eigenvalue(const Matrix<double>& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

#define MGAP_INSTANTIATE(T)                                                                      \
  template Matrix<T> pinv(const Matrix<T>&, const Tolerance&);                                  \
  template Matrix<T> schur(const Matrix<T>&, Index, const Tolerance&);                          \
  template Matrix<T> schur_trailing(const Matrix<T>&, Index, const Tolerance&);                 \
  template bool is_psd(const Matrix<T>&, const Tolerance&);                                     \
  template bool is_pd(const Matrix<T>&, const Tolerance&);                                      \
  template Index rank(const Matrix<T>&, const Tolerance&);                                      \
  template bool in_col_space(const Matrix<T>&, const Vector<T>&, const Tolerance&);             \
  template Vector<T> embed_kernel_vector(const Vector<T>&, const std::vector<Index>&, Index);    \
  template std::vector<T> charpoly_invariants(const Matrix<T>&);                                \
  template std::optional<Vector<T>> negative_direction(const Matrix<T>&, const Tolerance&);     \
  template Matrix<T> kernel_basis(const Matrix<T>&, const Tolerance&);                          \
  template Vector<T> solve(const Matrix<T>&, const Vector<T>&);

MGAP_INSTANTIATE(double)
MGAP_INSTANTIATE(Surd)

}  // namespace mgap
