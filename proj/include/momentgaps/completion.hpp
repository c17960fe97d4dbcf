#pragma once

#include "momentgaps/linalg.hpp"

namespace mgap {

// A(x) = [[A1, a, b], [a^T, alpha, x], [b^T, x, beta]] with x unknown.
template <class T>
struct BorderedPartial {
  Matrix<T> A1;
  Vector<T> a;
  Vector<T> b;
  T alpha;
  T beta;

  Index order() const { return A1.rows() + 2; }
  Matrix<T> assemble(const T& x) const;
  // [[A1, a], [a^T, alpha]]
  Matrix<T> A2() const;
  // [[A1, b], [b^T, beta]]
  Matrix<T> A3() const;
};

// Admissible set [center - sqrt(radicand), center + sqrt(radicand)].
template <class T>
struct CompletionResult {
  T center;
  T radicand;
  T x_minus;
  T x_plus;
  Index rank_at_endpoint = 0;
  Index rank_interior = 0;
  bool assumption_ok = false;

  bool is_point() const { return x_minus == x_plus; }
  // Position of t relative to the interval: -1 below, 0 inside (closed), +1 above.
  int locate(const T& t, const Tolerance& tol = {}) const;
  // Whether t coincides with x_minus / x_plus (exact in exact mode).
  bool is_endpoint(const T& t, const Tolerance& tol = {}) const;
};

template <class T>
CompletionResult<T> complete(const BorderedPartial<T>& p, const Tolerance& tol = {});

template <class T>
bool is_completable_pd(const BorderedPartial<T>& p, const Tolerance& tol = {});

}  // namespace mgap
