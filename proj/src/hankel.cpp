#include "momentgaps/hankel.hpp"

namespace mgap {

namespace {

// Number of leading principal minors that are nonzero before the first zero
// one, i.e. the smallest j with A(j) singular (or n when none is).
Index first_singular_corner(const Matrix<Surd>& a) {
  Matrix<Surd> m = a;
  const Index n = m.rows();
  Surd prev(1);
  for (Index k = 0; k < n; ++k) {
    if (m(k, k).is_zero()) return k;
    for (Index i = k + 1; i < n; ++i)
      for (Index j = k + 1; j < n; ++j) {
        Surd v = m(k, k) * m(i, j);
        if (!m(i, k).is_zero() && !m(k, j).is_zero()) v -= m(i, k) * m(k, j);
        m(i, j) = v / prev;
      }
    prev = m(k, k);
  }
  return n;
}

Index first_singular_corner(const Matrix<double>& a, const Tolerance& tol) {
  for (Index j = 0; j < a.rows(); ++j) {
    const Matrix<double> c = a.topLeftCorner(j + 1, j + 1);
    // the cutoff is scaled by the whole matrix so corners are judged alike
    Tolerance t = tol;
    t.eps_rank = tol.eps_rank * scale_of(a) / scale_of(c);
    if (rank(c, t) < j + 1) return j;
  }
  return a.rows();
}

template <class T>
bool approx_equal(const T& x, const T& y, const Tolerance& tol, double scale) {
  if constexpr (Field<T>::exact) {
    (void)tol;
    (void)scale;
    return x == y;
  } else {
    return std::abs(x - y) <= tol.eps_rank * scale;
  }
}

}  // namespace

template <class T>
Matrix<T> corner_upper(const MomentSequence<T>& s, Index m) {
  if (m < 0 || m > s.k()) throw Error(ErrorCode::OutOfRange, "corner_upper: m out of range");
  return hankel_block(s.values(), 0, m + 1);
}

template <class T>
Matrix<T> corner_lower(const MomentSequence<T>& s, Index m) {
  if (m < 0 || m > s.k()) throw Error(ErrorCode::OutOfRange, "corner_lower: m out of range");
  return hankel_block(s.values(), 2 * (s.k() - m), m + 1);
}

template <class T>
Index seq_rank(const MomentSequence<T>& s, const Tolerance& tol) {
  const Matrix<T> a = hankel_matrix(s);
  const Index n = a.rows();
  if (rank(a, tol) == n) return n;
  if (is_psd(a, tol)) {
    if constexpr (Field<T>::exact) return first_singular_corner(a);
    else return first_singular_corner(a, tol);
  }
  // literal definition: first column lying in the span of its predecessors
  Index prev = 0;
  for (Index i = 0; i < n; ++i) {
    Tolerance t = tol;
    if constexpr (!Field<T>::exact) t.eps_rank = tol.eps_rank * scale_of(a) / scale_of(Matrix<T>(a.leftCols(i + 1)));
    const Index r = rank(Matrix<T>(a.leftCols(i + 1)), t);
    if (r == prev) return i;
    prev = r;
  }
  return n;
}

template <class T>
GeneratingPolynomial<T> generating_poly(const MomentSequence<T>& s, const Tolerance& tol) {
  const Index r = seq_rank(s, tol);
  if (r == s.k() + 1)
    throw Error(ErrorCode::SingularLeadCorner, "generating polynomial needs beta_2k+1 when the Hankel matrix is nonsingular");
  if (r == 0) throw Error(ErrorCode::SingularLeadCorner, "rank 0 sequence has no generating polynomial");
  const Matrix<T> lead = corner_upper(s, r - 1);
  if (!is_pd(lead, tol)) throw Error(ErrorCode::SingularLeadCorner, "leading corner A(r-1) is not positive definite");
  Vector<T> rhs(r);
  for (Index i = 0; i < r; ++i) rhs(i) = s[r + i];
  const Vector<T> phi = solve(lead, rhs);
  return {r, std::vector<T>(phi.data(), phi.data() + r)};
}

template <class T>
bool is_prg(const MomentSequence<T>& s, const Tolerance& tol) {
  const Index r = seq_rank(s, tol);
  if (r == s.k() + 1) return is_pd(hankel_matrix(s), tol);
  if (r == 0 || !is_pd(corner_upper(s, r - 1), tol)) return false;
  const GeneratingPolynomial<T> g = generating_poly(s, tol);
  double scale = 1.0;
  for (const T& b : s.values()) scale = std::max(scale, Field<T>::magnitude(b));
  for (Index j = r; j <= s.degree(); ++j) {
    T acc(0);
    for (Index i = 0; i < r; ++i) acc += g.phi[i] * s[j - r + i];
    if (!approx_equal(acc, s[j], tol, scale * static_cast<double>(s.size()))) return false;
  }
  return true;
}

#define MGAP_INSTANTIATE(T)                                                                   \
  template Matrix<T> corner_upper(const MomentSequence<T>&, Index);                          \
  template Matrix<T> corner_lower(const MomentSequence<T>&, Index);                          \
  template Index seq_rank(const MomentSequence<T>&, const Tolerance&);                       \
  template GeneratingPolynomial<T> generating_poly(const MomentSequence<T>&, const Tolerance&); \
  template bool is_prg(const MomentSequence<T>&, const Tolerance&);

MGAP_INSTANTIATE(double)
MGAP_INSTANTIATE(Surd)

}  // namespace mgap
