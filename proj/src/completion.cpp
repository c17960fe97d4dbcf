#include "momentgaps/completion.hpp"

namespace mgap {

namespace {

// Float comparisons near endpoints lose half the digits through the square root.
template <class T>
double endpoint_slack(const CompletionResult<T>& c, const Tolerance& tol) {
  const double scale = std::max({1.0, std::abs(Field<T>::to_double(c.center)),
                                 std::abs(Field<T>::to_double(c.x_plus)), std::abs(Field<T>::to_double(c.x_minus))});
  return std::sqrt(tol.eps_rank) * scale;
}

}  // namespace

template <class T>
Matrix<T> BorderedPartial<T>::assemble(const T& x) const {
  const Index m = A1.rows();
  Matrix<T> out(m + 2, m + 2);
  out.topLeftCorner(m, m) = A1;
  out.block(0, m, m, 1) = a;
  out.block(0, m + 1, m, 1) = b;
  out.block(m, 0, 1, m) = a.transpose();
  out.block(m + 1, 0, 1, m) = b.transpose();
  out(m, m) = alpha;
  out(m, m + 1) = x;
  out(m + 1, m) = x;
  out(m + 1, m + 1) = beta;
  return out;
}

template <class T>
Matrix<T> BorderedPartial<T>::A2() const {
  const Index m = A1.rows();
  Matrix<T> out(m + 1, m + 1);
  out.topLeftCorner(m, m) = A1;
  out.block(0, m, m, 1) = a;
  out.block(m, 0, 1, m) = a.transpose();
  out(m, m) = alpha;
  return out;
}

template <class T>
Matrix<T> BorderedPartial<T>::A3() const {
  const Index m = A1.rows();
  Matrix<T> out(m + 1, m + 1);
  out.topLeftCorner(m, m) = A1;
  out.block(0, m, m, 1) = b;
  out.block(m, 0, 1, m) = b.transpose();
  out(m, m) = beta;
  return out;
}

template <class T>
int CompletionResult<T>::locate(const T& t, const Tolerance& tol) const {
  if constexpr (Field<T>::exact) {
    (void)tol;
    const T d = t - center;
    if ((d * d - radicand).sign() <= 0) return 0;
    return d.sign();
  } else {
    const double slack = endpoint_slack(*this, tol);
    if (t < x_minus - slack) return -1;
    if (t > x_plus + slack) return 1;
    return 0;
  }
}

template <class T>
bool CompletionResult<T>::is_endpoint(const T& t, const Tolerance& tol) const {
  if constexpr (Field<T>::exact) {
    (void)tol;
    return t == x_minus || t == x_plus;
  } else {
    const double slack = endpoint_slack(*this, tol);
    return std::abs(t - x_minus) <= slack || std::abs(t - x_plus) <= slack;
  }
}

template <class T>
CompletionResult<T> complete(const BorderedPartial<T>& p, const Tolerance& tol) {
  const Index m = p.A1.rows();
  if (p.a.size() != m || p.b.size() != m || p.A1.cols() != m)
    throw Error(ErrorCode::InvalidInput, "bordered partial: inconsistent block sizes");
  const Matrix<T> a2 = p.A2();
  const Matrix<T> a3 = p.A3();
  if (!is_psd(a2, tol)) throw Error(ErrorCode::NotPpsd, "bordered partial: [[A1,a],[a^T,alpha]] is not psd");
  if (!is_psd(a3, tol)) throw Error(ErrorCode::NotPpsd, "bordered partial: [[A1,b],[b^T,beta]] is not psd");
  const Index r1 = rank(p.A1, tol);
  const Index r2 = rank(a2, tol);
  const Index r3 = rank(a3, tol);
  if (r1 != m && r1 != r2)
    throw Error(ErrorCode::AssumptionViolated, "bordered partial: A1 singular and rank A1 != rank A2");

  const Matrix<T> a1p = pinv(p.A1, tol);
  CompletionResult<T> out;
  out.assumption_ok = true;
  out.center = bilinear(p.b, a1p, p.a);
  T s2 = p.alpha - bilinear(p.a, a1p, p.a);
  T s3 = p.beta - bilinear(p.b, a1p, p.b);
  if constexpr (!Field<T>::exact) {
    const double scale = std::max(scale_of(a2), scale_of(a3));
    if (s2 < 0 || Field<T>::sign(s2, tol.eps_psd, scale) == 0) s2 = 0;
    if (s3 < 0 || Field<T>::sign(s3, tol.eps_psd, scale) == 0) s3 = 0;
  }
  out.radicand = s2 * s3;
  const T root = Field<T>::sqrt(out.radicand);
  out.x_minus = out.center - root;
  out.x_plus = out.center + root;
  out.rank_at_endpoint = std::max(r2, r3);
  const bool degenerate = Field<T>::exact ? out.radicand == T(0) : root == T(0);
  out.rank_interior = degenerate ? out.rank_at_endpoint : out.rank_at_endpoint + 1;
  return out;
}

template <class T>
bool is_completable_pd(const BorderedPartial<T>& p, const Tolerance& tol) {
  complete(p, tol);  // validates the preconditions
  return is_pd(p.A2(), tol) && is_pd(p.A3(), tol);
}

template struct BorderedPartial<double>;
template struct BorderedPartial<Surd>;
template struct CompletionResult<double>;
template struct CompletionResult<Surd>;
template CompletionResult<double> complete(const BorderedPartial<double>&, const Tolerance&);
template CompletionResult<Surd> complete(const BorderedPartial<Surd>&, const Tolerance&);
template bool is_completable_pd(const BorderedPartial<double>&, const Tolerance&);
template bool is_completable_pd(const BorderedPartial<Surd>&, const Tolerance&);

}  // namespace mgap
