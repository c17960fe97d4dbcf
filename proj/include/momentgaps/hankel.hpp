#pragma once

#include <vector>

#include "momentgaps/linalg.hpp"

namespace mgap {

// (beta_0, ..., beta_2k). Length must be odd; k = 0 is allowed so that
// short subsequences can be ranked, solvers demand k >= 1 themselves.
template <class T>
class MomentSequence {
 public:
  MomentSequence() = default;
  explicit MomentSequence(std::vector<T> beta) : beta_(std::move(beta)) {
    if (beta_.empty() || beta_.size() % 2 == 0)
      throw Error(ErrorCode::InvalidInput, "moment sequence must have odd length, got " + std::to_string(beta_.size()));
  }

  Index k() const { return static_cast<Index>(beta_.size() / 2); }
  Index degree() const { return 2 * k(); }
  Index size() const { return static_cast<Index>(beta_.size()); }
  const T& operator[](Index i) const { return beta_[static_cast<std::size_t>(i)]; }
  const std::vector<T>& values() const { return beta_; }

  // (beta_first, ..., beta_last), inclusive; last - first must be even.
  MomentSequence slice(Index first, Index last) const {
    if (first < 0 || last >= size() || first > last)
      throw Error(ErrorCode::OutOfRange, "slice out of range");
    return MomentSequence(std::vector<T>(beta_.begin() + first, beta_.begin() + last + 1));
  }

  friend bool operator==(const MomentSequence& a, const MomentSequence& b) { return a.beta_ == b.beta_; }

 private:
  std::vector<T> beta_;
};

template <class T>
struct GeneratingPolynomial {
  Index r = 0;
  // g(x) = x^r - phi[r-1] x^(r-1) - ... - phi[0]
  std::vector<T> phi;
};

// (beta_{first+i+j}) for i, j < order.
template <class T>
Matrix<T> hankel_block(const std::vector<T>& beta, Index first, Index order) {
  Matrix<T> h(order, order);
  for (Index i = 0; i < order; ++i)
    for (Index j = 0; j < order; ++j) h(i, j) = beta.at(static_cast<std::size_t>(first + i + j));
  return h;
}

template <class T>
Matrix<T> hankel_matrix(const MomentSequence<T>& s) {
  return hankel_block(s.values(), 0, s.k() + 1);
}

template <class T>
Matrix<T> corner_upper(const MomentSequence<T>& s, Index m);

template <class T>
Matrix<T> corner_lower(const MomentSequence<T>& s, Index m);

template <class T>
Index seq_rank(const MomentSequence<T>& s, const Tolerance& tol = {});

template <class T>
MomentSequence<T> reverse(const MomentSequence<T>& s) {
  return MomentSequence<T>(std::vector<T>(s.values().rbegin(), s.values().rend()));
}

template <class T>
GeneratingPolynomial<T> generating_poly(const MomentSequence<T>& s, const Tolerance& tol = {});

template <class T>
bool is_prg(const MomentSequence<T>& s, const Tolerance& tol = {});

}  // namespace mgap
