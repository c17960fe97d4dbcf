#pragma once

#include <initializer_list>
#include <random>
#include <string>

#include "momentgaps/hankel.hpp"

namespace testing_support {

using mgap::Index;
using mgap::Matrix;
using mgap::Rational;
using mgap::Surd;
using mgap::Vector;

inline Surd q(const std::string& s) { return Surd(mgap::parse_rational(s)); }

template <class T = Surd>
Matrix<T> mat(std::initializer_list<std::initializer_list<const char*>> rows) {
  Matrix<T> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (auto& row : rows) {
    Index j = 0;
    for (const char* v : row) {
      if constexpr (std::is_same_v<T, Surd>) m(i, j++) = q(v);
      else m(i, j++) = mgap::to_double(mgap::parse_rational(v));
    }
    ++i;
  }
  return m;
}

template <class T = Surd>
Vector<T> vec(std::initializer_list<const char*> vals) {
  Vector<T> v(static_cast<Index>(vals.size()));
  Index i = 0;
  for (const char* s : vals) {
    if constexpr (std::is_same_v<T, Surd>) v(i++) = q(s);
    else v(i++) = mgap::to_double(mgap::parse_rational(s));
  }
  return v;
}

template <class T = Surd>
mgap::MomentSequence<T> seq(std::initializer_list<const char*> vals) {
  std::vector<T> v;
  for (const char* s : vals) {
    if constexpr (std::is_same_v<T, Surd>) v.push_back(q(s));
    else v.push_back(mgap::to_double(mgap::parse_rational(s)));
  }
  return mgap::MomentSequence<T>(std::move(v));
}

inline bool all_zero(const Matrix<Surd>& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

inline Rational random_rational(std::mt19937_64& rng, int lo, int hi, int max_den = 4) {
  std::uniform_int_distribution<int> den(1, max_den);
  const int d = den(rng);
  std::uniform_int_distribution<int> num(lo * d, hi * d);
  Rational r(num(rng), d);
  r.canonicalize();
  return r;
}

// G G^T with G of size n x r and small rational entries.
inline Matrix<Surd> random_gram(std::mt19937_64& rng, Index n, Index r) {
  Matrix<Surd> g(n, r);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < r; ++j) g(i, j) = Surd(random_rational(rng, -3, 3, 2));
  return mgap::multiply(g, Matrix<Surd>(g.transpose()));
}

inline Matrix<Surd> random_symmetric(std::mt19937_64& rng, Index n) {
  Matrix<Surd> m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) m(i, j) = m(j, i) = Surd(random_rational(rng, -4, 4, 3));
  return m;
}

}  // namespace testing_support
