#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

#include "momentgaps/scalar.hpp"

namespace mgap {

using Index = Eigen::Index;
template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

enum class ErrorCode {
  InvalidInput,
  OutOfRange,
  SingularLeadCorner,
  NumericalRootFailure,
  NotPpsd,
  AssumptionViolated,
  PatternMismatch,
  MissingMoment,
  MissingExtraMoment,
  HypothesisFailure,
  Internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Largest absolute entry, at least 1; used to scale float thresholds.
template <class T>
double scale_of(const Matrix<T>& a) {
  double s = 1.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) s = std::max(s, Field<T>::magnitude(a(i, j)));
  return s;
}

template <class T>
Matrix<double> to_double(const Matrix<T>& a) {
  Matrix<double> out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out(i, j) = Field<T>::to_double(a(i, j));
  return out;
}

template <class T>
Vector<T> to_vector(const std::vector<T>& v) {
  Vector<T> out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = v[i];
  return out;
}

}  // namespace mgap
