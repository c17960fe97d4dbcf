#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momentgaps/gaps.hpp"

namespace mgap {

// y = x^3, y = x^4, y^2 = x^3, y^3 = x^4.
enum class Curve { YX3, YX4, Y2X3, Y3X4 };

const char* to_string(Curve c);
Curve parse_curve(const std::string& name);
GapPattern curve_pattern(Curve c);
// Smallest k for which the curve's column identity fits in M(k).
Index relation_threshold(Curve c);
// Exponents (a, b) of the parametrization t -> (t^a, t^b).
std::pair<int, int> curve_exponents(Curve c);
// Univariate index carried by beta_{i,j} on the curve: a*i + b*j.
Index univariate_index(Curve c, Index i, Index j);
bool curve_needs_extra(Curve c);
// Univariate index of the extra moment (beta_{3,2k-2} or beta_{5/3,0}).
Index extra_index(Curve c, Index k);
// (i, j) with i + j <= 2k feeding univariate index m, or nullopt for gaps
// and for the extra moment.
std::optional<std::pair<Index, Index>> source_of(Curve c, Index k, Index m);

template <class T>
class BivariateSequence {
 public:
  BivariateSequence(Index k, std::map<std::pair<Index, Index>, T> beta, std::optional<T> extra = std::nullopt);

  Index k() const { return k_; }
  const T& operator()(Index i, Index j) const;
  const std::map<std::pair<Index, Index>, T>& values() const { return beta_; }
  const std::optional<T>& extra() const { return extra_; }

 private:
  Index k_;
  std::map<std::pair<Index, Index>, T> beta_;
  std::optional<T> extra_;
};

// Degree-lex monomials X^i Y^j of degree <= k, X before Y within a degree.
std::vector<std::pair<Index, Index>> monomial_basis(Index k);

template <class T>
struct MomentMatrix {
  Index k = 0;
  Matrix<T> matrix;
  std::vector<std::pair<Index, Index>> basis;

  Index position(Index i, Index j) const;
  // beta_{i,j} read back from the matrix, i + j <= 2k.
  const T& moment(Index i, Index j) const;
};

template <class T>
MomentMatrix<T> build_M(const BivariateSequence<T>& b);

struct HypothesisReport {
  bool psd = false;
  bool relation = false;
  bool rg = false;
  std::vector<std::string> failures;
  bool ok() const { return psd && relation && rg; }
};

template <class T>
HypothesisReport check_hypotheses(const MomentMatrix<T>& m, Curve c, const Tolerance& tol = {});

// Requires the hypotheses; throws HypothesisFailure or MissingExtraMoment.
template <class T>
GappedSequence<T> reduce(const BivariateSequence<T>& b, Curve c, const Tolerance& tol = {});

struct CurveMeasure {
  std::vector<std::pair<double, double>> points;
  std::vector<double> weights;
  // Present when the parameters and weights are rational.
  std::optional<std::vector<std::pair<Rational, Rational>>> exact_points;
  std::optional<std::vector<Rational>> exact_weights;
  // Parameter t of each point, (t^a, t^b).
  std::vector<double> parameters;

  std::size_t size() const { return points.size(); }
};

CurveMeasure lift(const AtomicMeasure& m, Curve c);

template <class T>
struct CurveVerdict {
  bool exists = false;
  Curve curve = Curve::YX3;
  HypothesisReport hypotheses;
  std::optional<GappedSequence<T>> reduced;
  std::optional<GapVerdict<T>> gap;
  std::optional<CurveMeasure> measure;
  Index atom_count = 0;
  double residual = 0.0;  // over all bivariate moments and the extra one
};

template <class T>
CurveVerdict<T> solve_curve(const BivariateSequence<T>& b, Curve c, const Tolerance& tol = {});

// Bivariate moments of degree <= 2k (and the curve's extra moment) of the
// measure sum w_l delta_{(t_l^a, t_l^b)}.
template <class T>
BivariateSequence<T> curve_moments(Curve c, Index k, const std::vector<Rational>& t, const std::vector<Rational>& w);

}  // namespace mgap
