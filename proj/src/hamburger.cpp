#include "momentgaps/hamburger.hpp"

#include "precision.hpp"

namespace mgap {

using detail::HighPrec;
using detail::to_high;

const char* to_string(ThmpFailure f) {
  switch (f) {
    case ThmpFailure::None: return "None";
    case ThmpFailure::NotPsd: return "NotPsd";
    case ThmpFailure::RankMismatch: return "RankMismatch";
    case ThmpFailure::NotPrg: return "NotPrg";
  }
  return "Unknown";
}

namespace {

template <class T>
T eval_generating(const std::vector<T>& phi, const T& x) {
  // x^r - phi[r-1] x^(r-1) - ... - phi[0]
  T acc(1);
  for (std::size_t i = phi.size(); i-- > 0;) acc = acc * x - phi[i];
  return acc;
}

template <class T>
std::vector<T> recursion_coefficients(const MomentSequence<T>& s, Index r, const Tolerance& tol) {
  if (r <= s.k()) return generating_poly(s, tol).phi;
  // nonsingular Hankel matrix: extend by beta_{2k+1} = 0
  const Index k = s.k();
  Vector<T> rhs(k + 1);
  for (Index i = 0; i < k; ++i) rhs(i) = s[k + 1 + i];
  rhs(k) = T(0);
  const Vector<T> phi = solve(hankel_matrix(s), rhs);
  return std::vector<T>(phi.data(), phi.data() + phi.size());
}

}  // namespace

template <class T>
AtomicMeasure extract_measure(const MomentSequence<T>& s, const Tolerance& tol) {
  const Index r = seq_rank(s, tol);
  if (r < 1) throw Error(ErrorCode::InvalidInput, "extract_measure: rank 0 sequence");
  const std::vector<T> phi = recursion_coefficients(s, r, tol);

  std::vector<HighPrec> low(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) low[i] = -to_high(phi[i]);
  std::vector<HighPrec> roots = detail::real_roots(low, Field<T>::exact ? 1e-40 : 1e-6);

  AtomicMeasure out;
  bool all_rational = Field<T>::exact;
  std::vector<Rational> exact_roots;
  if constexpr (Field<T>::exact) {
    for (auto& x : roots) {
      const Rational cand = detail::nearest_simple_rational(x);
      if (!eval_generating(phi, T(cand)).is_zero()) {
        all_rational = false;
        continue;
      }
      x = to_high(cand);
      exact_roots.push_back(cand);
    }
  }

  std::vector<HighPrec> w;
  if constexpr (Field<T>::exact) {
    if (all_rational) {
      Matrix<T> v(r, r);
      Vector<T> rhs(r);
      for (Index j = 0; j < r; ++j) {
        T p(1);
        for (Index i = 0; i < r; ++i) {
          v(i, j) = p;
          p *= T(exact_roots[j]);
        }
      }
      for (Index i = 0; i < r; ++i) rhs(i) = s[i];
      const Vector<T> we = solve(v, rhs);
      std::vector<Rational> wq;
      for (Index i = 0; i < r; ++i) {
        w.push_back(to_high(we(i)));
        if (we(i).is_rational()) wq.push_back(we(i).rational_part());
      }
      if (static_cast<Index>(wq.size()) == r) {
        out.exact_atoms = exact_roots;
        out.exact_weights = wq;
      }
    }
  }
  if (w.empty()) {
    std::vector<HighPrec> rhs;
    for (Index i = 0; i < r; ++i) rhs.push_back(to_high(s[i]));
    w = detail::vandermonde_solve(roots, rhs);
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (w[i] <= 0)
      throw Error(ErrorCode::NumericalRootFailure, "recovered weight is not positive (" + w[i].str(8) + ")");
    out.atoms.push_back(static_cast<double>(roots[i]));
    out.weights.push_back(static_cast<double>(w[i]));
  }
  return out;
}

template <class T>
ThmpVerdict solve_thmp(const MomentSequence<T>& s, const Tolerance& tol) {
  if (s.k() < 1) throw Error(ErrorCode::InvalidInput, "moment sequence needs at least three entries");
  if (Field<T>::sign(s[0], tol.eps_psd, 1.0) <= 0) throw Error(ErrorCode::InvalidInput, "beta_0 must be positive");
  ThmpVerdict v;
  const Matrix<T> a = hankel_matrix(s);
  v.matrix_rank = rank(a, tol);
  v.rank = seq_rank(s, tol);
  if (!is_psd(a, tol)) {
    v.reason = ThmpFailure::NotPsd;
    return v;
  }
  if (v.matrix_rank != v.rank) {
    v.reason = ThmpFailure::RankMismatch;
    return v;
  }
  v.exists = true;
  v.measure = extract_measure(s, tol);
  v.residual = moment_residual(*v.measure, indexed(s.values()));
  return v;
}

std::vector<double> moments_of(const AtomicMeasure& m, Index degree) {
  std::vector<double> out(static_cast<std::size_t>(degree + 1), 0.0);
  for (std::size_t a = 0; a < m.size(); ++a) {
    double p = m.weights[a];
    for (Index i = 0; i <= degree; ++i) {
      out[i] += p;
      p *= m.atoms[a];
    }
  }
  return out;
}

std::vector<Rational> exact_moments_of(const AtomicMeasure& m, Index degree) {
  if (!m.is_exact()) throw Error(ErrorCode::InvalidInput, "exact_moments_of: measure is not rational");
  std::vector<Rational> out(static_cast<std::size_t>(degree + 1), Rational(0));
  for (std::size_t a = 0; a < m.size(); ++a) {
    Rational p = (*m.exact_weights)[a];
    for (Index i = 0; i <= degree; ++i) {
      out[i] += p;
      p *= (*m.exact_atoms)[a];
    }
  }
  return out;
}

template <class T>
double moment_residual(const AtomicMeasure& m, const std::vector<std::pair<Index, T>>& known) {
  Index degree = 0;
  for (const auto& kv : known) degree = std::max(degree, kv.first);
  if constexpr (Field<T>::exact) {
    if (m.is_exact()) {
      const std::vector<Rational> mom = exact_moments_of(m, degree);
      bool all_equal = true;
      for (const auto& [i, value] : known) all_equal = all_equal && Surd(mom[i]) == value;
      if (all_equal) return 0.0;
    }
  }
  std::vector<HighPrec> x, w;
  for (std::size_t a = 0; a < m.size(); ++a) {
    x.push_back(m.exact_atoms ? to_high((*m.exact_atoms)[a]) : HighPrec(m.atoms[a]));
    w.push_back(m.exact_weights ? to_high((*m.exact_weights)[a]) : HighPrec(m.weights[a]));
  }
  std::vector<HighPrec> sum(static_cast<std::size_t>(degree + 1), HighPrec(0));
  std::vector<HighPrec> abs_sum(sum);
  for (std::size_t a = 0; a < x.size(); ++a) {
    HighPrec p = w[a];
    for (Index i = 0; i <= degree; ++i) {
      sum[i] += p;
      abs_sum[i] += abs(p);
      p *= x[a];
    }
  }
  HighPrec worst(0);
  for (const auto& [i, value] : known) {
    const HighPrec target = to_high(value);
    const HighPrec diff = abs(sum[i] - target);
    const HighPrec denom = std::max(HighPrec(abs(target)), abs_sum[i]);
    worst = std::max(worst, denom > 0 ? HighPrec(diff / denom) : diff);
  }
  return static_cast<double>(worst);
}

template ThmpVerdict solve_thmp(const MomentSequence<double>&, const Tolerance&);
template ThmpVerdict solve_thmp(const MomentSequence<Surd>&, const Tolerance&);
template AtomicMeasure extract_measure(const MomentSequence<double>&, const Tolerance&);
template AtomicMeasure extract_measure(const MomentSequence<Surd>&, const Tolerance&);
template double moment_residual(const AtomicMeasure&, const std::vector<std::pair<Index, double>>&);
template double moment_residual(const AtomicMeasure&, const std::vector<std::pair<Index, Surd>>&);

}  // namespace mgap
