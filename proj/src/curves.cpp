#include "momentgaps/curves.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "momentgaps/linalg.hpp"

namespace mgap {

const char* to_string(Curve c) {
  switch (c) {
    case Curve::YX3: return "yx3";
    case Curve::YX4: return "yx4";
    case Curve::Y2X3: return "y2x3";
    case Curve::Y3X4: return "y3x4";
  }
  return "unknown";
}

Curve parse_curve(const std::string& name) {
  std::string n;
  for (char ch : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (n.rfind("curve-", 0) == 0) n = n.substr(6);
  if (n == "yx3") return Curve::YX3;
  if (n == "yx4") return Curve::YX4;
  if (n == "y2x3") return Curve::Y2X3;
  if (n == "y3x4") return Curve::Y3X4;
  throw Error(ErrorCode::InvalidInput, "unknown curve '" + name + "'");
}

GapPattern curve_pattern(Curve c) {
  switch (c) {
    case Curve::YX3: return GapPattern::Last;
    case Curve::YX4: return GapPattern::Last2;
    case Curve::Y2X3: return GapPattern::First;
    case Curve::Y3X4: return GapPattern::First2;
  }
  return GapPattern::Last;
}

Index relation_threshold(Curve c) { return (c == Curve::YX3 || c == Curve::Y2X3) ? 3 : 4; }

std::pair<int, int> curve_exponents(Curve c) {
  switch (c) {
    case Curve::YX3: return {1, 3};
    case Curve::YX4: return {1, 4};
    case Curve::Y2X3: return {2, 3};
    case Curve::Y3X4: return {3, 4};
  }
  return {1, 1};
}

Index univariate_index(Curve c, Index i, Index j) {
  const auto [a, b] = curve_exponents(c);
  return a * i + b * j;
}

bool curve_needs_extra(Curve c) { return c == Curve::YX4 || c == Curve::Y3X4; }

Index extra_index(Curve c, Index k) {
  if (c == Curve::YX4) return 8 * k - 5;
  if (c == Curve::Y3X4) return 5;
  return -1;
}

namespace {

// Univariate order of the reduced sequence: 3k or 4k.
Index reduced_k(Curve c, Index k) { return (c == Curve::YX3 || c == Curve::Y2X3) ? 3 * k : 4 * k; }

}  // namespace

std::optional<std::pair<Index, Index>> source_of(Curve c, Index k, Index m) {
  const Index top = 2 * reduced_k(c, k);
  if (m < 0 || m > top) throw Error(ErrorCode::OutOfRange, "univariate index out of range");
  for (Index gap : gap_indices(curve_pattern(c), reduced_k(c, k)))
    if (gap == m) return std::nullopt;
  if (curve_needs_extra(c) && m == extra_index(c, k)) return std::nullopt;
  switch (c) {
    case Curve::YX3: return std::pair{m % 3, m / 3};
    case Curve::YX4: return std::pair{m % 4, m / 4};
    case Curve::Y2X3: {
      const Index q = m / 3;
      if (m % 3 == 0) return std::pair{Index{0}, q};
      if (m % 3 == 1) return std::pair{Index{2}, q - 1};
      return std::pair{Index{1}, q};
    }
    case Curve::Y3X4: {
      const Index q = m / 4;
      switch (m % 4) {
        case 0: return std::pair{Index{0}, q};
        case 1: return std::pair{Index{3}, q - 2};
        case 2: return std::pair{Index{2}, q - 1};
        default: return std::pair{Index{1}, q};
      }
    }
  }
  return std::nullopt;
}

template <class T>
BivariateSequence<T>::BivariateSequence(Index k, std::map<std::pair<Index, Index>, T> beta, std::optional<T> extra)
    : k_(k), beta_(std::move(beta)), extra_(std::move(extra)) {
  if (k_ < 1) throw Error(ErrorCode::InvalidInput, "bivariate sequence needs k >= 1");
  for (const auto& [ij, v] : beta_) {
    (void)v;
    if (ij.first < 0 || ij.second < 0 || ij.first + ij.second > 2 * k_)
      throw Error(ErrorCode::InvalidInput, "moment index (" + std::to_string(ij.first) + "," +
                                               std::to_string(ij.second) + ") outside degree 2k");
  }
  const auto it = beta_.find({0, 0});
  if (it == beta_.end()) throw Error(ErrorCode::MissingMoment, "beta_{0,0} missing");
  if (Field<T>::sign(it->second, 0.0, 1.0) <= 0) throw Error(ErrorCode::InvalidInput, "beta_{0,0} must be positive");
}

template <class T>
const T& BivariateSequence<T>::operator()(Index i, Index j) const {
  const auto it = beta_.find({i, j});
  if (it == beta_.end())
    throw Error(ErrorCode::MissingMoment,
                "beta_{" + std::to_string(i) + "," + std::to_string(j) + "} missing");
  return it->second;
}

std::vector<std::pair<Index, Index>> monomial_basis(Index k) {
  std::vector<std::pair<Index, Index>> out;
  for (Index d = 0; d <= k; ++d)
    for (Index i = d; i >= 0; --i) out.emplace_back(i, d - i);
  return out;
}

template <class T>
Index MomentMatrix<T>::position(Index i, Index j) const {
  const Index d = i + j;
  if (i < 0 || j < 0 || d > k) throw Error(ErrorCode::OutOfRange, "monomial outside M(k)");
  return d * (d + 1) / 2 + j;
}

template <class T>
const T& MomentMatrix<T>::moment(Index i, Index j) const {
  if (i < 0 || j < 0 || i + j > 2 * k) throw Error(ErrorCode::OutOfRange, "moment outside degree 2k");
  // split (i, j) as a row monomial of degree <= k plus a column monomial
  const Index ri = std::min(i, k);
  const Index rj = std::min(j, k - ri);
  return matrix(position(ri, rj), position(i - ri, j - rj));
}

template <class T>
MomentMatrix<T> build_M(const BivariateSequence<T>& b) {
  MomentMatrix<T> m;
  m.k = b.k();
  m.basis = monomial_basis(m.k);
  const Index n = static_cast<Index>(m.basis.size());
  m.matrix.resize(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index s = r; s < n; ++s) {
      const auto [i1, j1] = m.basis[static_cast<std::size_t>(r)];
      const auto [i2, j2] = m.basis[static_cast<std::size_t>(s)];
      m.matrix(r, s) = b(i1 + i2, j1 + j2);
      m.matrix(s, r) = m.matrix(r, s);
    }
  return m;
}

namespace {

std::string moment_name(Index i, Index j) { return "beta_{" + std::to_string(i) + "," + std::to_string(j) + "}"; }

// Curve polynomial y^q - x^p as (x power, y power, coefficient) terms.
std::vector<std::tuple<Index, Index, int>> relation_terms(Curve c) {
  switch (c) {
    case Curve::YX3: return {{0, 1, 1}, {3, 0, -1}};
    case Curve::YX4: return {{0, 1, 1}, {4, 0, -1}};
    case Curve::Y2X3: return {{0, 2, 1}, {3, 0, -1}};
    case Curve::Y3X4: return {{0, 3, 1}, {4, 0, -1}};
  }
  return {};
}

const char* relation_text(Curve c) {
  switch (c) {
    case Curve::YX3: return "Y = X^3";
    case Curve::YX4: return "Y = X^4";
    case Curve::Y2X3: return "Y^2 = X^3";
    case Curve::Y3X4: return "Y^3 = X^4";
  }
  return "";
}

template <class T>
bool nearly_equal(const T& x, const T& y, double eps, double scale) {
  return Field<T>::sign(x - y, eps, scale) == 0;
}

template <class T>
bool annihilates(const MomentMatrix<T>& m, const Vector<T>& p, const Tolerance& tol) {
  const Vector<T> mp = m.matrix * p;
  double pnorm = 1.0;
  for (Index i = 0; i < p.size(); ++i) pnorm = std::max(pnorm, Field<T>::magnitude(p(i)));
  const double scale = scale_of(m.matrix) * pnorm * static_cast<double>(p.size());
  for (Index i = 0; i < mp.size(); ++i)
    if (Field<T>::sign(mp(i), tol.eps_rank, scale) != 0) return false;
  return true;
}

template <class T>
Vector<T> shifted(const MomentMatrix<T>& m, const Vector<T>& p, Index di, Index dj) {
  Vector<T> out = Vector<T>::Zero(p.size());
  for (Index r = 0; r < p.size(); ++r) {
    const auto [i, j] = m.basis[static_cast<std::size_t>(r)];
    // float round-off can leave dust on the degree-k block
    if (i + j == m.k || Field<T>::sign(p(r), 0.0, 1.0) == 0) continue;
    out(m.position(i + di, j + dj)) = p(r);
  }
  return out;
}

}  // namespace

template <class T>
HypothesisReport check_hypotheses(const MomentMatrix<T>& m, Curve c, const Tolerance& tol) {
  HypothesisReport rep;
  const Index k = m.k;
  const Index n = m.matrix.rows();

  rep.psd = is_psd(m.matrix, tol);
  if (!rep.psd) rep.failures.push_back("M(" + std::to_string(k) + ") is not positive semidefinite");

  const auto terms = relation_terms(c);
  rep.relation = true;
  if (k >= relation_threshold(c)) {
    Vector<T> r = Vector<T>::Zero(n);
    for (const auto& [i, j, coef] : terms) r(m.position(i, j)) = T(coef);
    if (!annihilates(m, r, tol)) {
      rep.relation = false;
      rep.failures.push_back(std::string("column relation ") + relation_text(c) + " fails in M(" +
                             std::to_string(k) + ")");
    }
  } else {
    // Every chain beta_{i,j+q} = beta_{i+p,j} inside degree 2k.
    const auto [yi, yj, yc] = terms[0];
    const auto [xi, xj, xc] = terms[1];
    (void)yi, (void)yc, (void)xj, (void)xc;
    const Index shift = std::max(yj, xi);
    const double scale = scale_of(m.matrix);
    for (Index d = 0; d + shift <= 2 * k; ++d)
      for (Index i = d; i >= 0; --i) {
        const Index j = d - i;
        const T& lhs = m.moment(i, j + yj);
        const T& rhs = m.moment(i + xi, j);
        if (!nearly_equal(lhs, rhs, tol.eps_rank, scale)) {
          rep.relation = false;
          rep.failures.push_back("moment equality " + moment_name(i, j + yj) + " = " + moment_name(i + xi, j) +
                                 " fails");
        }
      }
  }

  // Kernel vectors of degree <= k-1 must stay in the kernel after x- and y-shifts.
  rep.rg = true;
  const Matrix<T> ker = kernel_basis(m.matrix, tol);
  if (ker.cols() > 0 && k >= 1) {
    const Index low = k * (k + 1) / 2;  // monomials of degree <= k-1
    const Matrix<T> top = ker.bottomRows(n - low);
    const Matrix<T> comb = kernel_basis(top, tol);
    const Matrix<T> low_ker = multiply(ker, comb);
    for (Index col = 0; col < low_ker.cols() && rep.rg; ++col) {
      const Vector<T> p = low_ker.col(col);
      for (const auto& [di, dj, name] : {std::tuple{1, 0, "x"}, std::tuple{0, 1, "y"}}) {
        if (!annihilates(m, shifted(m, p, di, dj), tol)) {
          rep.rg = false;
          rep.failures.push_back(std::string("kernel of M(") + std::to_string(k) +
                                 ") not closed under multiplication by " + name);
          break;
        }
      }
    }
  }
  return rep;
}

namespace {

template <class T>
GappedSequence<T> reduce_checked(const BivariateSequence<T>& b, Curve c) {
  if (curve_needs_extra(c) && !b.extra())
    throw Error(ErrorCode::MissingExtraMoment,
                std::string("curve ") + to_string(c) + " needs its extra moment " +
                    (c == Curve::YX4 ? moment_name(3, 2 * b.k() - 2) : std::string("beta_{5/3,0}")));
  const Index kk = reduced_k(c, b.k());
  std::map<Index, T> known;
  for (Index m = 0; m <= 2 * kk; ++m) {
    if (curve_needs_extra(c) && m == extra_index(c, b.k())) {
      known.emplace(m, *b.extra());
      continue;
    }
    if (const auto src = source_of(c, b.k(), m)) known.emplace(m, b(src->first, src->second));
  }
  return GappedSequence<T>(curve_pattern(c), kk, std::move(known));
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.what());
  }
}

}  // namespace

template <class T>
GappedSequence<T> reduce(const BivariateSequence<T>& b, Curve c, const Tolerance& tol) {
  if (curve_needs_extra(c) && !b.extra()) return reduce_checked(b, c);  // throws MissingExtraMoment
  const HypothesisReport rep = check_hypotheses(build_M(b), c, tol);
  if (!rep.ok()) throw Error(ErrorCode::HypothesisFailure, join(rep.failures));
  return reduce_checked(b, c);
}

CurveMeasure lift(const AtomicMeasure& m, Curve c) {
  const auto [a, b] = curve_exponents(c);
  CurveMeasure out;
  out.weights = m.weights;
  out.parameters = m.atoms;
  for (double t : m.atoms) out.points.emplace_back(std::pow(t, a), std::pow(t, b));
  if (m.is_exact()) {
    std::vector<std::pair<Rational, Rational>> pts;
    for (const Rational& t : *m.exact_atoms) {
      Rational x(1), y(1);
      for (int e = 0; e < a; ++e) x *= t;
      for (int e = 0; e < b; ++e) y *= t;
      pts.emplace_back(x, y);
    }
    out.exact_points = std::move(pts);
    out.exact_weights = m.exact_weights;
  }
  return out;
}

template <class T>
CurveVerdict<T> solve_curve(const BivariateSequence<T>& b, Curve c, const Tolerance& tol) {
  CurveVerdict<T> v;
  v.curve = c;
  if (curve_needs_extra(c) && !b.extra()) staged("reduce", [&] { return reduce_checked(b, c); });
  const MomentMatrix<T> m = staged("build", [&] { return build_M(b); });
  v.hypotheses = staged("hypotheses", [&] { return check_hypotheses(m, c, tol); });
  if (!v.hypotheses.ok()) return v;
  v.reduced = staged("reduce", [&] { return reduce_checked(b, c); });
  v.gap = staged("solve", [&] { return solve_gap(*v.reduced, tol); });
  if (!v.gap->exists) return v;
  v.exists = true;
  v.measure = lift(*v.gap->measure, c);
  v.atom_count = v.gap->atom_count;
  std::vector<std::pair<Index, T>> targets;
  for (const auto& [ij, val] : b.values()) targets.emplace_back(univariate_index(c, ij.first, ij.second), val);
  if (b.extra() && curve_needs_extra(c)) targets.emplace_back(extra_index(c, b.k()), *b.extra());
  v.residual = moment_residual(*v.gap->measure, targets);
  return v;
}

template <class T>
BivariateSequence<T> curve_moments(Curve c, Index k, const std::vector<Rational>& t, const std::vector<Rational>& w) {
  if (t.size() != w.size()) throw Error(ErrorCode::InvalidInput, "atoms and weights differ in length");
  const Index top = std::max(univariate_index(c, 0, 2 * k), curve_needs_extra(c) ? extra_index(c, k) : 0);
  std::vector<Rational> uni(static_cast<std::size_t>(top + 1), Rational(0));
  for (std::size_t l = 0; l < t.size(); ++l) {
    Rational p = w[l];
    for (auto& s : uni) {
      s += p;
      p *= t[l];
    }
  }
  std::map<std::pair<Index, Index>, T> beta;
  for (Index d = 0; d <= 2 * k; ++d)
    for (Index i = d; i >= 0; --i)
      beta.emplace(std::pair{i, d - i},
                   Field<T>::from_rational(uni[static_cast<std::size_t>(univariate_index(c, i, d - i))]));
  std::optional<T> extra;
  if (curve_needs_extra(c)) extra = Field<T>::from_rational(uni[static_cast<std::size_t>(extra_index(c, k))]);
  return BivariateSequence<T>(k, std::move(beta), std::move(extra));
}

#define MGAP_INSTANTIATE(T)                                                                         \
  template class BivariateSequence<T>;                                                              \
  template struct MomentMatrix<T>;                                                                  \
  template MomentMatrix<T> build_M(const BivariateSequence<T>&);                                    \
  template HypothesisReport check_hypotheses(const MomentMatrix<T>&, Curve, const Tolerance&);      \
  template GappedSequence<T> reduce(const BivariateSequence<T>&, Curve, const Tolerance&);          \
  template CurveVerdict<T> solve_curve(const BivariateSequence<T>&, Curve, const Tolerance&);       \
  template BivariateSequence<T> curve_moments(Curve, Index, const std::vector<Rational>&,           \
                                              const std::vector<Rational>&);

MGAP_INSTANTIATE(double)
MGAP_INSTANTIATE(Surd)

}  // namespace mgap
