#include "momentgaps/gaps.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "precision.hpp"

namespace mgap {

const char* to_string(GapPattern p) {
  switch (p) {
    case GapPattern::Last: return "last";
    case GapPattern::Last2: return "last2";
    case GapPattern::First: return "first";
    case GapPattern::First2: return "first2";
  }
  return "unknown";
}

GapPattern parse_gap_pattern(const std::string& name) {
  std::string n;
  for (char ch : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (n.rfind("gap-", 0) == 0) n = n.substr(4);
  if (n == "last") return GapPattern::Last;
  if (n == "last2") return GapPattern::Last2;
  if (n == "first") return GapPattern::First;
  if (n == "first2") return GapPattern::First2;
  throw Error(ErrorCode::InvalidInput, "unknown gap pattern '" + name + "'");
}

Index minimum_k(GapPattern p) {
  switch (p) {
    case GapPattern::Last: return 1;
    case GapPattern::Last2: return 2;
    case GapPattern::First: return 2;
    case GapPattern::First2: return 3;
  }
  return 1;
}

std::vector<Index> gap_indices(GapPattern p, Index k) {
  switch (p) {
    case GapPattern::Last: return {2 * k - 1};
    case GapPattern::Last2: return {2 * k - 2, 2 * k - 1};
    case GapPattern::First: return {1};
    case GapPattern::First2: return {1, 2};
  }
  return {};
}

const char* to_string(GapFailure f) {
  switch (f) {
    case GapFailure::None: return "None";
    case GapFailure::NotPpsd: return "NotPpsd";
    case GapFailure::ConditionFailed: return "ConditionFailed";
    case GapFailure::InequalityFailed: return "InequalityFailed";
  }
  return "Unknown";
}

namespace {

void check_k(GapPattern p, Index k) {
  if (k >= minimum_k(p)) return;
  std::string msg = std::string("pattern ") + to_string(p) + " needs k >= " + std::to_string(minimum_k(p));
  if (p == GapPattern::First && k == 1) msg += "; for k = 1 the gap is beta_1 = beta_{2k-1}, use pattern last";
  if (p == GapPattern::First2 && k == 2) msg += "; for k = 2 the gaps are beta_{2k-2}, beta_{2k-1}, use pattern last2";
  throw Error(ErrorCode::InvalidInput, msg);
}

}  // namespace

template <class T>
GappedSequence<T>::GappedSequence(GapPattern pattern, Index k, std::map<Index, T> known)
    : pattern_(pattern), k_(k), known_(std::move(known)) {
  check_k(pattern, k);
  for (const auto& [i, value] : known_) {
    (void)value;
    if (i < 0 || i > 2 * k) throw Error(ErrorCode::PatternMismatch, "moment index " + std::to_string(i) + " out of range");
    if (is_gap(i))
      throw Error(ErrorCode::PatternMismatch,
                  "index " + std::to_string(i) + " is a gap of pattern " + to_string(pattern) + " but has a value");
  }
  for (Index i = 0; i <= 2 * k; ++i)
    if (!is_gap(i) && !known_.count(i))
      throw Error(ErrorCode::PatternMismatch, "moment " + std::to_string(i) + " is missing");
  if (Field<T>::sign(known_.at(0), 0.0, 1.0) <= 0) throw Error(ErrorCode::InvalidInput, "beta_0 must be positive");
}

template <class T>
GappedSequence<T> GappedSequence<T>::from_entries(GapPattern pattern, const std::vector<std::optional<T>>& entries) {
  if (entries.empty() || entries.size() % 2 == 0)
    throw Error(ErrorCode::InvalidInput, "moment sequence must have odd length");
  const Index k = static_cast<Index>(entries.size() / 2);
  check_k(pattern, k);
  const std::vector<Index> gaps = gap_indices(pattern, k);
  std::map<Index, T> known;
  for (Index i = 0; i <= 2 * k; ++i) {
    const bool gap = std::find(gaps.begin(), gaps.end(), i) != gaps.end();
    const auto& e = entries[static_cast<std::size_t>(i)];
    if (gap != !e.has_value())
      throw Error(ErrorCode::PatternMismatch, "index " + std::to_string(i) + (gap ? " must be a gap" : " must not be a gap") +
                                                  " for pattern " + to_string(pattern));
    if (e) known.emplace(i, *e);
  }
  return GappedSequence(pattern, k, std::move(known));
}

template <class T>
GappedSequence<T> GappedSequence<T>::erase(GapPattern pattern, const MomentSequence<T>& full) {
  std::vector<std::optional<T>> entries(full.values().begin(), full.values().end());
  for (Index i : gap_indices(pattern, full.k())) entries[static_cast<std::size_t>(i)].reset();
  return from_entries(pattern, entries);
}

template <class T>
bool GappedSequence<T>::is_gap(Index i) const {
  const std::vector<Index> gaps = gap_indices(pattern_, k_);
  return std::find(gaps.begin(), gaps.end(), i) != gaps.end();
}

template <class T>
const T& GappedSequence<T>::operator[](Index i) const {
  const auto it = known_.find(i);
  if (it == known_.end()) throw Error(ErrorCode::MissingMoment, "moment " + std::to_string(i) + " is not known");
  return it->second;
}

template <class T>
std::vector<T> GappedSequence<T>::padded() const {
  std::vector<T> out(static_cast<std::size_t>(2 * k_ + 1), T(0));
  for (const auto& [i, value] : known_) out[static_cast<std::size_t>(i)] = value;
  return out;
}

template <class T>
MomentSequence<T> GappedSequence<T>::filled(const std::map<Index, T>& values) const {
  std::vector<T> out = padded();
  for (Index i : gap_indices(pattern_, k_)) {
    const auto it = values.find(i);
    if (it == values.end()) throw Error(ErrorCode::MissingMoment, "no value for gap " + std::to_string(i));
    out[static_cast<std::size_t>(i)] = it->second;
  }
  return MomentSequence<T>(std::move(out));
}

namespace {

std::vector<Index> span(Index first, Index last) {
  std::vector<Index> out;
  for (Index i = first; i <= last; ++i) out.push_back(i);
  return out;
}

std::vector<Index> join(std::vector<Index> a, const std::vector<Index>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Principal submatrix of the Hankel matrix of b on the given rows.
template <class T>
Matrix<T> hankel_rows(const std::vector<T>& b, const std::vector<Index>& rows) {
  const Index n = static_cast<Index>(rows.size());
  Matrix<T> out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = b[static_cast<std::size_t>(rows[i] + rows[j])];
  return out;
}

// Column col of the Hankel matrix restricted to rows.
template <class T>
Vector<T> hankel_column(const std::vector<T>& b, Index col, const std::vector<Index>& rows) {
  Vector<T> out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Index>(i)) = b[static_cast<std::size_t>(rows[i] + col)];
  return out;
}

template <class T>
MomentSequence<T> subsequence(const std::vector<T>& b, Index first, Index last) {
  return MomentSequence<T>(std::vector<T>(b.begin() + first, b.begin() + last + 1));
}

template <class T>
Matrix<T> append_column(const Matrix<T>& a, const Vector<T>& v) {
  Matrix<T> out(a.rows(), a.cols() + 1);
  out.leftCols(a.cols()) = a;
  out.col(a.cols()) = v;
  return out;
}

bool all_equal(std::initializer_list<Index> values) {
  return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

// First failing maximal specified block, with a certificate.
template <class T>
std::optional<PpsdCertificate<T>> ppsd_failure(const std::vector<T>& b, Index k,
                                               const std::vector<std::vector<Index>>& blocks, const Tolerance& tol) {
  for (const auto& rows : blocks) {
    const Matrix<T> m = hankel_rows(b, rows);
    if (is_psd(m, tol)) continue;
    PpsdCertificate<T> cert;
    cert.rows = rows;
    cert.min_eigenvalue = min_eigenvalue(to_double(m));
    const auto dir = negative_direction(m, tol);
    if (!dir) throw Error(ErrorCode::Internal, "psd test and negative direction disagree");
    cert.direction = embed_kernel_vector(*dir, rows, k + 1);
    return cert;
  }
  return std::nullopt;
}

template <class T>
bool is_strictly_below_upper(const CompletionResult<T>& c, const T& t, const Tolerance& tol) {
  if (c.locate(t, tol) == 1) return false;
  if constexpr (Field<T>::exact) {
    return t < c.x_plus;
  } else {
    return !(c.is_endpoint(t, tol) && std::abs(t - c.x_plus) <= std::abs(t - c.x_minus));
  }
}

template <class T>
bool strictly_less(const T& a, const T& b, const Tolerance& tol, double scale) {
  return Field<T>::sign(b - a, tol.eps_psd, scale) > 0;
}

// A value strictly between lo and hi, rational in exact mode.
template <class T>
T interior_point(const T& lo, const T& hi) {
  if constexpr (Field<T>::exact) {
    const Rational guess = rational_from_double(0.5 * (lo.to_double() + hi.to_double()));
    if (lo < Surd(guess) && Surd(guess) < hi) return Surd(guess);
    const Rational fine = detail::nearest_simple_rational((detail::to_high(lo) + detail::to_high(hi)) / 2);
    if (lo < Surd(fine) && Surd(fine) < hi) return Surd(fine);
    throw Error(ErrorCode::Internal, "no rational point found in the admissible interval");
  } else {
    return 0.5 * (lo + hi);
  }
}

template <class T>
std::vector<std::pair<Index, T>> known_pairs(const GappedSequence<T>& g) {
  return std::vector<std::pair<Index, T>>(g.known().begin(), g.known().end());
}

// Runs the classical solver on the completed sequence and attaches the measure.
template <class T>
void attach_measure(GapVerdict<T>& v, const GappedSequence<T>& g, const Tolerance& tol) {
  const ThmpVerdict t = solve_thmp(g.filled(v.completions), tol);
  if (!t.exists)
    throw Error(ErrorCode::Internal, std::string("completed sequence has no measure (") + to_string(t.reason) + ")");
  if (t.rank != v.atom_count)
    throw Error(ErrorCode::Internal, "completed sequence has rank " + std::to_string(t.rank) + ", expected " +
                                         std::to_string(v.atom_count));
  v.measure = t.measure;
  v.residual = moment_residual(*t.measure, known_pairs(g));
}

template <class T>
GapVerdict<T> not_ppsd(PpsdCertificate<T> cert) {
  GapVerdict<T> v;
  v.reason = GapFailure::NotPpsd;
  v.branch = "specified principal block is not psd";
  v.certificate = std::move(cert);
  return v;
}

// Failure that keeps what v already recorded (ranks, interval).
template <class T>
GapVerdict<T> fail_with(GapVerdict<T>& v, GapFailure reason, std::string why) {
  v.exists = false;
  v.reason = reason;
  v.branch = std::move(why);
  return v;
}

template <class T>
void expect_pattern(const GappedSequence<T>& g, GapPattern p) {
  if (g.pattern() != p)
    throw Error(ErrorCode::PatternMismatch,
                std::string("solver for pattern ") + to_string(p) + " called with pattern " + to_string(g.pattern()));
}

}  // namespace

template <class T>
GapVerdict<T> solve_gap_last(const GappedSequence<T>& g, const Tolerance& tol) {
  expect_pattern(g, GapPattern::Last);
  const Index k = g.k();
  const std::vector<T> b = g.padded();
  const std::vector<Index> lead = span(0, k - 2);
  const std::vector<Index> tilde_rows = join(lead, {k});
  if (auto cert = ppsd_failure(b, k, {span(0, k - 1), tilde_rows}, tol)) return not_ppsd(std::move(*cert));

  const Matrix<T> a_lead = hankel_rows(b, lead);
  const Matrix<T> a_known = hankel_rows(b, span(0, k - 1));
  const Matrix<T> a_tilde = hankel_rows(b, tilde_rows);

  GapVerdict<T> v;
  const Index r0 = rank(a_lead, tol), r1 = rank(a_known, tol), r2 = rank(a_tilde, tol);
  v.ranks = {{"leading", r0}, {"known", r1}, {"bordered", r2}};
  if (is_pd(a_known, tol)) {
    v.branch = "definite";
  } else {
    if (!all_equal({r0, r1, r2}))
      return fail_with(v, GapFailure::ConditionFailed, "known block singular and ranks " + std::to_string(r0) + ", " +
                                                      std::to_string(r1) + ", " + std::to_string(r2) + " differ");
    v.branch = "rank";
  }

  BorderedPartial<T> p{a_lead, hankel_column(b, k - 1, lead), hankel_column(b, k, lead), b[2 * k - 2], b[2 * k]};
  v.admissible = complete(p, tol);
  v.admissible_index = 2 * k - 1;
  v.completions[2 * k - 1] = v.admissible->x_plus;
  v.exists = true;
  v.minimal = true;
  v.atom_count = seq_rank(subsequence(b, 0, 2 * k - 2), tol);
  attach_measure(v, g, tol);
  return v;
}

template <class T>
GapVerdict<T> solve_gap_last2(const GappedSequence<T>& g, const Tolerance& tol) {
  expect_pattern(g, GapPattern::Last2);
  const Index k = g.k();
  const std::vector<T> b = g.padded();
  const std::vector<Index> lead = span(0, k - 3);
  const std::vector<Index> known_rows = span(0, k - 2);
  const std::vector<Index> tilde_rows = join(lead, {k});
  if (auto cert = ppsd_failure(b, k, {known_rows, tilde_rows}, tol)) return not_ppsd(std::move(*cert));

  const Matrix<T> a_lead = hankel_rows(b, lead);
  const Matrix<T> a_known = hankel_rows(b, known_rows);
  const Matrix<T> a_tilde = hankel_rows(b, tilde_rows);
  const Vector<T> s = hankel_column(b, k - 1, known_rows);

  GapVerdict<T> v;
  const Index r0 = rank(a_lead, tol), r1 = rank(a_known, tol), r2 = rank(append_column(a_known, s), tol),
              r3 = rank(a_tilde, tol);
  v.ranks = {{"leading", r0}, {"known", r1}, {"known_with_column", r2}, {"bordered", r3}};
  if (k == 2 || is_pd(a_known, tol)) {
    v.branch = "definite";
  } else {
    if (!all_equal({r0, r1, r2, r3}))
      return fail_with(v, GapFailure::ConditionFailed, "known block singular and the four ranks differ");
    v.branch = "rank";
  }

  BorderedPartial<T> p{a_lead, hankel_column(b, k - 2, lead), hankel_column(b, k, lead), b[2 * k - 4], b[2 * k]};
  const CompletionResult<T> c = complete(p, tol);
  const T sigma = bilinear(s, pinv(a_known, tol), s);
  v.admissible = c;
  v.admissible_index = 2 * k - 2;
  v.lower_bound = sigma;
  if (c.locate(sigma, tol) == 1) {
    v.reason = GapFailure::InequalityFailed;
    v.branch = "lower bound exceeds the admissible interval";
    return v;
  }

  bool take_lower = false;
  if (c.is_endpoint(sigma, tol)) {
    if constexpr (Field<T>::exact)
      take_lower = sigma == c.x_minus;
    else
      take_lower = std::abs(sigma - c.x_minus) < std::abs(sigma - c.x_plus);
  }
  const T y0 = take_lower ? c.x_minus : c.x_plus;

  std::map<Index, T> inner_known = g.known();
  inner_known[2 * k - 2] = y0;
  const GapVerdict<T> inner = solve_gap_last(GappedSequence<T>(GapPattern::Last, k, inner_known), tol);
  if (!inner.exists) throw Error(ErrorCode::Internal, "chosen value for the first gap does not extend");

  v.exists = true;
  v.completions[2 * k - 2] = y0;
  v.completions[2 * k - 1] = inner.completions.at(2 * k - 1);
  v.atom_count = inner.atom_count;
  v.minimal = inner.atom_count == seq_rank(subsequence(b, 0, 2 * k - 4), tol);
  attach_measure(v, g, tol);
  return v;
}

template <class T>
GapVerdict<T> solve_gap_first(const GappedSequence<T>& g, const Tolerance& tol) {
  expect_pattern(g, GapPattern::First);
  const Index k = g.k();
  const std::vector<T> b = g.padded();
  const std::vector<Index> tail = span(2, k);
  const std::vector<Index> hat_rows = join({0}, tail);
  if (auto cert = ppsd_failure(b, k, {span(1, k), hat_rows}, tol)) return not_ppsd(std::move(*cert));

  const Matrix<T> a_known = hankel_rows(b, span(1, k));
  const Matrix<T> a_known_lead = hankel_rows(b, span(1, k - 1));
  const Matrix<T> a_tail = hankel_rows(b, tail);
  const Matrix<T> a_tilde = hankel_rows(b, join({0}, span(2, k - 1)));
  const Matrix<T> a_hat = hankel_rows(b, hat_rows);

  GapVerdict<T> v;
  bool extra_atom = false;
  const Index r0 = rank(a_known_lead, tol), r1 = rank(a_known, tol), r2 = rank(a_tail, tol),
              r3 = rank(a_hat, tol);
  v.ranks = {{"known_leading", r0}, {"known", r1}, {"tail", r2}, {"bordered", r3}};
  if (is_pd(a_known, tol) && is_pd(a_tilde, tol)) {
    v.branch = "definite";
  } else {
    if (!all_equal({r0, r1, r2}))
      return fail_with(v, GapFailure::ConditionFailed, "neither the definite nor the rank condition holds");
    v.branch = "rank";
    extra_atom = r0 < r3;
  }

  BorderedPartial<T> p{a_tail, hankel_column(b, 1, tail), hankel_column(b, 0, tail), b[2], b[0]};
  const CompletionResult<T> c = complete(p, tol);
  v.admissible = c;
  v.admissible_index = 1;
  v.minimal = !extra_atom;
  v.atom_count = seq_rank(subsequence(b, 2, 2 * k), tol) + (extra_atom ? 1 : 0);

  // Exact mode keeps the first admissible endpoint; float mode keeps the
  // better conditioned one.
  std::vector<T> candidates{c.x_plus};
  if (!c.is_point()) candidates.push_back(c.x_minus);
  double best = std::numeric_limits<double>::infinity();
  for (const T& x : candidates) {
    const MomentSequence<T> full = g.filled({{1, x}});
    ThmpVerdict t;
    try {
      t = solve_thmp(full, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NumericalRootFailure) throw;
      continue;
    }
    if (!t.exists || t.rank != v.atom_count) continue;
    const double r = moment_residual(*t.measure, known_pairs(g));
    if (r < best) {
      best = r;
      v.completions[1] = x;
    }
    if (Field<T>::exact) break;
  }
  if (v.completions.empty()) throw Error(ErrorCode::Internal, "no endpoint of the admissible interval extends");
  v.exists = true;
  attach_measure(v, g, tol);
  return v;
}

template <class T>
GapVerdict<T> solve_gap_first2(const GappedSequence<T>& g, const Tolerance& tol) {
  expect_pattern(g, GapPattern::First2);
  const Index k = g.k();
  const std::vector<T> b = g.padded();
  const std::vector<Index> known_rows = span(2, k);
  const std::vector<Index> tail = span(3, k);
  const std::vector<Index> tilde_rows = join({0}, tail);
  if (auto cert = ppsd_failure(b, k, {known_rows, tilde_rows}, tol)) return not_ppsd(std::move(*cert));

  const Matrix<T> a_known = hankel_rows(b, known_rows);
  const Matrix<T> a_known_lead = hankel_rows(b, span(2, k - 1));
  const Matrix<T> a_tail = hankel_rows(b, tail);
  const Matrix<T> a_bar = hankel_rows(b, join({0}, span(3, k - 1)));
  const Matrix<T> a_tilde = hankel_rows(b, tilde_rows);
  const Vector<T> s = hankel_column(b, 1, known_rows);
  const Vector<T> u = hankel_column(b, 0, tail);

  GapVerdict<T> v;
  const bool definite = is_pd(a_known, tol);
  const Index r0 = rank(a_known_lead, tol), r1 = rank(a_known, tol), r2 = rank(append_column(a_known, s), tol);
  v.ranks = {{"known_leading", r0}, {"known", r1}, {"known_with_column", r2}, {"tail", rank(a_tail, tol)}};
  if (!definite) {
    if (!all_equal({r0, r1, r2}))
      return fail_with(v, GapFailure::ConditionFailed, "known block singular and the three ranks differ");
  }

  BorderedPartial<T> p{a_tail, hankel_column(b, 2, tail), u, b[4], b[0]};
  CompletionResult<T> c;
  try {
    c = complete(p, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AssumptionViolated) throw;
    return fail_with(v, GapFailure::ConditionFailed, "trailing block ranks do not allow completion");
  }
  const T sigma = bilinear(s, pinv(a_known, tol), s);
  v.admissible = c;
  v.admissible_index = 2;
  v.lower_bound = sigma;
  if (c.locate(sigma, tol) == 1) {
    v.reason = GapFailure::InequalityFailed;
    v.branch = "lower bound exceeds the admissible interval";
    return v;
  }

  T y0;
  if (!definite) {
    v.branch = "rank";
    y0 = sigma;
  } else {
    const T lead_bound = bilinear(u, pinv(a_known_lead, tol), u);
    const double scale = std::max(scale_of(a_known), 1.0);
    if (strictly_less(lead_bound, sigma, tol, scale) && c.locate(sigma, tol) == 0) {
      v.branch = "definite-lower-bound";
      y0 = sigma;
    } else if (is_pd(a_bar, tol) && is_strictly_below_upper(c, sigma, tol)) {
      v.branch = "definite-interior";
      if (is_pd(a_tilde, tol)) {
        const T lo = sigma < c.x_minus ? c.x_minus : sigma;
        y0 = interior_point(lo, c.x_plus);
      } else {
        y0 = c.x_plus;
      }
    } else {
      return fail_with(v, GapFailure::ConditionFailed, "known block definite but no sub-case applies");
    }
  }

  std::map<Index, T> inner_known = g.known();
  inner_known[2] = y0;
  const GapVerdict<T> inner = solve_gap_first(GappedSequence<T>(GapPattern::First, k, inner_known), tol);
  if (!inner.exists) throw Error(ErrorCode::Internal, "chosen value for beta_2 does not extend");

  v.exists = true;
  v.completions[1] = inner.completions.at(1);
  v.completions[2] = y0;
  // The inner problem can still need one atom more than the lower count even
  // when beta_2 sits at the lower bound.
  v.atom_count = inner.atom_count;
  v.minimal = inner.atom_count == seq_rank(subsequence(b, 4, 2 * k), tol);
  attach_measure(v, g, tol);
  return v;
}

template <class T>
GapVerdict<T> solve_gap(const GappedSequence<T>& g, const Tolerance& tol) {
  switch (g.pattern()) {
    case GapPattern::Last: return solve_gap_last(g, tol);
    case GapPattern::Last2: return solve_gap_last2(g, tol);
    case GapPattern::First: return solve_gap_first(g, tol);
    case GapPattern::First2: return solve_gap_first2(g, tol);
  }
  throw Error(ErrorCode::InvalidInput, "unknown gap pattern");
}

#define MGAP_INSTANTIATE(T)                                                               \
  template class GappedSequence<T>;                                                       \
  template GapVerdict<T> solve_gap_last(const GappedSequence<T>&, const Tolerance&);      \
  template GapVerdict<T> solve_gap_last2(const GappedSequence<T>&, const Tolerance&);     \
  template GapVerdict<T> solve_gap_first(const GappedSequence<T>&, const Tolerance&);     \
  template GapVerdict<T> solve_gap_first2(const GappedSequence<T>&, const Tolerance&);    \
  template GapVerdict<T> solve_gap(const GappedSequence<T>&, const Tolerance&);

MGAP_INSTANTIATE(double)
MGAP_INSTANTIATE(Surd)

}  // namespace mgap
