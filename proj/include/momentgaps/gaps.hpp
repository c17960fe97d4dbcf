#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momentgaps/completion.hpp"
#include "momentgaps/hamburger.hpp"

namespace mgap {

// Which moments of (beta_0, ..., beta_2k) are unknown.
enum class GapPattern {
  Last,    // beta_{2k-1}
  Last2,   // beta_{2k-2}, beta_{2k-1}
  First,   // beta_1
  First2,  // beta_1, beta_2
};

const char* to_string(GapPattern p);
GapPattern parse_gap_pattern(const std::string& name);
Index minimum_k(GapPattern p);
// Unknown indices in increasing order.
std::vector<Index> gap_indices(GapPattern p, Index k);

template <class T>
class GappedSequence {
 public:
  // known must cover exactly the indices 0..2k outside the pattern's gaps.
  GappedSequence(GapPattern pattern, Index k, std::map<Index, T> known);
  // Full-length vector with nullopt exactly at the gaps.
  static GappedSequence from_entries(GapPattern pattern, const std::vector<std::optional<T>>& entries);
  // Drops the pattern's entries from a complete sequence.
  static GappedSequence erase(GapPattern pattern, const MomentSequence<T>& full);

  GapPattern pattern() const { return pattern_; }
  Index k() const { return k_; }
  Index degree() const { return 2 * k_; }
  const std::map<Index, T>& known() const { return known_; }
  bool is_gap(Index i) const;
  const T& operator[](Index i) const;

  // Dense (beta_0..beta_2k) with zeros at the gaps.
  std::vector<T> padded() const;
  // Fills the gaps; values must cover every gap index.
  MomentSequence<T> filled(const std::map<Index, T>& values) const;

 private:
  GapPattern pattern_;
  Index k_;
  std::map<Index, T> known_;
};

enum class GapFailure {
  None,
  NotPpsd,
  ConditionFailed,  // ppsd but neither the definite nor the rank branch holds
  InequalityFailed, // two-gap patterns: the lower bound exceeds the admissible interval
};
const char* to_string(GapFailure f);

template <class T>
struct PpsdCertificate {
  std::vector<Index> rows;  // principal index set in the full Hankel matrix
  double min_eigenvalue = 0.0;
  Vector<T> direction;      // length k+1, supported on rows, x^T A x < 0
};

template <class T>
struct GapVerdict {
  bool exists = false;
  // gap index -> chosen value
  std::map<Index, T> completions;
  // Interval of the gap filled first (the only gap for single-gap patterns).
  Index admissible_index = -1;
  std::optional<CompletionResult<T>> admissible;
  // Lower bound on the first-filled gap for two-gap patterns.
  std::optional<T> lower_bound;
  Index atom_count = 0;
  bool minimal = false;
  std::optional<AtomicMeasure> measure;
  GapFailure reason = GapFailure::None;
  std::string branch;  // which case of the criterion applied, or what failed
  // Ranks of the fully known principal blocks the criterion compares.
  std::map<std::string, Index> ranks;
  std::optional<PpsdCertificate<T>> certificate;
  double residual = 0.0;  // against the known moments only
};

template <class T>
GapVerdict<T> solve_gap_last(const GappedSequence<T>& g, const Tolerance& tol = {});
template <class T>
GapVerdict<T> solve_gap_last2(const GappedSequence<T>& g, const Tolerance& tol = {});
template <class T>
GapVerdict<T> solve_gap_first(const GappedSequence<T>& g, const Tolerance& tol = {});
template <class T>
GapVerdict<T> solve_gap_first2(const GappedSequence<T>& g, const Tolerance& tol = {});
// Dispatches on the pattern.
template <class T>
GapVerdict<T> solve_gap(const GappedSequence<T>& g, const Tolerance& tol = {});

}  // namespace mgap
