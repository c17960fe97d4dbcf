#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "momentgaps/hankel.hpp"

namespace mgap {

struct AtomicMeasure {
  std::vector<double> atoms;
  std::vector<double> weights;
  // Present when every atom and weight is rational.
  std::optional<std::vector<Rational>> exact_atoms;
  std::optional<std::vector<Rational>> exact_weights;

  std::size_t size() const { return atoms.size(); }
  bool is_exact() const { return exact_atoms.has_value() && exact_weights.has_value(); }
};

enum class ThmpFailure { None, NotPsd, RankMismatch, NotPrg };
const char* to_string(ThmpFailure f);

struct ThmpVerdict {
  bool exists = false;
  Index rank = 0;         // Rank of the sequence
  Index matrix_rank = 0;  // rank of its Hankel matrix
  std::optional<AtomicMeasure> measure;
  ThmpFailure reason = ThmpFailure::None;
  // Largest relative moment reconstruction error of the returned measure.
  double residual = 0.0;
};

template <class T>
ThmpVerdict solve_thmp(const MomentSequence<T>& s, const Tolerance& tol = {});

template <class T>
AtomicMeasure extract_measure(const MomentSequence<T>& s, const Tolerance& tol = {});

std::vector<double> moments_of(const AtomicMeasure& m, Index degree);
// Requires an exact measure.
std::vector<Rational> exact_moments_of(const AtomicMeasure& m, Index degree);

// Max over the listed (index, value) pairs of |sum w x^i - value| divided by
// max(|value|, sum w |x|^i). Evaluated exactly when both sides allow it,
// otherwise in 120-digit arithmetic on the stored atoms and weights.
template <class T>
double moment_residual(const AtomicMeasure& m, const std::vector<std::pair<Index, T>>& known);

template <class T>
std::vector<std::pair<Index, T>> indexed(const std::vector<T>& values) {
  std::vector<std::pair<Index, T>> out;
  for (std::size_t i = 0; i < values.size(); ++i) out.emplace_back(static_cast<Index>(i), values[i]);
  return out;
}

}  // namespace mgap
