#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "momentgaps/completion.hpp"
#include "momentgaps/gaps.hpp"

namespace mgap {

// Distinct rational atoms in [lo, hi] with denominators <= max_den and
// rational weights in (0, 2]. Same seed, same measure.
AtomicMeasure random_measure(Index n_atoms, double lo, double hi, std::uint64_t seed, int max_den = 4);

struct ScanReport {
  double grid_step = 0.0;  // resolution of the final search
  double box = 0.0;        // half-width of the scanned box
  // Points that passed the predicate, sorted; one coordinate per unknown.
  std::vector<std::vector<double>> feasible_points;
  // Per unknown, the feasible range found; empty when nothing is feasible.
  std::vector<std::pair<double, double>> brackets;
  std::vector<double> best_point;
  double best_min_eigenvalue = 0.0;
  double slack = 0.0;

  bool feasible() const { return !feasible_points.empty(); }
};

// Searches the unknown moments for completions whose Hankel matrix is psd up
// to a slack of a few grid steps. The smallest eigenvalue is concave in the
// unknowns, so a coarse grid followed by local refinement finds its maximum.
template <class T>
ScanReport scan_gap(const GappedSequence<T>& g, double step);

// Same search for the single unknown of a bordered partial matrix, over the
// box |x| <= sqrt(alpha beta).
ScanReport scan_completion(const BorderedPartial<double>& p, double step);

}  // namespace mgap
