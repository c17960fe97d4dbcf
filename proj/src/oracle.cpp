#include "momentgaps/oracle.hpp"

#include "momentgaps/hankel.hpp"
#include "momentgaps/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace mgap {

namespace {

// Uniform in [0, n) without relying on library-specific distributions.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace

AtomicMeasure random_measure(Index n_atoms, double lo, double hi, std::uint64_t seed, int max_den) {
  if (n_atoms < 1) throw Error(ErrorCode::InvalidInput, "random_measure needs at least one atom");
  if (max_den < 1 || !(lo < hi)) throw Error(ErrorCode::InvalidInput, "random_measure: bad bounds");
  std::mt19937_64 rng(seed);
  std::vector<Rational> atoms, weights;
  const auto lo_i = static_cast<long>(std::ceil(lo * max_den));
  const auto hi_i = static_cast<long>(std::floor(hi * max_den));
  if (hi_i - lo_i + 1 < n_atoms) throw Error(ErrorCode::InvalidInput, "random_measure: bounds too narrow");
  while (static_cast<Index>(atoms.size()) < n_atoms) {
    const long den = 1 + static_cast<long>(draw(rng, static_cast<std::uint64_t>(max_den)));
    const long num_lo = static_cast<long>(std::ceil(lo * static_cast<double>(den)));
    const long num_hi = static_cast<long>(std::floor(hi * static_cast<double>(den)));
    if (num_hi < num_lo) continue;
    Rational x(num_lo + static_cast<long>(draw(rng, static_cast<std::uint64_t>(num_hi - num_lo + 1))), den);
    x.canonicalize();
    if (std::find(atoms.begin(), atoms.end(), x) == atoms.end()) atoms.push_back(x);
  }
  for (Index i = 0; i < n_atoms; ++i) {
    const long den = 1 + static_cast<long>(draw(rng, static_cast<std::uint64_t>(max_den)));
    Rational w(1 + static_cast<long>(draw(rng, static_cast<std::uint64_t>(2 * den))), den);
    w.canonicalize();
    weights.push_back(w);
  }
  AtomicMeasure m;
  for (const auto& x : atoms) m.atoms.push_back(to_double(x));
  for (const auto& w : weights) m.weights.push_back(to_double(w));
  m.exact_atoms = std::move(atoms);
  m.exact_weights = std::move(weights);
  return m;
}

namespace {

using Objective = std::function<double(double)>;

struct Peak {
  double arg = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

constexpr int coarse_points = 41;

// Maximum of a concave function: the peak lies within one coarse cell of the
// best coarse point, then ternary search down to the resolution.
Peak maximize(const Objective& f, double lo, double hi, double resolution) {
  Peak best;
  const double h = (hi - lo) / (coarse_points - 1);
  int bi = 0;
  for (int i = 0; i < coarse_points; ++i) {
    const double x = lo + h * i;
    const double v = f(x);
    if (v > best.value) {
      best = {x, v};
      bi = i;
    }
  }
  double a = lo + h * std::max(bi - 1, 0);
  double b = lo + h * std::min(bi + 1, coarse_points - 1);
  while (b - a > resolution) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    const double f1 = f(m1), f2 = f(m2);
    if (f1 > best.value) best = {m1, f1};
    if (f2 > best.value) best = {m2, f2};
    if (f1 < f2) a = m1;
    else b = m2;
  }
  return best;
}

// f(inside) >= level > f(outside); returns the last point known to pass.
double edge(const Objective& f, double inside, double outside, double level, double resolution) {
  while (std::abs(outside - inside) > resolution) {
    const double mid = 0.5 * (inside + outside);
    if (f(mid) >= level) inside = mid;
    else outside = mid;
  }
  return inside;
}

std::pair<double, double> range(const Objective& f, const Peak& p, double box, double level, double resolution) {
  const double lo = f(-box) >= level ? -box : edge(f, p.arg, -box, level, resolution);
  const double hi = f(box) >= level ? box : edge(f, p.arg, box, level, resolution);
  return {lo, hi};
}

double min_eig(const Matrix<double>& a) {
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Extended precision for the completion scan, whose edges can be flat.
double min_eig_extended(const Matrix<double>& a) {
  using Ext = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Ext> es(a.cast<long double>(), Eigen::EigenvaluesOnly);
  return static_cast<double>(es.eigenvalues()(0));
}

Matrix<double> hankel_of(const std::vector<double>& b) {
  const Index n = static_cast<Index>(b.size() / 2) + 1;
  Matrix<double> h(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) h(i, j) = b[static_cast<std::size_t>(i + j)];
  return h;
}

}  // namespace

template <class T>
ScanReport scan_gap(const GappedSequence<T>& g, double step) {
  if (!(step > 0)) throw Error(ErrorCode::InvalidInput, "scan step must be positive");
  std::vector<double> base;
  for (const T& v : g.padded()) base.push_back(Field<T>::to_double(v));
  const std::vector<Index> gaps = gap_indices(g.pattern(), g.k());
  double box = 1.0, scale = 1.0;
  for (const auto& [i, v] : g.known()) {
    (void)i;
    box = std::max(box, 1.0 + Field<T>::magnitude(v));
    scale = std::max(scale, Field<T>::magnitude(v));
  }

  ScanReport rep;
  rep.grid_step = step;
  rep.slack = step + 1e-9 * scale;
  const double level = -rep.slack;

  auto eval = [&](const std::vector<double>& values) {
    std::vector<double> b = base;
    for (std::size_t i = 0; i < gaps.size(); ++i) b[static_cast<std::size_t>(gaps[i])] = values[i];
    return min_eig(hankel_of(b));
  };

  for (int attempt = 0; attempt <= 3; ++attempt, box *= 2) {
    rep = ScanReport{step, box, {}, {}, {}, 0.0, rep.slack};
    std::vector<std::vector<double>> passed;
    if (gaps.size() == 1) {
      const Objective f = [&](double x) {
        const double v = eval({x});
        if (v >= level) passed.push_back({x});
        return v;
      };
      const Peak p = maximize(f, -box, box, step);
      rep.best_point = {p.arg};
      rep.best_min_eigenvalue = p.value;
      if (p.value >= level) rep.brackets.push_back(range(f, p, box, level, step));
    } else {
      // inner unknown: the second gap, maximized for each value of the first
      std::vector<double> inner_arg;
      const Objective outer = [&](double y) {
        const Objective inner = [&](double x) { return eval({y, x}); };
        const Peak p = maximize(inner, -box, box, step);
        if (p.value >= level) passed.push_back({y, p.arg});
        inner_arg.push_back(p.arg);
        return p.value;
      };
      const Peak p = maximize(outer, -box, box, step);
      const Objective inner_at = [&](double x) { return eval({p.arg, x}); };
      const Peak q = maximize(inner_at, -box, box, step);
      rep.best_point = {p.arg, q.arg};
      rep.best_min_eigenvalue = q.value;
      if (q.value >= level) {
        rep.brackets.push_back(range(outer, p, box, level, step));
        rep.brackets.push_back(range(inner_at, q, box, level, step));
      }
    }
    if (!rep.brackets.empty() && rep.best_min_eigenvalue <= rep.slack) {
      // Every psd completion is singular, so the grid slack says nothing about
      // the rank condition. Sharpen the peak and test the condition exactly there.
      passed.clear();
      const double fine = 1e-12 * box;
      std::vector<double> peak;
      double value = 0.0;
      if (gaps.size() == 1) {
        const Peak p = maximize([&](double x) { return eval({x}); }, -box, box, fine);
        peak = {p.arg};
        value = p.value;
      } else {
        double inner_best = 0.0;
        const Objective outer = [&](double y) {
          const Peak q = maximize([&](double x) { return eval({y, x}); }, -box, box, fine);
          inner_best = q.arg;
          return q.value;
        };
        const Peak p = maximize(outer, -box, box, fine);
        outer(p.arg);
        peak = {p.arg, inner_best};
        value = p.value;
      }
      const Tolerance strict{1e-9, 1e-8};
      std::vector<double> b = base;
      for (std::size_t i = 0; i < gaps.size(); ++i) b[static_cast<std::size_t>(gaps[i])] = peak[i];
      if (value >= -1e-9 * scale &&
          rank(hankel_of(b), strict) == seq_rank(MomentSequence<double>(b), strict))
        passed.push_back(peak);
    }
    std::sort(passed.begin(), passed.end());
    passed.erase(std::unique(passed.begin(), passed.end()), passed.end());
    rep.feasible_points = std::move(passed);
    if (rep.feasible_points.empty()) rep.brackets.clear();
    bool on_boundary = false;
    for (const auto& [lo, hi] : rep.brackets) on_boundary = on_boundary || lo <= -box || hi >= box;
    if (!on_boundary) break;
  }
  return rep;
}

ScanReport scan_completion(const BorderedPartial<double>& p, double step) {
  if (!(step > 0)) throw Error(ErrorCode::InvalidInput, "scan step must be positive");
  ScanReport rep;
  rep.grid_step = step;
  rep.box = std::sqrt(std::max(0.0, p.alpha * p.beta)) + step;
  const double scale = scale_of(p.assemble(0.0));
  rep.slack = 1e-17 * scale;
  std::vector<std::vector<double>> passed;
  const Objective f = [&](double x) {
    const double v = min_eig_extended(p.assemble(x));
    if (v >= -rep.slack) passed.push_back({x});
    return v;
  };
  // finer than the reporting step so the edges come out within one step
  const double resolution = step * 1e-2;
  Peak peak = maximize(f, -rep.box, rep.box, resolution);
  if (peak.value < -rep.slack) {
    // a single psd point falls between grid points; sharpen the peak
    const Peak fine = maximize([&](double x) { return min_eig_extended(p.assemble(x)); }, -rep.box, rep.box, 1e-13 * rep.box);
    if (fine.value >= -1e-9 * scale) {
      peak = fine;
      passed.push_back({fine.arg});
    }
  }
  rep.best_point = {peak.arg};
  rep.best_min_eigenvalue = peak.value;
  if (!passed.empty()) rep.brackets.push_back(range(f, peak, rep.box, std::min(-rep.slack, peak.value), resolution));
  std::sort(passed.begin(), passed.end());
  rep.feasible_points = std::move(passed);
  return rep;
}

template ScanReport scan_gap(const GappedSequence<double>&, double);
template ScanReport scan_gap(const GappedSequence<Surd>&, double);

}  // namespace mgap
