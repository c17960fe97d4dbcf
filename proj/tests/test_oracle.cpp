#include <doctest.h>

#include "fixtures.hpp"
#include "momentgaps/oracle.hpp"

using namespace mgap;
using namespace testing_support;

TEST_CASE("random_measure contract") {
  const auto one = random_measure(1, -1, 1, 7);
  REQUIRE(one.size() == 1);
  CHECK(one.weights[0] > 0);
  CHECK(one.weights[0] <= 2);

  const auto a = random_measure(5, -3, 3, 42);
  const auto b = random_measure(5, -3, 3, 42);
  CHECK(a.atoms == b.atoms);
  CHECK(a.weights == b.weights);
  CHECK(*a.exact_atoms == *b.exact_atoms);

  const auto three = random_measure(3, -5, 5, 1);
  auto atoms = *three.exact_atoms;
  std::sort(atoms.begin(), atoms.end());
  CHECK(std::adjacent_find(atoms.begin(), atoms.end()) == atoms.end());
  for (const auto& x : atoms) {
    CHECK(x >= -5);
    CHECK(x <= 5);
  }
  CHECK_THROWS_AS(random_measure(0, -1, 1, 1), Error);
}

TEST_CASE("moments of random measures are solvable") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Index n = 1 + static_cast<Index>(seed % 6);
    const auto m = random_measure(n, -3, 3, seed);
    const Index k = n + static_cast<Index>(seed % 3);
    std::vector<Surd> s;
    for (const auto& v : exact_moments_of(m, 2 * k)) s.emplace_back(v);
    const auto v = solve_thmp(MomentSequence<Surd>(s));
    CAPTURE(seed);
    CHECK(v.exists);
    CHECK(v.rank == n);
  }
}

TEST_CASE("scan_gap examples") {
  auto r = scan_gap(gapped(GapPattern::First, {"1", "x", "1", "1", "1"}), 1e-3);
  REQUIRE(r.feasible());
  CHECK(std::abs(r.best_point[0] - 1.0) <= 1e-3);

  r = scan_gap(gapped(GapPattern::Last, {"1", "x", "1"}), 1e-3);
  REQUIRE(r.feasible());
  REQUIRE(r.brackets.size() == 1);
  CHECK(r.brackets[0].first <= -1.0 + 1e-3);
  CHECK(r.brackets[0].second >= 1.0 - 1e-3);

  r = scan_gap(gapped(GapPattern::Last2, {"1", "2", "x", "x", "1"}), 1e-3);
  CHECK_FALSE(r.feasible());
  CHECK(r.brackets.empty());

  for (const auto& p : r.feasible_points) CHECK(p.size() == 2);
}

TEST_CASE("scan_completion matches the completion formula") {
  const BorderedPartial<double> p{Matrix<double>::Identity(1, 1), Vector<double>::Zero(1), Vector<double>::Zero(1),
                                  1.0, 1.0};
  const auto r = scan_completion(p, 1e-4);
  REQUIRE(r.brackets.size() == 1);
  CHECK(std::abs(r.brackets[0].first + 1.0) <= 1e-4);
  CHECK(std::abs(r.brackets[0].second - 1.0) <= 1e-4);
}

namespace {

// Moments of a random measure with the pattern's entries erased; half the
// instances get one known entry nudged.
GappedSequence<Surd> random_instance(GapPattern pattern, std::mt19937_64& rng, std::uint64_t seed) {
  const Index n = std::uniform_int_distribution<Index>(1, 4)(rng);
  const Index k = std::max<Index>(minimum_k(pattern), std::uniform_int_distribution<Index>(1, 3)(rng));
  const auto m = random_measure(n, -2, 2, seed, 2);
  std::vector<Surd> full;
  for (const auto& v : exact_moments_of(m, 2 * k)) full.emplace_back(v);
  auto g = GappedSequence<Surd>::erase(pattern, MomentSequence<Surd>(full));
  if (rng() % 2 == 0) return g;
  auto known = g.known();
  std::vector<Index> keys;
  for (const auto& [i, v] : known) {
    (void)v;
    if (i > 0) keys.push_back(i);
  }
  const Index i = keys[rng() % keys.size()];
  known[i] += Surd(random_rational(rng, -2, 2, 4));
  return GappedSequence<Surd>(pattern, k, known);
}

}  // namespace

TEST_CASE("scan_gap agrees with the gap solvers") {
  for (GapPattern pattern : {GapPattern::Last, GapPattern::Last2, GapPattern::First, GapPattern::First2}) {
    std::mt19937_64 rng(100 + static_cast<int>(pattern));
    for (int it = 0; it < 200; ++it) {
      const auto g = random_instance(pattern, rng, static_cast<std::uint64_t>(1000 * static_cast<int>(pattern) + it));
      const auto v = solve_gap(g);
      const auto r = scan_gap(g, 1e-3);
      CAPTURE(std::string(to_string(pattern)));
      CAPTURE(it);
      CAPTURE(r.best_min_eigenvalue);
      CAPTURE(std::string(to_string(v.reason)));
      CHECK(v.exists == r.feasible());
    }
  }
}
