// The two-outcome example used throughout the tests, the CLI self-checks and
// the Monte Carlo acceptance run: Omega = {w1, w2} with uniform P, grid {0, 1},
// and a distribution stopping time that is uniform on Omega x {0, 1}.
#pragma once

#include "stoptime/space.hpp"
#include "stoptime/stopping_times.hpp"

namespace stoptime::fixtures {

// F_0 separates the two outcomes unless coarse_at_zero is set.
inline FilteredSpace two_outcome_space(bool coarse_at_zero = false) {
  Partition fine{{0}, {1}};
  Partition start = coarse_at_zero ? Partition{{0, 1}} : fine;
  return build_space({"w1", "w2"}, {Rational(1, 2), Rational(1, 2)}, {0, 1}, {start, fine});
}

// Both outcomes: stop at 0 for r below 1/2, at 1 otherwise.
inline MixedST split_mixed() {
  const auto s = RStepFunction::make({0, Rational(1, 2), 1}, {0, 1});
  return {{s, s}};
}

// As split_mixed, but w2 uses the complementary half of [0,1] for each time.
inline MixedST flipped_mixed() {
  return {{RStepFunction::make({0, Rational(1, 2), 1}, {0, 1}),
           RStepFunction::make({0, Rational(1, 2), 1}, {1, 0})}};
}

// rho_0 = 1/2, rho_1 = 1 on both outcomes.
inline RandomizedST half_randomized() {
  RandomizedST rho{Table(2, 2)};
  for (std::size_t i = 0; i < 2; ++i) {
    rho.paths(i, 0) = Rational(1, 2);
    rho.paths(i, 1) = 1;
  }
  return rho;
}

inline DistributionST uniform_distribution() { return {Table(2, 2, Rational(1, 4))}; }

}  // namespace stoptime::fixtures
