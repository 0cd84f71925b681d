// Random instance generator for the property suites.
#pragma once

#include "stoptime/conversions.hpp"
#include "stoptime/games.hpp"
#include "stoptime/rng.hpp"
#include "stoptime/space.hpp"
#include "stoptime/stopping_times.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stoptime {

struct Bounds {
  std::size_t max_outcomes = 8;
  std::size_t max_grid_points = 6;
  std::size_t max_breaks = 8;        // interior r-breaks per mixed section
  std::size_t max_denominator = 64;  // for random densities

  void check() const {
    if (max_outcomes < 1 || max_grid_points < 1 || max_breaks < 1 || max_denominator < 1)
      throw std::invalid_argument("bounds must all be >= 1");
  }
};

struct Instance {
  FilteredSpace space;
  PureST pure;
  DistributionST distribution;
  RandomizedST randomized;   // equivalent to distribution
  MixedST mixed_canonical;   // generalized inverse of randomized
  MixedST mixed;             // rearranged copy of mixed_canonical, same law
  Process reward;
  StoppingGame game;
  DistributionST opponent;   // Player 2's distribution stopping time
  MixedST opponent_mixed;    // a rearranged mixed representation of opponent
};

namespace detail {

inline Rational random_fraction(SplitMix64& rng, std::int64_t lo, std::int64_t hi, std::int64_t max_den) {
  const std::int64_t den = rng.between(1, max_den);
  return Rational(rng.between(lo, hi), den);
}

inline Partition random_split(SplitMix64& rng, const std::vector<std::size_t>& block) {
  const std::size_t parts = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(block.size())));
  Partition p(parts);
  for (std::size_t i : block) p[rng.below(parts)].push_back(i);
  std::erase_if(p, [](const auto& b) { return b.empty(); });
  return p;
}

inline FilteredSpace random_space(SplitMix64& rng, const Bounds& bounds) {
  const std::size_t n = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(bounds.max_outcomes)));
  const std::size_t T = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(bounds.max_grid_points)));

  std::vector<std::string> labels;
  std::vector<Rational> weights;
  Rational total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("w" + std::to_string(i + 1));
    weights.emplace_back(rng.between(1, 8));
    total += weights.back();
  }
  for (auto& w : weights) w /= total;

  std::vector<Rational> grid{0};
  for (std::size_t j = 1; j < T; ++j) grid.push_back(grid.back() + random_fraction(rng, 1, 8, 8));

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<Partition> partitions{random_split(rng, all)};
  for (std::size_t j = 1; j < T; ++j) {
    Partition next;
    for (const auto& block : partitions.back())
      for (auto& b : random_split(rng, block)) next.push_back(std::move(b));
    partitions.push_back(std::move(next));
  }
  return build_space(std::move(labels), std::move(weights), std::move(grid), std::move(partitions));
}

// Cumulative densities F(., j) drawn block-constant at each level, starting
// from the parent level's value and forced to 1 at the last level.
inline DistributionST random_distribution(SplitMix64& rng, const FilteredSpace& space, const Bounds& bounds) {
  const std::int64_t den = rng.between(1, static_cast<std::int64_t>(bounds.max_denominator));
  const std::size_t n = space.num_outcomes(), T = space.num_times();
  Table cdf(n, T);
  for (std::size_t j = 0; j < T; ++j) {
    for (const auto& block : space.partition(j)) {
      Rational value = 1;
      if (j + 1 < T) {
        const Rational floor = j == 0 ? Rational(0) : cdf(block.front(), j - 1);
        const Integer lo_num = boost::multiprecision::numerator(floor) * den /
                               boost::multiprecision::denominator(floor);
        const std::int64_t lo = lo_num.convert_to<std::int64_t>();
        // Favor flat stretches so ties and zero-length r-intervals show up.
        value = rng.chance(1, 4) ? floor : Rational(rng.between(lo, den), den);
        if (value < floor) value = floor;
      }
      for (std::size_t i : block) cdf(i, j) = value;
    }
  }
  DistributionST delta{Table(n, T)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < T; ++j)
      delta.mass(i, j) = space.prob(i) * (cdf(i, j) - (j == 0 ? Rational(0) : cdf(i, j - 1)));
  return delta;
}

inline PureST random_pure(SplitMix64& rng, const FilteredSpace& space) {
  const std::size_t m = space.last_index();
  std::vector<std::optional<std::size_t>> stop(space.num_outcomes());
  for (std::size_t j = 0; j < m; ++j)
    for (const auto& block : space.partition(j))
      if (!stop[block.front()] && rng.chance(1, 3))
        for (std::size_t i : block) stop[i] = j;
  PureST sigma;
  for (const auto& s : stop) sigma.stop.push_back(s.value_or(m));
  return sigma;
}

inline Process random_process(SplitMix64& rng, const FilteredSpace& space) {
  Process p{Table(space.num_outcomes(), space.num_times())};
  for (std::size_t i = 0; i < space.num_outcomes(); ++i)
    for (std::size_t j = 0; j < space.num_times(); ++j) p(i, j) = random_fraction(rng, -10, 10, 8);
  return p;
}

}  // namespace detail

// Cuts [0,1] at `cuts` and lays the resulting pieces of f end to end in the
// given order. The map r -> r' is a rearrangement of [0,1], so lambda of every
// level set of f is preserved.
inline RStepFunction rearrange(const RStepFunction& f, const std::vector<Rational>& cuts,
                               const std::vector<std::size_t>& order) {
  std::vector<Rational> edges{0};
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(1);
  std::vector<Rational> breaks{0};
  std::vector<std::size_t> values;
  for (std::size_t k : order) {
    const Rational& a = edges[k];
    const Rational& b = edges[k + 1];
    for (std::size_t p = 0; p < f.pieces(); ++p) {
      const Rational lo = std::max(a, f.breaks()[p]);
      const Rational hi = std::min(b, f.breaks()[p + 1]);
      if (lo >= hi) continue;
      breaks.push_back(breaks.back() + (hi - lo));
      values.push_back(f.values()[p]);
    }
  }
  return RStepFunction::make(std::move(breaks), std::move(values));
}

// Applies one random rearrangement per level-0 block, shared by all outcomes
// in the block so that measurability is preserved. Falls back to the input
// section when a rearranged one would exceed max_breaks.
inline MixedST random_rearrangement(SplitMix64& rng, const FilteredSpace& space, const MixedST& mu,
                                    std::size_t max_breaks) {
  MixedST out = mu;
  for (const auto& block : space.partition(0)) {
    std::vector<Rational> cuts;
    const std::size_t n_cuts = rng.below(3);
    for (std::size_t c = 0; c < n_cuts; ++c) {
      const std::int64_t den = rng.between(2, 8);
      cuts.emplace_back(rng.between(1, den - 1), den);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<std::size_t> order(cuts.size() + 1);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
    for (std::size_t i : block) {
      RStepFunction g = rearrange(mu.sections[i], cuts, order);
      if (g.pieces() - 1 <= max_breaks) out.sections[i] = std::move(g);
    }
  }
  return out;
}

// A copy of a valid mu with one section replaced by a random step function,
// such that the product-measurability test fails. Empty when no level has a
// block with two outcomes or when no attempt produced an invalid time.
inline std::optional<MixedST> mutate_invalid(SplitMix64& rng, const FilteredSpace& space, const MixedST& mu,
                                             std::size_t max_breaks, int attempts = 32) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < space.num_outcomes(); ++i)
    for (std::size_t j = 0; j < space.num_times(); ++j)
      if (atom_of(space, j, i).size() > 1) {
        candidates.push_back(i);
        break;
      }
  if (candidates.empty()) return std::nullopt;
  for (int a = 0; a < attempts; ++a) {
    MixedST out = mu;
    const std::size_t i = candidates[rng.below(candidates.size())];
    const std::size_t pieces = 1 + rng.below(std::min<std::size_t>(max_breaks, 4) + 1);
    std::vector<Rational> breaks{0};
    const std::int64_t den = static_cast<std::int64_t>(pieces) * 2;
    std::vector<std::int64_t> nums;
    for (std::int64_t k = 1; k < den; ++k) nums.push_back(k);
    for (std::size_t k = nums.size(); k > 1; --k) std::swap(nums[k - 1], nums[rng.below(k)]);
    nums.resize(pieces - 1);
    std::sort(nums.begin(), nums.end());
    for (auto k : nums) breaks.emplace_back(k, den);
    breaks.push_back(1);
    std::vector<std::size_t> values;
    for (std::size_t p = 0; p < pieces; ++p) values.push_back(rng.below(space.num_times()));
    out.sections[i] = RStepFunction::make(std::move(breaks), std::move(values));
    if (!check_mixed_product(space, out).empty()) return out;
  }
  return std::nullopt;
}

inline Instance random_instance(SplitMix64& rng, const Bounds& bounds) {
  bounds.check();
  FilteredSpace space = detail::random_space(rng, bounds);
  PureST pure = detail::random_pure(rng, space);
  DistributionST delta = detail::random_distribution(rng, space, bounds);
  RandomizedST rho = randomized_of_distribution(space, delta);
  MixedST canonical = mixed_of_randomized(space, rho);
  MixedST mixed = random_rearrangement(rng, space, canonical, bounds.max_breaks);
  Process reward = detail::random_process(rng, space);
  Process x = detail::random_process(rng, space);
  Process y = detail::random_process(rng, space);
  Process z = detail::random_process(rng, space);
  DistributionST opponent = detail::random_distribution(rng, space, bounds);
  MixedST opponent_mixed =
      random_rearrangement(rng, space, mixed_of_distribution(space, opponent), bounds.max_breaks);
  StoppingGame game(space, std::move(x), std::move(y), std::move(z));
  return Instance{std::move(space), std::move(pure),      std::move(delta),          std::move(rho),
                  std::move(canonical), std::move(mixed), std::move(reward),         std::move(game),
                  std::move(opponent), std::move(opponent_mixed)};
}

}  // namespace stoptime
