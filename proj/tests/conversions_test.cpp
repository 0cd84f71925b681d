#include "oracle.hpp"
#include "stoptime/conversions.hpp"
#include "stoptime/fixtures.hpp"
#include "stoptime/fuzz.hpp"

#include <gtest/gtest.h>

namespace stoptime {
namespace {

using fixtures::two_outcome_space;

// Three outcomes, four grid points, discrete filtration.
FilteredSpace three_by_four() {
  Partition fine{{0}, {1}, {2}};
  return build_space({"a", "b", "c"}, {Rational(1, 2), Rational(1, 3), Rational(1, 6)},
                     {0, 1, 2, 3}, {fine, fine, fine, fine});
}

RandomizedST linear_ramp(const FilteredSpace& s) {
  const std::size_t m = s.last_index();
  RandomizedST rho{Table(s.num_outcomes(), s.num_times())};
  for (std::size_t i = 0; i < s.num_outcomes(); ++i)
    for (std::size_t j = 0; j <= m; ++j) rho.paths(i, j) = Rational(j + 1, m + 1);
  return rho;
}

std::vector<Instance> fuzzed(std::size_t count, std::uint64_t base = 100) {
  std::vector<Instance> out;
  for (std::uint64_t k = 0; k < count; ++k) {
    SplitMix64 rng = SplitMix64::stream(base, k);
    out.push_back(random_instance(rng, Bounds{}));
  }
  return out;
}

TEST(DeltaOfMixed, SplitAndFlippedGiveUniform) {
  const FilteredSpace s = two_outcome_space();
  EXPECT_EQ(delta_of_mixed(s, fixtures::split_mixed()), fixtures::uniform_distribution());
  EXPECT_EQ(delta_of_mixed(s, fixtures::flipped_mixed()), fixtures::uniform_distribution());
  EXPECT_NE(fixtures::split_mixed(), fixtures::flipped_mixed());
}

TEST(DeltaOfMixed, EmbeddedPureGivesPointMasses) {
  const FilteredSpace s = two_outcome_space();
  const DistributionST d = delta_of_mixed(s, embed_pure(PureST{{0, 1}}));
  EXPECT_EQ(d.mass(0, 0), Rational(1, 2));
  EXPECT_EQ(d.mass(0, 1), 0);
  EXPECT_EQ(d.mass(1, 0), 0);
  EXPECT_EQ(d.mass(1, 1), Rational(1, 2));
}

TEST(DeltaOfMixed, MatchesEnumerationOracle) {
  for (const auto& inst : fuzzed(60)) {
    EXPECT_EQ(delta_of_mixed(inst.space, inst.mixed), oracle::delta_of_mixed(inst.space, inst.mixed));
    EXPECT_EQ(delta_of_mixed(inst.space, inst.mixed_canonical), inst.distribution);
  }
}

TEST(DeltaOfMixed, RejectsInvalidInput) {
  EXPECT_THROW(delta_of_mixed(two_outcome_space(true), fixtures::flipped_mixed()), ValidationError);
}

TEST(DeltaOfRandomized, Examples) {
  const FilteredSpace s = two_outcome_space();
  const DistributionST at_zero = delta_of_randomized(s, RandomizedST{Table(2, 2, 1)});
  EXPECT_EQ(at_zero.mass(0, 0), Rational(1, 2));
  EXPECT_EQ(at_zero.mass(1, 1), 0);
  EXPECT_EQ(delta_of_randomized(s, fixtures::half_randomized()), fixtures::uniform_distribution());
}

TEST(DeltaOfRandomized, LinearRampIsUniformOverGrid) {
  const FilteredSpace s = three_by_four();
  const DistributionST d = delta_of_randomized(s, linear_ramp(s));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(d.mass(i, j), s.prob(i) / 4);
}

TEST(RandomizedOfDistribution, Examples) {
  const FilteredSpace s = two_outcome_space();
  EXPECT_EQ(randomized_of_distribution(s, fixtures::uniform_distribution()), fixtures::half_randomized());

  DistributionST terminal{Table(2, 2)};
  terminal.mass(0, 1) = terminal.mass(1, 1) = Rational(1, 2);
  const RandomizedST rho = randomized_of_distribution(s, terminal);
  EXPECT_EQ(rho.paths(0, 0), 0);
  EXPECT_EQ(rho.paths(1, 1), 1);

  const FilteredSpace g = three_by_four();
  DistributionST flat{Table(3, 4)};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) flat.mass(i, j) = g.prob(i) / 4;
  EXPECT_EQ(randomized_of_distribution(g, flat), linear_ramp(g));
}

TEST(MixedOfRandomized, HalfPathSplitsAtOneHalf) {
  const MixedST mu = mixed_of_randomized(two_outcome_space(), fixtures::half_randomized());
  EXPECT_EQ(mu, fixtures::split_mixed());
  EXPECT_EQ(mixed_of_randomized(two_outcome_space(), RandomizedST{Table(2, 2, 1)}).sections[0],
            RStepFunction::constant(0));
}

TEST(MixedOfRandomized, ThirdsOnHalfGrid) {
  const FilteredSpace s = build_space({"w"}, {1}, {0, Rational(1, 2), 1}, {{{0}}, {{0}}, {{0}}});
  RandomizedST rho{Table(1, 3)};
  rho.paths(0, 0) = Rational(1, 3);
  rho.paths(0, 1) = Rational(2, 3);
  rho.paths(0, 2) = 1;
  const MixedST mu = mixed_of_randomized(s, rho);
  const std::vector<Rational> path{rho.paths(0, 0), rho.paths(0, 1), rho.paths(0, 2)};
  const Rational expected = oracle::generalized_inverse_cdf(path, 1);
  ASSERT_EQ(expected, Rational(2, 3));
  EXPECT_EQ(cdf_of_mixed(s, mu, 0, 1), expected);
  EXPECT_TRUE(equivalent(s, rho, mu));
}

TEST(MixedOfRandomized, FlatStretchesProduceNoPieces) {
  const FilteredSpace s = three_by_four();
  RandomizedST rho{Table(3, 4)};
  for (std::size_t i = 0; i < 3; ++i) {
    rho.paths(i, 0) = 0;
    rho.paths(i, 1) = Rational(1, 2);
    rho.paths(i, 2) = Rational(1, 2);
    rho.paths(i, 3) = 1;
  }
  const MixedST mu = mixed_of_randomized(s, rho);
  EXPECT_EQ(mu.sections[0].values(), (std::vector<std::size_t>{1, 3}));
}

TEST(MixedOfRandomized, CdfMatchesGeneralizedInverseOracle) {
  for (const auto& inst : fuzzed(60)) {
    const MixedST mu = mixed_of_randomized(inst.space, inst.randomized);
    for (std::size_t i = 0; i < inst.space.num_outcomes(); ++i) {
      const auto row = inst.randomized.paths.row(i);
      const std::vector<Rational> path(row.begin(), row.end());
      for (std::size_t j = 0; j < inst.space.num_times(); ++j) {
        EXPECT_EQ(cdf_of_mixed(inst.space, mu, i, j), oracle::generalized_inverse_cdf(path, j));
        EXPECT_EQ(cdf_of_mixed(inst.space, mu, i, j), inst.randomized.paths(i, j));
      }
    }
  }
}

TEST(MixedOfDistribution, Examples) {
  const FilteredSpace s = two_outcome_space();
  EXPECT_EQ(mixed_of_distribution(s, fixtures::uniform_distribution()), fixtures::split_mixed());
  DistributionST terminal{Table(2, 2)};
  terminal.mass(0, 1) = terminal.mass(1, 1) = Rational(1, 2);
  EXPECT_EQ(mixed_of_distribution(s, terminal).sections[1], RStepFunction::constant(1));
}

TEST(MixedOfDistribution, RoundTripsOnFuzzedInstances) {
  for (const auto& inst : fuzzed(60, 7)) {
    const MixedST mu = mixed_of_distribution(inst.space, inst.distribution);
    EXPECT_TRUE(validate_mixed(inst.space, mu).empty());
    EXPECT_EQ(delta_of_mixed(inst.space, mu), inst.distribution);
  }
}

TEST(Equivalent, Examples) {
  const FilteredSpace s = two_outcome_space();
  EXPECT_TRUE(equivalent(s, fixtures::split_mixed(), fixtures::flipped_mixed()));
  EXPECT_TRUE(equivalent(s, fixtures::flipped_mixed(), fixtures::flipped_mixed()));
  EXPECT_TRUE(equivalent(s, fixtures::split_mixed(), fixtures::half_randomized()));

  RandomizedST third = fixtures::half_randomized();
  third.paths(0, 0) = third.paths(1, 0) = Rational(1, 3);
  const Equivalence eq = equivalent(s, fixtures::split_mixed(), third);
  EXPECT_FALSE(eq);
  ASSERT_TRUE(eq.witness);
  EXPECT_EQ(eq.witness->outcome, 0u);
  EXPECT_EQ(eq.witness->level, 0u);
  EXPECT_EQ(eq.witness->first, Rational(1, 4));
  EXPECT_EQ(eq.witness->second, Rational(1, 6));
}

TEST(Equivalent, PureEntersThroughEmbedding) {
  const FilteredSpace s = two_outcome_space();
  DistributionST d{Table(2, 2)};
  d.mass(0, 0) = d.mass(1, 1) = Rational(1, 2);
  EXPECT_TRUE(equivalent(s, PureST{{0, 1}}, d));
  EXPECT_FALSE(equivalent(s, PureST{{0, 1}}, PureST{{1, 1}}));
}

TEST(Equivalent, IncompatibleShapes) {
  EXPECT_THROW(equivalent(two_outcome_space(), PureST{{0}}, PureST{{0, 1}}), IncompatibleSpaces);
  EXPECT_THROW(equivalent(three_by_four(), fixtures::half_randomized(), fixtures::half_randomized()),
               IncompatibleSpaces);
}

TEST(Equivalent, UniquenessOfRandomizedRepresentative) {
  for (const auto& inst : fuzzed(40, 11)) {
    const RandomizedST a = randomized_of_distribution(inst.space, delta_of_mixed(inst.space, inst.mixed));
    ASSERT_EQ(delta_of_randomized(inst.space, a), delta_of_randomized(inst.space, inst.randomized));
    EXPECT_EQ(a, inst.randomized);
  }
}

TEST(CdfOfMixed, Examples) {
  const FilteredSpace s = two_outcome_space();
  EXPECT_EQ(cdf_of_mixed(s, fixtures::split_mixed(), 0, 0), Rational(1, 2));
  EXPECT_EQ(cdf_of_mixed(s, fixtures::split_mixed(), 1, 1), 1);
  EXPECT_EQ(cdf_of_mixed(s, fixtures::flipped_mixed(), 1, 0), Rational(1, 2));
  EXPECT_EQ(oracle::cdf(fixtures::flipped_mixed(), 1, 0), Rational(1, 2));
  EXPECT_THROW(cdf_of_mixed(s, fixtures::split_mixed(), 0, 2), IndexOutOfRange);
}

TEST(CdfOfMixed, EqualsDensityOfInducedDistribution) {
  for (const auto& inst : fuzzed(40, 3)) {
    const DistributionST d = delta_of_mixed(inst.space, inst.mixed);
    for (std::size_t j = 0; j < inst.space.num_times(); ++j) {
      const auto f = rn_derivative(inst.space, d, j);
      for (std::size_t i = 0; i < inst.space.num_outcomes(); ++i) {
        EXPECT_EQ(f[i], cdf_of_mixed(inst.space, inst.mixed, i, j));
        EXPECT_EQ(f[i], oracle::cdf(inst.mixed, i, j));
      }
    }
  }
}

TEST(Rearrange, PreservesLawAndChangesSections) {
  const auto f = RStepFunction::make({0, Rational(1, 3), 1}, {0, 2});
  const auto g = rearrange(f, {Rational(1, 2)}, {1, 0});
  EXPECT_EQ(g.mass_at(0), f.mass_at(0));
  EXPECT_EQ(g.mass_at(2), f.mass_at(2));
  EXPECT_EQ(g.values(), (std::vector<std::size_t>{2, 0, 2}));
}

}  // namespace
}  // namespace stoptime
