#include "oracle.hpp"
#include "stoptime/fixtures.hpp"
#include "stoptime/fuzz.hpp"
#include "stoptime/stopping_times.hpp"

#include <gtest/gtest.h>

namespace stoptime {
namespace {

using fixtures::flipped_mixed;
using fixtures::split_mixed;
using fixtures::two_outcome_space;

TEST(RStepFunction, CanonicalizesAdjacentEqualValues) {
  const auto f = RStepFunction::make({0, Rational(1, 4), Rational(1, 2), 1}, {2, 2, 0});
  EXPECT_EQ(f.pieces(), 2u);
  EXPECT_EQ(f.breaks(), (std::vector<Rational>{0, Rational(1, 2), 1}));
  EXPECT_EQ(f, RStepFunction::make({0, Rational(1, 2), 1}, {2, 0}));
}

TEST(RStepFunction, HalfOpenPiecesWithOneInLastPiece) {
  const auto f = RStepFunction::make({0, Rational(1, 2), 1}, {0, 1});
  EXPECT_EQ(f.at(Rational(0)), 0u);
  EXPECT_EQ(f.at(Rational(3, 10)), 0u);
  EXPECT_EQ(f.at(Rational(1, 2)), 1u);
  EXPECT_EQ(f.at(Rational(1)), 1u);
  EXPECT_EQ(f.at(0.3), 0u);
  EXPECT_EQ(f.at(0.5), 1u);
}

TEST(RStepFunction, RejectsMalformedBreaks) {
  EXPECT_THROW(RStepFunction::make({0, 1}, {}), ValidationError);
  EXPECT_THROW(RStepFunction::make({0, Rational(1, 2)}, {0}), ValidationError);
  EXPECT_THROW(RStepFunction::make({0, Rational(1, 2), Rational(1, 2), 1}, {0, 1, 0}), ValidationError);
  EXPECT_THROW(RStepFunction::make({0, 1, 1}, {0}), ValidationError);
}

TEST(ValidatePure, ConstantTerminalTimeIsValid) {
  for (bool coarse : {false, true})
    EXPECT_TRUE(validate_pure(two_outcome_space(coarse), PureST{{1, 1}}).empty());
}

TEST(ValidatePure, SplitStopNeedsSeparatingF0) {
  EXPECT_TRUE(validate_pure(two_outcome_space(), PureST{{0, 1}}).empty());
  const Report r = validate_pure(two_outcome_space(true), PureST{{0, 1}});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].kind, ViolationKind::NotStoppingTime);
  EXPECT_EQ(r[0].level, 0u);
}

TEST(ValidatePure, OutOfRangeIndex) {
  EXPECT_TRUE(has(validate_pure(two_outcome_space(), PureST{{0, 2}}), ViolationKind::IndexOutOfRange));
  EXPECT_TRUE(has(validate_pure(two_outcome_space(), PureST{{0}}), ViolationKind::ShapeMismatch));
}

TEST(ValidateMixed, SplitAndFlippedAreValidWhenF0Separates) {
  EXPECT_TRUE(validate_mixed(two_outcome_space(), split_mixed()).empty());
  EXPECT_TRUE(validate_mixed(two_outcome_space(), flipped_mixed()).empty());
  EXPECT_TRUE(validate_mixed(two_outcome_space(true), split_mixed()).empty());
}

TEST(ValidateMixed, FlippedFailsOnCoarseF0) {
  const FilteredSpace coarse = two_outcome_space(true);
  const MixedST mu = flipped_mixed();
  // Oracle: lambda([0,1/2) symmetric-difference [1/2,1]) by enumeration.
  const Rational sym_diff = oracle::integrate(oracle::cuts({&mu}), [&](const Rational& r) {
    return Rational((mu.sections[0].at(r) <= 0) != (mu.sections[1].at(r) <= 0) ? 1 : 0);
  });
  ASSERT_EQ(sym_diff, 1);

  const Report product = check_mixed_product(coarse, mu);
  ASSERT_EQ(product.size(), 1u);
  EXPECT_EQ(product[0].kind, ViolationKind::NotMeasurable);
  EXPECT_EQ(product[0].level, 0u);
  EXPECT_NE(product[0].detail.find("is 1"), std::string::npos);
  EXPECT_EQ(check_mixed_sectionwise(coarse, mu).size(), 1u);
  EXPECT_EQ(validate_mixed(coarse, mu).size(), 1u);
}

TEST(ValidateMixed, NullDifferencesAreIgnored) {
  // Sections agree except on the point r = 1/2, which is lambda-null.
  const FilteredSpace coarse = two_outcome_space(true);
  const MixedST mu{{RStepFunction::make({0, Rational(1, 2), 1}, {0, 1}),
                    RStepFunction::make({0, Rational(1, 2), 1}, {0, 1})}};
  EXPECT_TRUE(validate_mixed(coarse, mu).empty());
}

TEST(ValidateMixed, ValueOutOfGrid) {
  const MixedST mu{{RStepFunction::constant(0), RStepFunction::constant(4)}};
  EXPECT_TRUE(has(validate_mixed(two_outcome_space(), mu), ViolationKind::IndexOutOfRange));
}

TEST(ValidateMixed, SectionwiseAndProductTestsAgreeOnFuzzedTimes) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    SplitMix64 rng(seed);
    const Instance inst = random_instance(rng, Bounds{});
    auto sites = [](const Report& r) {
      std::vector<std::pair<std::size_t, std::vector<std::size_t>>> out;
      for (const auto& v : r) out.emplace_back(*v.level, v.outcomes);
      std::sort(out.begin(), out.end());
      return out;
    };
    EXPECT_TRUE(check_mixed_product(inst.space, inst.mixed).empty());
    EXPECT_TRUE(check_mixed_sectionwise(inst.space, inst.mixed).empty());
    if (auto bad = mutate_invalid(rng, inst.space, inst.mixed, 8)) {
      const Report a = check_mixed_product(inst.space, *bad);
      const Report b = check_mixed_sectionwise(inst.space, *bad);
      EXPECT_FALSE(a.empty());
      EXPECT_EQ(sites(a), sites(b)) << "seed " << seed;
    }
  }
}

TEST(ValidateRandomized, Examples) {
  const FilteredSpace s = two_outcome_space();
  EXPECT_TRUE(validate_randomized(s, RandomizedST{Table(2, 2, 1)}).empty());
  EXPECT_TRUE(validate_randomized(s, fixtures::half_randomized()).empty());

  RandomizedST decreasing{Table(2, 2, 1)};
  decreasing.paths(0, 1) = Rational(1, 2);
  const Report r = validate_randomized(s, decreasing);
  EXPECT_TRUE(has(r, ViolationKind::NotMonotone));
  EXPECT_TRUE(has(r, ViolationKind::TerminalNotOne));
}

TEST(ValidateRandomized, AdaptednessAndRange) {
  RandomizedST rho = fixtures::half_randomized();
  rho.paths(1, 0) = Rational(1, 3);
  EXPECT_TRUE(validate_randomized(two_outcome_space(), rho).empty());
  EXPECT_TRUE(has(validate_randomized(two_outcome_space(true), rho), ViolationKind::NotAdapted));
  rho.paths(1, 0) = -1;
  EXPECT_TRUE(has(validate_randomized(two_outcome_space(), rho), ViolationKind::ValueOutOfRange));
}

TEST(ValidateDistribution, Examples) {
  const FilteredSpace s = two_outcome_space();
  EXPECT_TRUE(validate_distribution(s, fixtures::uniform_distribution()).empty());

  DistributionST terminal{Table(2, 2)};
  terminal.mass(0, 1) = terminal.mass(1, 1) = Rational(1, 2);
  EXPECT_TRUE(validate_distribution(two_outcome_space(true), terminal).empty());

  // F(w1, 0) = 1 but F(w2, 0) = 0 inside the coarse block.
  DistributionST split{Table(2, 2)};
  split.mass(0, 0) = Rational(1, 2);
  split.mass(1, 1) = Rational(1, 2);
  const Report r = validate_distribution(two_outcome_space(true), split);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].kind, ViolationKind::DensityNotAdapted);
  EXPECT_EQ(r[0].level, 0u);
  EXPECT_EQ(r[0].outcomes, (std::vector<std::size_t>{0, 1}));
}

TEST(ValidateDistribution, MarginalAndSign) {
  DistributionST d = fixtures::uniform_distribution();
  d.mass(0, 0) = Rational(1, 2);
  EXPECT_TRUE(has(validate_distribution(two_outcome_space(), d), ViolationKind::MarginalMismatch));
  d.mass(0, 0) = Rational(-1, 4);
  d.mass(0, 1) = Rational(3, 4);
  EXPECT_TRUE(has(validate_distribution(two_outcome_space(), d), ViolationKind::NegativeMass));
}

TEST(EmbedPure, ConstantSections) {
  const MixedST zero = embed_pure(PureST{{0, 0}});
  for (const auto& s : zero.sections) EXPECT_EQ(s, RStepFunction::constant(0));
  const MixedST split = embed_pure(PureST{{0, 1}});
  EXPECT_EQ(split.sections[1], RStepFunction::constant(1));
  EXPECT_TRUE(validate_mixed(two_outcome_space(), split).empty());
}

TEST(EmbedPure, ValidPureEmbedsToValidMixed) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SplitMix64 rng(seed);
    const Instance inst = random_instance(rng, Bounds{});
    ASSERT_TRUE(validate_pure(inst.space, inst.pure).empty());
    EXPECT_TRUE(validate_mixed(inst.space, embed_pure(inst.pure)).empty());
  }
}

TEST(RnDerivative, Examples) {
  const FilteredSpace s = two_outcome_space();
  const DistributionST u = fixtures::uniform_distribution();
  EXPECT_EQ(rn_derivative(s, u, 0), (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(rn_derivative(s, u, 1), (std::vector<Rational>{1, 1}));
  EXPECT_EQ(sub_measure(s, u, 0).mass, (std::vector<Rational>{Rational(1, 4), Rational(1, 4)}));

  DistributionST terminal{Table(2, 2)};
  terminal.mass(0, 1) = terminal.mass(1, 1) = Rational(1, 2);
  EXPECT_EQ(rn_derivative(s, terminal, 0), (std::vector<Rational>{0, 0}));
}

TEST(RnDerivative, MonotoneBlockConstantAndOneAtHorizon) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SplitMix64 rng(seed);
    const Instance inst = random_instance(rng, Bounds{});
    const FilteredSpace& s = inst.space;
    std::vector<Rational> prev(s.num_outcomes(), 0);
    for (std::size_t j = 0; j < s.num_times(); ++j) {
      const auto f = rn_derivative(s, inst.distribution, j);
      for (std::size_t i = 0; i < s.num_outcomes(); ++i) {
        EXPECT_GE(f[i], prev[i]);
        EXPECT_EQ(f[i], f[atom_of(s, j, i).front()]);
      }
      prev = f;
    }
    for (const auto& v : prev) EXPECT_EQ(v, 1);
  }
}

}  // namespace
}  // namespace stoptime
