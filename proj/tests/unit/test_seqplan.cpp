#include <gtest/gtest.h>

#include <cmath>

#include "mblab/error.hpp"
#include "mblab/seqplan.hpp"

using namespace mblab;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no mblab::Error thrown";
    return ErrorCode::io;
}

}  // namespace

TEST(EpsilonSequence, PartialSumsOfInverseSquares) {
    const auto eps = EpsilonSequence::power_law(1.0, 2.0);
    const auto s = partial_sums(eps, 3);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[0], 0.0);
    EXPECT_EQ(s[1], 1.0);
    EXPECT_EQ(s[2], 1.25);
    EXPECT_NEAR(s[3], 1.0 + 0.25 + 1.0 / 9.0, 1e-15);
}

TEST(EpsilonSequence, GeneratorsEvaluateOneBased) {
    EXPECT_EQ(EpsilonSequence::constant(0.5)(7), 0.5);
    EXPECT_NEAR(EpsilonSequence::power_law(1.0, 0.5)(4), 0.5, 1e-15);
    EXPECT_NEAR(EpsilonSequence::geometric(0.5, 0.5)(3), 0.125, 1e-15);
    const auto list = EpsilonSequence::explicit_list({0.1, 0.2});
    EXPECT_EQ(list(2), 0.2);
    EXPECT_EQ(list.length(), std::optional<std::size_t>(2));
    EXPECT_EQ(code_of([&] { list(3); }), ErrorCode::index_range);
    EXPECT_EQ(code_of([&] { list(0); }), ErrorCode::index_range);
}

TEST(EpsilonSequence, DomainErrorNamesTheIndex) {
    const auto eps = EpsilonSequence::explicit_list({0.5, 1.5});
    try {
        eps(2);
        FAIL() << "expected a domain error";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::domain);
        EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
    }
    EXPECT_EQ(code_of([] { EpsilonSequence::custom([](std::size_t) { return -0.1; })(1); }),
              ErrorCode::domain);
}

TEST(EpsilonSequence, GrowthHints) {
    EXPECT_EQ(EpsilonSequence::power_law(1.0, 0.5).growth_hint(), GrowthHint::holds);
    EXPECT_EQ(EpsilonSequence::power_law(1.0, 2.0).growth_hint(), GrowthHint::fails);
    EXPECT_EQ(EpsilonSequence::constant(0.25).growth_hint(), GrowthHint::holds);
    EXPECT_EQ(EpsilonSequence::explicit_list({0.5}).growth_hint(), GrowthHint::unknown);
}

TEST(PlanT2, ConstantHalfGivesStrictCuts) {
    const auto plan = plan_blocks_t2(EpsilonSequence::constant(0.5), 2);
    ASSERT_EQ(plan.block_count(), 2u);
    EXPECT_EQ(plan.last_index(1), 3u);
    EXPECT_EQ(plan.last_index(2), 8u);
    EXPECT_EQ(plan.mass[0], 1.5);
    EXPECT_EQ(plan.mass[1], 2.5);
    EXPECT_EQ(plan.first_index(2), 4u);
    EXPECT_EQ(plan.length(2), 5u);
}

TEST(PlanT2, MassesExceedTargetsAndIncrease) {
    for (const auto& eps : {EpsilonSequence::constant(0.5), EpsilonSequence::power_law(1.0, 0.5),
                            EpsilonSequence::constant(1.0)}) {
        const auto plan = plan_blocks_t2(eps, 10);
        for (std::size_t m = 1; m <= 10; ++m) {
            EXPECT_GT(plan.mass[m - 1], BlockPlan::target(m));
            if (m > 1) EXPECT_GT(plan.r(m), plan.r(m - 1));
        }
    }
}

TEST(PlanT2, MassMatchesPartialSums) {
    const auto eps = EpsilonSequence::power_law(1.0, 0.5);
    const auto plan = plan_blocks_t2(eps, 5);
    const auto s = partial_sums(eps, plan.cuts.back());
    for (std::size_t m = 1; m <= 5; ++m)
        EXPECT_EQ(plan.mass[m - 1], s[plan.cuts[m]] - s[plan.cuts[m - 1]]);
}

TEST(PlanT2, ConvergentSequenceHitsHorizon) {
    PlanOptions options;
    options.scan_horizon = 1000;
    EXPECT_EQ(code_of([&] { plan_blocks_t2(EpsilonSequence::power_law(1.0, 2.0), 2, options); }),
              ErrorCode::non_divergence);
    EXPECT_EQ(code_of([] { plan_blocks_t2(EpsilonSequence::explicit_list({0.9, 0.9, 0.9}), 3); }),
              ErrorCode::non_divergence);
}

TEST(PlanT4, QuarterConstantBlocks) {
    const auto plan = plan_blocks_t4(EpsilonSequence::constant(0.25), 3);
    EXPECT_EQ(plan.length(1), 32u);
    EXPECT_EQ(plan.length(2), 32u);
    EXPECT_EQ(plan.length(3), 36u);
    EXPECT_EQ(plan.root_sum(1), 16.0);
    EXPECT_NEAR(plan.root_mass(3), 3.0, 1e-12);
    EXPECT_EQ(plan.hypothesis, GrowthHint::holds);
}

TEST(PlanT4, RootMassReachesBlockIndex) {
    const auto plan = plan_blocks_t4(EpsilonSequence::power_law(1.0, 0.5), 12);
    for (std::size_t m = 1; m <= 12; ++m) {
        EXPECT_GE(plan.length(m), 32u);
        EXPECT_GE(plan.root_mass(m), static_cast<double>(m));
    }
}

TEST(PlanT4, RejectsZeroEntries) {
    EXPECT_EQ(code_of([] { plan_blocks_t4(EpsilonSequence::explicit_list({0.5, 0.0}), 1); }),
              ErrorCode::domain);
}

TEST(BlockPlan, OutOfRangeBlock) {
    const auto plan = plan_blocks_t2(EpsilonSequence::constant(0.5), 1);
    EXPECT_EQ(code_of([&] { plan.first_index(2); }), ErrorCode::index_range);
    EXPECT_EQ(code_of([&] { plan.first_index(0); }), ErrorCode::index_range);
}
