#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mblab/characters.hpp"
#include "mblab/error.hpp"
#include "oracles.hpp"

using namespace mblab;

TEST(Walsh, MatchesBitProductOracle) {
    for (unsigned m = 1; m <= 6; ++m) {
        const auto sys = walsh_system(m);
        for (std::size_t i = 0; i < sys.size(); ++i)
            for (std::size_t s = 0; s < sys.size(); ++s)
                ASSERT_EQ(sys.value(i, s), oracle::walsh(i, s, m));
    }
}

TEST(Walsh, RankLimits) {
    EXPECT_THROW(walsh_system(0), Error);
    EXPECT_THROW(walsh_system(13), Error);
    EXPECT_EQ(walsh_system(12).size(), 4096u);
}

TEST(Walsh, NaturalPrefixProfiles) {
    EXPECT_EQ(prefix_l1_profile(walsh_system(2)), (std::vector<double>{1, 1, 1.5, 1}));
    EXPECT_EQ(prefix_l1_profile(walsh_system(3)),
              (std::vector<double>{1, 1, 1.5, 1, 1.75, 1.5, 1.75, 1}));
    EXPECT_EQ(prefix_l1_numerator(walsh_system(2), 3), 6);
    std::vector<std::size_t> natural(16);
    std::iota(natural.begin(), natural.end(), std::size_t{0});
    const auto sys = walsh_system(4);
    for (std::size_t k = 1; k <= 16; ++k)
        EXPECT_EQ(prefix_l1_norm(sys, k), oracle::walsh_prefix_l1(natural, k, 4));
    EXPECT_THROW(prefix_l1_norm(sys, 0), Error);
    EXPECT_THROW(prefix_l1_norm(sys, 17), Error);
}

TEST(Walsh, ReorderedProfiles) {
    const std::vector<std::size_t> order{3, 1, 0, 2};
    const auto sys = walsh_system(2).reordered(order);
    for (std::size_t k = 1; k <= 4; ++k)
        EXPECT_EQ(prefix_l1_norm(sys, k), oracle::walsh_prefix_l1(order, k, 2));
    EXPECT_THROW(walsh_system(2).reordered({0, 0, 1, 2}), Error);
}

TEST(Walsh, MinMaxPrefixExhaustive) {
    const double expected[] = {1.0, 1.5, 1.75};
    for (unsigned m = 1; m <= 3; ++m) {
        const auto best = min_max_prefix_l1(walsh_system(m));
        EXPECT_TRUE(best.exact);
        EXPECT_EQ(best.value, expected[m - 1]);
        EXPECT_EQ(best.value, oracle::walsh_min_max_prefix(m));
        double worst = 0.0;
        for (std::size_t k = 1; k <= best.ordering.size(); ++k)
            worst = std::max(worst, oracle::walsh_prefix_l1(best.ordering, k, m));
        EXPECT_EQ(worst, best.value);
    }
}

TEST(Walsh, OrderingTable) {
    const auto rows = enumerate_prefix_orderings(walsh_system(2));
    ASSERT_EQ(rows.size(), 24u);
    double lowest = 1e300;
    for (const auto& r : rows) {
        lowest = std::min(lowest, r.max_prefix_l1);
        double worst = 0.0;
        for (std::size_t k = 1; k <= 4; ++k)
            worst = std::max(worst, oracle::walsh_prefix_l1(r.ordering, k, 2));
        EXPECT_EQ(worst, r.max_prefix_l1);
    }
    EXPECT_EQ(lowest, 1.5);
    EXPECT_THROW(enumerate_prefix_orderings(walsh_system(4)), Error);
}

TEST(Walsh, AuerbachExact) {
    for (unsigned m = 1; m <= 8; ++m) EXPECT_TRUE(auerbach_check_l1(walsh_system(m)).passed());
}

TEST(Walsh, FlippedEntryBreaksOrthogonality) {
    const auto report = auerbach_check_l1(walsh_system(3).with_flipped_entry(5, 2));
    EXPECT_FALSE(report.passed());
    EXPECT_FALSE(report.biorthogonal);
}

TEST(Walsh, LpNorms) {
    const std::vector<std::int64_t> v{1, -1, 3, -3};
    EXPECT_EQ(lp_norm(v, 1.0), 2.0);
    EXPECT_EQ(lp_norm(v, 2.0), std::sqrt(5.0));
    EXPECT_NEAR(lp_norm(v, 4.0), std::pow(41.0, 0.25), 1e-15);
    EXPECT_THROW(lp_norm(v, 0.5), Error);
}

TEST(Walsh, UnconditionalityInL2IsOne) {
    for (unsigned m = 1; m <= 5; ++m)
        EXPECT_EQ(unconditionality_constant_lp(walsh_system(m), 2.0, 20, m), 1.0);
}

TEST(Walsh, UnconditionalityLowerBounds) {
    const auto sys = walsh_system(3);
    const double a = unconditionality_constant_lp(sys, 1.0, 20, 5);
    EXPECT_GE(a, 1.0);
    EXPECT_EQ(a, unconditionality_constant_lp(sys, 1.0, 20, 5));
    EXPECT_GT(unconditionality_constant_lp(sys, 4.0, 20, 5), 1.0);
    EXPECT_THROW(unconditionality_constant_lp(sys, 2.0, 0, 5), Error);
}
