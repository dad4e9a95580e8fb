#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "mblab/ordering_search.hpp"

using namespace mblab;

namespace {

// Random prefix-set objective with a fixed value per mask.
PrefixObjective random_objective(std::size_t n, std::uint64_t seed, int levels) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> u(0, levels);
    auto table = std::make_shared<std::vector<double>>(std::size_t{1} << n);
    for (auto& v : *table) v = u(rng);
    return [table](std::uint32_t mask) { return (*table)[mask]; };
}

}  // namespace

TEST(OrderingSearch, ExactMatchesEnumeration) {
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            // Few levels force ties, exercising the lexicographic choice.
            const auto f = random_objective(n, seed * 31 + n, 3);
            double best = 1e300;
            std::vector<std::size_t> best_order;
            for_each_ordering(n, [&](std::span<const std::size_t> order) {
                const double v = max_prefix_value(order, f);
                if (v < best) {
                    best = v;
                    best_order.assign(order.begin(), order.end());
                }
            });
            const auto exact = min_max_prefix_exact(n, f);
            EXPECT_TRUE(exact.exact);
            EXPECT_EQ(exact.value, best);
            EXPECT_EQ(exact.ordering, best_order);
            EXPECT_EQ(max_prefix_value(exact.ordering, f), exact.value);
        }
    }
}

TEST(OrderingSearch, HeuristicIsAnUpperBound) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto f = random_objective(8, seed, 100);
        const auto exact = min_max_prefix_exact(8, f);
        OrderingSearchOptions options;
        options.seed = seed;
        const auto heuristic = min_max_prefix_heuristic(8, f, options);
        EXPECT_FALSE(heuristic.exact);
        EXPECT_GE(heuristic.value, exact.value);
        EXPECT_EQ(max_prefix_value(heuristic.ordering, f), heuristic.value);
        auto sorted = heuristic.ordering;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(sorted[k], k);
    }
}

TEST(OrderingSearch, DispatchRespectsCap) {
    const auto f = random_objective(5, 9, 10);
    OrderingSearchOptions options;
    options.exact_cap = 4;
    EXPECT_FALSE(min_max_prefix(5, f, options).exact);
    options.exact_cap = 5;
    EXPECT_TRUE(min_max_prefix(5, f, options).exact);
}

TEST(OrderingSearch, ProperPrefixesOnly) {
    std::vector<std::uint32_t> seen;
    const PrefixObjective f = [&](std::uint32_t mask) {
        seen.push_back(mask);
        return 0.0;
    };
    const std::vector<std::size_t> order{2, 0, 1};
    max_prefix_value(order, f);
    EXPECT_EQ(seen, (std::vector<std::uint32_t>{0b100, 0b101}));
}

TEST(OrderingSearch, EnumerationCount) {
    std::size_t count = 0;
    for_each_ordering(5, [&](std::span<const std::size_t>) { ++count; });
    EXPECT_EQ(count, 120u);
}
