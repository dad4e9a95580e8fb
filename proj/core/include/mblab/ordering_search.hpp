#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mblab {

/// Value attached to a prefix set, given as a bitmask over 0..n-1.
/// Only called for nonempty proper subsets.
using PrefixObjective = std::function<double(std::uint32_t mask)>;

struct OrderingResult {
    double value = 0.0;
    std::vector<std::size_t> ordering;  // 0-based element indices
    bool exact = false;                 // false: heuristic upper bound
};

struct OrderingSearchOptions {
    std::size_t exact_cap = 8;       // exact search up to this many elements
    std::uint64_t seed = 0x5eed;     // heuristic swap order
    std::size_t max_rounds = 64;     // heuristic local-search passes
};

inline constexpr std::size_t kMaxExactElements = 24;

/// max over proper prefixes of f(prefix set) for one ordering.
double max_prefix_value(std::span<const std::size_t> ordering, const PrefixObjective& f);

/// Exact minimum over all n! orderings of max_prefix_value. The prefix
/// value depends only on the prefix set, so a dynamic program over the
/// 2^n subsets replaces the enumeration. Returns the lexicographically
/// smallest optimal ordering.
OrderingResult min_max_prefix_exact(std::size_t n, const PrefixObjective& f);

/// Greedy insertion followed by pairwise-swap local search.
OrderingResult min_max_prefix_heuristic(std::size_t n, const PrefixObjective& f,
                                        const OrderingSearchOptions& options = {});

/// Exact when n <= options.exact_cap, heuristic otherwise.
OrderingResult min_max_prefix(std::size_t n, const PrefixObjective& f,
                              const OrderingSearchOptions& options = {});

/// Visits every ordering of 0..n-1 in lexicographic order (n <= 10).
void for_each_ordering(std::size_t n,
                       const std::function<void(std::span<const std::size_t>)>& visit);

}  // namespace mblab
