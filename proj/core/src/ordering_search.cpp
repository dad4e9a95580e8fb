#include "mblab/ordering_search.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "mblab/error.hpp"

namespace mblab {

double max_prefix_value(std::span<const std::size_t> ordering, const PrefixObjective& f) {
    double worst = 0.0;
    std::uint32_t mask = 0;
    for (std::size_t k = 0; k + 1 < ordering.size(); ++k) {
        mask |= std::uint32_t{1} << ordering[k];
        worst = std::max(worst, f(mask));
    }
    return worst;
}

OrderingResult min_max_prefix_exact(std::size_t n, const PrefixObjective& f) {
    if (n == 0) return {0.0, {}, true};
    if (n > kMaxExactElements) {
        fail(ErrorCode::resource, "exact ordering search limited to " +
                                      std::to_string(kMaxExactElements) + " elements");
    }
    const std::uint32_t full = (n == 32) ? ~0u : ((std::uint32_t{1} << n) - 1);
    const std::size_t subsets = std::size_t{1} << n;

    std::vector<double> value(subsets, 0.0);
    for (std::uint32_t mask = 1; mask < full; ++mask) value[mask] = f(mask);

    // best[S]: smallest achievable max over the prefixes still to come once S is placed.
    std::vector<double> best(subsets, 0.0);
    for (std::uint32_t mask = full; mask-- > 0;) {
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < n; ++x) {
            const std::uint32_t bit = std::uint32_t{1} << x;
            if (mask & bit) continue;
            const std::uint32_t next = mask | bit;
            b = std::min(b, std::max(value[next], best[next]));
        }
        best[mask] = b;
    }

    OrderingResult result;
    result.exact = true;
    result.value = best[0];
    // Smallest element whose placement still admits an optimal completion.
    std::uint32_t mask = 0;
    while (mask != full) {
        for (std::size_t x = 0; x < n; ++x) {
            const std::uint32_t bit = std::uint32_t{1} << x;
            if (mask & bit) continue;
            const std::uint32_t next = mask | bit;
            if (std::max(value[next], best[next]) <= result.value) {
                result.ordering.push_back(x);
                mask = next;
                break;
            }
        }
    }
    return result;
}

OrderingResult min_max_prefix_heuristic(std::size_t n, const PrefixObjective& f,
                                        const OrderingSearchOptions& options) {
    if (n == 0) return {0.0, {}, false};
    if (n > 32) fail(ErrorCode::resource, "ordering search limited to 32 elements");

    std::unordered_map<std::uint32_t, double> cache;
    const std::uint32_t full = (n == 32) ? ~0u : ((std::uint32_t{1} << n) - 1);
    PrefixObjective cached = [&](std::uint32_t mask) {
        if (mask == full) return 0.0;
        auto it = cache.find(mask);
        if (it != cache.end()) return it->second;
        const double v = f(mask);
        cache.emplace(mask, v);
        return v;
    };

    // greedy insertion: extend the prefix by the element with the smallest prefix value
    std::vector<std::size_t> order;
    std::uint32_t mask = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        double pick_value = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < n; ++x) {
            const std::uint32_t bit = std::uint32_t{1} << x;
            if (mask & bit) continue;
            const double v = cached(mask | bit);
            if (v < pick_value) {
                pick_value = v;
                pick = x;
            }
        }
        order.push_back(pick);
        mask |= std::uint32_t{1} << pick;
    }

    double current = max_prefix_value(order, cached);
    std::vector<std::pair<std::size_t, std::size_t>> swaps;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) swaps.emplace_back(i, j);

    std::mt19937_64 rng(options.seed);
    for (std::size_t round = 0; round < options.max_rounds; ++round) {
        std::shuffle(swaps.begin(), swaps.end(), rng);
        bool improved = false;
        for (auto [i, j] : swaps) {
            std::swap(order[i], order[j]);
            const double candidate = max_prefix_value(order, cached);
            if (candidate < current) {
                current = candidate;
                improved = true;
            } else {
                std::swap(order[i], order[j]);
            }
        }
        if (!improved) break;
    }
    return {current, std::move(order), false};
}

OrderingResult min_max_prefix(std::size_t n, const PrefixObjective& f,
                              const OrderingSearchOptions& options) {
    if (n <= std::min(options.exact_cap, kMaxExactElements)) return min_max_prefix_exact(n, f);
    return min_max_prefix_heuristic(n, f, options);
}

void for_each_ordering(std::size_t n,
                       const std::function<void(std::span<const std::size_t>)>& visit) {
    if (n > 10) fail(ErrorCode::resource, "ordering enumeration limited to 10 elements");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    do {
        visit(order);
    } while (std::next_permutation(order.begin(), order.end()));
}

}  // namespace mblab
