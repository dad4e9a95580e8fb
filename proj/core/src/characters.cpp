#include "mblab/characters.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>

#include "mblab/error.hpp"

namespace mblab {

CharacterSystem CharacterSystem::walsh(unsigned m) {
    if (m < 1 || m > kMaxRank) {
        fail(ErrorCode::resource, "Walsh rank " + std::to_string(m) + " outside 1.." +
                                      std::to_string(kMaxRank));
    }
    CharacterSystem sys;
    sys.rank_ = m;
    const std::size_t n = sys.size();
    sys.table_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < n; ++s)
            sys.table_[i * n + s] = (std::popcount(i & s) % 2 == 0) ? 1 : -1;
    sys.order_.resize(n);
    std::iota(sys.order_.begin(), sys.order_.end(), std::size_t{0});
    return sys;
}

CharacterSystem walsh_system(unsigned m) { return CharacterSystem::walsh(m); }

CharacterSystem CharacterSystem::reordered(std::vector<std::size_t> order) const {
    if (order.size() != size()) fail(ErrorCode::length_mismatch, "ordering has wrong length");
    std::vector<bool> seen(size(), false);
    for (std::size_t j : order) {
        if (j >= size() || seen[j]) fail(ErrorCode::domain, "ordering is not a permutation");
        seen[j] = true;
    }
    CharacterSystem copy = *this;
    copy.order_ = std::move(order);
    return copy;
}

CharacterSystem CharacterSystem::with_flipped_entry(std::size_t natural_row,
                                                    std::size_t s) const {
    if (natural_row >= size() || s >= size()) fail(ErrorCode::index_range, "entry out of range");
    CharacterSystem copy = *this;
    copy.table_[natural_row * size() + s] *= -1;
    return copy;
}

std::int64_t prefix_l1_numerator(const CharacterSystem& sys, std::size_t k) {
    if (k == 0 || k > sys.size()) {
        fail(ErrorCode::index_range, "prefix length " + std::to_string(k) + " outside 1.." +
                                         std::to_string(sys.size()));
    }
    std::int64_t total = 0;
    for (std::size_t s = 0; s < sys.size(); ++s) {
        std::int64_t v = 0;
        for (std::size_t j = 0; j < k; ++j) v += sys.value(j, s);
        total += std::abs(v);
    }
    return total;
}

double prefix_l1_norm(const CharacterSystem& sys, std::size_t k) {
    return std::ldexp(static_cast<double>(prefix_l1_numerator(sys, k)),
                      -static_cast<int>(sys.rank()));
}

std::vector<double> prefix_l1_profile(const CharacterSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<std::int64_t> running(n, 0);
    std::vector<double> profile;
    profile.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::int64_t total = 0;
        for (std::size_t s = 0; s < n; ++s) {
            running[s] += sys.value(k, s);
            total += std::abs(running[s]);
        }
        profile.push_back(std::ldexp(static_cast<double>(total), -static_cast<int>(sys.rank())));
    }
    return profile;
}

namespace {

// L1 norm of the sum of the characters at the given ordering positions.
double subset_l1(const CharacterSystem& sys, std::uint32_t mask) {
    std::int64_t total = 0;
    for (std::size_t s = 0; s < sys.size(); ++s) {
        std::int64_t v = 0;
        for (std::size_t j = 0; j < sys.size(); ++j)
            if (mask & (std::uint32_t{1} << j)) v += sys.value(j, s);
        total += std::abs(v);
    }
    return std::ldexp(static_cast<double>(total), -static_cast<int>(sys.rank()));
}

}  // namespace

CharacterOrdering min_max_prefix_l1(const CharacterSystem& sys,
                                    const OrderingSearchOptions& options) {
    const std::size_t n = sys.size();
    if (n > 32) fail(ErrorCode::resource, "ordering search limited to 2^5 characters");
    PrefixObjective objective = [&](std::uint32_t mask) { return subset_l1(sys, mask); };
    OrderingResult found = min_max_prefix(n, objective, options);

    CharacterOrdering out;
    out.exact = found.exact;
    // the full sum is the point mass at 0 and always has norm 1
    const std::uint32_t full = (n == 32) ? ~0u : ((std::uint32_t{1} << n) - 1);
    out.value = std::max(found.value, subset_l1(sys, full));
    for (std::size_t p : found.ordering) out.ordering.push_back(sys.natural_index(p));
    return out;
}

std::vector<OrderingRow> enumerate_prefix_orderings(const CharacterSystem& sys) {
    if (sys.size() > 8) fail(ErrorCode::resource, "ordering tables limited to 8 characters");
    std::vector<OrderingRow> rows;
    for_each_ordering(sys.size(), [&](std::span<const std::size_t> positions) {
        std::vector<std::size_t> natural;
        for (std::size_t p : positions) natural.push_back(sys.natural_index(p));
        const auto profile = prefix_l1_profile(sys.reordered(natural));
        rows.push_back({natural, *std::max_element(profile.begin(), profile.end())});
    });
    return rows;
}

double lp_norm(std::span<const std::int64_t> values, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorCode::domain, "p must lie in [1, inf)");
    const double count = static_cast<double>(values.size());
    if (p == 1.0 || p == 2.0) {
        std::int64_t total = 0;  // exact for both exponents
        for (std::int64_t v : values) total += (p == 1.0) ? std::abs(v) : v * v;
        const double mean = static_cast<double>(total) / count;
        return p == 1.0 ? mean : std::sqrt(mean);
    }
    double total = 0.0;
    for (std::int64_t v : values) total += std::pow(std::abs(static_cast<double>(v)), p);
    return std::pow(total / count, 1.0 / p);
}

double unconditionality_constant_lp(const CharacterSystem& sys, double p, std::size_t trials,
                                    std::uint64_t seed, const UnconditionalityOptions& options) {
    if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorCode::domain, "p must lie in [1, inf)");
    if (trials == 0) fail(ErrorCode::domain, "at least one trial is required");
    const std::size_t n = sys.size();

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coefficient(-options.coefficient_range,
                                                   options.coefficient_range);
    std::bernoulli_distribution coin(0.5);

    std::vector<std::int64_t> values(n);
    auto evaluate = [&](std::span<const std::int64_t> coeffs) {
        std::fill(values.begin(), values.end(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (coeffs[j] == 0) continue;
            const std::int8_t* row = sys.row(j);
            for (std::size_t s = 0; s < n; ++s) values[s] += coeffs[j] * row[s];
        }
        return lp_norm(values, p);
    };

    const bool exhaustive = n <= options.exhaustive_sign_limit;
    double best = 1.0;
    std::vector<std::int64_t> a(n);
    std::vector<std::int64_t> signed_a(n);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        do {
            for (auto& c : a) c = coefficient(rng);
        } while (std::all_of(a.begin(), a.end(), [](std::int64_t c) { return c == 0; }));
        const double base = evaluate(a);

        const std::size_t patterns = exhaustive ? (std::size_t{1} << n) : options.sampled_signs;
        for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
            for (std::size_t j = 0; j < n; ++j) {
                const bool negative = exhaustive ? ((pattern >> j) & 1U) != 0 : coin(rng);
                signed_a[j] = negative ? -a[j] : a[j];
            }
            best = std::max(best, evaluate(signed_a) / base);
        }
    }
    return best;
}

AuerbachL1Report auerbach_check_l1(const CharacterSystem& sys) {
    AuerbachL1Report report;
    const std::size_t n = sys.size();
    report.characters = n;
    const auto total = static_cast<std::int64_t>(n);

    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t l1 = 0;
        int sup = 0;
        for (std::size_t s = 0; s < n; ++s) {
            const int v = sys.value(i, s);
            l1 += std::abs(v);
            sup = std::max(sup, std::abs(v));
        }
        if (l1 != total) {
            report.l1_norms_one = false;
            report.failures.push_back("character " + std::to_string(i + 1) +
                                      ": L1 norm != 1");
        }
        if (sup != 1) {
            report.sup_norms_one = false;
            report.failures.push_back("character " + std::to_string(i + 1) +
                                      ": L-infinity norm != 1");
        }
    }

    std::vector<std::int32_t> row_i(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < n; ++s) row_i[s] = sys.value(i, s);
        for (std::size_t j = i; j < n; ++j) {
            const std::int8_t* row_j = sys.row(j);
            std::int32_t dot = 0;  // |dot| <= 2^12
            for (std::size_t s = 0; s < n; ++s) dot += row_i[s] * row_j[s];
            const std::int64_t expected = (i == j) ? total : 0;
            if (dot != expected) {
                report.biorthogonal = false;
                if (report.failures.size() < 32) {
                    report.failures.push_back("<chi_" + std::to_string(i + 1) + ", chi_" +
                                              std::to_string(j + 1) + "> = " +
                                              std::to_string(dot) + "/" + std::to_string(n));
                }
            }
        }
    }
    return report;
}

}  // namespace mblab
