#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mblab/ordering_search.hpp"

namespace mblab {

/// The 2^m characters of Z_2^m as +-1 rows; row i of the natural order is
/// s -> (-1)^{popcount(i & s)}. All norms use the normalized counting
/// measure and are computed exactly from integer sums.
class CharacterSystem {
public:
    static constexpr unsigned kMaxRank = 12;

    static CharacterSystem walsh(unsigned m);

    unsigned rank() const noexcept { return rank_; }
    std::size_t size() const noexcept { return std::size_t{1} << rank_; }

    /// Value of the j-th character in the current ordering at the point s.
    int value(std::size_t j, std::size_t s) const {
        return table_[order_[j] * size() + s];
    }
    /// Values of the j-th character in the current ordering, indexed by s.
    const std::int8_t* row(std::size_t j) const { return table_.data() + order_[j] * size(); }
    /// Natural row index of the j-th character in the current ordering.
    std::size_t natural_index(std::size_t j) const { return order_[j]; }
    const std::vector<std::size_t>& order() const noexcept { return order_; }

    CharacterSystem reordered(std::vector<std::size_t> order) const;
    /// Copy with one table entry negated (natural row, point s).
    CharacterSystem with_flipped_entry(std::size_t natural_row, std::size_t s) const;

private:
    unsigned rank_ = 0;
    std::vector<std::int8_t> table_;  // natural-order rows, row-major
    std::vector<std::size_t> order_;
};

CharacterSystem walsh_system(unsigned m);

/// sum_s |sum_{j<k} chi_j(s)|, the prefix L1 norm times 2^m.
std::int64_t prefix_l1_numerator(const CharacterSystem& sys, std::size_t k);

/// (1/2^m) sum_s |chi_1(s) + ... + chi_k(s)| in the current ordering, 1 <= k <= 2^m.
double prefix_l1_norm(const CharacterSystem& sys, std::size_t k);

/// prefix_l1_norm for k = 1..2^m.
std::vector<double> prefix_l1_profile(const CharacterSystem& sys);

struct CharacterOrdering {
    double value = 0.0;                 // max over k of the prefix L1 norm
    std::vector<std::size_t> ordering;  // natural character indices, first to last
    bool exact = false;
};

/// Minimum over character orderings of the largest prefix L1 norm.
CharacterOrdering min_max_prefix_l1(const CharacterSystem& sys,
                                    const OrderingSearchOptions& options = {});

struct OrderingRow {
    std::vector<std::size_t> ordering;
    double max_prefix_l1 = 0.0;
};

/// Every ordering with its max prefix L1 norm (2^m <= 8).
std::vector<OrderingRow> enumerate_prefix_orderings(const CharacterSystem& sys);

struct UnconditionalityOptions {
    std::size_t exhaustive_sign_limit = 10;  // exhaustive signs when 2^m <= this
    std::size_t sampled_signs = 64;
    int coefficient_range = 16;              // integer coefficients in [-range, range]
};

/// Largest observed ||sum theta_j a_j chi_j||_p / ||sum a_j chi_j||_p over
/// `trials` random integer coefficient vectors and all (or sampled) sign
/// patterns; a lower bound for the unconditionality constant in L^p.
double unconditionality_constant_lp(const CharacterSystem& sys, double p, std::size_t trials,
                                    std::uint64_t seed,
                                    const UnconditionalityOptions& options = {});

/// ||f||_p for integer point values under the normalized counting measure.
double lp_norm(std::span<const std::int64_t> values, double p);

struct AuerbachL1Report {
    std::size_t characters = 0;
    bool l1_norms_one = true;
    bool sup_norms_one = true;
    bool biorthogonal = true;
    std::vector<std::string> failures;

    bool passed() const noexcept { return failures.empty(); }
};

/// Integer-exact check that every character has L1 and L-infinity norm 1
/// and that (1/2^m) <chi_i, chi_j> = [i == j].
AuerbachL1Report auerbach_check_l1(const CharacterSystem& sys);

}  // namespace mblab
