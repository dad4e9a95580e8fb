#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mblab {

enum class EpsilonKind { constant, power_law, geometric, explicit_list, custom };

// Analytic status of the growth hypothesis n * eps_n -> infinity.
enum class GrowthHint { holds, fails, unknown };

std::string to_string(EpsilonKind kind);
std::string to_string(GrowthHint hint);

/// A rule producing eps_i for every index i >= 1 (1-based).
///
/// Values are validated on access: each eps_i must lie in [0, 1]. The
/// sequences used throughout (1/i^2, i^{-1/2}) reach eps_1 = 1, so the
/// closed upper end is admitted.
class EpsilonSequence {
public:
    static EpsilonSequence constant(double value);
    /// eps_i = scale * i^{-exponent}
    static EpsilonSequence power_law(double scale, double exponent);
    /// eps_i = scale * ratio^{i-1}
    static EpsilonSequence geometric(double scale, double ratio);
    static EpsilonSequence explicit_list(std::vector<double> values);
    static EpsilonSequence custom(std::function<double(std::size_t)> rule,
                                  std::string label = "custom");

    /// Validated eps_i; throws ErrorCode::domain naming the index.
    double operator()(std::size_t i) const;

    /// eps_first .. eps_last inclusive.
    std::vector<double> slice(std::size_t first, std::size_t last) const;

    EpsilonKind kind() const noexcept { return kind_; }
    const std::vector<double>& parameters() const noexcept { return params_; }
    const std::string& label() const noexcept { return label_; }

    /// Number of defined indices for explicit lists, nullopt for infinite rules.
    std::optional<std::size_t> length() const noexcept;

    GrowthHint growth_hint() const noexcept;

private:
    EpsilonSequence(EpsilonKind kind, std::vector<double> params,
                    std::function<double(std::size_t)> rule, std::string label);

    EpsilonKind kind_;
    std::vector<double> params_;
    std::function<double(std::size_t)> rule_;
    std::string label_;
};

/// s_0 .. s_n with s_0 = 0 and s_k = s_{k-1} + eps_k.
std::vector<double> partial_sums(const EpsilonSequence& eps, std::size_t n);

enum class PlanMode { theorem2, theorem4 };

std::string to_string(PlanMode mode);

struct PlanOptions {
    std::size_t scan_horizon = 10'000'000;  // indices scanned per block
    std::size_t min_block_length = 32;      // theorem4 only
};

/// Partition 0 = n_0 < n_1 < ... of the index set into consecutive blocks.
/// Block m (1-based) covers global indices cuts[m-1]+1 .. cuts[m].
struct BlockPlan {
    PlanMode mode = PlanMode::theorem2;
    std::vector<std::size_t> cuts{0};
    std::vector<double> mass;       // r_m^2 = s_{n_m} - s_{n_{m-1}}, entry m-1
    std::vector<double> root_sums;  // t_m = sum of sqrt(eps_i) over block m, entry m-1
    GrowthHint hypothesis = GrowthHint::unknown;

    std::size_t block_count() const noexcept { return cuts.size() - 1; }
    std::size_t first_index(std::size_t m) const;
    std::size_t last_index(std::size_t m) const;
    std::size_t length(std::size_t m) const;
    double r(std::size_t m) const;
    double root_sum(std::size_t m) const;   // t_m
    double root_mass(std::size_t m) const;  // t_m / sqrt(length)

    /// Divergence schedule g(m) = m.
    static double target(std::size_t m) noexcept { return static_cast<double>(m); }
};

/// Greedy cuts with r_m^2 > m and r_m > r_{m-1}; block 1 therefore has s_{n_1} > 1.
BlockPlan plan_blocks_t2(const EpsilonSequence& eps, std::size_t block_count,
                         const PlanOptions& options = {});

/// Greedy cuts with length >= min_block_length and normalized root mass >= m.
/// Zero entries are rejected (the construction needs strictly positive eps).
BlockPlan plan_blocks_t4(const EpsilonSequence& eps, std::size_t block_count,
                         const PlanOptions& options = {});

}  // namespace mblab
