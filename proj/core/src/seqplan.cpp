#include "mblab/seqplan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mblab/error.hpp"

namespace mblab {

std::string to_string(EpsilonKind kind) {
    switch (kind) {
        case EpsilonKind::constant: return "constant";
        case EpsilonKind::power_law: return "power";
        case EpsilonKind::geometric: return "geometric";
        case EpsilonKind::explicit_list: return "list";
        case EpsilonKind::custom: return "custom";
    }
    return "unknown";
}

std::string to_string(GrowthHint hint) {
    switch (hint) {
        case GrowthHint::holds: return "holds";
        case GrowthHint::fails: return "fails";
        case GrowthHint::unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(PlanMode mode) {
    return mode == PlanMode::theorem2 ? "theorem2" : "theorem4";
}

EpsilonSequence::EpsilonSequence(EpsilonKind kind, std::vector<double> params,
                                 std::function<double(std::size_t)> rule, std::string label)
    : kind_(kind), params_(std::move(params)), rule_(std::move(rule)), label_(std::move(label)) {}

EpsilonSequence EpsilonSequence::constant(double value) {
    return {EpsilonKind::constant, {value}, [value](std::size_t) { return value; },
            "constant"};
}

EpsilonSequence EpsilonSequence::power_law(double scale, double exponent) {
    return {EpsilonKind::power_law,
            {scale, exponent},
            [scale, exponent](std::size_t i) {
                return scale * std::pow(static_cast<double>(i), -exponent);
            },
            "power"};
}

EpsilonSequence EpsilonSequence::geometric(double scale, double ratio) {
    return {EpsilonKind::geometric,
            {scale, ratio},
            [scale, ratio](std::size_t i) {
                return scale * std::pow(ratio, static_cast<double>(i - 1));
            },
            "geometric"};
}

EpsilonSequence EpsilonSequence::explicit_list(std::vector<double> values) {
    auto rule = [values](std::size_t i) {
        if (i > values.size()) {
            fail(ErrorCode::index_range, "index " + std::to_string(i) +
                                             " beyond explicit epsilon list of length " +
                                             std::to_string(values.size()));
        }
        return values[i - 1];
    };
    return {EpsilonKind::explicit_list, values, std::move(rule), "list"};
}

EpsilonSequence EpsilonSequence::custom(std::function<double(std::size_t)> rule,
                                        std::string label) {
    return {EpsilonKind::custom, {}, std::move(rule), std::move(label)};
}

double EpsilonSequence::operator()(std::size_t i) const {
    if (i == 0) fail(ErrorCode::index_range, "epsilon indices start at 1");
    const double value = rule_(i);
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << "eps_" << i << " = " << value << " outside [0, 1]";
        fail(ErrorCode::domain, msg.str());
    }
    return value;
}

std::vector<double> EpsilonSequence::slice(std::size_t first, std::size_t last) const {
    if (first == 0 || last < first) {
        fail(ErrorCode::index_range, "invalid slice [" + std::to_string(first) + ", " +
                                         std::to_string(last) + "]");
    }
    std::vector<double> out;
    out.reserve(last - first + 1);
    for (std::size_t i = first; i <= last; ++i) out.push_back((*this)(i));
    return out;
}

std::optional<std::size_t> EpsilonSequence::length() const noexcept {
    if (kind_ == EpsilonKind::explicit_list) return params_.size();
    return std::nullopt;
}

GrowthHint EpsilonSequence::growth_hint() const noexcept {
    switch (kind_) {
        case EpsilonKind::constant:
            return params_[0] > 0.0 ? GrowthHint::holds : GrowthHint::fails;
        case EpsilonKind::power_law:
            if (params_[0] <= 0.0) return GrowthHint::fails;
            return params_[1] < 1.0 ? GrowthHint::holds : GrowthHint::fails;
        case EpsilonKind::geometric:
            if (params_[0] <= 0.0) return GrowthHint::fails;
            return params_[1] >= 1.0 ? GrowthHint::holds : GrowthHint::fails;
        case EpsilonKind::explicit_list:
        case EpsilonKind::custom:
            return GrowthHint::unknown;
    }
    return GrowthHint::unknown;
}

std::vector<double> partial_sums(const EpsilonSequence& eps, std::size_t n) {
    std::vector<double> sums(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) sums[k] = sums[k - 1] + eps(k);
    return sums;
}

std::size_t BlockPlan::first_index(std::size_t m) const {
    if (m == 0 || m > block_count()) {
        fail(ErrorCode::index_range, "block " + std::to_string(m) + " not in plan of " +
                                         std::to_string(block_count()) + " blocks");
    }
    return cuts[m - 1] + 1;
}

std::size_t BlockPlan::last_index(std::size_t m) const {
    first_index(m);
    return cuts[m];
}

std::size_t BlockPlan::length(std::size_t m) const {
    return last_index(m) - cuts[m - 1];
}

double BlockPlan::r(std::size_t m) const {
    first_index(m);
    return std::sqrt(mass[m - 1]);
}

double BlockPlan::root_sum(std::size_t m) const {
    first_index(m);
    return root_sums[m - 1];
}

double BlockPlan::root_mass(std::size_t m) const {
    return root_sum(m) / std::sqrt(static_cast<double>(length(m)));
}

namespace {

// Upper bound on the scan for one block, honouring finite explicit lists.
std::size_t scan_limit(const EpsilonSequence& eps, std::size_t start,
                       const PlanOptions& options) {
    std::size_t limit = start + options.scan_horizon;
    if (auto len = eps.length()) limit = std::min(limit, *len);
    return limit;
}

[[noreturn]] void non_divergent(std::size_t m, std::size_t start, std::size_t limit,
                                const std::string& what) {
    fail(ErrorCode::non_divergence,
         "block " + std::to_string(m) + ": " + what + " not reached on indices " +
             std::to_string(start + 1) + ".." + std::to_string(limit) +
             " (sequence appears non-divergent; raise the scan horizon if it is not)");
}

}  // namespace

BlockPlan plan_blocks_t2(const EpsilonSequence& eps, std::size_t block_count,
                         const PlanOptions& options) {
    BlockPlan plan;
    plan.mode = PlanMode::theorem2;
    plan.hypothesis = GrowthHint::unknown;

    double s = 0.0;  // running s_n, accumulated exactly as partial_sums does
    std::size_t n = 0;
    double previous_mass = 0.0;
    for (std::size_t m = 1; m <= block_count; ++m) {
        const std::size_t start = n;
        const double s_start = s;
        const double target = BlockPlan::target(m);
        const std::size_t limit = scan_limit(eps, start, options);
        double roots = 0.0;
        bool found = false;
        while (n < limit) {
            ++n;
            const double e = eps(n);
            s += e;
            roots += std::sqrt(e);
            const double mass = s - s_start;
            if (mass > target && mass > previous_mass) {
                found = true;
                break;
            }
        }
        if (!found) non_divergent(m, start, limit, "block mass above " + std::to_string(m));
        plan.cuts.push_back(n);
        plan.mass.push_back(s - s_start);
        plan.root_sums.push_back(roots);
        previous_mass = plan.mass.back();
    }
    return plan;
}

BlockPlan plan_blocks_t4(const EpsilonSequence& eps, std::size_t block_count,
                         const PlanOptions& options) {
    BlockPlan plan;
    plan.mode = PlanMode::theorem4;
    plan.hypothesis = eps.growth_hint();

    const std::size_t min_len = std::max<std::size_t>(options.min_block_length, 1);
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t m = 1; m <= block_count; ++m) {
        const std::size_t start = n;
        const double s_start = s;
        const double target = BlockPlan::target(m);
        const std::size_t limit = scan_limit(eps, start, options);
        double roots = 0.0;
        bool found = false;
        while (n < limit) {
            ++n;
            const double e = eps(n);
            if (e <= 0.0) {
                fail(ErrorCode::domain, "eps_" + std::to_string(n) +
                                            " = 0; block plans for the permutation "
                                            "construction need positive entries");
            }
            s += e;
            roots += std::sqrt(e);
            const std::size_t len = n - start;
            if (len >= min_len && roots / std::sqrt(static_cast<double>(len)) >= target) {
                found = true;
                break;
            }
        }
        if (!found) {
            non_divergent(m, start, limit,
                          "normalized root mass " + std::to_string(m));
        }
        plan.cuts.push_back(n);
        plan.mass.push_back(s - s_start);
        plan.root_sums.push_back(roots);
    }
    return plan;
}

}  // namespace mblab
