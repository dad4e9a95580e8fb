#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "mblab/blockbasis.hpp"
#include "mblab/ordering_search.hpp"
#include "mblab/seqplan.hpp"
#include "mblab/verify.hpp"

namespace mblab {

/// A bijection of 1..N extended by the identity beyond N.
class Permutation {
public:
    static Permutation identity(std::size_t n);
    static Permutation reversal(std::size_t n);
    static Permutation random(std::size_t n, std::uint64_t seed);
    /// images[k] = sigma(k + 1); throws ErrorCode::domain unless a bijection of 1..N.
    static Permutation from_images(std::vector<std::size_t> images);

    std::size_t size() const noexcept { return images_->size(); }
    std::size_t operator()(std::size_t nu) const;
    /// sigma^{-1}(i); the inverse table is built on first use and shared by copies.
    std::size_t inverse(std::size_t i) const;
    const std::vector<std::size_t>& images() const noexcept { return *images_; }

private:
    struct InverseCache {
        std::once_flag once;
        std::vector<std::size_t> table;
    };

    explicit Permutation(std::vector<std::size_t> images);

    std::shared_ptr<const std::vector<std::size_t>> images_;
    std::shared_ptr<InverseCache> inverse_;
};

/// Certificate that an ordering of the system is not a basis with constant < C.
struct Witness {
    double C = 0.0;
    std::size_t m = 0;                     // block index, 0 for a free-standing block
    std::vector<std::size_t> F;            // positions nu, increasing (k_j)
    std::vector<std::size_t> sigma_F;      // sigma(k_j), global original indices
    std::vector<std::size_t> E;            // first alpha entries of F
    std::size_t alpha = 0;                 // 1-based position within F, = |E|
    std::size_t block_length = 0;
    double block_mass = 0.0;               // r_m^2
    double t = 0.0;                        // sum of sqrt(eps) over the block
    double alpha_root = 0.0;               // sqrt(eps_{sigma(k_alpha)})
    double signed_root_sum = 0.0;          // sum_j delta_j sqrt(eps_{sigma(k_j)})
    double e_norm_sq = 0.0;
    double f_norm_sq = 0.0;
    double ratio = 0.0;                    // sqrt(e_norm_sq / f_norm_sq)
    double guaranteed_bound = 0.0;         // t / sqrt(9 * block_length)

    /// delta_j for j = 1..|F|: +1 on E, -1 on F \ E.
    std::vector<int> signs() const;
};

/// Smallest m whose normalized root mass reaches 3C (theorem4 plans only).
std::size_t choose_block(const BlockPlan& plan, double C);

/// First 1-based position where the running sum reaches t/2.
std::size_t split_alpha(std::span<const double> roots, double t);

/// ((s-1)/s) (sum_{j<=M} delta_j sqrt(eps_j))^2 + M for the first M vectors
/// taken in the given order; `eps_in_order` lists eps of those vectors.
double partial_sum_norm_sq(const MBasisBlock& block, std::span<const int> signs,
                           std::span<const double> eps_in_order);

/// Witness inside one block for an ordering of its vectors; `local_order`
/// lists 1-based local indices in the permuted order.
Witness witness_in_block(const MBasisBlock& block, std::span<const std::size_t> local_order,
                         double C = 0.0);

/// The block-m witness against sigma; sigma's explicit range must cover n_m.
Witness find_witness(const BlockPlan& plan, const EpsilonSequence& eps,
                     const Permutation& sigma, double C);

/// Same, reusing block m = choose_block(plan, C) built by the caller.
Witness find_witness(const BlockPlan& plan, const MBasisBlock& block, const Permutation& sigma,
                     double C);

struct BoundCheck {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool passed = false;
};

struct WitnessBoundsReport {
    std::vector<BoundCheck> checks;
    bool passed() const noexcept;
};

/// Recomputes the witness from the block and checks the estimates the
/// construction guarantees: |sum delta sqrt(eps)| < 2 sqrt(eps_alpha) <= 2,
/// ||sum_F||^2 <= len + 4, ||sum_E||^2 >= t^2/8, ratio >= t/sqrt(8(len+4)),
/// plus the structure of E, F and alpha.
WitnessBoundsReport witness_bounds_check(const Witness& w, const MBasisBlock& block,
                                         double tolerance = 1e-12);

/// Explicit ||sum_j delta_j x_j||^2 over columns of an ordered system.
double explicit_norm_sq(const OrderedSystem& system, std::span<const std::size_t> columns,
                        std::span<const int> signs);

inline constexpr std::size_t kBasisConstantCap = 64;

/// ||A E_S A^{-1}||_2 where E_S keeps the coordinates listed in `columns`.
double prefix_projection_norm(const Matrix& vectors, const Matrix& inverse,
                              std::span<const std::size_t> columns);

/// max over 1 <= k < n of ||A E_k A^{-1}||_2; 1 for a one-dimensional system.
double basis_constant_exact(const OrderedSystem& system,
                            std::size_t cap = kBasisConstantCap, const Tolerances& tol = {});

struct PermutationConstant {
    double constant = 0.0;
    std::vector<std::size_t> ordering;  // labels from the system's order, best first
    std::vector<std::size_t> positions; // 0-based columns of the input system
    bool exact = false;
};

/// Minimum of basis_constant_exact over column orderings.
PermutationConstant best_permutation_constant(const OrderedSystem& system,
                                              const OrderingSearchOptions& options = {},
                                              const Tolerances& tol = {});

}  // namespace mblab
