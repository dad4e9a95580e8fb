#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mblab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Orthogonal Q with Q e_1 = v for a unit vector v.
///
/// For v_1 >= 0 this is the line reflection 2ww^T - I with w parallel to
/// e_1 + v; for v_1 < 0 it is the Householder reflector I - 2uu^T with u
/// parallel to v - e_1. Either way Q is symmetric and Q^2 = I.
Matrix orthogonal_with_first_column(const Vector& v, double unit_tolerance = 1e-10);

/// An explicit finite system: column j holds the vector x_{order[j]} in
/// standard coordinates. Labels in `order` are 1-based.
struct OrderedSystem {
    Matrix vectors;
    std::vector<std::size_t> order;

    static OrderedSystem from_columns(Matrix columns);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors.cols()); }
    Matrix gram() const { return vectors.transpose() * vectors; }

    /// New system whose column j is this system's column positions[j] (0-based).
    OrderedSystem reordered(std::span<const std::size_t> positions) const;
};

/// One block H_m of the construction: B = U D U^T with U e_1 = v,
/// v = (sqrt(eps_i))/sqrt(s), D = diag(s, 1, ..., 1), and basis vectors
/// given by the columns of A = sqrt(D) U^T.
class MBasisBlock {
public:
    std::size_t dim() const noexcept { return eps_.size(); }
    const std::vector<double>& eps() const noexcept { return eps_; }
    double mass() const noexcept { return mass_; }
    /// Global index n_{m-1}; local index j maps to global offset + j.
    std::size_t offset() const noexcept { return offset_; }

    Vector first_column() const;
    Vector diagonal() const;

    bool materialized() const noexcept { return vectors_.has_value(); }
    /// Stored A; throws if the block was not materialized.
    const Matrix& vectors() const;

    friend MBasisBlock build_block(std::span<const double> eps_slice, std::size_t offset,
                                   bool materialize, std::size_t materialize_cap);
    friend MBasisBlock restore_block(std::vector<double> eps_slice, double mass,
                                     std::size_t offset, std::optional<Matrix> vectors);

private:
    std::vector<double> eps_;
    double mass_ = 0.0;
    std::size_t offset_ = 0;
    std::optional<Matrix> vectors_;
};

inline constexpr std::size_t kMaterializeCap = 4096;

/// Builds the block for an epsilon slice. Requires every entry in [0, 1]
/// and total mass s >= 1.
MBasisBlock build_block(std::span<const double> eps_slice, std::size_t offset = 0,
                        bool materialize = false,
                        std::size_t materialize_cap = kMaterializeCap);

/// Reassembles a block from serialized fields, revalidating them.
MBasisBlock restore_block(std::vector<double> eps_slice, double mass, std::size_t offset,
                          std::optional<Matrix> vectors);

/// Closed-form Gram entry ((s-1)/s) sqrt(eps_i eps_j) + [i == j], 1-based local indices.
double block_gram(const MBasisBlock& block, std::size_t i, std::size_t j);

/// Explicit A = sqrt(D) U^T as an ordered system with labels offset+1..offset+dim.
OrderedSystem block_vectors(const MBasisBlock& block,
                            std::size_t materialize_cap = kMaterializeCap);

struct BlockIndexDiagnostics {
    std::size_t index = 0;  // 1-based local
    double eps = 0.0;
    double gram_diagonal = 0.0;     // b_ii
    double inverse_diagonal = 0.0;  // (B^{-1})_ii
    double product = 0.0;           // b_ii (B^{-1})_ii
};

struct BlockDiagnostics {
    std::size_t dim = 0;
    double mass = 0.0;
    double distance = 0.0;  // sqrt(s)
    std::vector<BlockIndexDiagnostics> rows;
    std::vector<std::string> failures;

    bool passed() const noexcept { return failures.empty(); }
};

/// Per-index b_ii, (B^{-1})_ii and their product from the closed forms,
/// checked against b_ii in (1, 1+eps_i], (B^{-1})_ii in (1 - eps_i/s, 1]
/// and product < 1 + eps_i. Lower bounds are strict only when eps_i > 0
/// (and s > 1 for b_ii).
BlockDiagnostics block_diagnostics(const MBasisBlock& block, double tolerance = 1e-12);

}  // namespace mblab
