#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mblab/blockbasis.hpp"
#include "mblab/verify.hpp"

namespace mblab {

/// Finite-dimensional max-type renorming
///   |||x||| = max(||x||_2, max_i |x_i*(x)|)
/// of a (1+eps)-bounded system whose vectors are scaled to unit length.
///
/// Functionals are the biorthogonal duals times a per-index scale (1 for
/// the genuine dual). Vectors given by their coefficients c in the basis
/// are evaluated without solving, so x_i*(x_j) = scale_i [i == j] exactly.
class RenormedSpace {
public:
    /// Scales every column to Euclidean norm <= 1 (equal to 1 up to
    /// rounding) and requires ||x_i|| ||x_i*|| <= 1 + eps_i.
    static RenormedSpace from_system(const OrderedSystem& system, std::span<const double> eps,
                                     const Tolerances& tol = {});

    std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors_.cols()); }
    double eps_max() const noexcept { return eps_max_; }
    const Matrix& vectors() const noexcept { return vectors_; }
    const std::vector<double>& functional_scales() const noexcept { return scales_; }

    /// Functional values x_i*(x) for x in standard coordinates.
    Vector functionals(const Vector& x) const;

    double value(const Vector& x) const;
    double value_of_coefficients(const Vector& coefficients) const;

    /// Largest | ||x_i|| - 1 | over the basis vectors.
    double basis_norm_deviation_max() const;

    /// Copy whose j-th functional (1-based) is multiplied by `factor`.
    RenormedSpace with_scaled_functional(std::size_t j, double factor) const;

private:
    Matrix vectors_;
    Matrix inverse_;
    std::vector<double> scales_;
    double eps_max_ = 0.0;
};

double renorm_value(const Vector& x, const RenormedSpace& space);

struct AuerbachReport {
    std::size_t dim = 0;
    double eps_max = 0.0;
    double basis_norm_deviation_max = 0.0;
    std::size_t samples = 0;
    std::size_t violations = 0;
    double max_upper_ratio = 0.0;      // max |||x||| / ||x|| over samples
    double max_triangle_excess = 0.0;  // max |||x+y||| - |||x||| - |||y|||
    std::vector<std::string> details;  // first few violations

    bool passed() const noexcept { return violations == 0; }
};

struct AuerbachCheckOptions {
    double triangle_tolerance = 1e-12;
    double sandwich_tolerance = 1e-12;  // relative
    std::size_t max_details = 16;
};

/// Checks |||x_j||| = 1 and x_j*(x_j) = 1 exactly for every j, then for
/// `samples` Gaussian vectors: ||x|| <= |||x||| <= (1+eps)||x||,
/// |x_j*(x)| <= |||x|||, exact homogeneity under dyadic scalars, and the
/// triangle inequality against a second sample.
AuerbachReport verify_auerbach_renormed(const RenormedSpace& space, std::size_t samples,
                                        std::uint64_t seed,
                                        const AuerbachCheckOptions& options = {});

}  // namespace mblab
