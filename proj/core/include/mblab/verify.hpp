#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mblab/blockbasis.hpp"

namespace mblab {

struct Tolerances {
    double identity = 1e-10;        // equalities
    double inequality = 1e-8;       // inequalities carrying SVD error
    double singular_floor = 1e-12;  // sigma_min < floor * sigma_max is singular
};

/// Singular values (descending) and inverse of a square system, or
/// ErrorCode::singular below the floor.
struct Factorization {
    Vector singular_values;
    Matrix inverse;
};

Factorization factorize(const OrderedSystem& system, const Tolerances& tol = {});

/// Rescales x_i by ||x_i*|| so every dual functional has unit norm.
OrderedSystem normalize_system(const OrderedSystem& system, const Tolerances& tol = {});

struct BoundednessReport {
    std::vector<double> vector_norms;  // ||x_i|| = sqrt(b_ii)
    std::vector<double> dual_norms;    // ||x_i*|| = sqrt((B^{-1})_ii)
    std::vector<double> products;      // ||x_i|| ||x_i*||
    std::vector<double> budgets;       // 1 + eps_i
    std::vector<bool> within_budget;
    std::size_t worst_index = 0;       // 1-based, largest product / budget
    double worst_ratio = 0.0;

    bool passed() const noexcept;
};

/// ||x_i|| ||x_i*|| against 1 + eps_i, passing when product <= (1+eps_i)(1+tol).
BoundednessReport bound_products(const OrderedSystem& system, std::span<const double> eps,
                                 const Tolerances& tol = {});

/// ||A|| ||A^{-1}||, the distance of the system to an orthonormal basis.
double riesz_distance(const OrderedSystem& system, const Tolerances& tol = {});

struct Theorem1Certificate {
    std::size_t dim = 0;
    double C = 0.0;             // sum of eps over the verified range
    double trace_gram = 0.0;    // sum of b_ii
    double trace_inverse = 0.0; // sum of (B^{-1})_ii
    double defect = 0.0;        // sum_j (sqrt(d_j) - 1/sqrt(d_j))^2 from the spectrum
    double r_squared = 0.0;     // R^2, R the larger root of (x - 1/x)^2 = 3C
    double bound = 0.0;         // 3C + 2
    double distance = 0.0;
    std::vector<std::string> failures;

    bool passed() const noexcept { return failures.empty(); }
    /// trace_gram + trace_inverse - 2 dim, which the defect must equal.
    double trace_defect() const noexcept {
        return trace_gram + trace_inverse - 2.0 * static_cast<double>(dim);
    }
};

/// Checks the stability chain on a normalized (1+eps_i)-bounded system:
/// trace(B^{-1}) = n, trace(B) <= n + 3C, defect <= 3C,
/// distance <= R^2 < 3C + 2. Throws ErrorCode::precondition naming the
/// failed normalization or boundedness check.
Theorem1Certificate theorem1_verify(const OrderedSystem& system, std::span<const double> eps,
                                    const Tolerances& tol = {});

/// Larger positive root of (x - 1/x)^2 = 3C, squared.
double theorem1_r_squared(double C) noexcept;

}  // namespace mblab
