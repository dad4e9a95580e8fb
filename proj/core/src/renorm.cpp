#include "mblab/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mblab/error.hpp"

namespace mblab {

RenormedSpace RenormedSpace::from_system(const OrderedSystem& system,
                                         std::span<const double> eps, const Tolerances& tol) {
    const BoundednessReport bounds = bound_products(system, eps, tol);
    if (!bounds.passed()) {
        std::ostringstream msg;
        msg << "system is not (1+eps)-bounded at index " << bounds.worst_index << " (product "
            << bounds.products[bounds.worst_index - 1] << ")";
        fail(ErrorCode::precondition, msg.str());
    }

    RenormedSpace space;
    space.vectors_ = system.vectors;
    for (Eigen::Index j = 0; j < space.vectors_.cols(); ++j) {
        auto col = space.vectors_.col(j);
        col /= col.norm();
        // keep the computed norm at or below 1 so |||x_j||| = 1 holds exactly
        while (col.norm() > 1.0) col *= std::nextafter(1.0, 0.0);
    }
    space.inverse_ = factorize(OrderedSystem::from_columns(space.vectors_), tol).inverse;
    space.scales_.assign(system.dim(), 1.0);
    space.eps_max_ = eps.empty() ? 0.0 : *std::max_element(eps.begin(), eps.end());
    return space;
}

Vector RenormedSpace::functionals(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != dim()) {
        fail(ErrorCode::length_mismatch, "vector of length " + std::to_string(x.size()) +
                                             " in a space of dimension " +
                                             std::to_string(dim()));
    }
    Vector values = inverse_ * x;
    for (std::size_t i = 0; i < dim(); ++i) values(static_cast<Eigen::Index>(i)) *= scales_[i];
    return values;
}

double RenormedSpace::value(const Vector& x) const {
    const Vector values = functionals(x);
    return std::max(x.norm(), values.cwiseAbs().maxCoeff());
}

double RenormedSpace::value_of_coefficients(const Vector& coefficients) const {
    if (static_cast<std::size_t>(coefficients.size()) != dim()) {
        fail(ErrorCode::length_mismatch, "coefficient vector has the wrong length");
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
        sup = std::max(sup, std::abs(scales_[i] * coefficients(static_cast<Eigen::Index>(i))));
    }
    const Vector x = vectors_ * coefficients;
    return std::max(x.norm(), sup);
}

double RenormedSpace::basis_norm_deviation_max() const {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
        worst = std::max(worst, std::abs(vectors_.col(j).norm() - 1.0));
    }
    return worst;
}

RenormedSpace RenormedSpace::with_scaled_functional(std::size_t j, double factor) const {
    if (j == 0 || j > dim()) fail(ErrorCode::index_range, "functional index out of range");
    RenormedSpace copy = *this;
    copy.scales_[j - 1] *= factor;
    return copy;
}

double renorm_value(const Vector& x, const RenormedSpace& space) { return space.value(x); }

AuerbachReport verify_auerbach_renormed(const RenormedSpace& space, std::size_t samples,
                                        std::uint64_t seed, const AuerbachCheckOptions& options) {
    AuerbachReport report;
    report.dim = space.dim();
    report.eps_max = space.eps_max();
    report.basis_norm_deviation_max = space.basis_norm_deviation_max();
    report.samples = samples;

    auto violation = [&](const std::string& what) {
        ++report.violations;
        if (report.details.size() < options.max_details) report.details.push_back(what);
    };

    const auto n = static_cast<Eigen::Index>(space.dim());
    for (Eigen::Index j = 0; j < n; ++j) {
        const Vector unit = Vector::Unit(n, j);
        const double basis_value = space.value_of_coefficients(unit);
        if (basis_value != 1.0) {
            std::ostringstream msg;
            msg << "|||x_" << j + 1 << "||| = " << basis_value << " != 1";
            violation(msg.str());
        }
        const double attained = space.functional_scales()[static_cast<std::size_t>(j)];
        if (attained != 1.0) {
            std::ostringstream msg;
            msg << "x_" << j + 1 << "*(x_" << j + 1 << ") = " << attained
                << " != 1, so |||x_" << j + 1 << "*||| is not attained at x_" << j + 1;
            violation(msg.str());
        }
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> exponent(-8, 8);
    auto draw = [&] {
        Vector x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = gauss(rng);
        return x;
    };

    const double upper = 1.0 + space.eps_max();
    for (std::size_t k = 0; k < samples; ++k) {
        const Vector x = draw();
        const Vector y = draw();
        const double norm = x.norm();
        const Vector values = space.functionals(x);
        const double triple = std::max(norm, values.cwiseAbs().maxCoeff());

        report.max_upper_ratio = std::max(report.max_upper_ratio, triple / norm);
        if (triple < norm) violation("|||x||| < ||x|| at sample " + std::to_string(k));
        if (triple > upper * norm * (1.0 + options.sandwich_tolerance)) {
            std::ostringstream msg;
            msg << "|||x||| / ||x|| = " << triple / norm << " > " << upper << " at sample " << k;
            violation(msg.str());
        }
        if (values.cwiseAbs().maxCoeff() > triple) {
            violation("|x_j*(x)| > |||x||| at sample " + std::to_string(k));
        }

        const double lambda = std::ldexp((k % 2 == 0) ? 1.0 : -1.0, exponent(rng));
        if (space.value(lambda * x) != std::abs(lambda) * triple) {
            violation("homogeneity fails under a dyadic scalar at sample " + std::to_string(k));
        }

        const double excess = space.value(x + y) - triple - space.value(y);
        report.max_triangle_excess = std::max(report.max_triangle_excess, excess);
        if (excess > options.triangle_tolerance) {
            std::ostringstream msg;
            msg << "triangle inequality exceeded by " << excess << " at sample " << k;
            violation(msg.str());
        }
    }
    return report;
}

}  // namespace mblab
