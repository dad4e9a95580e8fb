#include "mblab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "mblab/error.hpp"

namespace mblab {

Factorization factorize(const OrderedSystem& system, const Tolerances& tol) {
    const Matrix& a = system.vectors;
    if (a.rows() != a.cols() || a.rows() == 0) {
        fail(ErrorCode::length_mismatch, "system matrix must be square and nonempty");
    }
    Eigen::BDCSVD<Matrix> svd(a);
    Factorization f;
    f.singular_values = svd.singularValues();
    const double smax = f.singular_values(0);
    const double smin = f.singular_values(f.singular_values.size() - 1);
    if (!(smin >= tol.singular_floor * smax) || smax == 0.0) {
        std::ostringstream msg;
        msg << "smallest singular value " << smin << " below " << tol.singular_floor
            << " * " << smax;
        fail(ErrorCode::singular, msg.str());
    }
    f.inverse = a.partialPivLu().inverse();
    return f;
}

OrderedSystem normalize_system(const OrderedSystem& system, const Tolerances& tol) {
    const Factorization f = factorize(system, tol);
    OrderedSystem out = system;
    for (Eigen::Index i = 0; i < out.vectors.cols(); ++i) {
        out.vectors.col(i) *= f.inverse.row(i).norm();
    }
    return out;
}

bool BoundednessReport::passed() const noexcept {
    return std::all_of(within_budget.begin(), within_budget.end(), [](bool b) { return b; });
}

BoundednessReport bound_products(const OrderedSystem& system, std::span<const double> eps,
                                 const Tolerances& tol) {
    if (eps.size() != system.dim()) {
        fail(ErrorCode::length_mismatch, "epsilon list has " + std::to_string(eps.size()) +
                                             " entries for a system of dimension " +
                                             std::to_string(system.dim()));
    }
    const Factorization f = factorize(system, tol);
    BoundednessReport report;
    for (std::size_t i = 0; i < system.dim(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double xn = system.vectors.col(k).norm();
        const double dn = f.inverse.row(k).norm();
        const double product = xn * dn;
        const double budget = 1.0 + eps[i];
        report.vector_norms.push_back(xn);
        report.dual_norms.push_back(dn);
        report.products.push_back(product);
        report.budgets.push_back(budget);
        report.within_budget.push_back(product <= budget * (1.0 + tol.inequality));
        const double ratio = product / budget;
        if (i == 0 || ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_index = i + 1;
        }
    }
    return report;
}

double riesz_distance(const OrderedSystem& system, const Tolerances& tol) {
    const Factorization f = factorize(system, tol);
    return f.singular_values(0) / f.singular_values(f.singular_values.size() - 1);
}

double theorem1_r_squared(double C) noexcept {
    // x - 1/x = sqrt(3C)  =>  x = (sqrt(3C) + sqrt(3C + 4)) / 2
    const double root = 0.5 * (std::sqrt(3.0 * C) + std::sqrt(3.0 * C + 4.0));
    return root * root;
}

Theorem1Certificate theorem1_verify(const OrderedSystem& system, std::span<const double> eps,
                                    const Tolerances& tol) {
    const BoundednessReport bounds = bound_products(system, eps, tol);
    for (std::size_t i = 0; i < bounds.dual_norms.size(); ++i) {
        if (std::abs(bounds.dual_norms[i] - 1.0) > tol.identity) {
            std::ostringstream msg;
            msg << "system is not normalized: ||x_" << system.order[i]
                << "*|| = " << bounds.dual_norms[i] << " (normalize_system first)";
            fail(ErrorCode::precondition, msg.str());
        }
    }
    if (!bounds.passed()) {
        std::ostringstream msg;
        msg << "system is not (1+eps_i)-bounded: index " << bounds.worst_index
            << " has product " << bounds.products[bounds.worst_index - 1] << " > "
            << bounds.budgets[bounds.worst_index - 1];
        fail(ErrorCode::precondition, msg.str());
    }

    const Factorization f = factorize(system, tol);
    Theorem1Certificate cert;
    cert.dim = system.dim();
    cert.C = std::accumulate(eps.begin(), eps.end(), 0.0);
    for (std::size_t i = 0; i < cert.dim; ++i) {
        cert.trace_gram += bounds.vector_norms[i] * bounds.vector_norms[i];
        cert.trace_inverse += bounds.dual_norms[i] * bounds.dual_norms[i];
    }
    for (Eigen::Index j = 0; j < f.singular_values.size(); ++j) {
        const double sv = f.singular_values(j);  // sqrt(d_j)
        cert.defect += (sv - 1.0 / sv) * (sv - 1.0 / sv);
    }
    cert.r_squared = theorem1_r_squared(cert.C);
    cert.bound = 3.0 * cert.C + 2.0;
    cert.distance = f.singular_values(0) / f.singular_values(f.singular_values.size() - 1);

    const double n = static_cast<double>(cert.dim);
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) cert.failures.push_back(what);
    };
    check(std::abs(cert.trace_inverse - n) <= tol.inequality, "trace(B^-1) != n");
    check(cert.trace_gram <= n + 3.0 * cert.C + tol.inequality, "trace(B) > n + 3C");
    check(std::abs(cert.defect - cert.trace_defect()) <= 1e-9,
          "spectral defect disagrees with trace(B) + trace(B^-1) - 2n");
    check(cert.defect <= 3.0 * cert.C + tol.inequality, "defect > 3C");
    check(cert.distance <= cert.r_squared + tol.inequality, "distance > R^2");
    check(cert.distance <= cert.bound + tol.inequality, "distance > 3C + 2");
    return cert;
}

}  // namespace mblab
