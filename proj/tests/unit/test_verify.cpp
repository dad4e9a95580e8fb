#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mblab/blockbasis.hpp"
#include "mblab/error.hpp"
#include "mblab/seqplan.hpp"
#include "mblab/verify.hpp"
#include "oracles.hpp"

using namespace mblab;

namespace {

OrderedSystem matrix_system(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return OrderedSystem::from_columns(m);
}

}  // namespace

TEST(Verify, OrthonormalProductsAreOne) {
    const auto sys = OrderedSystem::from_columns(Matrix::Identity(3, 3));
    const auto report = bound_products(sys, std::vector<double>(3, 0.0));
    EXPECT_TRUE(report.passed());
    for (double p : report.products) EXPECT_NEAR(p, 1.0, 1e-15);
    EXPECT_NEAR(riesz_distance(sys), 1.0, 1e-15);
}

TEST(Verify, ShearProductsAndDistance) {
    const auto sys = matrix_system({{1, 1}, {0, 1}});
    const auto report = bound_products(sys, std::vector<double>{0.5, 0.5});
    EXPECT_NEAR(report.products[0], std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(report.products[1], std::sqrt(2.0), 1e-14);
    EXPECT_TRUE(report.passed());
    EXPECT_FALSE(bound_products(sys, std::vector<double>{0.4, 0.5}).passed());
    // ||A|| ||A^{-1}|| = golden ratio squared for the shear.
    EXPECT_NEAR(riesz_distance(sys), (3.0 + std::sqrt(5.0)) / 2.0, 1e-13);
}

TEST(Verify, DiagonalDistance) {
    const auto sys = matrix_system({{1, 0}, {0, 2}});
    EXPECT_NEAR(riesz_distance(sys), 2.0, 1e-15);
}

TEST(Verify, SingularFloor) {
    const auto sys = matrix_system({{1, 2}, {2, 4}});
    try {
        factorize(sys);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::singular);
    }
}

TEST(Verify, LengthMismatch) {
    const auto sys = OrderedSystem::from_columns(Matrix::Identity(3, 3));
    EXPECT_THROW(bound_products(sys, std::vector<double>(2, 0.0)), Error);
}

TEST(Verify, NormalizeGivesUnitDuals) {
    std::mt19937_64 rng(3);
    const auto block = build_block(oracle::random_eps_slice(9, rng), 0, true);
    const auto sys = normalize_system(block_vectors(block));
    const auto binv = oracle::inverse(oracle::gram(sys.vectors));
    for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(static_cast<double>(binv[i][i]), 1.0, 1e-12);
}

TEST(Verify, RSquaredSolvesDefectEquation) {
    for (double C : {0.0, 0.5, 1.0, 7.0, 100.0}) {
        const double r2 = theorem1_r_squared(C);
        const double x = std::sqrt(r2);
        EXPECT_NEAR((x - 1.0 / x) * (x - 1.0 / x), 3.0 * C, 1e-9 * std::max(1.0, C));
        EXPECT_LT(r2, 3.0 * C + 2.0 + 1e-12);
        EXPECT_GE(x, 1.0);
    }
}

TEST(Verify, ChainOnInverseSquareBlocks) {
    const auto eps = EpsilonSequence::power_law(1.0, 2.0);
    for (std::size_t n : {2u, 8u, 32u}) {
        const auto slice = eps.slice(1, n);
        const auto sys = normalize_system(block_vectors(build_block(slice, 0, true)));
        const auto cert = theorem1_verify(sys, slice);
        EXPECT_TRUE(cert.passed()) << n;
        EXPECT_NEAR(cert.trace_inverse, static_cast<double>(n), 1e-10);
        EXPECT_NEAR(cert.defect, cert.trace_defect(), 1e-9);
        EXPECT_NEAR(cert.C, std::accumulate(slice.begin(), slice.end(), 0.0), 1e-15);
        EXPECT_LE(cert.distance, cert.r_squared + 1e-8);
        EXPECT_LE(cert.trace_gram, n + 3.0 * cert.C + 1e-8);
    }
}

TEST(Verify, ChainRejectsUnnormalizedInput) {
    const auto slice = std::vector<double>(4, 0.5);
    const auto sys = block_vectors(build_block(slice, 0, true));
    try {
        theorem1_verify(sys, slice);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::precondition);
    }
}

TEST(Verify, ChainRejectsUnboundedInput) {
    const auto sys = normalize_system(matrix_system({{1, 1}, {0, 1}}));
    EXPECT_THROW(theorem1_verify(sys, std::vector<double>{0.1, 0.1}), Error);
}
