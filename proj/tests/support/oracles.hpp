#pragma once

// Reference computations that share no code with the library: plain
// loops in long double, Gauss-Jordan elimination, power iteration and
// brute-force enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using LMatrix = std::vector<std::vector<long double>>;

inline LMatrix from_eigen(const Eigen::MatrixXd& m) {
    LMatrix out(static_cast<std::size_t>(m.rows()),
                std::vector<long double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
    return out;
}

inline LMatrix multiply(const LMatrix& a, const LMatrix& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.front().size();
    LMatrix out(n, std::vector<long double>(m, 0.0L));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
    return out;
}

inline LMatrix transpose(const LMatrix& a) {
    LMatrix out(a.front().size(), std::vector<long double>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
    return out;
}

/// Gram matrix A^T A by explicit dot products.
inline LMatrix gram(const Eigen::MatrixXd& a) {
    const LMatrix l = from_eigen(a);
    return multiply(transpose(l), l);
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
inline LMatrix inverse(LMatrix a) {
    const std::size_t n = a.size();
    LMatrix inv(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0L) throw std::runtime_error("oracle: singular matrix");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const long double d = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const long double f = a[r][col];
            if (f == 0.0L) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

/// Largest singular value by power iteration on M^T M.
inline long double spectral_norm(const LMatrix& m, int iterations = 2000) {
    const LMatrix mtm = multiply(transpose(m), m);
    const std::size_t n = mtm.size();
    std::vector<long double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0L + 0.01L * static_cast<long double>(i);
    long double lambda = 0.0L;
    for (int it = 0; it < iterations; ++it) {
        std::vector<long double> y(n, 0.0L);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) y[i] += mtm[i][j] * x[j];
        long double norm = 0.0L;
        for (long double v : y) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0L) return 0.0L;
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
        lambda = norm;
    }
    return std::sqrt(lambda);
}

/// max over 1 <= k < n of ||A P_k A^{-1}|| with P_k the first k coordinates.
inline long double basis_constant(const Eigen::MatrixXd& a) {
    const LMatrix l = from_eigen(a);
    const LMatrix inv = inverse(l);
    const std::size_t n = l.size();
    long double best = 1.0L;
    for (std::size_t k = 1; k < n; ++k) {
        LMatrix p(n, std::vector<long double>(n, 0.0L));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t c = 0; c < k; ++c) p[i][j] += l[i][c] * inv[c][j];
        best = std::max(best, spectral_norm(p));
    }
    return best;
}

/// Walsh character value as a product over bits, (-1)^{sum_b i_b s_b}.
inline int walsh(std::size_t i, std::size_t s, unsigned m) {
    int v = 1;
    for (unsigned b = 0; b < m; ++b)
        if (((i >> b) & 1U) && ((s >> b) & 1U)) v = -v;
    return v;
}

/// (1/2^m) sum_s |sum_{j<k} chi_{order[j]}(s)| as a ratio of integers.
inline double walsh_prefix_l1(const std::vector<std::size_t>& order, std::size_t k, unsigned m) {
    const std::size_t size = std::size_t{1} << m;
    long long total = 0;
    for (std::size_t s = 0; s < size; ++s) {
        long long sum = 0;
        for (std::size_t j = 0; j < k; ++j) sum += walsh(order[j], s, m);
        total += sum < 0 ? -sum : sum;
    }
    return static_cast<double>(total) / static_cast<double>(size);
}

/// Minimum over all orderings of the largest prefix L1 norm, by enumeration.
inline double walsh_min_max_prefix(unsigned m) {
    const std::size_t size = std::size_t{1} << m;
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    double best = 1e300;
    do {
        double worst = 0.0;
        for (std::size_t k = 1; k <= size; ++k) worst = std::max(worst, walsh_prefix_l1(order, k, m));
        best = std::min(best, worst);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

/// Haar-distributed orthogonal matrix from the QR factorization of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
}

/// eps slice uniform in [lo, hi] with sum >= 1, by rejection.
inline std::vector<double> random_eps_slice(std::size_t n, std::mt19937_64& rng, double lo = 0.0,
                                            double hi = 1.0) {
    if (hi * static_cast<double>(n) <= 1.0) throw std::invalid_argument("oracle: sum >= 1 unreachable");
    std::uniform_real_distribution<double> u(lo, hi);
    for (;;) {
        std::vector<double> eps(n);
        double s = 0.0;
        for (auto& e : eps) {
            e = u(rng);
            s += e;
        }
        if (s >= 1.0) return eps;
    }
}

}  // namespace oracle
