#include "mblab/conditionality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "mblab/error.hpp"

namespace mblab {

Permutation::Permutation(std::vector<std::size_t> images)
    : images_(std::make_shared<const std::vector<std::size_t>>(std::move(images))),
      inverse_(std::make_shared<InverseCache>()) {}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::size_t> images(n);
    std::iota(images.begin(), images.end(), std::size_t{1});
    return Permutation(std::move(images));
}

Permutation Permutation::reversal(std::size_t n) {
    std::vector<std::size_t> images(n);
    for (std::size_t k = 0; k < n; ++k) images[k] = n - k;
    return Permutation(std::move(images));
}

Permutation Permutation::random(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> images(n);
    std::iota(images.begin(), images.end(), std::size_t{1});
    std::mt19937_64 rng(seed);
    std::shuffle(images.begin(), images.end(), rng);
    return Permutation(std::move(images));
}

Permutation Permutation::from_images(std::vector<std::size_t> images) {
    std::vector<bool> seen(images.size(), false);
    for (std::size_t k = 0; k < images.size(); ++k) {
        const std::size_t i = images[k];
        if (i == 0 || i > images.size() || seen[i - 1]) {
            fail(ErrorCode::domain, "images do not form a bijection of 1.." +
                                        std::to_string(images.size()) + " (entry " +
                                        std::to_string(k + 1) + " = " + std::to_string(i) +
                                        ")");
        }
        seen[i - 1] = true;
    }
    return Permutation(std::move(images));
}

std::size_t Permutation::operator()(std::size_t nu) const {
    if (nu == 0) fail(ErrorCode::index_range, "permutation indices start at 1");
    return nu <= images_->size() ? (*images_)[nu - 1] : nu;
}

std::size_t Permutation::inverse(std::size_t i) const {
    if (i == 0) fail(ErrorCode::index_range, "permutation indices start at 1");
    if (i > images_->size()) return i;
    std::call_once(inverse_->once, [this] {
        auto& table = inverse_->table;
        table.resize(images_->size());
        for (std::size_t k = 0; k < images_->size(); ++k) table[(*images_)[k] - 1] = k + 1;
    });
    return inverse_->table[i - 1];
}

std::vector<int> Witness::signs() const {
    std::vector<int> out(F.size(), -1);
    std::fill_n(out.begin(), std::min(alpha, out.size()), 1);
    return out;
}

std::size_t choose_block(const BlockPlan& plan, double C) {
    if (plan.mode != PlanMode::theorem4) {
        fail(ErrorCode::precondition, "witnesses need a theorem4 block plan");
    }
    const double threshold = 3.0 * C;
    for (std::size_t m = 1; m <= plan.block_count(); ++m) {
        if (plan.root_mass(m) >= threshold) return m;
    }
    std::ostringstream msg;
    msg << "no block among " << plan.block_count() << " reaches normalized root mass "
        << threshold << "; plan at least " << static_cast<std::size_t>(std::ceil(threshold))
        << " blocks";
    fail(ErrorCode::resource, msg.str());
}

std::size_t split_alpha(std::span<const double> roots, double t) {
    if (roots.empty()) fail(ErrorCode::degenerate, "cannot split an empty list");
    if (!(t > 0.0)) fail(ErrorCode::degenerate, "cannot split a list with zero total");
    const double half = 0.5 * t;
    double running = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
        if (roots[j] < 0.0) fail(ErrorCode::domain, "negative root mass in split");
        running += roots[j];
        if (running >= half) return j + 1;
    }
    // only reachable when rounding keeps the running total just under t/2
    return roots.size();
}

double partial_sum_norm_sq(const MBasisBlock& block, std::span<const int> signs,
                           std::span<const double> eps_in_order) {
    const std::size_t count = signs.size();
    if (count == 0 || count > block.dim() || count > eps_in_order.size()) {
        fail(ErrorCode::length_mismatch,
             "sign list of length " + std::to_string(count) + " for a block of dimension " +
                 std::to_string(block.dim()) + " with " +
                 std::to_string(eps_in_order.size()) + " ordered eps values");
    }
    double signed_sum = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        signed_sum += static_cast<double>(signs[j]) * std::sqrt(eps_in_order[j]);
    }
    const double s = block.mass();
    return (s - 1.0) / s * signed_sum * signed_sum + static_cast<double>(count);
}

Witness witness_in_block(const MBasisBlock& block, std::span<const std::size_t> local_order,
                         double C) {
    const std::size_t len = block.dim();
    if (local_order.size() != len) {
        fail(ErrorCode::length_mismatch, "ordering of " + std::to_string(local_order.size()) +
                                             " vectors for a block of dimension " +
                                             std::to_string(len));
    }
    std::vector<double> eps_in_order(len);
    std::vector<double> roots(len);
    for (std::size_t j = 0; j < len; ++j) {
        const std::size_t local = local_order[j];
        if (local == 0 || local > len) fail(ErrorCode::index_range, "local index out of range");
        eps_in_order[j] = block.eps()[local - 1];
        roots[j] = std::sqrt(eps_in_order[j]);
    }

    Witness w;
    w.C = C;
    w.block_length = len;
    w.block_mass = block.mass();
    w.t = std::accumulate(roots.begin(), roots.end(), 0.0);
    w.alpha = split_alpha(roots, w.t);
    w.alpha_root = roots[w.alpha - 1];
    w.F.resize(len);
    std::iota(w.F.begin(), w.F.end(), std::size_t{1});
    w.sigma_F.resize(len);
    for (std::size_t j = 0; j < len; ++j) w.sigma_F[j] = block.offset() + local_order[j];
    w.E.assign(w.F.begin(), w.F.begin() + static_cast<std::ptrdiff_t>(w.alpha));

    const std::vector<int> signs = w.signs();
    for (std::size_t j = 0; j < len; ++j) w.signed_root_sum += signs[j] * roots[j];
    w.e_norm_sq = partial_sum_norm_sq(block, std::span(signs).first(w.alpha), eps_in_order);
    w.f_norm_sq = partial_sum_norm_sq(block, signs, eps_in_order);
    w.ratio = std::sqrt(w.e_norm_sq / w.f_norm_sq);
    w.guaranteed_bound = w.t / std::sqrt(9.0 * static_cast<double>(len));
    return w;
}

Witness find_witness(const BlockPlan& plan, const EpsilonSequence& eps,
                     const Permutation& sigma, double C) {
    const std::size_t m = choose_block(plan, C);
    const std::size_t first = plan.first_index(m);
    if (sigma.size() < plan.last_index(m)) {
        fail(ErrorCode::precondition, "permutation covers 1.." + std::to_string(sigma.size()) +
                                          " but block " + std::to_string(m) + " ends at " +
                                          std::to_string(plan.last_index(m)));
    }
    return find_witness(plan, build_block(eps.slice(first, plan.last_index(m)), first - 1),
                        sigma, C);
}

Witness find_witness(const BlockPlan& plan, const MBasisBlock& block, const Permutation& sigma,
                     double C) {
    const std::size_t m = choose_block(plan, C);
    const std::size_t first = plan.first_index(m);
    const std::size_t last = plan.last_index(m);
    if (block.offset() != first - 1 || block.dim() != last - first + 1) {
        fail(ErrorCode::precondition, "block does not cover indices " + std::to_string(first) +
                                          ".." + std::to_string(last) + " of block " +
                                          std::to_string(m));
    }
    if (sigma.size() < last) {
        fail(ErrorCode::precondition, "permutation covers 1.." + std::to_string(sigma.size()) +
                                          " but block " + std::to_string(m) + " ends at " +
                                          std::to_string(last));
    }

    std::vector<std::size_t> positions;
    std::vector<std::size_t> local_order;
    positions.reserve(block.dim());
    local_order.reserve(block.dim());
    const auto& images = sigma.images();
    for (std::size_t nu = 1; nu <= images.size(); ++nu) {
        const std::size_t i = images[nu - 1];
        if (i >= first && i <= last) {
            positions.push_back(nu);
            local_order.push_back(i - first + 1);
        }
    }

    Witness w = witness_in_block(block, local_order, C);
    w.m = m;
    w.F = std::move(positions);
    w.E.assign(w.F.begin(), w.F.begin() + static_cast<std::ptrdiff_t>(w.alpha));
    return w;
}

bool WitnessBoundsReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.passed; });
}

WitnessBoundsReport witness_bounds_check(const Witness& w, const MBasisBlock& block,
                                         double tolerance) {
    WitnessBoundsReport report;
    auto add = [&](std::string name, double value, double bound, bool ok) {
        report.checks.push_back({std::move(name), value, bound, ok});
    };

    const std::size_t len = block.dim();
    const bool shape_ok = w.F.size() == len && w.sigma_F.size() == len && w.alpha >= 1 &&
                          w.alpha <= len && w.E.size() == w.alpha;
    add("shape", static_cast<double>(w.F.size()), static_cast<double>(len), shape_ok);
    if (!shape_ok) return report;

    bool increasing = std::adjacent_find(w.F.begin(), w.F.end(),
                                         [](auto a, auto b) { return a >= b; }) == w.F.end();
    bool prefix = std::equal(w.E.begin(), w.E.end(), w.F.begin());
    add("E precedes F\\E", 0.0, 0.0, increasing && prefix);

    std::vector<std::size_t> local_order(len);
    std::vector<double> eps_in_order(len);
    std::vector<double> roots(len);
    bool labels_ok = true;
    for (std::size_t j = 0; j < len; ++j) {
        const std::size_t g = w.sigma_F[j];
        if (g <= block.offset() || g > block.offset() + len) {
            labels_ok = false;
            break;
        }
        local_order[j] = g - block.offset();
        eps_in_order[j] = block.eps()[local_order[j] - 1];
        roots[j] = std::sqrt(eps_in_order[j]);
    }
    add("sigma(F) inside block", 0.0, 0.0, labels_ok);
    if (!labels_ok) return report;

    const double t = std::accumulate(roots.begin(), roots.end(), 0.0);
    double before = 0.0;
    for (std::size_t j = 0; j + 1 < w.alpha; ++j) before += roots[j];
    const double upto = before + roots[w.alpha - 1];
    add("alpha reaches t/2", upto, 0.5 * t, upto >= 0.5 * t);
    add("alpha-1 below t/2", before, 0.5 * t, before < 0.5 * t);

    const std::vector<int> signs = w.signs();
    double signed_sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) signed_sum += signs[j] * roots[j];
    const double small_bound = 2.0 * roots[w.alpha - 1];
    add("|sum delta sqrt(eps)| < 2 sqrt(eps_alpha)", std::abs(signed_sum), small_bound,
        std::abs(signed_sum) < small_bound + tolerance);
    add("|sum delta sqrt(eps)| < 2", std::abs(signed_sum), 2.0, std::abs(signed_sum) < 2.0);

    const double f_sq = partial_sum_norm_sq(block, signs, eps_in_order);
    const double e_sq = partial_sum_norm_sq(block, std::span(signs).first(w.alpha), eps_in_order);
    const double n = static_cast<double>(len);
    add("||sum_F||^2 <= len + 4", f_sq, n + 4.0, f_sq <= (n + 4.0) * (1.0 + tolerance));
    add("||sum_E||^2 >= t^2/8", e_sq, t * t / 8.0, e_sq >= t * t / 8.0 * (1.0 - tolerance));

    const double rel = tolerance * std::max(1.0, std::max(e_sq, f_sq));
    add("E norm matches witness", w.e_norm_sq, e_sq, std::abs(w.e_norm_sq - e_sq) <= rel);
    add("F norm matches witness", w.f_norm_sq, f_sq, std::abs(w.f_norm_sq - f_sq) <= rel);

    const double ratio = std::sqrt(e_sq / f_sq);
    const double lower = t / std::sqrt(8.0 * (n + 4.0));
    add("ratio >= t/sqrt(8(len+4))", ratio, lower, ratio >= lower * (1.0 - tolerance));
    if (len >= 32) {
        const double guaranteed = t / std::sqrt(9.0 * n);
        add("ratio >= t/sqrt(9 len)", ratio, guaranteed, ratio >= guaranteed * (1.0 - tolerance));
    }
    return report;
}

double explicit_norm_sq(const OrderedSystem& system, std::span<const std::size_t> columns,
                        std::span<const int> signs) {
    if (columns.size() != signs.size()) {
        fail(ErrorCode::length_mismatch, "columns and signs differ in length");
    }
    Vector sum = Vector::Zero(system.vectors.rows());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j] >= system.dim()) fail(ErrorCode::index_range, "column out of range");
        sum += static_cast<double>(signs[j]) *
               system.vectors.col(static_cast<Eigen::Index>(columns[j]));
    }
    return sum.squaredNorm();
}

double prefix_projection_norm(const Matrix& vectors, const Matrix& inverse,
                              std::span<const std::size_t> columns) {
    Matrix p = Matrix::Zero(vectors.rows(), inverse.cols());
    for (std::size_t c : columns) {
        const auto k = static_cast<Eigen::Index>(c);
        p.noalias() += vectors.col(k) * inverse.row(k);
    }
    Eigen::JacobiSVD<Matrix> svd(p);
    return svd.singularValues()(0);
}

double basis_constant_exact(const OrderedSystem& system, std::size_t cap, const Tolerances& tol) {
    if (system.dim() > cap) {
        fail(ErrorCode::resource, "dimension " + std::to_string(system.dim()) +
                                      " above the exact basis-constant cap " +
                                      std::to_string(cap));
    }
    const Factorization f = factorize(system, tol);
    if (system.dim() == 1) return 1.0;
    double worst = 0.0;
    std::vector<std::size_t> prefix;
    for (std::size_t k = 0; k + 1 < system.dim(); ++k) {
        prefix.push_back(k);
        worst = std::max(worst, prefix_projection_norm(system.vectors, f.inverse, prefix));
    }
    return worst;
}

PermutationConstant best_permutation_constant(const OrderedSystem& system,
                                              const OrderingSearchOptions& options,
                                              const Tolerances& tol) {
    const std::size_t n = system.dim();
    if (n > 32) fail(ErrorCode::resource, "ordering search limited to 32 vectors");
    const Factorization f = factorize(system, tol);
    PrefixObjective objective = [&](std::uint32_t mask) {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < n; ++c)
            if (mask & (std::uint32_t{1} << c)) cols.push_back(c);
        return prefix_projection_norm(system.vectors, f.inverse, cols);
    };
    OrderingResult found = min_max_prefix(n, objective, options);

    PermutationConstant out;
    out.constant = n == 1 ? 1.0 : found.value;
    out.exact = found.exact;
    out.positions = found.ordering;
    if (n == 1) out.positions = {0};
    for (std::size_t p : out.positions) out.ordering.push_back(system.order[p]);
    return out;
}

}  // namespace mblab
