#include "mblab/blockbasis.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "mblab/error.hpp"

namespace mblab {

Matrix orthogonal_with_first_column(const Vector& v, double unit_tolerance) {
    const Eigen::Index n = v.size();
    if (n == 0) fail(ErrorCode::domain, "empty first column");
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > unit_tolerance) {
        std::ostringstream msg;
        msg << "first column has norm " << norm << ", expected 1";
        fail(ErrorCode::domain, msg.str());
    }

    Matrix q(n, n);
    if (v(0) >= 0.0) {
        Vector w = v;
        w(0) += 1.0;
        w /= w.norm();
        q.noalias() = 2.0 * w * w.transpose();
        q.diagonal().array() -= 1.0;
    } else {
        Vector u = v;
        u(0) -= 1.0;
        u /= u.norm();
        q.setIdentity();
        q.noalias() -= 2.0 * u * u.transpose();
    }
    return q;
}

OrderedSystem OrderedSystem::from_columns(Matrix columns) {
    OrderedSystem sys;
    sys.order.resize(static_cast<std::size_t>(columns.cols()));
    std::iota(sys.order.begin(), sys.order.end(), std::size_t{1});
    sys.vectors = std::move(columns);
    return sys;
}

OrderedSystem OrderedSystem::reordered(std::span<const std::size_t> positions) const {
    if (positions.size() != dim()) {
        fail(ErrorCode::length_mismatch, "reordering has " + std::to_string(positions.size()) +
                                             " entries for a system of dimension " +
                                             std::to_string(dim()));
    }
    std::vector<bool> seen(dim(), false);
    OrderedSystem out;
    out.vectors.resize(vectors.rows(), vectors.cols());
    out.order.resize(dim());
    for (std::size_t j = 0; j < positions.size(); ++j) {
        const std::size_t p = positions[j];
        if (p >= dim() || seen[p]) {
            fail(ErrorCode::domain, "reordering is not a permutation of 0.." +
                                        std::to_string(dim() - 1));
        }
        seen[p] = true;
        out.vectors.col(static_cast<Eigen::Index>(j)) = vectors.col(static_cast<Eigen::Index>(p));
        out.order[j] = order[p];
    }
    return out;
}

Vector MBasisBlock::first_column() const {
    Vector v(static_cast<Eigen::Index>(dim()));
    const double root_mass = std::sqrt(mass_);
    for (std::size_t i = 0; i < dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = std::sqrt(eps_[i]) / root_mass;
    }
    return v;
}

Vector MBasisBlock::diagonal() const {
    Vector d = Vector::Ones(static_cast<Eigen::Index>(dim()));
    d(0) = mass_;
    return d;
}

const Matrix& MBasisBlock::vectors() const {
    if (!vectors_) fail(ErrorCode::precondition, "block is not materialized");
    return *vectors_;
}

namespace {

void validate_slice(std::span<const double> eps_slice, std::size_t offset) {
    if (eps_slice.empty()) fail(ErrorCode::domain, "empty epsilon slice");
    for (std::size_t i = 0; i < eps_slice.size(); ++i) {
        const double e = eps_slice[i];
        if (!(e >= 0.0 && e <= 1.0)) {
            std::ostringstream msg;
            msg << "eps_" << offset + i + 1 << " = " << e << " outside [0, 1]";
            fail(ErrorCode::domain, msg.str());
        }
    }
}

Matrix explicit_vectors(const MBasisBlock& block) {
    const Matrix u = orthogonal_with_first_column(block.first_column());
    Matrix a = u.transpose();
    a.row(0) *= std::sqrt(block.mass());
    return a;
}

}  // namespace

MBasisBlock build_block(std::span<const double> eps_slice, std::size_t offset,
                        bool materialize, std::size_t materialize_cap) {
    validate_slice(eps_slice, offset);
    const double s = std::accumulate(eps_slice.begin(), eps_slice.end(), 0.0);
    if (s < 1.0) {
        std::ostringstream msg;
        msg << "block mass s = " << s << " < 1; the construction needs s >= 1";
        fail(ErrorCode::precondition, msg.str());
    }
    MBasisBlock block;
    block.eps_.assign(eps_slice.begin(), eps_slice.end());
    block.mass_ = s;
    block.offset_ = offset;
    if (materialize) {
        if (block.dim() > materialize_cap) {
            fail(ErrorCode::resource, "block dimension " + std::to_string(block.dim()) +
                                          " exceeds materialization cap " +
                                          std::to_string(materialize_cap) +
                                          "; use the closed-form Gram");
        }
        block.vectors_ = explicit_vectors(block);
    }
    return block;
}

MBasisBlock restore_block(std::vector<double> eps_slice, double mass, std::size_t offset,
                          std::optional<Matrix> vectors) {
    MBasisBlock block = build_block(eps_slice, offset, false);
    if (std::abs(block.mass_ - mass) > 1e-12 * std::max(1.0, mass)) {
        fail(ErrorCode::domain, "stored block mass does not match its epsilon slice");
    }
    block.mass_ = mass;
    if (vectors) {
        const auto n = static_cast<Eigen::Index>(block.dim());
        if (vectors->rows() != n || vectors->cols() != n) {
            fail(ErrorCode::length_mismatch, "stored block matrix has the wrong shape");
        }
        block.vectors_ = std::move(vectors);
    }
    return block;
}

double block_gram(const MBasisBlock& block, std::size_t i, std::size_t j) {
    const std::size_t n = block.dim();
    if (i == 0 || j == 0 || i > n || j > n) {
        fail(ErrorCode::index_range, "Gram index (" + std::to_string(i) + ", " +
                                         std::to_string(j) + ") outside 1.." +
                                         std::to_string(n));
    }
    const double s = block.mass();
    const double off = (s - 1.0) / s * std::sqrt(block.eps()[i - 1] * block.eps()[j - 1]);
    return i == j ? off + 1.0 : off;
}

OrderedSystem block_vectors(const MBasisBlock& block, std::size_t materialize_cap) {
    if (block.dim() > materialize_cap) {
        fail(ErrorCode::resource, "block dimension " + std::to_string(block.dim()) +
                                      " exceeds materialization cap " +
                                      std::to_string(materialize_cap) +
                                      "; use the closed-form Gram");
    }
    OrderedSystem sys = OrderedSystem::from_columns(
        block.materialized() ? block.vectors() : explicit_vectors(block));
    for (auto& label : sys.order) label += block.offset();
    return sys;
}

BlockDiagnostics block_diagnostics(const MBasisBlock& block, double tolerance) {
    BlockDiagnostics report;
    report.dim = block.dim();
    report.mass = block.mass();
    report.distance = std::sqrt(block.mass());

    const double s = block.mass();
    for (std::size_t i = 0; i < block.dim(); ++i) {
        const double e = block.eps()[i];
        BlockIndexDiagnostics row;
        row.index = i + 1;
        row.eps = e;
        row.gram_diagonal = e + (1.0 - e / s);
        row.inverse_diagonal = e / (s * s) + (1.0 - e / s);
        row.product = row.gram_diagonal * row.inverse_diagonal;

        auto complain = [&](const std::string& what) {
            std::ostringstream msg;
            msg << "index " << block.offset() + row.index << ": " << what;
            report.failures.push_back(msg.str());
        };
        const bool strict = e > 0.0;
        if (row.gram_diagonal > 1.0 + e + tolerance) complain("b_ii above 1 + eps_i");
        if (strict && s > 1.0 ? !(row.gram_diagonal > 1.0) : row.gram_diagonal < 1.0 - tolerance) {
            complain("b_ii not above 1");
        }
        if (row.inverse_diagonal > 1.0 + tolerance) complain("(B^-1)_ii above 1");
        if (strict ? !(row.inverse_diagonal > 1.0 - e / s)
                   : row.inverse_diagonal < 1.0 - e / s - tolerance) {
            complain("(B^-1)_ii not above 1 - eps_i/s");
        }
        if (strict ? !(row.product < 1.0 + e) : row.product > 1.0 + e + tolerance) {
            complain("b_ii (B^-1)_ii not below 1 + eps_i");
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace mblab
