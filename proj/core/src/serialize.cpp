#include "mblab/serialize.hpp"

#include "mblab/error.hpp"

namespace mblab {

namespace {

json matrix_rows(const Matrix& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    return data;
}

Matrix matrix_from_flat(const json& data, std::size_t rows, std::size_t cols) {
    if (!data.is_array() || data.size() != rows * cols) {
        fail(ErrorCode::length_mismatch, "matrix data has " + std::to_string(data.size()) +
                                             " entries, expected " +
                                             std::to_string(rows * cols));
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = data.at(k++).get<double>();
    return m;
}

}  // namespace

void to_json(json& j, const MBasisBlock& block) {
    j = json{{"dim", block.dim()},
             {"eps_slice", block.eps()},
             {"s", block.mass()},
             {"offset", block.offset()},
             {"materialized", block.materialized()}};
    if (block.materialized()) j["A"] = matrix_rows(block.vectors());
}

MBasisBlock block_from_json(const json& j) {
    try {
        auto eps = j.at("eps_slice").get<std::vector<double>>();
        const auto dim = j.at("dim").get<std::size_t>();
        if (dim != eps.size()) fail(ErrorCode::length_mismatch, "dim disagrees with eps_slice");
        std::optional<Matrix> a;
        if (j.value("materialized", false)) a = matrix_from_flat(j.at("A"), dim, dim);
        return restore_block(std::move(eps), j.at("s").get<double>(),
                             j.value("offset", std::size_t{0}), std::move(a));
    } catch (const json::exception& e) {
        fail(ErrorCode::config, std::string("malformed block record: ") + e.what());
    }
}

json system_to_json(const OrderedSystem& system) {
    return json{{"rows", system.vectors.rows()},
                {"cols", system.vectors.cols()},
                {"data", matrix_rows(system.vectors)},
                {"order", system.order}};
}

OrderedSystem system_from_json(const json& j) {
    try {
        Matrix m;
        if (j.is_array()) {
            const std::size_t rows = j.size();
            const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
            json flat = json::array();
            for (const auto& row : j) {
                if (row.size() != cols) fail(ErrorCode::length_mismatch, "ragged matrix rows");
                for (const auto& v : row) flat.push_back(v);
            }
            m = matrix_from_flat(flat, rows, cols);
        } else {
            m = matrix_from_flat(j.at("data"), j.at("rows").get<std::size_t>(),
                                 j.at("cols").get<std::size_t>());
        }
        if (m.rows() != m.cols() || m.rows() == 0) {
            fail(ErrorCode::length_mismatch, "system matrix must be square and nonempty");
        }
        OrderedSystem sys = OrderedSystem::from_columns(std::move(m));
        if (j.is_object() && j.contains("order")) {
            auto order = j.at("order").get<std::vector<std::size_t>>();
            if (order.size() != sys.dim()) fail(ErrorCode::length_mismatch, "order length");
            sys.order = std::move(order);
        }
        return sys;
    } catch (const json::exception& e) {
        fail(ErrorCode::config, std::string("malformed matrix record: ") + e.what());
    }
}

void to_json(json& j, const BlockPlan& plan) {
    j = json{{"mode", to_string(plan.mode)},
             {"cuts", plan.cuts},
             {"mass", plan.mass},
             {"root_sums", plan.root_sums},
             {"hypothesis", to_string(plan.hypothesis)}};
}

void to_json(json& j, const BlockDiagnostics& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"index", r.index},
                        {"eps", r.eps},
                        {"b_ii", r.gram_diagonal},
                        {"binv_ii", r.inverse_diagonal},
                        {"product", r.product}});
    }
    j = json{{"dim", report.dim},
             {"s", report.mass},
             {"distance", report.distance},
             {"rows", rows},
             {"failures", report.failures},
             {"pass", report.passed()}};
}

void to_json(json& j, const BoundednessReport& report) {
    j = json{{"vector_norms", report.vector_norms},
             {"dual_norms", report.dual_norms},
             {"products", report.products},
             {"budgets", report.budgets},
             {"worst_index", report.worst_index},
             {"worst_ratio", report.worst_ratio},
             {"pass", report.passed()}};
}

void to_json(json& j, const Theorem1Certificate& cert) {
    j = json{{"dim", cert.dim},
             {"C", cert.C},
             {"trace_B", cert.trace_gram},
             {"trace_Binv", cert.trace_inverse},
             {"defect", cert.defect},
             {"R_squared", cert.r_squared},
             {"bound", cert.bound},
             {"distance", cert.distance},
             {"failures", cert.failures},
             {"pass", cert.passed()}};
}

void to_json(json& j, const Witness& w) {
    j = json{{"C", w.C},
             {"m", w.m},
             {"F", w.F},
             {"sigma_F", w.sigma_F},
             {"E", w.E},
             {"alpha", w.alpha},
             {"t_m", w.t},
             {"ratio", w.ratio},
             {"guaranteed_bound", w.guaranteed_bound},
             {"block_length", w.block_length},
             {"block_mass", w.block_mass},
             {"e_norm_sq", w.e_norm_sq},
             {"f_norm_sq", w.f_norm_sq},
             {"signed_root_sum", w.signed_root_sum}};
}

void to_json(json& j, const WitnessBoundsReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back(
            {{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.passed}});
    }
    j = json{{"checks", checks}, {"pass", report.passed()}};
}

void to_json(json& j, const PermutationConstant& result) {
    j = json{{"constant", result.constant},
             {"ordering", result.ordering},
             {"exact", result.exact}};
}

void to_json(json& j, const AuerbachReport& report) {
    j = json{{"dim", report.dim},
             {"eps_max", report.eps_max},
             {"basis_norm_deviation_max", report.basis_norm_deviation_max},
             {"samples", report.samples},
             {"violations", report.violations},
             {"max_upper_ratio", report.max_upper_ratio},
             {"max_triangle_excess", report.max_triangle_excess},
             {"details", report.details}};
}

void to_json(json& j, const AuerbachL1Report& report) {
    j = json{{"characters", report.characters},
             {"l1_norms_one", report.l1_norms_one},
             {"sup_norms_one", report.sup_norms_one},
             {"biorthogonal", report.biorthogonal},
             {"failures", report.failures},
             {"pass", report.passed()}};
}

void to_json(json& j, const CharacterOrdering& result) {
    j = json{{"value", result.value}, {"ordering", result.ordering}, {"exact", result.exact}};
}

}  // namespace mblab
