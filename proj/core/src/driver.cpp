#include "mblab/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "mblab/blockbasis.hpp"
#include "mblab/characters.hpp"
#include "mblab/conditionality.hpp"
#include "mblab/error.hpp"
#include "mblab/renorm.hpp"
#include "mblab/serialize.hpp"

namespace mblab {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
    fail(ErrorCode::config, "config field '" + field + "': " + message);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

double read_number(const json& j, const std::string& field) {
    if (!j.is_number()) field_error(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) field_error(field, "must be finite");
    return v;
}

std::uint64_t read_unsigned(const json& j, const std::string& field) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) field_error(field, "must be non-negative");
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    field_error(field, "expected a non-negative integer");
}

std::string read_string(const json& j, const std::string& field) {
    if (!j.is_string()) field_error(field, "expected a string");
    return j.get<std::string>();
}

bool read_bool(const json& j, const std::string& field) {
    if (!j.is_boolean()) field_error(field, "expected true or false");
    return j.get<bool>();
}

template <class T, class Read>
std::vector<T> read_list(const json& j, const std::string& field, Read read) {
    if (!j.is_array()) field_error(field, "expected an array");
    std::vector<T> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(static_cast<T>(read(j[k], field + "[" + std::to_string(k) + "]")));
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

PlanMode parse_plan(const std::string& name, const std::string& field) {
    if (name == "theorem2") return PlanMode::theorem2;
    if (name == "theorem4") return PlanMode::theorem4;
    field_error(field, "unknown plan '" + name + "' (theorem2 | theorem4)");
}

PermutationKind parse_permutation(const std::string& name, const std::string& field) {
    if (name == "identity") return PermutationKind::identity;
    if (name == "reversal") return PermutationKind::reversal;
    if (name == "random") return PermutationKind::random;
    if (name == "csv") return PermutationKind::csv;
    field_error(field, "unknown permutation '" + name + "' (identity | reversal | random | csv)");
}

std::string to_string(PermutationKind kind) {
    switch (kind) {
        case PermutationKind::identity: return "identity";
        case PermutationKind::reversal: return "reversal";
        case PermutationKind::random: return "random";
        case PermutationKind::csv: return "csv";
    }
    return "?";
}

SweepAxis parse_axis(const std::string& name, const std::string& field) {
    if (name == "C") return SweepAxis::C;
    if (name == "dim" || name == "dimension") return SweepAxis::dim;
    if (name == "block") return SweepAxis::block;
    if (name == "m") return SweepAxis::m;
    if (name == "p") return SweepAxis::p;
    field_error(field, "unknown axis '" + name + "' (C | dim | block | m | p)");
}

void check_epsilon_spec(const json& spec, const std::string& field) {
    if (!spec.is_object()) field_error(field, "expected an object with a 'kind'");
    if (!spec.contains("kind")) field_error(join(field, "kind"), "missing");
    const std::string kind = read_string(spec.at("kind"), join(field, "kind"));
    auto need = [&](const char* key) {
        if (!spec.contains(key)) field_error(join(field, key), "missing for kind " + kind);
        return read_number(spec.at(key), join(field, key));
    };
    if (kind == "constant") {
        const double v = need("value");
        if (v < 0.0 || v > 1.0) field_error(join(field, "value"), "must lie in [0, 1]");
    } else if (kind == "power_law") {
        const double scale = spec.contains("scale") ? need("scale") : 1.0;
        if (scale < 0.0 || scale > 1.0) field_error(join(field, "scale"), "must lie in [0, 1]");
        if (need("exponent") < 0.0) field_error(join(field, "exponent"), "must be >= 0");
    } else if (kind == "geometric") {
        const double scale = need("scale");
        if (scale < 0.0 || scale > 1.0) field_error(join(field, "scale"), "must lie in [0, 1]");
        if (need("ratio") <= 0.0) field_error(join(field, "ratio"), "must be > 0");
    } else if (kind == "list") {
        if (!spec.contains("values")) field_error(join(field, "values"), "missing for kind list");
        const auto values = read_list<double>(spec.at("values"), join(field, "values"),
                                              read_number);
        if (values.empty()) field_error(join(field, "values"), "must be nonempty");
    } else if (kind == "csv") {
        if (!spec.contains("path")) field_error(join(field, "path"), "missing for kind csv");
        read_string(spec.at("path"), join(field, "path"));
    } else {
        field_error(join(field, "kind"),
                    "unknown kind '" + kind + "' (constant | power_law | geometric | list | csv)");
    }
}

// Independent jobs on up to thread_cap() workers; results land by index.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min(thread_cap(), count);
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

// ---------------------------------------------------------------- systems

struct LoadedSystem {
    OrderedSystem system;
    std::vector<double> eps;
    std::optional<MBasisBlock> block;
};

LoadedSystem system_for(const RunConfig& config, std::size_t dim) {
    const EpsilonSequence eps = config.epsilon_sequence();
    LoadedSystem out;
    if (!config.matrix.empty()) {
        const auto path = resolve(config.base_dir, config.matrix);
        if (path.extension() == ".csv") {
            out.system = OrderedSystem::from_columns(read_matrix_csv(path));
        } else {
            std::ifstream in(path);
            if (!in) fail(ErrorCode::io, "cannot open " + path.string());
            json j;
            try {
                in >> j;
            } catch (const json::parse_error& e) {
                fail(ErrorCode::config, path.string() + ": " + e.what());
            }
            out.system = system_from_json(j);
        }
        out.eps = eps.slice(1, out.system.dim());
        return out;
    }
    out.eps = eps.slice(1, dim);
    out.block = build_block(out.eps, 0, true);
    out.system = block_vectors(*out.block);
    return out;
}

Permutation make_permutation(const RunConfig& config, std::size_t n, std::uint64_t seed) {
    switch (config.permutation) {
        case PermutationKind::identity: return Permutation::identity(n);
        case PermutationKind::reversal: return Permutation::reversal(n);
        case PermutationKind::random: return Permutation::random(n, seed);
        case PermutationKind::csv:
            return Permutation::from_images(
                read_permutation_csv(resolve(config.base_dir, config.permutation_path)));
    }
    fail(ErrorCode::config, "unknown permutation source");
}

PlanOptions plan_options(const RunConfig& config) {
    PlanOptions o;
    o.scan_horizon = config.scan_horizon;
    return o;
}

// ---------------------------------------------------------------- construct

struct BlockRow {
    json item;
    std::vector<std::string> row;
    bool passed = true;
    double distance = 0.0;
};

BlockRow construct_block_row(const RunConfig& config, const BlockPlan& plan,
                             const EpsilonSequence& eps, std::size_t m) {
    const std::size_t first = plan.first_index(m);
    const std::size_t last = plan.last_index(m);
    const auto slice = eps.slice(first, last);
    const MBasisBlock block = build_block(slice, first - 1, true);
    const BlockDiagnostics diag = block_diagnostics(block, config.tolerances.identity);

    const OrderedSystem system = block_vectors(block);
    const BoundednessReport bounds = bound_products(system, slice, config.tolerances);
    const double explicit_distance = riesz_distance(system, config.tolerances);
    const double tol = config.tolerances.inequality * std::max(1.0, diag.distance);
    const bool distance_ok = std::abs(explicit_distance - diag.distance) <= tol;

    BlockRow out;
    out.distance = diag.distance;
    out.passed = diag.passed() && bounds.passed() && distance_ok;
    out.item = {{"m", m},
                {"first", first},
                {"last", last},
                {"r_squared", plan.mass[m - 1]},
                {"diagnostics", diag},
                {"bounds", bounds},
                {"distance_explicit", explicit_distance},
                {"pass", out.passed}};
    if (block.dim() <= 64) out.item["block"] = block;
    out.row = {fmt(m),
               fmt(first),
               fmt(last),
               fmt(block.dim()),
               fmt(block.mass()),
               fmt(diag.distance),
               fmt(explicit_distance),
               fmt(bounds.worst_ratio),
               fmt(out.passed)};
    return out;
}

const std::vector<std::string> kBlockHeader{"m",        "first",    "last",
                                            "dim",      "s",        "distance",
                                            "distance_explicit", "worst_ratio", "pass"};

void construct_blocks(const RunConfig& config, const std::vector<std::size_t>& indices,
                      Report& report) {
    const EpsilonSequence eps = config.epsilon_sequence();
    const std::size_t count = *std::max_element(indices.begin(), indices.end());
    const PlanMode mode = config.plan.value_or(PlanMode::theorem2);
    const BlockPlan plan = mode == PlanMode::theorem2
                               ? plan_blocks_t2(eps, count, plan_options(config))
                               : plan_blocks_t4(eps, count, plan_options(config));

    std::vector<BlockRow> rows(indices.size());
    parallel_for(indices.size(),
                 [&](std::size_t k) { rows[k] = construct_block_row(config, plan, eps, indices[k]); });

    report.table.header = kBlockHeader;
    report.items.push_back({{"plan", plan}, {"growth_hint", to_string(eps.growth_hint())}});
    for (std::size_t k = 0; k < rows.size(); ++k) {
        report.passed = report.passed && rows[k].passed;
        report.items.push_back(rows[k].item);
        report.table.add_row(rows[k].row);
    }
    // Consecutive plan blocks must have strictly growing distance sqrt(s).
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (indices[k] == indices[k - 1] + 1 && !(rows[k].distance > rows[k - 1].distance)) {
            report.passed = false;
            report.items.push_back(
                {{"failure", "distance not increasing at block " + std::to_string(indices[k])}});
        }
    }
}

void run_construct(const RunConfig& config, Report& report) {
    std::vector<std::size_t> indices(config.block_count);
    std::iota(indices.begin(), indices.end(), std::size_t{1});
    construct_blocks(config, indices, report);
}

// ---------------------------------------------------------------- verify

const std::vector<std::string> kTheorem1Header{
    "dim",       "C",     "trace_B", "trace_Binv", "defect", "R_squared",
    "distance",  "bound", "distance_over_bound",   "bounded", "pass"};

struct Theorem1Row {
    json item;
    std::vector<std::string> row;
    bool passed = false;
};

Theorem1Row theorem1_row(const RunConfig& config, std::size_t dim) {
    const LoadedSystem loaded = system_for(config, dim);
    const BoundednessReport bounds = bound_products(loaded.system, loaded.eps, config.tolerances);
    const double raw_distance = riesz_distance(loaded.system, config.tolerances);

    Theorem1Row out;
    out.item = {{"dim", loaded.system.dim()},
                {"bounds", bounds},
                {"distance_raw", raw_distance}};
    Theorem1Certificate cert;
    if (bounds.passed()) {
        const OrderedSystem normalized = normalize_system(loaded.system, config.tolerances);
        cert = theorem1_verify(normalized, loaded.eps, config.tolerances);
        out.item["certificate"] = cert;
        out.passed = cert.passed();
    } else {
        cert.dim = loaded.system.dim();
        cert.C = std::accumulate(loaded.eps.begin(), loaded.eps.end(), 0.0);
        out.item["certificate"] = nullptr;
    }
    out.item["pass"] = out.passed;
    const double ratio = cert.bound > 0.0 ? cert.distance / cert.bound : 0.0;
    out.row = {fmt(cert.dim),      fmt(cert.C),        fmt(cert.trace_gram),
               fmt(cert.trace_inverse), fmt(cert.defect), fmt(cert.r_squared),
               fmt(cert.distance), fmt(cert.bound),    fmt(ratio),
               fmt(bounds.passed()), fmt(out.passed)};
    return out;
}

void theorem1_rows(const RunConfig& config, const std::vector<std::size_t>& dims, Report& report) {
    std::vector<Theorem1Row> rows(dims.size());
    parallel_for(dims.size(), [&](std::size_t k) { rows[k] = theorem1_row(config, dims[k]); });
    report.table.header = kTheorem1Header;
    for (auto& r : rows) {
        report.passed = report.passed && r.passed;
        report.items.push_back(std::move(r.item));
        report.table.add_row(std::move(r.row));
    }
}

void run_verify(const RunConfig& config, Report& report) {
    const std::vector<std::size_t> dims =
        config.matrix.empty() ? config.dims : std::vector<std::size_t>{0};
    theorem1_rows(config, dims, report);
}

// ---------------------------------------------------------------- witness

const std::vector<std::string> kWitnessHeader{
    "C",     "trial",     "seed",      "m",     "block_length",     "alpha",
    "t_m",   "e_norm_sq", "f_norm_sq", "ratio", "guaranteed_bound", "bounds_pass", "pass"};

struct WitnessJob {
    std::size_t target = 0;
    std::size_t trial = 0;
};

struct WitnessRow {
    json item;
    std::vector<std::string> row;
    bool passed = false;
};

void witness_rows(const RunConfig& config, Report& report) {
    const EpsilonSequence eps = config.epsilon_sequence();
    const double c_max = *std::max_element(config.targets.begin(), config.targets.end());
    // Block m has root mass >= m, so ceil(3C) blocks always suffice.
    const std::size_t needed = static_cast<std::size_t>(std::ceil(3.0 * c_max));
    const BlockPlan plan =
        plan_blocks_t4(eps, std::max(config.block_count, needed), plan_options(config));

    std::vector<std::size_t> block_of(config.targets.size());
    std::vector<MBasisBlock> blocks;
    for (std::size_t k = 0; k < config.targets.size(); ++k) {
        block_of[k] = choose_block(plan, config.targets[k]);
        const std::size_t first = plan.first_index(block_of[k]);
        blocks.push_back(build_block(eps.slice(first, plan.last_index(block_of[k])), first - 1));
    }

    std::vector<WitnessJob> jobs;
    for (std::size_t k = 0; k < config.targets.size(); ++k)
        for (std::size_t t = 0; t < config.trials; ++t) jobs.push_back({k, t});

    const std::uint64_t base_seed = config.seed.value_or(0);
    std::vector<WitnessRow> rows(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t j) {
        const auto [k, trial] = jobs[j];
        const double C = config.targets[k];
        const std::size_t n = plan.last_index(block_of[k]);
        const std::uint64_t seed = base_seed + j;
        const Permutation sigma = make_permutation(config, n, seed);
        const Witness w = find_witness(plan, blocks[k], sigma, C);
        const WitnessBoundsReport bounds = witness_bounds_check(w, blocks[k]);

        WitnessRow& out = rows[j];
        out.passed = w.ratio >= C && bounds.passed();
        out.item = {{"trial", trial}, {"witness", w}, {"bounds", bounds}, {"pass", out.passed}};
        if (config.permutation == PermutationKind::random) out.item["seed"] = seed;
        if (w.F.size() <= 256) {
            // eps indexed by the vector label and by its position in sigma.
            std::vector<double> by_vector, by_position;
            for (std::size_t i = 0; i < w.F.size(); ++i) {
                by_vector.push_back(eps(w.sigma_F[i]));
                by_position.push_back(eps(w.F[i]));
            }
            out.item["eps_by_vector"] = by_vector;
            out.item["eps_by_position"] = by_position;
        }
        out.row = {fmt(C),
                   fmt(trial),
                   config.permutation == PermutationKind::random ? fmt(std::size_t(seed)) : "",
                   fmt(w.m),
                   fmt(w.block_length),
                   fmt(w.alpha),
                   fmt(w.t),
                   fmt(w.e_norm_sq),
                   fmt(w.f_norm_sq),
                   fmt(w.ratio),
                   fmt(w.guaranteed_bound),
                   fmt(bounds.passed()),
                   fmt(out.passed)};
    });

    report.table.header = kWitnessHeader;
    report.items.push_back({{"plan_blocks", plan.block_count()},
                            {"plan_last_index", plan.cuts.back()},
                            {"growth_hint", to_string(eps.growth_hint())}});
    for (auto& r : rows) {
        report.passed = report.passed && r.passed;
        report.items.push_back(std::move(r.item));
        report.table.add_row(std::move(r.row));
    }
}

// ---------------------------------------------------------------- oracle

void run_oracle(const RunConfig& config, Report& report) {
    const std::vector<std::size_t> dims =
        config.matrix.empty() ? config.dims : std::vector<std::size_t>{0};
    report.table.header = {"dim", "basis_constant", "best_constant", "best_exact",
                           "witness_ratio", "pass"};
    OrderingSearchOptions options;
    options.exact_cap = config.exact_cap;
    options.seed = config.seed.value_or(options.seed);
    for (std::size_t dim : dims) {
        const LoadedSystem loaded = system_for(config, dim);
        const double natural = basis_constant_exact(loaded.system, kBasisConstantCap,
                                                    config.tolerances);
        const PermutationConstant best =
            best_permutation_constant(loaded.system, options, config.tolerances);
        const double slack = config.tolerances.inequality;
        bool passed = best.constant >= 1.0 - slack && best.constant <= natural * (1.0 + slack);
        json item = {{"dim", loaded.system.dim()},
                     {"basis_constant", natural},
                     {"best", best}};
        double ratio = std::nan("");
        if (loaded.block) {
            std::vector<std::size_t> order(loaded.block->dim());
            std::iota(order.begin(), order.end(), std::size_t{1});
            const Witness w = witness_in_block(*loaded.block, order);
            ratio = w.ratio;
            item["witness"] = w;
            passed = passed && w.ratio <= natural * (1.0 + slack);
        }
        item["pass"] = passed;
        report.passed = report.passed && passed;
        report.items.push_back(item);
        report.table.add_row({fmt(loaded.system.dim()), fmt(natural), fmt(best.constant),
                              fmt(best.exact), loaded.block ? fmt(ratio) : "", fmt(passed)});
    }
}

// ---------------------------------------------------------------- renorm

void run_renorm(const RunConfig& config, Report& report) {
    const std::vector<std::size_t> dims =
        config.matrix.empty() ? config.dims : std::vector<std::size_t>{0};
    report.table.header = {"dim", "eps_max", "basis_norm_deviation_max", "samples",
                           "violations", "pass"};
    for (std::size_t dim : dims) {
        const LoadedSystem loaded = system_for(config, dim);
        const RenormedSpace space =
            RenormedSpace::from_system(loaded.system, loaded.eps, config.tolerances);
        const AuerbachReport r = verify_auerbach_renormed(space, config.samples, *config.seed);
        json item = r;
        item["pass"] = r.passed();
        report.passed = report.passed && r.passed();
        report.items.push_back(item);
        report.table.add_row({fmt(r.dim), fmt(r.eps_max), fmt(r.basis_norm_deviation_max),
                              fmt(r.samples), fmt(r.violations), fmt(r.passed())});
    }
}

// ---------------------------------------------------------------- characters

OrderingSearchOptions character_search(const RunConfig& config) {
    OrderingSearchOptions options;
    options.exact_cap = config.exhaustive ? kMaxExactElements : config.exact_cap;
    options.seed = config.seed.value_or(options.seed);
    return options;
}

void add_profile_rows(CsvTable& table, unsigned m, const std::string& mode,
                      const std::vector<double>& profile) {
    for (std::size_t k = 0; k < profile.size(); ++k)
        table.add_row({std::to_string(m), mode, fmt(k + 1), fmt(profile[k])});
}

void character_rows(const RunConfig& config, const std::vector<unsigned>& ranks, Report& report) {
    report.table.header = {"m", "ordering_mode", "k", "prefix_l1"};
    std::vector<json> items(ranks.size());
    std::vector<CsvTable> tables(ranks.size());
    std::vector<char> passed(ranks.size(), 0);
    parallel_for(ranks.size(), [&](std::size_t idx) {
        const unsigned m = ranks[idx];
        const CharacterSystem sys = walsh_system(m);
        const AuerbachL1Report auerbach = auerbach_check_l1(sys);
        const auto natural = prefix_l1_profile(sys);
        const CharacterOrdering best = min_max_prefix_l1(sys, character_search(config));
        const auto optimal = prefix_l1_profile(sys.reordered(best.ordering));

        json item = {{"m", m},
                     {"auerbach", auerbach},
                     {"natural_profile", natural},
                     {"min_max_prefix_l1", best}};
        if (config.exhaustive && sys.size() <= 8) {
            json table = json::array();
            for (const auto& row : enumerate_prefix_orderings(sys))
                table.push_back({{"ordering", row.ordering}, {"max_prefix_l1", row.max_prefix_l1}});
            item["orderings"] = std::move(table);
        }
        bool ok = auerbach.passed();
        if (!config.p_values.empty()) {
            json rows = json::array();
            for (double p : config.p_values) {
                const double v =
                    unconditionality_constant_lp(sys, p, config.trials, *config.seed);
                rows.push_back({{"p", p}, {"trials", config.trials}, {"lower_bound", v}});
                // Orthogonality forces exactly 1 in L^2.
                if (p == 2.0 && v != 1.0) ok = false;
            }
            item["unconditionality"] = std::move(rows);
        }
        item["pass"] = ok;
        passed[idx] = ok;
        tables[idx].header = report.table.header;
        add_profile_rows(tables[idx], m, "natural", natural);
        add_profile_rows(tables[idx], m, best.exact ? "optimal" : "heuristic", optimal);
        items[idx] = std::move(item);
    });
    for (std::size_t idx = 0; idx < ranks.size(); ++idx) {
        report.passed = report.passed && passed[idx];
        report.items.push_back(std::move(items[idx]));
        for (auto& row : tables[idx].rows) report.table.add_row(std::move(row));
    }
}

void unconditionality_rows(const RunConfig& config, const std::vector<double>& ps,
                           Report& report) {
    report.table.header = {"m", "p", "trials", "lower_bound"};
    struct Job {
        unsigned m;
        double p;
    };
    std::vector<Job> jobs;
    for (unsigned m : config.ranks)
        for (double p : ps) jobs.push_back({m, p});
    std::vector<double> values(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t k) {
        values[k] = unconditionality_constant_lp(walsh_system(jobs[k].m), jobs[k].p, config.trials,
                                                 *config.seed);
    });
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const bool ok = jobs[k].p != 2.0 || values[k] == 1.0;
        report.passed = report.passed && ok;
        report.items.push_back({{"m", jobs[k].m},
                                {"p", jobs[k].p},
                                {"trials", config.trials},
                                {"lower_bound", values[k]},
                                {"pass", ok}});
        report.table.add_row(
            {std::to_string(jobs[k].m), fmt(jobs[k].p), fmt(config.trials), fmt(values[k])});
    }
}

// ---------------------------------------------------------------- sweep

std::vector<std::size_t> positive_integers(const std::vector<double>& values,
                                           const std::string& field) {
    std::vector<std::size_t> out;
    for (double v : values) {
        if (v < 1.0 || v != std::floor(v)) field_error(field, "axis values must be positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- public

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::construct: return "construct";
        case RunMode::verify: return "verify";
        case RunMode::witness: return "witness";
        case RunMode::oracle: return "oracle";
        case RunMode::renorm: return "renorm";
        case RunMode::characters: return "characters";
        case RunMode::sweep: return "sweep";
    }
    return "?";
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::C: return "C";
        case SweepAxis::dim: return "dim";
        case SweepAxis::block: return "block";
        case SweepAxis::m: return "m";
        case SweepAxis::p: return "p";
    }
    return "?";
}

RunMode parse_run_mode(const std::string& name) {
    for (RunMode m : {RunMode::construct, RunMode::verify, RunMode::witness, RunMode::oracle,
                      RunMode::renorm, RunMode::characters, RunMode::sweep}) {
        if (to_string(m) == name) return m;
    }
    field_error("mode", "unknown mode '" + name + "'");
}

std::size_t thread_cap() {
    if (const char* env = std::getenv("MBLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

EpsilonSequence RunConfig::epsilon_sequence() const {
    const std::string kind = epsilon.at("kind").get<std::string>();
    if (kind == "constant") return EpsilonSequence::constant(epsilon.at("value").get<double>());
    if (kind == "power_law") {
        return EpsilonSequence::power_law(epsilon.value("scale", 1.0),
                                          epsilon.at("exponent").get<double>());
    }
    if (kind == "geometric") {
        return EpsilonSequence::geometric(epsilon.at("scale").get<double>(),
                                          epsilon.at("ratio").get<double>());
    }
    if (kind == "list") {
        return EpsilonSequence::explicit_list(epsilon.at("values").get<std::vector<double>>());
    }
    return EpsilonSequence::explicit_list(
        read_column_csv(resolve(base_dir, epsilon.at("path").get<std::string>())));
}

json RunConfig::to_json() const {
    json j = {{"mode", to_string(mode)},
              {"epsilon", epsilon},
              {"block_count", block_count},
              {"dims", dims},
              {"targets", targets},
              {"permutation", {{"kind", to_string(permutation)}}},
              {"trials", trials},
              {"tolerances",
               {{"identity", tolerances.identity},
                {"inequality", tolerances.inequality},
                {"singular_floor", tolerances.singular_floor}}},
              {"ranks", ranks},
              {"exhaustive", exhaustive},
              {"p", p_values},
              {"samples", samples},
              {"scan_horizon", scan_horizon},
              {"exact_cap", exact_cap},
              {"format", format == OutputFormat::json ? "json" : "csv"}};
    if (plan) j["plan"] = to_string(*plan);
    if (!permutation_path.empty()) j["permutation"]["path"] = permutation_path.string();
    if (!matrix.empty()) j["matrix"] = matrix.string();
    if (sweep_axis) j["sweep"] = {{"axis", to_string(*sweep_axis)}, {"values", sweep_values}};
    if (!out.empty()) j["out"] = out.string();
    if (seed) j["seed"] = *seed;
    return j;
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) fail(ErrorCode::config, "config must be a JSON object");
    static const std::vector<std::string> known{
        "mode",       "epsilon", "plan",         "block_count", "dims",    "targets",
        "permutation", "trials", "tolerances",   "matrix",      "ranks",   "exhaustive",
        "p",          "samples", "scan_horizon", "exact_cap",   "sweep",   "out",
        "format",     "seed"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            field_error(key, "unknown field");
    }

    RunConfig c;
    c.base_dir = base_dir;
    if (j.contains("mode")) c.mode = parse_run_mode(read_string(j["mode"], "mode"));
    if (j.contains("epsilon")) {
        check_epsilon_spec(j["epsilon"], "epsilon");
        c.epsilon = j["epsilon"];
    }
    if (j.contains("plan")) c.plan = parse_plan(read_string(j["plan"], "plan"), "plan");
    if (j.contains("block_count")) {
        c.block_count = read_unsigned(j["block_count"], "block_count");
        if (c.block_count == 0) field_error("block_count", "must be >= 1");
    }
    if (j.contains("dims")) {
        c.dims = read_list<std::size_t>(j["dims"], "dims", read_unsigned);
        if (c.dims.empty()) field_error("dims", "must be nonempty");
        for (std::size_t d : c.dims)
            if (d == 0 || d > kMaterializeCap) field_error("dims", "entries must lie in 1..4096");
    }
    if (j.contains("targets")) {
        c.targets = read_list<double>(j["targets"], "targets", read_number);
        for (double t : c.targets)
            if (t <= 0.0) field_error("targets", "entries must be > 0");
    }
    if (j.contains("permutation")) {
        const json& p = j["permutation"];
        if (p.is_string()) {
            c.permutation = parse_permutation(p.get<std::string>(), "permutation");
        } else if (p.is_object()) {
            if (!p.contains("kind")) field_error("permutation.kind", "missing");
            c.permutation =
                parse_permutation(read_string(p["kind"], "permutation.kind"), "permutation.kind");
            if (p.contains("seed")) c.seed = read_unsigned(p["seed"], "permutation.seed");
            if (p.contains("path")) c.permutation_path = read_string(p["path"], "permutation.path");
        } else {
            field_error("permutation", "expected a string or an object");
        }
        if (c.permutation == PermutationKind::csv && c.permutation_path.empty())
            field_error("permutation.path", "required for kind csv");
    }
    if (j.contains("trials")) {
        c.trials = read_unsigned(j["trials"], "trials");
        if (c.trials == 0) field_error("trials", "must be >= 1");
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (!t.is_object()) field_error("tolerances", "expected an object");
        auto tol = [&](const char* key, double& slot) {
            if (!t.contains(key)) return;
            slot = read_number(t[key], std::string("tolerances.") + key);
            if (slot <= 0.0) field_error(std::string("tolerances.") + key, "must be > 0");
        };
        tol("identity", c.tolerances.identity);
        tol("inequality", c.tolerances.inequality);
        tol("singular_floor", c.tolerances.singular_floor);
    }
    if (j.contains("matrix")) c.matrix = read_string(j["matrix"], "matrix");
    if (j.contains("ranks")) {
        c.ranks = read_list<unsigned>(j["ranks"], "ranks", read_unsigned);
        if (c.ranks.empty()) field_error("ranks", "must be nonempty");
        for (unsigned m : c.ranks)
            if (m == 0 || m > CharacterSystem::kMaxRank) field_error("ranks", "entries must lie in 1..12");
    }
    if (j.contains("exhaustive")) c.exhaustive = read_bool(j["exhaustive"], "exhaustive");
    if (j.contains("p")) {
        c.p_values = read_list<double>(j["p"], "p", read_number);
        for (double p : c.p_values)
            if (p < 1.0) field_error("p", "entries must be >= 1");
    }
    if (j.contains("samples")) {
        c.samples = read_unsigned(j["samples"], "samples");
        if (c.samples == 0) field_error("samples", "must be >= 1");
    }
    if (j.contains("scan_horizon")) {
        c.scan_horizon = read_unsigned(j["scan_horizon"], "scan_horizon");
        if (c.scan_horizon == 0) field_error("scan_horizon", "must be >= 1");
    }
    if (j.contains("exact_cap")) {
        c.exact_cap = read_unsigned(j["exact_cap"], "exact_cap");
        if (c.exact_cap > kMaxExactElements) field_error("exact_cap", "must be <= 24");
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (!s.is_object()) field_error("sweep", "expected an object");
        if (!s.contains("axis")) field_error("sweep.axis", "missing");
        c.sweep_axis = parse_axis(read_string(s["axis"], "sweep.axis"), "sweep.axis");
        if (!s.contains("values")) field_error("sweep.values", "missing");
        c.sweep_values = read_list<double>(s["values"], "sweep.values", read_number);
    }
    if (j.contains("out")) c.out = read_string(j["out"], "out");
    if (j.contains("format")) {
        const std::string f = read_string(j["format"], "format");
        if (f == "json") c.format = OutputFormat::json;
        else if (f == "csv") c.format = OutputFormat::csv;
        else field_error("format", "expected json or csv");
    }
    if (j.contains("seed")) {
        const std::uint64_t s = read_unsigned(j["seed"], "seed");
        if (c.seed && *c.seed != s) field_error("seed", "disagrees with permutation.seed");
        c.seed = s;
    }
    return c;
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
        fail(ErrorCode::config, "config line " + std::to_string(line) + ": " + e.what());
    }
    return parse_config(j, base_dir);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.parent_path());
}

void validate_config(const RunConfig& c) {
    check_epsilon_spec(c.epsilon, "epsilon");
    auto need_seed = [&](const std::string& why) {
        if (!c.seed) field_error("seed", "required for " + why);
    };
    const bool random_perm = c.permutation == PermutationKind::random;
    switch (c.mode) {
        case RunMode::witness:
            if (c.targets.empty()) field_error("targets", "required for witness");
            if (c.plan == PlanMode::theorem2) field_error("plan", "witness runs use theorem4");
            if (random_perm) need_seed("random permutations");
            break;
        case RunMode::renorm:
            need_seed("renorm sampling");
            break;
        case RunMode::characters:
            if (!c.p_values.empty()) need_seed("unconditionality sampling");
            break;
        case RunMode::oracle:
            for (std::size_t d : c.dims)
                if (d > c.exact_cap && c.matrix.empty()) need_seed("heuristic ordering search");
            break;
        case RunMode::sweep:
            if (!c.sweep_axis) field_error("sweep.axis", "required for sweep");
            if (c.sweep_values.empty()) field_error("sweep.values", "empty axis");
            if (*c.sweep_axis == SweepAxis::C) {
                for (double v : c.sweep_values)
                    if (v <= 0.0) field_error("sweep.values", "C values must be > 0");
                if (random_perm) need_seed("random permutations");
            }
            if (*c.sweep_axis == SweepAxis::p) {
                for (double v : c.sweep_values)
                    if (v < 1.0) field_error("sweep.values", "p values must be >= 1");
                need_seed("unconditionality sampling");
            }
            break;
        default:
            break;
    }
}

json Report::to_json() const {
    return {{"mode", mode},
            {"config", config},
            {"items", items},
            {"table", {{"header", table.header}, {"rows", table.rows}}},
            {"pass", passed},
            {"timings", timings}};
}

Report Report::from_json(const json& j) {
    Report r;
    try {
        r.mode = j.at("mode").get<std::string>();
        r.config = j.at("config");
        r.items = j.at("items");
        r.table.header = j.at("table").at("header").get<std::vector<std::string>>();
        r.table.rows = j.at("table").at("rows").get<std::vector<std::vector<std::string>>>();
        r.passed = j.at("pass").get<bool>();
        r.timings = j.at("timings");
    } catch (const json::exception& e) {
        fail(ErrorCode::config, std::string("malformed report: ") + e.what());
    }
    return r;
}

Report sweep(const RunConfig& config) {
    validate_config(config);
    if (!config.sweep_axis || config.sweep_values.empty())
        fail(ErrorCode::config, "sweep needs a nonempty axis");
    const auto start = Clock::now();
    Report report;
    report.mode = "sweep";
    report.config = config.to_json();
    switch (*config.sweep_axis) {
        case SweepAxis::C: {
            RunConfig c = config;
            c.targets = config.sweep_values;
            witness_rows(c, report);
            break;
        }
        case SweepAxis::dim:
            theorem1_rows(config, positive_integers(config.sweep_values, "sweep.values"), report);
            break;
        case SweepAxis::block:
            construct_blocks(config, positive_integers(config.sweep_values, "sweep.values"),
                             report);
            break;
        case SweepAxis::m: {
            std::vector<unsigned> ranks;
            for (std::size_t m : positive_integers(config.sweep_values, "sweep.values")) {
                if (m > CharacterSystem::kMaxRank) field_error("sweep.values", "m must be <= 12");
                ranks.push_back(static_cast<unsigned>(m));
            }
            RunConfig c = config;
            c.p_values.clear();
            character_rows(c, ranks, report);
            break;
        }
        case SweepAxis::p:
            unconditionality_rows(config, config.sweep_values, report);
            break;
    }
    report.timings["total_seconds"] = seconds_since(start);
    return report;
}

Report run(const RunConfig& config) {
    if (config.mode == RunMode::sweep) return sweep(config);
    validate_config(config);
    const auto start = Clock::now();
    Report report;
    report.mode = to_string(config.mode);
    report.config = config.to_json();
    switch (config.mode) {
        case RunMode::construct: run_construct(config, report); break;
        case RunMode::verify: run_verify(config, report); break;
        case RunMode::witness: witness_rows(config, report); break;
        case RunMode::oracle: run_oracle(config, report); break;
        case RunMode::renorm: run_renorm(config, report); break;
        case RunMode::characters: character_rows(config, config.ranks, report); break;
        case RunMode::sweep: break;
    }
    report.timings["total_seconds"] = seconds_since(start);
    return report;
}

void write_report(const Report& report, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::csv) {
        report.table.write(out);
    } else {
        out << report.to_json().dump(2) << '\n';
    }
}

}  // namespace mblab
