#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mblab/csv.hpp"
#include "mblab/seqplan.hpp"
#include "mblab/verify.hpp"

namespace mblab {

enum class RunMode { construct, verify, witness, oracle, renorm, characters, sweep };
enum class OutputFormat { json, csv };
enum class PermutationKind { identity, reversal, random, csv };
enum class SweepAxis { C, dim, block, m, p };

std::string to_string(RunMode mode);
std::string to_string(SweepAxis axis);
RunMode parse_run_mode(const std::string& name);

struct RunConfig {
    RunMode mode = RunMode::construct;
    nlohmann::json epsilon = {{"kind", "constant"}, {"value", 0.5}};
    std::optional<PlanMode> plan;           // default depends on the mode
    std::size_t block_count = 2;
    std::vector<std::size_t> dims{4};       // verify, oracle, renorm
    std::vector<double> targets;            // C values for witness runs
    PermutationKind permutation = PermutationKind::identity;
    std::filesystem::path permutation_path;
    std::size_t trials = 1;
    Tolerances tolerances;
    std::filesystem::path matrix;           // JSON or CSV system, optional
    std::vector<unsigned> ranks{2};         // characters
    bool exhaustive = true;
    std::vector<double> p_values;
    std::size_t samples = 10000;
    std::size_t scan_horizon = 10'000'000;
    std::size_t exact_cap = 8;
    std::optional<SweepAxis> sweep_axis;
    std::vector<double> sweep_values;
    std::filesystem::path out;
    OutputFormat format = OutputFormat::json;
    std::optional<std::uint64_t> seed;
    std::filesystem::path base_dir;         // relative paths resolve here

    EpsilonSequence epsilon_sequence() const;
    nlohmann::json to_json() const;
};

/// Reads a config object; errors name the offending field.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
/// Parses JSON text; syntax errors carry the line number.
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Cross-field checks: required fields per mode and a seed for randomized runs.
void validate_config(const RunConfig& config);

struct Report {
    std::string mode;
    nlohmann::json config;
    nlohmann::json items = nlohmann::json::array();
    CsvTable table;
    bool passed = true;
    nlohmann::json timings = nlohmann::json::object();

    nlohmann::json to_json() const;
    static Report from_json(const nlohmann::json& j);
};

Report run(const RunConfig& config);
Report sweep(const RunConfig& config);

/// JSON (pretty, shortest round-trip floats) or the CSV table.
void write_report(const Report& report, OutputFormat format, std::ostream& out);

/// MBLAB_THREADS if set and positive, else the hardware concurrency.
std::size_t thread_cap();

}  // namespace mblab
