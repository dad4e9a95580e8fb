#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "mblab/driver.hpp"
#include "mblab/error.hpp"

using namespace mblab;
using nlohmann::json;

namespace {

RunConfig config_from(const char* text) { return parse_config_text(text); }

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Driver, ConstructHalfTwoBlocks) {
    const auto report = run(config_from(R"({"mode": "construct"})"));
    EXPECT_TRUE(report.passed);
    ASSERT_EQ(report.table.rows.size(), 2u);
    EXPECT_NEAR(report.items[1]["diagnostics"]["distance"].get<double>(), std::sqrt(1.5), 1e-15);
    EXPECT_NEAR(report.items[2]["diagnostics"]["distance"].get<double>(), std::sqrt(2.5), 1e-15);
    EXPECT_EQ(report.items[1]["diagnostics"]["rows"].size(), 3u);
    EXPECT_EQ(report.items[2]["diagnostics"]["rows"].size(), 5u);
}

TEST(Driver, WitnessRandomSeedSeven) {
    const auto report = run(config_from(
        R"({"mode": "witness", "epsilon": {"kind": "power_law", "exponent": 0.5},
            "targets": [5], "permutation": {"kind": "random", "seed": 7}})"));
    EXPECT_TRUE(report.passed);
    const json& w = report.items[1]["witness"];
    EXPECT_GE(w["ratio"].get<double>(), 5.0);
    EXPECT_EQ(w["C"].get<double>(), 5.0);
    EXPECT_EQ(w["E"].size(), w["alpha"].get<std::size_t>());
    EXPECT_TRUE(report.items[1]["bounds"]["pass"].get<bool>());
}

TEST(Driver, CharactersExhaustiveTable) {
    const auto report = run(config_from(R"({"mode": "characters", "ranks": [2]})"));
    EXPECT_TRUE(report.passed);
    EXPECT_EQ(report.items[0]["orderings"].size(), 24u);
    EXPECT_EQ(report.items[0]["min_max_prefix_l1"]["value"].get<double>(), 1.5);
    EXPECT_EQ(report.table.header,
              (std::vector<std::string>{"m", "ordering_mode", "k", "prefix_l1"}));
}

TEST(Driver, OracleAndRenorm) {
    auto oracle = run(config_from(R"({"mode": "oracle", "dims": [4]})"));
    EXPECT_TRUE(oracle.passed);
    auto renorm = run(config_from(R"({"mode": "renorm", "dims": [4], "samples": 500, "seed": 1})"));
    EXPECT_TRUE(renorm.passed);
    for (const char* key : {"dim", "eps_max", "basis_norm_deviation_max", "samples", "violations"})
        EXPECT_TRUE(renorm.items[0].contains(key)) << key;
}

TEST(Driver, VerifyInverseSquares) {
    const auto report = run(config_from(
        R"({"mode": "verify", "epsilon": {"kind": "power_law", "exponent": 2}, "dims": [8, 32]})"));
    EXPECT_TRUE(report.passed);
    EXPECT_EQ(report.table.rows.size(), 2u);
}

TEST(Driver, SweepAxisC) {
    const auto report = sweep(config_from(
        R"({"sweep": {"axis": "C", "values": [2, 5]}, "permutation": "random", "trials": 4,
            "epsilon": {"kind": "power_law", "exponent": 0.5}, "seed": 3})"));
    EXPECT_TRUE(report.passed);
    ASSERT_EQ(report.table.rows.size(), 8u);
    const auto& header = report.table.header;
    const auto ratio_col = std::find(header.begin(), header.end(), "ratio") - header.begin();
    for (std::size_t r = 0; r < 8; ++r) {
        const double C = r < 4 ? 2.0 : 5.0;
        EXPECT_GE(std::stod(report.table.rows[r][static_cast<std::size_t>(ratio_col)]), C);
    }
}

TEST(Driver, SweepAxisM) {
    const auto report = sweep(config_from(R"({"sweep": {"axis": "m", "values": [1, 2, 3]}})"));
    EXPECT_TRUE(report.passed);
    const double expected[] = {1.0, 1.5, 1.75};
    for (std::size_t k = 0; k < 3; ++k)
        EXPECT_EQ(report.items[k]["min_max_prefix_l1"]["value"].get<double>(), expected[k]);
}

TEST(Driver, SweepAxisDimAndBlockAndP) {
    const auto dims = sweep(config_from(
        R"({"sweep": {"axis": "dim", "values": [4, 8, 16, 32, 64]},
            "epsilon": {"kind": "power_law", "exponent": 2}})"));
    EXPECT_TRUE(dims.passed);
    EXPECT_EQ(dims.table.rows.size(), 5u);
    const auto blocks = sweep(config_from(R"({"sweep": {"axis": "block", "values": [1, 2, 3]}})"));
    EXPECT_TRUE(blocks.passed);
    const auto ps = sweep(config_from(
        R"({"sweep": {"axis": "p", "values": [1, 2]}, "ranks": [2, 3], "trials": 4, "seed": 9})"));
    EXPECT_TRUE(ps.passed);
    EXPECT_EQ(ps.table.header, (std::vector<std::string>{"m", "p", "trials", "lower_bound"}));
    EXPECT_EQ(ps.table.rows.size(), 4u);
}

TEST(Driver, SweepDeterministicAcrossThreads) {
    const char* text =
        R"({"sweep": {"axis": "C", "values": [2, 3]}, "permutation": "random", "trials": 5,
            "epsilon": {"kind": "power_law", "exponent": 0.5}, "seed": 12})";
    setenv("MBLAB_THREADS", "1", 1);
    const auto a = sweep(config_from(text)).table.str();
    setenv("MBLAB_THREADS", "4", 1);
    const auto b = sweep(config_from(text)).table.str();
    unsetenv("MBLAB_THREADS");
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, sweep(config_from(text)).table.str());
}

TEST(Driver, ReportRoundTrip) {
    const auto report = run(config_from(R"({"mode": "construct", "block_count": 3})"));
    const auto back = Report::from_json(json::parse(report.to_json().dump()));
    EXPECT_EQ(back.to_json(), report.to_json());
    EXPECT_EQ(back.items[1]["diagnostics"]["distance"].get<double>(),
              report.items[1]["diagnostics"]["distance"].get<double>());
}

TEST(Driver, ConfigErrorsNameFieldAndLine) {
    EXPECT_NE(error_of([] { config_from("{\n\"mode\": \"construct\",\n\"dims\": [4,\n}"); })
                  .find("line 4"),
              std::string::npos);
    EXPECT_NE(error_of([] { config_from(R"({"blocks": 2})"); }).find("'blocks'"),
              std::string::npos);
    EXPECT_NE(error_of([] { config_from(R"({"epsilon": {"kind": "power_law"}})"); })
                  .find("epsilon.exponent"),
              std::string::npos);
    EXPECT_NE(error_of([] { config_from(R"({"epsilon": {"kind": "constant", "value": 2}})"); })
                  .find("epsilon.value"),
              std::string::npos);
    EXPECT_NE(error_of([] { config_from(R"({"trials": -1})"); }).find("trials"),
              std::string::npos);
}

TEST(Driver, SeedRequiredForRandomizedModes) {
    EXPECT_NE(error_of([] {
                  run(config_from(R"({"mode": "witness", "targets": [1], "permutation": "random"})"));
              }).find("seed"),
              std::string::npos);
    EXPECT_NE(error_of([] { run(config_from(R"({"mode": "renorm"})")); }).find("seed"),
              std::string::npos);
    EXPECT_NE(error_of([] { run(config_from(R"({"mode": "characters", "p": [1]})")); })
                  .find("seed"),
              std::string::npos);
}

TEST(Driver, SweepNeedsAxis) {
    EXPECT_NE(error_of([] { sweep(config_from(R"({"sweep": {"axis": "C", "values": []}})")); })
                  .find("empty axis"),
              std::string::npos);
    EXPECT_THROW(run(config_from(R"({"mode": "sweep"})")), Error);
}

TEST(Driver, ModuleErrorsPropagate) {
    // 0.1 + 0.1 never exceeds the first target on a two-entry list.
    EXPECT_THROW(run(config_from(
                     R"({"mode": "construct", "epsilon": {"kind": "list", "values": [0.1, 0.1]}})")),
                 Error);
}
