#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mblab/driver.hpp"
#include "mblab/error.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::string out;
    std::string format;
};

void add_flags(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--seed", flags.seed, "seed for randomized steps");
    cmd->add_option("--tol", flags.tol, "identity and inequality tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", flags.out, "write the report here instead of stdout");
    cmd->add_option("--format", flags.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
}

mblab::RunConfig effective_config(mblab::RunMode mode, const Flags& flags) {
    mblab::RunConfig config =
        flags.config.empty() ? mblab::RunConfig{} : mblab::load_config(flags.config);
    config.mode = mode;
    if (flags.seed) config.seed = *flags.seed;
    if (flags.tol) {
        config.tolerances.identity = *flags.tol;
        config.tolerances.inequality = *flags.tol;
    }
    if (!flags.out.empty()) config.out = flags.out;
    if (flags.format == "json") config.format = mblab::OutputFormat::json;
    if (flags.format == "csv") config.format = mblab::OutputFormat::csv;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Almost Auerbach M-basis constructions and certificates"};
    app.require_subcommand(1);

    Flags flags;
    const char* names[] = {"construct", "verify", "witness", "oracle",
                           "renorm",    "characters", "sweep"};
    const char* help[] = {"build blocks from a plan and check their closed forms",
                          "check bounded products and the distance chain",
                          "conditionality witnesses against permutations",
                          "exact basis constants and permutation floors",
                          "check the max-type renorming",
                          "Walsh character prefix norms and Auerbach checks",
                          "run one axis of a parameter sweep"};
    for (int k = 0; k < 7; ++k) add_flags(app.add_subcommand(names[k], help[k]), flags);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto* cmd = app.get_subcommands().front();
        const mblab::RunConfig config =
            effective_config(mblab::parse_run_mode(cmd->get_name()), flags);
        const mblab::Report report = mblab::run(config);
        if (config.out.empty()) {
            mblab::write_report(report, config.format, std::cout);
        } else {
            std::ofstream file(config.out, std::ios::binary);
            if (!file) {
                std::cerr << "mblab: cannot write " << config.out << '\n';
                return 2;
            }
            mblab::write_report(report, config.format, file);
        }
        if (!report.passed) {
            std::cerr << "mblab: " << cmd->get_name() << ": assertions failed\n";
            return 1;
        }
        return 0;
    } catch (const mblab::Error& e) {
        std::cerr << "mblab: " << e.what() << '\n';
        return 2;
    }
}
