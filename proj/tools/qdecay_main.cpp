// Command-line driver: one subcommand per experiment kind.
//
//   qdecay sumrule --config fig1.cfg --out runs/fig1.csv --ci
//   qdecay sumrule --config runs/fig1.csv.manifest --out rerun.csv

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qdecay/config.hpp"
#include "qdecay/harness.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> realizations;
    bool ci = false;
};

} // namespace

int main(int argc, char** argv) {
    using namespace qdecay::harness;

    CLI::App app{"Exact purity decay of an n-qubit memory coupled to kicked Ising or GUE environments"};
    app.set_version_flag("--version", library_version());
    app.require_subcommand(1);

    Flags flags;
    const std::pair<const char*, ExperimentKind> commands[] = {
        {"decay", ExperimentKind::decay},
        {"spectator", ExperimentKind::spectator},
        {"sumrule", ExperimentKind::sumrule},
        {"correlations", ExperimentKind::correlations},
        {"rmt-mc", ExperimentKind::rmt_mc},
        {"rmt-analytic", ExperimentKind::rmt_analytic},
    };
    for (const auto& [name, kind] : commands) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + std::string(to_string(kind)) + " experiment");
        sub->add_option("--config", flags.config, "key = value experiment file (or a manifest)");
        sub->add_option("--out", flags.out, "CSV output path (overrides 'output')");
        sub->add_option("--seed", flags.seed, "64-bit seed (overrides 'seed')");
        sub->add_option("--realizations", flags.realizations, "ensemble size (overrides 'realizations')");
        sub->add_flag("--ci", flags.ci, "exit 1 when the comparison exceeds its tolerance, 4 when inconclusive");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidConfig;
    }

    ExperimentKind kind{};
    for (const auto& [name, k] : commands) {
        if (app.got_subcommand(name)) kind = k;
    }

    try {
        ExperimentConfig cfg;
        std::optional<ExperimentKind> declared;
        if (!flags.config.empty()) cfg = load_config(flags.config, &declared);
        if (declared && *declared != kind) {
            std::cerr << "qdecay: config describes a '" << to_string(*declared) << "' experiment, not '"
                      << to_string(kind) << "'\n";
            return kExitInvalidConfig;
        }
        cfg.experiment = kind;
        if (flags.out) cfg.output = *flags.out;
        if (flags.seed) cfg.seed = *flags.seed;
        if (flags.realizations) cfg.realizations = *flags.realizations;

        const auto result = run(cfg, RunOptions{flags.ci});
        if (result.exit_code == kExitInvalidConfig || result.exit_code == kExitComputeCap) {
            std::cerr << "qdecay: " << result.message << '\n';
            return result.exit_code;
        }
        for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
        if (!result.message.empty()) std::cout << result.message << '\n';
        return result.exit_code;
    } catch (const qdecay::ValidationError& e) {
        std::cerr << "qdecay: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "qdecay: " << e.what() << '\n';
        return 1;
    }
}
