#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdecay/curve.hpp"
#include "qdecay/kicked_ising.hpp"
#include "qdecay/qstate.hpp"

namespace qdecay::harness {

enum class ModelKind { kicked_ising, rmt };
enum class InitialKind { ghz, w, product, custom };
enum class ExperimentKind { decay, spectator, sumrule, correlations, rmt_mc, rmt_analytic };

/// Flat key = value experiment description. See README for the key table.
///
/// Times are kick counts for the kicked Ising model and Hamiltonian time units
/// (hbar = 1, GUE normalization of rmt.hpp) for the random-matrix model. Field
/// components are dimensionless.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::decay;
    /// Inferred from the experiment when not given.
    std::optional<ModelKind> model;

    // Kicked Ising environment.
    int L = 8;
    int n = 2;
    std::array<double, 3> b{0.9, 0.9, 0.0};
    /// One value per qubit, or a single value applied to every qubit.
    std::vector<double> lambdas{0.005};
    /// Empty means evenly spread positions round(i * L / n).
    std::vector<int> positions;
    bool ring_closed = true;
    bool kick_memory = true;

    // Memory initial state.
    InitialKind initial_state = InitialKind::ghz;
    std::size_t product_index = 0;
    std::vector<cplx> amplitudes;

    double t_max = 100.0;
    /// Grid points after t = 0 for the random-matrix time axis.
    int time_steps = 100;

    int qubit = 0;
    std::array<int, 2> pair{0, 1};
    int grid = 30;

    int N = 128;

    int realizations = 1;
    std::uint64_t seed = 1;
    int threads = 1;

    std::string output = "qdecay.csv";
    double tolerance = 0.10;
    DecayWindow window{};

    ModelKind model_kind() const;
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment(std::string_view name);

/// Parses `key = value` lines; '#' starts a comment. Unknown keys, repeated
/// keys and malformed values throw ValidationError naming the line. When
/// `declared` is given it receives the experiment key, if present.
ExperimentConfig parse_config(std::istream& in, std::string_view source = "<config>",
                              std::optional<ExperimentKind>* declared = nullptr);
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind>* declared = nullptr);

/// Checks every model precondition before any computation. Throws
/// ValidationError (or SizeError for compute caps).
void validate(const ExperimentConfig& config);

/// Canonical key = value text; parse_config(to_manifest(c)) reproduces c.
std::string to_manifest(const ExperimentConfig& config);

kicked_ising::KickedIsingParams kicked_params(const ExperimentConfig& config);
std::vector<double> expanded_lambdas(const ExperimentConfig& config);
/// Memory register state selected by initial_state.
PureState memory_state(const ExperimentConfig& config);

} // namespace qdecay::harness
