#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qdecay/config.hpp"
#include "qdecay/curve.hpp"

namespace qdecay::harness {

inline constexpr int kExitOk = 0;
/// --ci only: a comparison ran and exceeded its tolerance.
inline constexpr int kExitToleranceExceeded = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitComputeCap = 3;
/// --ci only: the comparison window holds no points.
inline constexpr int kExitInconclusive = 4;

struct RunOptions {
    /// Turn comparison outcomes into exit codes 1 and 4.
    bool ci = false;
};

struct RunResult {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> files;
    std::string message;
};

/// Validates the config, runs the experiment and writes:
///   <output>            CSV, header row, 17 significant digits
///   <output>.manifest   canonical config plus library version
///   <output>.report.json  comparison report (sumrule and rmt_mc only)
/// Never throws for invalid configs or exceeded caps; those map to exit codes.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

/// Machine-readable form of a comparison (JSON object text).
std::string comparison_report(const CurveComparison& cmp, DecayWindow window, double tolerance);

/// Writes `columns` as CSV with the given header; all columns share one length.
void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<double>> columns);

std::string library_version();

} // namespace qdecay::harness
