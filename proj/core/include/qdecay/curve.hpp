#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qdecay {

struct CurveMeta {
    std::string model;
    std::vector<std::uint64_t> seeds;
    int realizations = 1;
};

/// Purity as a function of time. Kicked models use integer kick counts.
struct PurityCurve {
    std::vector<double> times;
    std::vector<double> values;
    /// Standard error of the ensemble mean, empty for single runs.
    std::vector<double> std_errors;
    CurveMeta meta;

    std::size_t size() const { return times.size(); }
    /// Checks strictly increasing times and values in (0, 1 + 1e-10].
    void validate() const;
};

/// Band of decay values 1 - P over which two curves are compared.
struct DecayWindow {
    double lo = 1e-3;
    double hi = 1e-1;
};

struct CurveComparison {
    double max_relative = 0.0;
    double mean_relative = 0.0;
    std::size_t points = 0;
    /// No time of the reference curve falls inside the window.
    bool inconclusive = true;
};

/// Relative deviation |(1-P_ref) - (1-P_other)| / (1-P_ref) at the times where
/// 1 - P_ref lies in `window`. Throws ValidationError if the time grids differ.
CurveComparison compare_curves(const PurityCurve& reference, const PurityCurve& other, DecayWindow window);

/// Throws ValidationError unless every curve shares the first curve's time grid.
void require_common_grid(std::span<const PurityCurve> curves);

} // namespace qdecay
