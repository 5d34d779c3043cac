#include "qdecay/curve.hpp"

#include <cmath>

#include "qdecay/errors.hpp"

namespace qdecay {

void PurityCurve::validate() const {
    if (values.size() != times.size()) throw ValidationError("curve has mismatched times and values");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0 && !(times[k] > times[k - 1])) throw ValidationError("curve times not strictly increasing");
        if (!(values[k] > 0.0) || values[k] > 1.0 + 1e-10) throw ValidationError("curve value outside (0, 1]");
    }
}

void require_common_grid(std::span<const PurityCurve> curves) {
    if (curves.empty()) throw ValidationError("no curves given");
    for (const auto& c : curves) {
        if (c.times != curves.front().times || c.values.size() != c.times.size()) {
            throw ValidationError("curves do not share a time grid");
        }
    }
}

CurveComparison compare_curves(const PurityCurve& reference, const PurityCurve& other, DecayWindow window) {
    if (reference.times != other.times || reference.values.size() != reference.times.size() ||
        other.values.size() != other.times.size()) {
        throw ValidationError("curves do not share a time grid");
    }
    CurveComparison out;
    double sum = 0.0;
    for (std::size_t k = 0; k < reference.size(); ++k) {
        const double da = 1.0 - reference.values[k];
        if (da < window.lo || da > window.hi) continue;
        const double db = 1.0 - other.values[k];
        const double rel = std::abs(da - db) / da;
        out.max_relative = std::max(out.max_relative, rel);
        sum += rel;
        ++out.points;
    }
    out.inconclusive = out.points == 0;
    out.mean_relative = out.points ? sum / static_cast<double>(out.points) : 0.0;
    return out;
}

} // namespace qdecay
