#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qdecay/curve.hpp"
#include "qdecay/qstate.hpp"

namespace qdecay::rmt {

// Normalization used throughout this module:
//   GUE(N): H_kk ~ N(0, 1), off-diagonal H_kl complex Gaussian with <|H_kl|^2> = 1.
//   Semicircle radius 2 sqrt(N), band-centre density sqrt(N)/pi, mean spacing
//   pi/sqrt(N), Heisenberg time tau_H = 2 pi / spacing = 2 sqrt(N).
//   The coupling V^(i) is drawn from GUE(2N) on qubit i (x) environment.

/// Largest memory-dimension x N product accepted by mc_spectator.
inline constexpr std::size_t kMaxJointDimension = std::size_t{1} << 14;

/// Deterministic GUE sample. Throws DomainError for N < 2.
Eigen::MatrixXcd sample_gue(int N, std::uint64_t seed);

/// 2 sqrt(N)
double heisenberg_time(int N);

/// f(t) = t max{t, tau_H} + (2 / (3 tau_H)) min{t, tau_H}^3
double f_lr(double t, double tau_h);

/// Decay magnitude 1 - P above which a linear-response value is flagged.
inline constexpr double kLinearResponseLimit = 0.2;

struct AnalyticPurity {
    double purity = 1.0;
    /// Set when 1 - P exceeds kLinearResponseLimit.
    bool beyond_linear_response = false;
};

/// 1 - lambda1^2 (2 - p1) f(t). Throws DomainError for p1 outside [1/2, 1].
AnalyticPurity spectator_analytic(double lambda1, double p1, double t, double tau_h);

/// 1 - f(t) sum_i lambda_i^2 (2 - p_i).
double sumrule_analytic(std::span<const double> lambdas, std::span<const double> purities, double t, double tau_h);

struct RmtModel {
    int N = 2;
    std::vector<double> lambdas;
    std::uint64_t seed = 0;
    int realizations = 1;
    /// Worker threads for realizations; results do not depend on it.
    int threads = 1;

    double tau_h() const { return heisenberg_time(N); }
};

/// Ensemble-mean memory purity when only qubit i couples to a GUE environment.
///
/// Each realization r draws, from a stream seeded by derive_seed(seed, r), the
/// environment Hamiltonian GUE(N), the coupling GUE(2N) and a random
/// environment state, in that order. H = 1 (x) H_e + lambda_i V on qubit i (x)
/// environment, identity on the other memory qubits; the qubits have no
/// dynamics. Evolution is exact via one eigendecomposition per realization.
PurityCurve mc_spectator(const RmtModel& model, const PureState& psi_qm, int i, std::span<const double> times);

struct TimeScaleFit {
    /// Scale alpha in P(t) = 1 - lambda^2 (2 - p) f(alpha t).
    double alpha = 1.0;
    CurveComparison raw;
    CurveComparison fitted;
    PurityCurve fitted_curve;
};

/// Fits the single time-scale factor alpha of the analytic spectator curve to
/// a measured curve, minimizing the maximum relative deviation over `window`.
TimeScaleFit fit_time_scale(const PurityCurve& measured, double lambda, double p, double tau_h, DecayWindow window);

/// spectator_analytic sampled on a time grid, with time scale alpha.
PurityCurve analytic_curve(std::span<const double> times, double lambda, double p, double tau_h, double alpha = 1.0);

} // namespace qdecay::rmt
