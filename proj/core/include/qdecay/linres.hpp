#pragma once

#include <span>
#include <vector>

#include "qdecay/curve.hpp"
#include "qdecay/kicked_ising.hpp"
#include "qdecay/qstate.hpp"

namespace qdecay::linres {

using kicked_ising::KickedIsingParams;

/// Memory size limit for kernels built from reduced objects.
inline constexpr int kMaxKernelQubits = 6;
/// Limit on stored interaction-picture vectors, in complex amplitudes (512 MiB).
inline constexpr std::size_t kMaxTrajectoryAmplitudes = std::size_t{1} << 25;

/// A^(i,j)(tau, tau') on the integer grid 0..T, row index tau.
///
/// When `cross_only` is set the grid holds only the leading term
/// <psi0| V~i_tau V~j_tau' |psi0> instead of the four-term combination.
struct CorrelationKernel {
    int i = 0;
    int j = 0;
    int T = 0;
    bool cross_only = false;
    std::vector<cplx> values;

    int grid_size() const { return T + 1; }
    cplx operator()(int tau, int tau_p) const {
        return values[static_cast<std::size_t>(tau) * static_cast<std::size_t>(T + 1) + static_cast<std::size_t>(tau_p)];
    }
};

/// U0(t)^dagger V^(i) U0(t) |state>, with V^(i) = sx(qm,i) sx(e,j_i) and U0 the
/// uncoupled Floquet map.
PureState apply_interaction_V(const PureState& state, const KickedIsingParams& params, int i, int t);

/// <psi0| V~i_tau V~j_tau' |psi0>
cplx cross_correlation(const PureState& psi0, const KickedIsingParams& params, int i, int j, int tau, int tau_p);

/// Four-term kernel
///   A = p[V~i_tau V~j_tau' r0 (x) r0] - p[V~i_tau' r0 V~j_tau (x) r0]
///     + p[V~i_tau r0 (x) V~j_tau' r0] - p[V~i_tau' r0 (x) r0 V~j_tau]
/// with p[r1 (x) r2] = Tr(Tr_e r1 Tr_e r2) and r0 = |psi0><psi0|.
/// psi0 must be a product across the memory/environment cut.
CorrelationKernel full_kernel(const PureState& psi0, const KickedIsingParams& params, int i, int j, int T);

/// Leading-term kernel (cross_only set).
CorrelationKernel cross_kernel(const PureState& psi0, const KickedIsingParams& params, int i, int j, int T);

/// Every (i, j) kernel for the n memory qubits, sharing the propagated vectors.
std::vector<CorrelationKernel> all_kernels(const PureState& psi0, const KickedIsingParams& params, int T,
                                           bool cross_only = false);

/// P(t) = 1 - 2 sum_{i,j} lambda_i lambda_j sum_{tau,tau' = 0}^{t-1} Re A^(i,j)(tau, tau')
/// for t = 0..T. Pairs without a kernel contribute nothing. Kernels must cover
/// tau <= T - 1.
PurityCurve linres_purity(std::span<const CorrelationKernel> kernels, std::span<const double> lambdas, int T);

/// 1 - sum_i (1 - P_i(t)) over spectator curves on a common grid.
PurityCurve sumrule_prediction(std::span<const PurityCurve> spectator_curves);

struct EchoPurities {
    double forward = 1.0;
    double echo = 1.0;
};

/// Purity after t coupled periods, and after those periods followed by t
/// inverse uncoupled periods.
EchoPurities echo_purity_check(const PureState& initial, const KickedIsingParams& params, int t);

} // namespace qdecay::linres
