#include "qdecay/linres.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qdecay::linres {

using kicked_ising::FloquetPropagator;

namespace {

void check_inputs(const PureState& psi0, const KickedIsingParams& params) {
    params.validate();
    if (!(psi0.layout() == params.layout())) throw ValidationError("state layout does not match the model");
}

void check_qubit(const KickedIsingParams& params, int i) {
    if (i < 0 || i >= params.n) throw std::out_of_range("qubit index " + std::to_string(i) + " out of range");
}

std::vector<cplx> copy_amplitudes(const PureState& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

/// V~i_tau |psi0> for tau = 0..T, in the x basis of `prop`.
std::vector<std::vector<cplx>> interaction_trajectory(const FloquetPropagator& prop, std::span<const cplx> x_psi0,
                                                      int i, int T) {
    std::vector<std::vector<cplx>> out;
    out.reserve(static_cast<std::size_t>(T) + 1);
    std::vector<cplx> forward(x_psi0.begin(), x_psi0.end());
    for (int tau = 0; tau <= T; ++tau) {
        if (tau > 0) prop.step(forward);
        std::vector<cplx> w = forward;
        prop.apply_coupling(w, i);
        for (int s = 0; s < tau; ++s) prop.inverse_step(w);
        out.push_back(std::move(w));
    }
    return out;
}

/// Reduced objects of one propagated vector a: X = G_a G_0^dagger (M x M) and
/// h = G_a^dagger phi (length E), where G is the column-major M x E reshape and
/// phi the memory factor of psi0.
struct Reduced {
    Eigen::MatrixXcd x;
    Eigen::VectorXcd h;
};

Reduced reduce(std::span<const cplx> a, const Eigen::MatrixXcd& g0_adj, const Eigen::VectorXcd& phi,
               Eigen::Index m, Eigen::Index e) {
    Eigen::Map<const Eigen::MatrixXcd> g(a.data(), m, e);
    return {g * g0_adj, g.adjoint() * phi};
}

std::vector<CorrelationKernel> build_kernels(const PureState& psi0, const KickedIsingParams& params,
                                             const std::vector<std::pair<int, int>>& pairs, int T,
                                             bool cross_only) {
    check_inputs(psi0, params);
    if (T < 0) throw ValidationError("kernel grid size T must be nonnegative");
    for (const auto& [i, j] : pairs) {
        check_qubit(params, i);
        check_qubit(params, j);
    }
    if (!cross_only && params.n > kMaxKernelQubits) {
        throw SizeError("full kernels need n <= " + std::to_string(kMaxKernelQubits));
    }
    if (!cross_only && std::abs(purity_memory(psi0) - 1.0) > kStateTolerance) {
        throw ValidationError("kernels need a product initial state across the memory/environment cut");
    }

    std::map<int, int> slot;
    for (const auto& [i, j] : pairs) {
        slot.emplace(i, 0);
        slot.emplace(j, 0);
    }
    const auto layout = params.layout();
    if (slot.size() * (static_cast<std::size_t>(T) + 1) * layout.dimension() > kMaxTrajectoryAmplitudes) {
        throw SizeError("kernel grid too large for stored trajectories");
    }

    const FloquetPropagator prop(params.uncoupled());
    std::vector<cplx> x_psi0 = copy_amplitudes(psi0);
    prop.change_basis(x_psi0);

    std::vector<std::vector<std::vector<cplx>>> traj;
    for (auto& [q, s] : slot) {
        s = static_cast<int>(traj.size());
        traj.push_back(interaction_trajectory(prop, x_psi0, q, T));
    }

    const auto m = static_cast<Eigen::Index>(layout.mem_dimension());
    const auto e = static_cast<Eigen::Index>(layout.env_dimension());
    std::vector<std::vector<Reduced>> red(traj.size());
    if (!cross_only) {
        Eigen::Map<const Eigen::MatrixXcd> g0(x_psi0.data(), m, e);
        const Eigen::MatrixXcd g0_adj = g0.adjoint();
        // Memory factor of the product state: the heaviest column, normalized.
        Eigen::Index col = 0;
        g0.colwise().squaredNorm().maxCoeff(&col);
        const Eigen::VectorXcd phi = g0.col(col).normalized();
        for (std::size_t s = 0; s < traj.size(); ++s) {
            red[s].reserve(traj[s].size());
            for (const auto& w : traj[s]) red[s].push_back(reduce(w, g0_adj, phi, m, e));
        }
    }

    const std::size_t n_grid = static_cast<std::size_t>(T) + 1;
    std::vector<CorrelationKernel> out;
    for (const auto& [i, j] : pairs) {
        const auto& wi = traj[static_cast<std::size_t>(slot.at(i))];
        const auto& wj = traj[static_cast<std::size_t>(slot.at(j))];
        CorrelationKernel k{i, j, T, cross_only, std::vector<cplx>(n_grid * n_grid)};
        for (std::size_t a = 0; a < n_grid; ++a) {
            for (std::size_t b = 0; b < n_grid; ++b) {
                const cplx leading = dot(wi[a], wj[b]);
                if (cross_only) {
                    k.values[a * n_grid + b] = leading;
                    continue;
                }
                const auto& ri = red[static_cast<std::size_t>(slot.at(i))];
                const auto& rj = red[static_cast<std::size_t>(slot.at(j))];
                // a = tau, b = tau'
                const cplx t2 = ri[b].h.dot(rj[a].h);                       // p[V~i_tau' r0 V~j_tau (x) r0]
                const cplx t3 = (ri[a].x * rj[b].x).trace();                 // p[V~i_tau r0 (x) V~j_tau' r0]
                const cplx t4 = (ri[b].x * rj[a].x.adjoint()).trace();       // p[V~i_tau' r0 (x) r0 V~j_tau]
                k.values[a * n_grid + b] = leading - t2 + t3 - t4;
            }
        }
        out.push_back(std::move(k));
    }
    return out;
}

} // namespace

PureState apply_interaction_V(const PureState& state, const KickedIsingParams& params, int i, int t) {
    check_inputs(state, params);
    check_qubit(params, i);
    if (t < 0) throw ValidationError("interaction time must be nonnegative");
    const FloquetPropagator prop(params.uncoupled());
    std::vector<cplx> amps = copy_amplitudes(state);
    prop.change_basis(amps);
    for (int s = 0; s < t; ++s) prop.step(amps);
    prop.apply_coupling(amps, i);
    for (int s = 0; s < t; ++s) prop.inverse_step(amps);
    prop.change_basis(amps);
    return PureState(state.layout(), std::move(amps));
}

cplx cross_correlation(const PureState& psi0, const KickedIsingParams& params, int i, int j, int tau, int tau_p) {
    if (tau < 0 || tau_p < 0) throw ValidationError("correlation times must be nonnegative");
    return apply_interaction_V(psi0, params, i, tau).inner(apply_interaction_V(psi0, params, j, tau_p));
}

CorrelationKernel full_kernel(const PureState& psi0, const KickedIsingParams& params, int i, int j, int T) {
    return std::move(build_kernels(psi0, params, {{i, j}}, T, false).front());
}

CorrelationKernel cross_kernel(const PureState& psi0, const KickedIsingParams& params, int i, int j, int T) {
    return std::move(build_kernels(psi0, params, {{i, j}}, T, true).front());
}

std::vector<CorrelationKernel> all_kernels(const PureState& psi0, const KickedIsingParams& params, int T,
                                           bool cross_only) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < params.n; ++i) {
        for (int j = 0; j < params.n; ++j) pairs.emplace_back(i, j);
    }
    return build_kernels(psi0, params, pairs, T, cross_only);
}

PurityCurve linres_purity(std::span<const CorrelationKernel> kernels, std::span<const double> lambdas, int T) {
    if (T < 0) throw ValidationError("T must be nonnegative");
    std::vector<double> decay(static_cast<std::size_t>(T) + 1, 0.0);
    for (const auto& k : kernels) {
        if (k.i < 0 || k.j < 0 || static_cast<std::size_t>(std::max(k.i, k.j)) >= lambdas.size()) {
            throw ValidationError("kernel qubit index has no coupling strength");
        }
        if (k.grid_size() < T) throw ValidationError("kernel grid does not cover the requested times");
        const double weight = 2.0 * lambdas[static_cast<std::size_t>(k.i)] * lambdas[static_cast<std::size_t>(k.j)];
        double sum = 0.0;
        for (int t = 1; t <= T; ++t) {
            // Grow the square [0, t-1]^2 by its last row and column.
            const int last = t - 1;
            for (int s = 0; s < t; ++s) sum += k(last, s).real();
            for (int s = 0; s < last; ++s) sum += k(s, last).real();
            decay[static_cast<std::size_t>(t)] += weight * sum;
        }
    }
    PurityCurve curve;
    curve.meta.model = "linear_response";
    for (int t = 0; t <= T; ++t) {
        curve.times.push_back(t);
        curve.values.push_back(1.0 - decay[static_cast<std::size_t>(t)]);
    }
    return curve;
}

PurityCurve sumrule_prediction(std::span<const PurityCurve> spectator_curves) {
    require_common_grid(spectator_curves);
    PurityCurve out;
    out.times = spectator_curves.front().times;
    out.values.assign(out.times.size(), 1.0);
    out.meta = spectator_curves.front().meta;
    out.meta.model = "sum_rule";
    for (const auto& c : spectator_curves) {
        for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] -= 1.0 - c.values[k];
    }
    return out;
}

EchoPurities echo_purity_check(const PureState& initial, const KickedIsingParams& params, int t) {
    check_inputs(initial, params);
    if (t < 0) throw ValidationError("echo time must be nonnegative");
    const FloquetPropagator coupled(params);
    const FloquetPropagator free(params.uncoupled());
    const auto& layout = coupled.layout();
    std::vector<cplx> amps = copy_amplitudes(initial);
    coupled.change_basis(amps);
    for (int s = 0; s < t; ++s) coupled.step(amps);
    EchoPurities out;
    out.forward = gram_purity(amps, layout.mem_dimension(), layout.env_dimension());
    for (int s = 0; s < t; ++s) free.inverse_step(amps);
    out.echo = gram_purity(amps, layout.mem_dimension(), layout.env_dimension());
    return out;
}

} // namespace qdecay::linres
