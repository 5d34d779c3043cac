#include "qdecay/kicked_ising.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdecay::kicked_ising {

void KickedIsingParams::validate() const {
    if (L < 1) throw ValidationError("chain length L must be >= 1");
    if (n < 1) throw ValidationError("memory qubit count n must be >= 1");
    if (static_cast<int>(lambdas.size()) != n) throw ValidationError("need one coupling strength per memory qubit");
    if (static_cast<int>(positions.size()) != n) throw ValidationError("need one coupling position per memory qubit");
    for (double l : lambdas) {
        if (!std::isfinite(l)) throw ValidationError("coupling strengths must be finite");
    }
    for (double c : b) {
        if (!std::isfinite(c)) throw ValidationError("field components must be finite");
    }
    for (int j : positions) {
        if (j < 0 || j >= L) {
            throw ValidationError("coupling position " + std::to_string(j) + " outside chain of length " +
                                  std::to_string(L));
        }
    }
    make_layout(n, L);
}

double KickedIsingParams::lambda_max() const {
    double m = 0.0;
    for (double l : lambdas) m = std::max(m, std::abs(l));
    return m;
}

KickedIsingParams KickedIsingParams::uncoupled() const {
    KickedIsingParams p = *this;
    for (auto& l : p.lambdas) l = 0.0;
    return p;
}

KickedIsingParams KickedIsingParams::spectator(int i) const {
    if (i < 0 || i >= n) throw std::out_of_range("spectator qubit index out of range");
    KickedIsingParams p = *this;
    for (int q = 0; q < n; ++q) {
        if (q != i) p.lambdas[static_cast<std::size_t>(q)] = 0.0;
    }
    return p;
}

Matrix2c kick_matrix(const std::array<double, 3>& b) {
    const double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    Matrix2c u = Matrix2c::Identity();
    if (norm == 0.0) return u;
    const double c = std::cos(norm);
    const double s = std::sin(norm) / norm;
    const cplx i{0.0, 1.0};
    // b.sigma = [[bz, bx - i by], [bx + i by, -bz]]
    u(0, 0) = c - i * s * b[2];
    u(0, 1) = -i * s * cplx{b[0], -b[1]};
    u(1, 0) = -i * s * cplx{b[0], b[1]};
    u(1, 1) = c + i * s * b[2];
    return u;
}

Matrix2c hadamard() {
    Matrix2c h;
    h << M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2;
    return h;
}

namespace {

inline int spin_sign(std::size_t index, int bit) { return ((index >> bit) & 1U) ? -1 : 1; }

} // namespace

FloquetPropagator::FloquetPropagator(const KickedIsingParams& params)
    : layout_((params.validate(), params.layout())), params_(params), kick_memory_(params.kick_memory) {
    const Matrix2c h = hadamard();
    kick_x_ = h * kick_matrix(params.b) * h;
    kick_x_inverse_ = kick_x_.adjoint();

    // Bond list: the closed ring follows sum_{k=0}^{L-1} sx(k) sx(k+1) with site L == site 0
    // literally, so L = 2 counts the (0,1) bond twice and L = 1 is a constant self-bond.
    std::vector<std::pair<int, int>> bonds;
    const int nb = params.ring_closed ? params.L : params.L - 1;
    for (int k = 0; k < nb; ++k) {
        bonds.emplace_back(layout_.bit(Subsystem::environment, k),
                           layout_.bit(Subsystem::environment, (k + 1) % params.L));
    }

    phase_factors_.resize(layout_.dimension());
    for (std::size_t x = 0; x < phase_factors_.size(); ++x) {
        double phase = 0.0;
        for (const auto& [a, c] : bonds) phase += spin_sign(x, a) * spin_sign(x, c);
        for (int i = 0; i < params.n; ++i) {
            const double l = params.lambdas[static_cast<std::size_t>(i)];
            if (l == 0.0) continue;
            phase += l * spin_sign(x, layout_.bit(Subsystem::memory, i)) *
                     spin_sign(x, layout_.bit(Subsystem::environment, params.positions[static_cast<std::size_t>(i)]));
        }
        phase_factors_[x] = std::polar(1.0, -phase);
    }
}

void FloquetPropagator::step(std::span<cplx> x_amplitudes) const {
    apply_phase_factors_inplace(x_amplitudes, phase_factors_);
    const int first = kick_memory_ ? 0 : layout_.n_mem();
    for (int bit = first; bit < layout_.total_bits(); ++bit) apply_local_unitary_inplace(x_amplitudes, bit, kick_x_);
}

void FloquetPropagator::inverse_step(std::span<cplx> x_amplitudes) const {
    const int first = kick_memory_ ? 0 : layout_.n_mem();
    for (int bit = first; bit < layout_.total_bits(); ++bit) {
        apply_local_unitary_inplace(x_amplitudes, bit, kick_x_inverse_);
    }
    for (std::size_t x = 0; x < x_amplitudes.size(); ++x) x_amplitudes[x] *= std::conj(phase_factors_[x]);
}

void FloquetPropagator::change_basis(std::span<cplx> amplitudes) const {
    const Matrix2c h = hadamard();
    for (int bit = 0; bit < layout_.total_bits(); ++bit) apply_local_unitary_inplace(amplitudes, bit, h);
}

void FloquetPropagator::apply_coupling(std::span<cplx> x_amplitudes, int i) const {
    const int qb = layout_.bit(Subsystem::memory, i);
    const int eb = layout_.bit(Subsystem::environment, params_.positions.at(static_cast<std::size_t>(i)));
    for (std::size_t x = 0; x < x_amplitudes.size(); ++x) {
        if (spin_sign(x, qb) != spin_sign(x, eb)) x_amplitudes[x] = -x_amplitudes[x];
    }
}

namespace {

void require_layout(const PureState& state, const KickedIsingParams& params) {
    params.validate();
    if (!(state.layout() == params.layout())) {
        throw ValidationError("state layout does not match (n, L) = (" + std::to_string(params.n) + ", " +
                              std::to_string(params.L) + ")");
    }
}

PureState one_period(const PureState& state, const KickedIsingParams& params) {
    require_layout(state, params);
    const FloquetPropagator prop(params);
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    prop.change_basis(amps);
    prop.step(amps);
    prop.change_basis(amps);
    return PureState(state.layout(), std::move(amps));
}

} // namespace

PureState floquet_step(const PureState& state, const KickedIsingParams& params) { return one_period(state, params); }

PureState uncoupled_step(const PureState& state, const KickedIsingParams& params) {
    return one_period(state, params.uncoupled());
}

PurityCurve evolve_purity(const PureState& initial, const KickedIsingParams& params, int t_max) {
    require_layout(initial, params);
    if (t_max < 0) throw ValidationError("t_max must be nonnegative");
    const FloquetPropagator prop(params);
    const auto& layout = prop.layout();
    std::vector<cplx> amps(initial.amplitudes().begin(), initial.amplitudes().end());
    // Purity is invariant under the local basis change, so it is read off in the x basis.
    prop.change_basis(amps);

    PurityCurve curve;
    curve.meta.model = "kicked_ising";
    curve.times.reserve(static_cast<std::size_t>(t_max) + 1);
    curve.values.reserve(static_cast<std::size_t>(t_max) + 1);
    for (int t = 0; t <= t_max; ++t) {
        if (t > 0) prop.step(amps);
        curve.times.push_back(t);
        curve.values.push_back(gram_purity(amps, layout.mem_dimension(), layout.env_dimension()));
    }
    return curve;
}

PurityCurve spectator_curve(const PureState& initial, const KickedIsingParams& params, int i, int t_max) {
    return evolve_purity(initial, params.spectator(i), t_max);
}

} // namespace qdecay::kicked_ising
