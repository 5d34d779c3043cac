#pragma once

#include <array>
#include <span>
#include <vector>

#include "qdecay/curve.hpp"
#include "qdecay/qstate.hpp"

namespace qdecay::kicked_ising {

/// Kicked Ising ring of L environment spins with n memory qubits attached.
///
/// Between kicks: H_c = sum_k sx(e,k) sx(e,k+1) + sum_i lambda_i sx(qm,i) sx(e,j_i).
/// At every integer time each spin (and each memory qubit when kick_memory is
/// set) receives the kick exp(-i b.sigma). One period is exp(-i H_c) followed by
/// the kick. Units: hbar = 1, period 1.
struct KickedIsingParams {
    int L = 1;
    int n = 1;
    std::array<double, 3> b{0.0, 0.0, 0.0};
    std::vector<double> lambdas;
    std::vector<int> positions;
    bool ring_closed = true;
    bool kick_memory = true;

    /// Throws ValidationError on inconsistent sizes, positions or non-finite values.
    void validate() const;
    /// max |lambda_i|
    double lambda_max() const;
    SystemLayout layout() const { return make_layout(n, L); }
    KickedIsingParams uncoupled() const;
    /// Couplings of every qubit except `i` set to zero.
    KickedIsingParams spectator(int i) const;
};

/// exp(-i b.sigma) = cos|b| 1 - i sin|b| (b/|b|).sigma
Matrix2c kick_matrix(const std::array<double, 3>& b);

/// Single-site basis change mapping the sigma_z basis to the sigma_x eigenbasis.
Matrix2c hadamard();

/// Precomputed Floquet map acting in the sigma_x eigenbasis of every site.
///
/// In that basis the Ising bonds and the sx.sx couplings are diagonal, so the
/// continuous part is a table of phase factors and the kick is a product of
/// 2x2 rotations conjugated by the Hadamard.
class FloquetPropagator {
  public:
    explicit FloquetPropagator(const KickedIsingParams& params);

    const SystemLayout& layout() const { return layout_; }

    void step(std::span<cplx> x_amplitudes) const;
    void inverse_step(std::span<cplx> x_amplitudes) const;

    /// Changes a buffer between the z and x bases (the map is an involution).
    void change_basis(std::span<cplx> amplitudes) const;

    /// sx(qm,i) sx(e,j_i) in the x basis: a sign per basis index.
    void apply_coupling(std::span<cplx> x_amplitudes, int i) const;

  private:
    SystemLayout layout_;
    KickedIsingParams params_;
    std::vector<cplx> phase_factors_;
    Matrix2c kick_x_;
    Matrix2c kick_x_inverse_;
    bool kick_memory_;
};

/// One coupled period applied to a z-basis state.
PureState floquet_step(const PureState& state, const KickedIsingParams& params);

/// One period with every lambda_i forced to zero.
PureState uncoupled_step(const PureState& state, const KickedIsingParams& params);

/// Memory purity after 0, 1, ..., t_max coupled periods.
PurityCurve evolve_purity(const PureState& initial, const KickedIsingParams& params, int t_max);

/// evolve_purity with only qubit i coupled. Throws std::out_of_range.
PurityCurve spectator_curve(const PureState& initial, const KickedIsingParams& params, int i, int t_max);

} // namespace qdecay::kicked_ising
