#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qdecay/errors.hpp"

namespace qdecay {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

/// Largest supported register, memory plus environment (2^24 amplitudes, 256 MiB).
inline constexpr int kMaxQubits = 24;
/// Normalization, trace and Hermiticity tolerance for states and density matrices.
inline constexpr double kStateTolerance = 1e-10;
/// Unitarity tolerance for 2x2 gates.
inline constexpr double kUnitaryTolerance = 1e-12;
/// Largest subset accepted by reduced_density (dense 4096 x 4096 output).
inline constexpr int kMaxReducedQubits = 12;

enum class Subsystem { memory, environment };

/// Partition of a register into n_mem memory qubits and n_env environment spins.
///
/// Bit ordering: memory qubit i sits at global bit i, environment spin k at
/// global bit n_mem + k. A basis index therefore factorizes as
/// `index = m + 2^n_mem * e`, so the amplitude vector viewed column-major is the
/// (2^n_mem x 2^n_env) coefficient matrix of the memory/environment cut.
class SystemLayout {
  public:
    SystemLayout() = default;

    int n_mem() const { return n_mem_; }
    int n_env() const { return n_env_; }
    int total_bits() const { return n_mem_ + n_env_; }
    std::size_t dimension() const { return std::size_t{1} << total_bits(); }
    std::size_t mem_dimension() const { return std::size_t{1} << n_mem_; }
    std::size_t env_dimension() const { return std::size_t{1} << n_env_; }

    /// Global bit position of `site` within `part`. Throws std::out_of_range.
    int bit(Subsystem part, int site) const;

    friend bool operator==(const SystemLayout&, const SystemLayout&) = default;

  private:
    friend SystemLayout make_layout(int n_mem, int n_env);
    SystemLayout(int n_mem, int n_env) : n_mem_(n_mem), n_env_(n_env) {}

    int n_mem_ = 1;
    int n_env_ = 0;
};

/// Throws ValidationError for n_mem < 1 or n_env < 0, SizeError above kMaxQubits.
SystemLayout make_layout(int n_mem, int n_env);

/// Normalized pure state over a SystemLayout. Immutable after construction.
class PureState {
  public:
    /// Validates length and unit norm (kStateTolerance).
    PureState(SystemLayout layout, std::vector<cplx> amplitudes);

    static PureState basis(SystemLayout layout, std::size_t index);

    const SystemLayout& layout() const { return layout_; }
    std::span<const cplx> amplitudes() const { return amplitudes_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    cplx operator[](std::size_t k) const { return amplitudes_[k]; }

    double norm() const;
    /// <this|other>; layouts must match.
    cplx inner(const PureState& other) const;

    /// Moves the amplitude buffer out, leaving the state empty.
    std::vector<cplx> release() && { return std::move(amplitudes_); }

  private:
    SystemLayout layout_;
    std::vector<cplx> amplitudes_;
};

/// Dense density matrix on an ordered list of global bit indices; subset[0] is
/// the least significant bit of the row index.
class DensityMatrix {
  public:
    /// Checks Hermiticity, unit trace and positive semidefiniteness.
    DensityMatrix(Eigen::MatrixXcd entries, std::vector<int> subset);

    const Eigen::MatrixXcd& entries() const { return entries_; }
    const std::vector<int>& subset() const { return subset_; }
    double purity() const;

  private:
    struct Trusted {};
    DensityMatrix(Trusted, Eigen::MatrixXcd entries, std::vector<int> subset);
    friend DensityMatrix reduced_density(const PureState&, const std::vector<int>&);

    Eigen::MatrixXcd entries_;
    std::vector<int> subset_;
};

// In-place kernels over raw amplitude buffers. They do not check norms.
void apply_local_unitary_inplace(std::span<cplx> amplitudes, int bit, const Matrix2c& u);
void apply_phase_factors_inplace(std::span<cplx> amplitudes, std::span<const cplx> factors);

/// True if u†u = 1 within `tol` (max-norm).
bool is_unitary(const Matrix2c& u, double tol = kUnitaryTolerance);

/// Returns u applied to global bit `site`. Throws ValidationError for non-unitary u.
PureState apply_local_unitary(const PureState& state, int site, const Matrix2c& u);

/// Multiplies amplitude k by exp(-i phase(k)).
PureState apply_diagonal_phases(const PureState& state, const std::function<double(std::size_t)>& phase);

/// Tr[(Tr_e rho)^2] for a buffer viewed as a column-major rows x cols matrix.
/// Uses the Gram matrix of the smaller side.
double gram_purity(std::span<const cplx> amplitudes, std::size_t rows, std::size_t cols);

/// Purity of the memory reduced state. Exactly 1 when the layout has no environment.
double purity_memory(const PureState& state);

/// Purity of memory qubit i alone. Throws std::out_of_range.
double single_qubit_purity(const PureState& state, int i);

/// Reduced density matrix of the listed global bits. Throws SizeError above
/// kMaxReducedQubits, ValidationError for repeated or invalid bits.
DensityMatrix reduced_density(const PureState& state, const std::vector<int>& subset);

} // namespace qdecay
