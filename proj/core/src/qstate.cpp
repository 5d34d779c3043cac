#include "qdecay/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qdecay {

int SystemLayout::bit(Subsystem part, int site) const {
    const int count = part == Subsystem::memory ? n_mem_ : n_env_;
    if (site < 0 || site >= count) {
        throw std::out_of_range("site " + std::to_string(site) + " outside subsystem of size " +
                                std::to_string(count));
    }
    return part == Subsystem::memory ? site : n_mem_ + site;
}

SystemLayout make_layout(int n_mem, int n_env) {
    if (n_mem < 1) throw ValidationError("layout needs at least one memory qubit");
    if (n_env < 0) throw ValidationError("environment size must be nonnegative");
    if (n_mem + n_env > kMaxQubits) {
        throw SizeError("register of " + std::to_string(n_mem + n_env) + " qubits exceeds cap of " +
                        std::to_string(kMaxQubits));
    }
    return SystemLayout(n_mem, n_env);
}

namespace {

double squared_norm(std::span<const cplx> v) {
    double acc = 0.0;
    for (const auto& a : v) acc += std::norm(a);
    return acc;
}

} // namespace

PureState::PureState(SystemLayout layout, std::vector<cplx> amplitudes)
    : layout_(layout), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != layout_.dimension()) {
        throw ValidationError("amplitude count " + std::to_string(amplitudes_.size()) +
                              " does not match layout dimension " + std::to_string(layout_.dimension()));
    }
    const double n = std::sqrt(squared_norm(amplitudes_));
    if (!std::isfinite(n) || std::abs(n - 1.0) > kStateTolerance) {
        throw ValidationError("state is not normalized (norm = " + std::to_string(n) + ")");
    }
}

PureState PureState::basis(SystemLayout layout, std::size_t index) {
    if (index >= layout.dimension()) throw std::out_of_range("basis index outside layout");
    std::vector<cplx> amps(layout.dimension());
    amps[index] = 1.0;
    return PureState(layout, std::move(amps));
}

double PureState::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

cplx PureState::inner(const PureState& other) const {
    if (!(layout_ == other.layout_)) throw ValidationError("inner product of states with different layouts");
    cplx acc = 0.0;
    for (std::size_t k = 0; k < amplitudes_.size(); ++k) acc += std::conj(amplitudes_[k]) * other.amplitudes_[k];
    return acc;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, std::vector<int> subset)
    : entries_(std::move(entries)), subset_(std::move(subset)) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << subset_.size());
    if (entries_.rows() != dim || entries_.cols() != dim) {
        throw ValidationError("density matrix shape does not match subset size");
    }
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
        throw ValidationError("density matrix is not Hermitian");
    }
    if (std::abs(entries_.trace() - cplx{1.0}) > kStateTolerance) {
        throw ValidationError("density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kStateTolerance) {
        throw ValidationError("density matrix has a negative eigenvalue");
    }
}

DensityMatrix::DensityMatrix(Trusted, Eigen::MatrixXcd entries, std::vector<int> subset)
    : entries_(std::move(entries)), subset_(std::move(subset)) {}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_ab|^2 for Hermitian rho.
    return entries_.squaredNorm();
}

void apply_local_unitary_inplace(std::span<cplx> amplitudes, int bit, const Matrix2c& u) {
    const std::size_t stride = std::size_t{1} << bit;
    const std::size_t n = amplitudes.size();
    const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            const cplx a0 = amplitudes[k];
            const cplx a1 = amplitudes[k + stride];
            amplitudes[k] = u00 * a0 + u01 * a1;
            amplitudes[k + stride] = u10 * a0 + u11 * a1;
        }
    }
}

void apply_phase_factors_inplace(std::span<cplx> amplitudes, std::span<const cplx> factors) {
    for (std::size_t k = 0; k < amplitudes.size(); ++k) amplitudes[k] *= factors[k];
}

bool is_unitary(const Matrix2c& u, double tol) {
    return ((u.adjoint() * u - Matrix2c::Identity()).cwiseAbs().maxCoeff() <= tol) && u.allFinite();
}

PureState apply_local_unitary(const PureState& state, int site, const Matrix2c& u) {
    if (site < 0 || site >= state.layout().total_bits()) throw std::out_of_range("site outside register");
    if (!is_unitary(u)) throw ValidationError("single-site operator is not unitary");
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    apply_local_unitary_inplace(amps, site, u);
    return PureState(state.layout(), std::move(amps));
}

PureState apply_diagonal_phases(const PureState& state, const std::function<double(std::size_t)>& phase) {
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t k = 0; k < amps.size(); ++k) amps[k] *= std::polar(1.0, -phase(k));
    return PureState(state.layout(), std::move(amps));
}

double gram_purity(std::span<const cplx> amplitudes, std::size_t rows, std::size_t cols) {
    if (amplitudes.size() != rows * cols) throw ValidationError("buffer size does not match rows*cols");
    Eigen::Map<const Eigen::MatrixXcd> g(amplitudes.data(), static_cast<Eigen::Index>(rows),
                                         static_cast<Eigen::Index>(cols));
    if (rows <= cols) {
        const Eigen::MatrixXcd m = g * g.adjoint();
        return m.squaredNorm();
    }
    const Eigen::MatrixXcd m = g.adjoint() * g;
    return m.squaredNorm();
}

double purity_memory(const PureState& state) {
    const auto& layout = state.layout();
    if (layout.n_env() == 0) return 1.0;
    return gram_purity(state.amplitudes(), layout.mem_dimension(), layout.env_dimension());
}

double single_qubit_purity(const PureState& state, int i) {
    const int bit = state.layout().bit(Subsystem::memory, i);
    const std::size_t stride = std::size_t{1} << bit;
    const auto amps = state.amplitudes();
    double r00 = 0.0, r11 = 0.0;
    cplx r01 = 0.0;
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            const cplx a0 = amps[k];
            const cplx a1 = amps[k + stride];
            r00 += std::norm(a0);
            r11 += std::norm(a1);
            r01 += a0 * std::conj(a1);
        }
    }
    return r00 * r00 + r11 * r11 + 2.0 * std::norm(r01);
}

DensityMatrix reduced_density(const PureState& state, const std::vector<int>& subset) {
    const int total = state.layout().total_bits();
    if (static_cast<int>(subset.size()) > kMaxReducedQubits) {
        throw SizeError("reduced_density subset larger than " + std::to_string(kMaxReducedQubits) + " qubits");
    }
    std::vector<bool> used(static_cast<std::size_t>(total), false);
    for (int b : subset) {
        if (b < 0 || b >= total) throw ValidationError("subset bit outside register");
        if (used[static_cast<std::size_t>(b)]) throw ValidationError("subset lists a bit twice");
        used[static_cast<std::size_t>(b)] = true;
    }
    std::vector<int> rest;
    for (int b = 0; b < total; ++b) {
        if (!used[static_cast<std::size_t>(b)]) rest.push_back(b);
    }

    const auto keep_dim = static_cast<Eigen::Index>(std::size_t{1} << subset.size());
    const auto rest_dim = static_cast<Eigen::Index>(std::size_t{1} << rest.size());
    Eigen::MatrixXcd g(keep_dim, rest_dim);
    const auto amps = state.amplitudes();
    for (std::size_t x = 0; x < amps.size(); ++x) {
        Eigen::Index r = 0, c = 0;
        for (std::size_t s = 0; s < subset.size(); ++s) r |= static_cast<Eigen::Index>((x >> subset[s]) & 1U) << s;
        for (std::size_t s = 0; s < rest.size(); ++s) c |= static_cast<Eigen::Index>((x >> rest[s]) & 1U) << s;
        g(r, c) = amps[x];
    }
    Eigen::MatrixXcd rho = g * g.adjoint();
    // Gram construction is positive semidefinite; only symmetrize rounding.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    if (std::abs(rho.trace() - cplx{1.0}) > kStateTolerance) throw ValidationError("reduced state trace differs from 1");
    return DensityMatrix(DensityMatrix::Trusted{}, std::move(rho), subset);
}

} // namespace qdecay
