#pragma once

#include <cstdint>

#include "qdecay/qstate.hpp"

namespace qdecay {

// Builders return standalone registers (layout n_mem = qubit count, n_env = 0);
// `product` joins a memory register and an environment register.

/// (|0...0> + |1...1>)/sqrt(2). Throws DomainError for n < 2.
PureState ghz(int n);

/// Equal superposition of the n single-excitation basis states. Throws DomainError for n < 2.
PureState w_state(int n);

/// Computational basis state |index> on n qubits.
PureState basis_state(int n, std::size_t index);

/// Independent complex Gaussian amplitudes (see Rng), normalized.
PureState haar_random(int n_bits, std::uint64_t seed);

/// |mem> (x) |env> with mem on the low bits. Both inputs must be standalone registers.
PureState product(const PureState& mem, const PureState& env);

} // namespace qdecay
