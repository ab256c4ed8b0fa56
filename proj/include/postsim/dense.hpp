#pragma once

#include "postsim/circuit.hpp"
#include "postsim/state.hpp"

namespace postsim {

// Squared-norm mass below which a conditioning event counts as exactly zero.
// Near-zero but nonzero masses renormalize normally; rounding them to zero
// would change the semantics of postselection.
inline constexpr double kZeroMassThreshold = 1e-300;

// In-place gate application over index strides; no 2^n x 2^n matrix is ever
// built. Amplitude slices may be processed by parallel workers; each
// amplitude is written exactly once per gate, so results are bit-identical
// to the sequential order at any parallelism level.
void apply_gate(std::vector<Amplitude> &amps, int num_qubits, const Gate &gate);
void apply_gate(StateVector &state, const Gate &gate);

// Projects onto `qubit` == `bit` and renormalizes to 2-norm 1. Throws
// ZeroProbability when the event mass is below kZeroMassThreshold.
StateVector postselect(const StateVector &state, int qubit, int bit);

// Applies gates in order, conditioning at each postselection point; the
// result is not renormalized at the end (postselection points renormalize as
// part of postselect). Nonunitary gates are applied as raw linear maps.
StateVector run_circuit_raw(const Circuit &circuit, std::uint64_t input);

// run_circuit_raw plus the final renormalization that precedes measurement.
StateVector run_circuit(const Circuit &circuit, std::uint64_t input);

// P(accept_qubit = 1 | flag_qubit = 1) on the final pre-postselection state.
// The circuit must be in normal form (or free of postselections). Throws
// ZeroProbability when the flag event has zero mass.
double conditional_accept_prob(const Circuit &circuit, std::uint64_t input);

// Appends `count` ancilla qubits in |0>.
StateVector extend_with_ancillas(const StateVector &state, int count);

}  // namespace postsim
