#include "postsim/dense.hpp"

#include <cmath>

#include "postsim/errors.hpp"
#include "postsim/parallel.hpp"
#include "postsim/rewrite.hpp"

namespace postsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr std::uint64_t kParallelGrain = std::uint64_t{1} << 14;

inline std::uint64_t mask_of(int num_qubits, int qubit) {
    return std::uint64_t{1} << (num_qubits - 1 - qubit);
}

// Expands a compressed index to a basis index with a 0 at the mask position.
inline std::uint64_t expand1(std::uint64_t i, std::uint64_t mask) {
    std::uint64_t low = i & (mask - 1);
    return ((i ^ low) << 1) | low;
}

// Gathers the values of `qubits[0..count)` in z, most significant first.
inline std::uint64_t gather(std::uint64_t z, const std::vector<int> &qubits, int count, int num_qubits) {
    std::uint64_t x = 0;
    for (int j = 0; j < count; ++j) {
        x = (x << 1) | ((z >> (num_qubits - 1 - qubits[j])) & 1u);
    }
    return x;
}

}  // namespace

void apply_gate(std::vector<Amplitude> &amps, int num_qubits, const Gate &gate) {
    const std::uint64_t half = amps.size() >> 1;
    switch (gate.kind) {
        case GateKind::H: {
            const std::uint64_t m = mask_of(num_qubits, gate.qubits[0]);
            parallel_for(0, half, kParallelGrain, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    std::uint64_t i0 = expand1(i, m);
                    Amplitude a = amps[i0], bv = amps[i0 | m];
                    amps[i0] = (a + bv) * kInvSqrt2;
                    amps[i0 | m] = (a - bv) * kInvSqrt2;
                }
            });
            break;
        }
        case GateKind::X: {
            const std::uint64_t m = mask_of(num_qubits, gate.qubits[0]);
            parallel_for(0, half, kParallelGrain, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    std::uint64_t i0 = expand1(i, m);
                    std::swap(amps[i0], amps[i0 | m]);
                }
            });
            break;
        }
        case GateKind::CNOT:
        case GateKind::Toffoli: {
            std::uint64_t control = 0;
            for (std::size_t j = 0; j + 1 < gate.qubits.size(); ++j) control |= mask_of(num_qubits, gate.qubits[j]);
            const std::uint64_t m = mask_of(num_qubits, gate.target());
            parallel_for(0, half, kParallelGrain, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    std::uint64_t i0 = expand1(i, m);
                    if ((i0 & control) == control) std::swap(amps[i0], amps[i0 | m]);
                }
            });
            break;
        }
        case GateKind::CH: {
            const std::uint64_t control = mask_of(num_qubits, gate.qubits[0]);
            const std::uint64_t m = mask_of(num_qubits, gate.qubits[1]);
            parallel_for(0, half, kParallelGrain, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    std::uint64_t i0 = expand1(i, m);
                    if ((i0 & control) != control) continue;
                    Amplitude a = amps[i0], bv = amps[i0 | m];
                    amps[i0] = (a + bv) * kInvSqrt2;
                    amps[i0 | m] = (a - bv) * kInvSqrt2;
                }
            });
            break;
        }
        case GateKind::U1: {
            const std::uint64_t m = mask_of(num_qubits, gate.qubits[0]);
            const auto &u = gate.mat1;
            parallel_for(0, half, kParallelGrain, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    std::uint64_t i0 = expand1(i, m);
                    Amplitude a = amps[i0], bv = amps[i0 | m];
                    amps[i0] = u[0] * a + u[1] * bv;
                    amps[i0 | m] = u[2] * a + u[3] * bv;
                }
            });
            break;
        }
        case GateKind::U2: {
            const std::uint64_t m1 = mask_of(num_qubits, gate.qubits[0]);
            const std::uint64_t m2 = mask_of(num_qubits, gate.qubits[1]);
            const std::uint64_t hi = m1 > m2 ? m1 : m2;
            const std::uint64_t lo = m1 > m2 ? m2 : m1;
            const auto &u = gate.mat2;
            parallel_for(0, amps.size() >> 2, kParallelGrain, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    std::uint64_t low = i & (lo - 1);
                    std::uint64_t mid = (i ^ low) & ((hi >> 1) - 1);
                    std::uint64_t base = ((i ^ low ^ mid) << 2) | (mid << 1) | low;
                    Amplitude v[4] = {amps[base], amps[base | m2], amps[base | m1], amps[base | m1 | m2]};
                    for (int r = 0; r < 4; ++r) {
                        Amplitude acc(0.0, 0.0);
                        for (int c = 0; c < 4; ++c) acc += u[r * 4 + c] * v[c];
                        amps[base | (r & 2 ? m1 : 0u) | (r & 1 ? m2 : 0u)] = acc;
                    }
                }
            });
            break;
        }
        case GateKind::Oracle: {
            const std::uint64_t m = mask_of(num_qubits, gate.target());
            const std::vector<std::uint8_t> &table = *gate.table;
            parallel_for(0, half, kParallelGrain, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    std::uint64_t i0 = expand1(i, m);
                    if (table[gather(i0, gate.qubits, gate.num_inputs, num_qubits)]) {
                        std::swap(amps[i0], amps[i0 | m]);
                    }
                }
            });
            break;
        }
        case GateKind::CondH: {
            const std::uint64_t m = mask_of(num_qubits, gate.target());
            const std::vector<std::uint8_t> &table = *gate.table;
            parallel_for(0, half, kParallelGrain, [&](std::uint64_t b, std::uint64_t e) {
                for (std::uint64_t i = b; i < e; ++i) {
                    std::uint64_t i0 = expand1(i, m);
                    if (!table[gather(i0, gate.qubits, gate.num_inputs, num_qubits)]) continue;
                    Amplitude a = amps[i0], bv = amps[i0 | m];
                    amps[i0] = (a + bv) * kInvSqrt2;
                    amps[i0 | m] = (a - bv) * kInvSqrt2;
                }
            });
            break;
        }
    }
}

void apply_gate(StateVector &state, const Gate &gate) {
    gate.validate(state.num_qubits);
    apply_gate(state.amps, state.num_qubits, gate);
    if (!gate.unitary) {
        state.check_finite();
        state.refresh_normalized();
    }
}

StateVector postselect(const StateVector &state, int qubit, int bit) {
    if (qubit < 0 || qubit >= state.num_qubits) throw ValidationError("postselection qubit out of range");
    const std::uint64_t m = state.qubit_mask(qubit);
    const std::uint64_t want = bit ? m : 0u;
    double mass = 0.0;
    for (std::uint64_t z = 0; z < state.amps.size(); ++z) {
        if ((z & m) == want) mass += std::norm(state.amps[z]);
    }
    if (mass < kZeroMassThreshold) {
        throw ZeroProbability("postselection on an event of zero probability");
    }
    const double scale = 1.0 / std::sqrt(mass);
    StateVector out;
    out.num_qubits = state.num_qubits;
    out.amps.resize(state.amps.size());
    for (std::uint64_t z = 0; z < state.amps.size(); ++z) {
        out.amps[z] = ((z & m) == want) ? state.amps[z] * scale : Amplitude(0.0, 0.0);
    }
    out.normalized = true;
    return out;
}

StateVector run_circuit_raw(const Circuit &circuit, std::uint64_t input) {
    circuit.validate();
    if (input >= (std::uint64_t{1} << circuit.num_qubits)) throw ValidationError("input index out of range");
    StateVector state = StateVector::basis_state(circuit.num_qubits, input);
    std::size_t next_post = 0;
    for (std::size_t g = 0; g <= circuit.gates.size(); ++g) {
        while (next_post < circuit.postselections.size() &&
               circuit.postselections[next_post].position == g) {
            const Postselection &p = circuit.postselections[next_post++];
            state = postselect(state, p.qubit, p.bit);
        }
        if (g < circuit.gates.size()) apply_gate(state, circuit.gates[g]);
    }
    return state;
}

StateVector run_circuit(const Circuit &circuit, std::uint64_t input) {
    StateVector state = run_circuit_raw(circuit, input);
    double mass = state.norm_sq();
    if (mass < kZeroMassThreshold) throw ZeroProbability("final state has zero mass");
    const double scale = 1.0 / std::sqrt(mass);
    for (Amplitude &a : state.amps) a *= scale;
    state.normalized = true;
    return state;
}

double conditional_accept_prob(const Circuit &circuit, std::uint64_t input) {
    if (!circuit.postselections.empty() && !is_normal_form(circuit)) {
        throw ValidationError("conditional_accept_prob expects a circuit in normal form");
    }
    circuit.validate();
    if (input >= (std::uint64_t{1} << circuit.num_qubits)) throw ValidationError("input index out of range");
    StateVector state = StateVector::basis_state(circuit.num_qubits, input);
    for (const Gate &g : circuit.gates) apply_gate(state, g);

    const std::uint64_t flag_mask = state.qubit_mask(circuit.flag_qubit);
    const std::uint64_t accept_mask = state.qubit_mask(circuit.accept_qubit);
    double flag_mass = 0.0, accept_mass = 0.0;
    for (std::uint64_t z = 0; z < state.amps.size(); ++z) {
        if ((z & flag_mask) == 0) continue;
        double w = std::norm(state.amps[z]);
        flag_mass += w;
        if (z & accept_mask) accept_mass += w;
    }
    if (flag_mass < kZeroMassThreshold) throw ZeroProbability("flag event has zero mass");
    return accept_mass / flag_mass;
}

StateVector extend_with_ancillas(const StateVector &state, int count) {
    if (count < 0 || state.num_qubits + count > 62) throw ValidationError("qubit count out of range");
    StateVector out;
    out.num_qubits = state.num_qubits + count;
    out.amps.assign(std::uint64_t{1} << out.num_qubits, Amplitude(0.0, 0.0));
    for (std::uint64_t z = 0; z < state.amps.size(); ++z) out.amps[z << count] = state.amps[z];
    out.normalized = state.normalized;
    return out;
}

}  // namespace postsim
