#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "postsim/state.hpp"

namespace postsim {

enum class GateKind {
    H,        // Hadamard
    X,        // bit flip
    CNOT,     // qubits = {control, target}
    Toffoli,  // qubits = {control, control, target}
    CH,       // controlled Hadamard, qubits = {control, target}
    U1,       // arbitrary invertible 1-qubit map, row-major 2x2
    U2,       // arbitrary invertible 2-qubit map, row-major 4x4
    Oracle,   // |x>|b> -> |x>|b ^ f(x)>, qubits = inputs... then target
    CondH,    // Hadamard on the target where a predicate over watched qubits holds
};

const char *gate_kind_name(GateKind kind);

// One gate in a circuit. A single struct covers every kind; the `qubits`
// vector carries controls/inputs/targets in the order documented per factory,
// and only the payload relevant to the kind is populated.
//
// CondH is program-internal (built by the mass-boost gadget, not parseable):
// its table is indexed by the packed values of the watched qubits, most
// significant first, exactly like an Oracle table.
struct Gate {
    GateKind kind = GateKind::H;
    std::vector<int> qubits;
    std::array<Amplitude, 4> mat1{};   // U1
    std::array<Amplitude, 16> mat2{};  // U2
    std::shared_ptr<const std::vector<std::uint8_t>> table;  // Oracle / CondH
    int num_inputs = 0;  // Oracle input count / CondH watched-qubit count
    bool unitary = true;

    static Gate h(int q);
    static Gate x(int q);
    static Gate cnot(int control, int target);
    static Gate toffoli(int control1, int control2, int target);
    static Gate ch(int control, int target);
    // Rejects singular matrices (|det| <= 1e-12); `unitary` records whether
    // U U^dag = I holds to 1e-9.
    static Gate u1(int q, const std::array<Amplitude, 4> &mat);
    static Gate u2(int q1, int q2, const std::array<Amplitude, 16> &mat);
    static Gate oracle(std::vector<int> inputs, int target, std::vector<std::uint8_t> truth_table);
    static Gate cond_h(std::vector<int> watched, int target, std::vector<std::uint8_t> predicate_table);

    int target() const { return qubits.back(); }

    // Checks intra-gate invariants: distinct qubits, indices < num_qubits,
    // table sizes. Throws ValidationError.
    void validate(int num_qubits) const;

    bool operator==(const Gate &other) const;
};

}  // namespace postsim
