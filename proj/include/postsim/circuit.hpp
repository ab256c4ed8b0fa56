#pragma once

#include <cstdint>
#include <vector>

#include "postsim/gate.hpp"

namespace postsim {

// Postselection of `qubit` == `bit` at an explicit program point: it applies
// after the first `position` gates. Postselection is conditioning, not linear
// evolution, so it is kept out of the gate list.
struct Postselection {
    int qubit = 0;
    int bit = 1;
    std::size_t position = 0;

    bool operator==(const Postselection &other) const = default;
};

// A gate program with postselection points and designated flag/accept qubits.
// The flag qubit carries the event every acceptance probability conditions
// on; the accept qubit carries the answer.
struct Circuit {
    int num_qubits = 0;
    std::vector<Gate> gates;
    std::vector<Postselection> postselections;  // nondecreasing positions
    int flag_qubit = 0;
    int accept_qubit = 0;

    explicit Circuit(int num_qubits = 1)
        : num_qubits(num_qubits), accept_qubit(num_qubits > 1 ? 1 : 0) {}

    Circuit &add(Gate g) {
        gates.push_back(std::move(g));
        return *this;
    }

    // Adds a postselection at the current end of the gate list.
    Circuit &postselect(int qubit, int bit) {
        postselections.push_back({qubit, bit, gates.size()});
        return *this;
    }

    // Throws ValidationError on any violated invariant.
    void validate() const;

    bool operator==(const Circuit &other) const;
};

// Re-encodes a basis index when a circuit is widened from `old_qubits` to
// `new_qubits` by appending ancillas (ancillas start in |0>). Appended qubits
// have higher indices and therefore occupy the low-order index bits.
inline std::uint64_t lift_basis_index(std::uint64_t index, int old_qubits, int new_qubits) {
    return index << (new_qubits - old_qubits);
}

// A Boolean function f : {0,1}^n -> {0,1} as an explicit truth table,
// together with the count of satisfying inputs. The majority question is
// whether that count is below half the domain.
struct MajorityInstance {
    int n = 1;
    std::vector<std::uint8_t> table;  // table[x] = f(x), x packed MSB-first
    std::uint64_t ones = 0;           // |{x : f(x) = 1}|, recomputed on construction

    MajorityInstance(int n, std::vector<std::uint8_t> table);

    // Table given as the low 2^n bits of `bits` (bit x = f(x)); n <= 6.
    static MajorityInstance from_mask(int n, std::uint64_t bits);

    std::uint64_t domain_size() const { return std::uint64_t{1} << n; }
    std::uint64_t zeros() const { return domain_size() - ones; }

    // The question the Theorem-3-style deciders answer.
    bool majority_below_half() const { return ones < (domain_size() >> 1); }
};

}  // namespace postsim
