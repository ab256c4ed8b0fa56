#pragma once

#include <cstdint>
#include <functional>
#include <map>

#include "postsim/circuit.hpp"

namespace postsim {

// Hard cap on path enumeration: 2^24 branch assignments.
inline constexpr int kPathBudgetBits = 24;

// Exact signed path-contribution sums for a Hadamard/X/CNOT/Toffoli circuit.
// Every Hadamard opens two branches contributing +1 or -1; classical gates
// permute the tracked basis state. The final amplitude of |z> is
// sums[z] * 2^{-h/2} with h = hadamard_count, so amplitude comparisons reduce
// to exact integer comparisons. The enforced budget keeps |sums[z]| <= 2^24,
// far inside 64-bit range.
struct PathLedger {
    int num_qubits = 0;
    int hadamard_count = 0;
    std::map<std::uint64_t, long long> sums;  // only nonzero entries

    long long contribution(std::uint64_t z) const {
        auto it = sums.find(z);
        return it == sums.end() ? 0 : it->second;
    }

    double amplitude(std::uint64_t z) const {
        return static_cast<double>(contribution(z)) * std::exp2(-0.5 * hadamard_count);
    }

    // Exactly 2^hadamard_count for every postselection-free restricted
    // circuit (integer norm preservation).
    long long sum_of_squares() const;
};

// Enumerates all 2^h branch assignments. Gates must be within
// {H, X, CNOT, TOF}; a terminal postselection is permitted and ignored
// (the ledger describes the pre-measurement state). Throws UnsupportedGate,
// PathBudgetExceeded (h > 24), or ValidationError (intermediate
// postselection). Branch ranges are processed in parallel and merged by
// integer addition, so the result is independent of the split.
PathLedger enumerate_ledger(const Circuit &circuit, std::uint64_t input);

// Outcome of an exact ledger comparison. Exact ties decide "not greater" and
// are reported, not guessed.
struct LedgerDecision {
    bool accept = false;        // accept_weight > reject_weight
    bool tie = false;           // accept_weight == reject_weight
    long long accept_weight = 0;  // sum of c_z^2 over flag = 1, accept = 1
    long long reject_weight = 0;  // sum of c_z^2 over flag = 1, accept = 0
};

// Decides conditional acceptance > 1/2 by exact integer comparison of the
// squared contributions on the flag = 1 side. The circuit must be in normal
// form over the restricted gate set. Throws ZeroProbability when the flag
// event carries no weight at all.
LedgerDecision ledger_decide(const Circuit &circuit, std::uint64_t input);

// The same comparison on an already-enumerated ledger.
LedgerDecision decide_from_ledger(const PathLedger &ledger, int flag_qubit, int accept_qubit);

struct PowerDecision {
    bool accept = false;
    bool tie = false;
    long long subset_weight = 0;      // sum of c_z^p over z in subset
    long long complement_weight = 0;  // sum of c_z^p over z outside
};

// Decides sum_{z in S} a_z^p > sum_{z not in S} a_z^p for even p >= 4 by
// exact integer arithmetic; a_z^p is computed as the p-th power of the ledger
// sum (the ordered-tuple expansion collapses to exactly this by the
// multinomial theorem). Requires a postselection-free restricted circuit and
// h*p <= 24.
PowerDecision power_ledger_decide(const Circuit &circuit, int p,
                                  const std::function<bool(std::uint64_t)> &subset,
                                  std::uint64_t input);

}  // namespace postsim
