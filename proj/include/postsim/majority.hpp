#pragma once

#include <map>
#include <string>

#include "postsim/circuit.hpp"
#include "postsim/state.hpp"

namespace postsim {

// Proved overlap bounds for the probe-state dichotomy: when the count is
// below half the domain some probe ratio reaches at least the close bound;
// otherwise no ratio exceeds the far bound.
inline const double kCloseOverlapBound = (1.0 + std::sqrt(2.0)) / std::sqrt(6.0);  // > 0.985
inline const double kFarOverlapBound = 1.0 / std::sqrt(2.0);

// Verdict threshold on the best overlap, strictly between the two bounds
// with maximal margin to both.
inline constexpr double kOverlapVerdictThreshold = 0.85;

// Witness threshold on the |+>-outcome frequency in sampled modes, the
// midpoint of the squared-overlap gap [0.5, 0.97].
inline constexpr double kWitnessFrequencyThreshold = 0.75;

enum class DecideMode { Analytic, Circuit, Sampled };

const char *decide_mode_name(DecideMode mode);

// Result of one majority decision. `overlaps` maps each swept exponent i to
// |<+|probe(2^i)>| in analytic/circuit modes and to the measured |+>-outcome
// frequency in sampled modes. verdict == true means "decided ones < 2^(n-1)".
struct DecisionReport {
    int n = 0;
    std::uint64_t ones = 0;
    std::map<int, double> overlaps;
    bool verdict = false;
    DecideMode mode = DecideMode::Analytic;
    std::uint64_t repetitions = 0;
    std::uint64_t seed = 0;

    double max_overlap() const;

    // Flat key-value block; byte-stable for fixed inputs and seed.
    std::string to_text() const;

    // CSV rows (i, overlap) with a header line.
    std::string to_csv() const;
};

// Widens f by one input bit so the count of satisfying inputs is always
// >= 2^(n-1) > 0 while the majority verdict is preserved: the padded
// instance g has g(0x) = f(x) and g(1x) = 1 iff the leading bit of x is 0.
MajorityInstance pad_instance(const MajorityInstance &inst);

// The 1-qubit state proportional to zeros(f)|0> + ones(f)|1>.
StateVector count_state(const MajorityInstance &inst);

// The 1-qubit probe obtained from count_state by the controlled-Hadamard
// trick at mixing ratio beta/alpha = `ratio`: proportional to
//   ones|0> + ratio * sqrt(1/2) * (zeros - ones)|1>.
// Only the ratio matters; the pair (alpha, beta) is normalized internally.
StateVector probe_state(const MajorityInstance &inst, double ratio);

// Sweeps i in [-n, n] and decides by the best analytic overlap. Requires
// ones >= 1 (pad first when the count may be zero). Correct for every
// instance with 1 <= ones <= 2^n.
DecisionReport decide_majority_analytic(const MajorityInstance &inst);

// The (n+2)-qubit circuit realizing the probe at ratio 2^i: Hadamards on the
// n input qubits, the f oracle into a function qubit, Hadamards again,
// postselection of every input qubit on 0, a rotation preparing the control,
// a controlled Hadamard from the control onto the function qubit, and a
// postselection of the function qubit on 1. After running, the control qubit
// (index n+1) holds probe_state(inst, 2^i).
Circuit build_majority_circuit(const MajorityInstance &inst, int i);

// Same sweep and threshold as the analytic decider, but every overlap is
// measured from a dense simulation of build_majority_circuit.
DecisionReport decide_majority_circuit(const MajorityInstance &inst);

// End-to-end sampled decision: for each i, runs the circuit and measures the
// control qubit in the {|+>,|->} basis (Hadamard then a standard
// measurement) reps_per_i times; i is a witness when the |+> frequency
// reaches kWitnessFrequencyThreshold, and the verdict is true iff any i is a
// witness. Repetition (i, rep) draws from the stream derived from
// (seed, i, rep), so any evaluation order gives identical results.
DecisionReport decide_majority_sampled(const MajorityInstance &inst, std::uint64_t reps_per_i,
                                       std::uint64_t seed);

// CSV rows (i, ratio, amp0, amp1, overlap) of the probe sweep, the data
// behind the overlap trajectory plots.
std::string probe_sweep_csv(const MajorityInstance &inst);

}  // namespace postsim
