#pragma once

#include <functional>

#include "postsim/circuit.hpp"
#include "postsim/majority.hpp"
#include "postsim/rng.hpp"
#include "postsim/state.hpp"

namespace postsim {

// The invertible 1-qubit map diag(2^-q_poly, 1) (bit = 1; mirrored for
// bit = 0). Under renormalization it approximates postselection of `qubit`
// on `bit` with total-variation error ~ 4^-q_poly times the failure/success
// mass ratio. Rejected when 2^-q_poly underflows to zero (q_poly > 1074);
// the matrix is invertible by construction, so the parser-level determinant
// threshold does not apply.
Gate nonunitary_postselect_gadget(int qubit, int q_poly, int bit = 1);

// Ancilla count K = ceil(2 q_poly / |2 - p|) for the mass-boost gadget.
int mass_boost_ancilla_count(double p, int q_poly);

// Appends `ancilla_count` fresh ancillas and one conditional-Hadamard layer
// per ancilla, conditioned on the core register being in `subset` when p < 2
// (boosting the subset's p-mass) or outside it when p > 2 (suppressing the
// complement). Each layer multiplies the targeted p-mass by exactly
// 2^((2-p)/2) relative to untargeted mass: with K layers the factor is
// 2^((2-p)K/2). Rejects p = 2 (the gadget is vacuous).
Circuit append_mass_boost(const Circuit &circuit, const std::function<bool(std::uint64_t)> &subset,
                          const MeasurementRule &rule, int ancilla_count);

// append_mass_boost with the ancilla count derived from q_poly, making the
// targeted-mass factor 2^(sign(2-p) * q_poly) or slightly stronger.
Circuit mass_boost_gadget(const Circuit &circuit, const std::function<bool(std::uint64_t)> &subset,
                          const MeasurementRule &rule, int q_poly);

// Replaces every postselection point with a nonunitary_postselect_gadget on
// the same qubit and bit; the result has no postselection points.
Circuit replace_postselections_nonunitary(const Circuit &circuit, int q_poly);

// Replaces every postselection point with `ancilla_count` conditional-H
// layers on fresh ancillas conditioned on the postselected qubit holding the
// required bit (p < 2) or not holding it (p > 2).
Circuit replace_postselections_boost(const Circuit &circuit, const MeasurementRule &rule,
                                     int ancilla_count);

// Runs a unitary, postselection-free circuit densely and samples one basis
// index under the p-rule.
std::uint64_t run_p_rule(const Circuit &circuit, const MeasurementRule &rule, Rng &rng,
                         std::uint64_t input = 0);
std::uint64_t run_p_rule(const Circuit &circuit, const MeasurementRule &rule, std::uint64_t seed,
                         std::uint64_t input);

// Exact p-rule outcome masses of a postselected circuit compiled to the
// boost-gadget form, without materializing the K ancillas per event. The
// core state is tracked per postselection-history: ancilla blocks are either
// |0>^K or the uniform K-qubit superposition, so each history's ancilla
// factor is determined by which events its components satisfied, and the
// final mass sum over ancilla patterns reduces to a weighted sum over
// history subsets. Agrees with a dense simulation of
// replace_postselections_boost wherever that is feasible.
class BoostedPipeline {
  public:
    BoostedPipeline(const Circuit &circuit, const MeasurementRule &rule, int ancilla_count,
                    std::uint64_t input);

    // Total p-mass of all outcomes whose core-register index satisfies
    // `event`, summed over every ancilla outcome.
    double event_mass(const std::function<bool(std::uint64_t)> &event) const;

    double total_mass() const {
        return event_mass([](std::uint64_t) { return true; });
    }

  private:
    int core_qubits_;
    int num_events_;
    int ancilla_count_;
    double p_;
    // History mask -> core amplitudes; bit j set means the component
    // satisfied postselection event j when it was applied.
    std::vector<std::pair<std::uint32_t, std::vector<Amplitude>>> branches_;
};

// End-to-end majority decision with every postselection replaced by the
// nonunitary gadget, run under the standard rule: the sweep, witness
// threshold, and verdict combination of decide_majority_sampled.
DecisionReport decide_majority_nonunitary(const MajorityInstance &inst, int q_poly,
                                          std::uint64_t reps_per_i, std::uint64_t seed);

// End-to-end majority decision under the |psi|^p rule (p != 2), with every
// postselection replaced by a mass-boost gadget of strength q_poly. The
// per-(i, rep) measurement uses the exact +/- masses from BoostedPipeline;
// the verdict rule matches decide_majority_sampled, with an additional
// ~2^-q_poly leakage from the unpostselected failure components.
DecisionReport decide_majority_boosted(const MajorityInstance &inst, const MeasurementRule &rule,
                                       std::uint64_t reps_per_i, std::uint64_t seed,
                                       int q_poly = 20);

}  // namespace postsim
