#pragma once

#include "postsim/circuit.hpp"

namespace postsim {

// Normal form: exactly one postselection, at the end of the gate list, on the
// flag qubit, requiring bit 1.
bool is_normal_form(const Circuit &circuit);

// Rewrites a circuit with arbitrary postselection points into normal form:
// each postselected qubit is copied (CNOT) into a fresh ancilla at its
// program point, the AND of the copies is computed by a Toffoli cascade into
// a result ancilla, the flag designation moves to that ancilla, and a single
// terminal postselection requires it to be 1. Bit-0 postselections are
// conjugated with X around the copy. Workspace is never uncomputed; the
// computation ends right after the AND. Circuits already in normal form are
// returned unchanged (the rewrite is idempotent), and a circuit with no
// postselections gains a trivially-true flag ancilla.
//
// The conditional distribution on the original qubits, conditioned on all
// original postselections succeeding, is preserved; the original qubits are
// never written by the added gates.
Circuit normalize_postselections(const Circuit &circuit);

// Runs both circuits on disjoint registers; the composed circuit accepts iff
// both accept, conditioned on both postselections succeeding. Inputs must be
// in normal form. The composed conditional acceptance probability is the
// product of the inputs'.
Circuit compose_intersection(const Circuit &c1, const Circuit &c2);

// Probability that a majority of k independent Bernoulli(p_accept) trials
// accept, for odd k: the probability-level model of majority-vote
// amplification.
double amplify(double p_accept, int k);

}  // namespace postsim
