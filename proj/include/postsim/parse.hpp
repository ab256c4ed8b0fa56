#pragma once

#include <string>

#include "postsim/circuit.hpp"

namespace postsim {

// Parses the line-oriented circuit text format:
//
//   qubits <n>
//   H q | X q | CNOT c t | TOF a b c | CH c t
//   U1 q re,im re,im re,im re,im          (row-major)
//   U2 q1 q2 <16 entries re,im>           (row-major)
//   ORACLE t q... : <2^k bits>            (t = target, q... = inputs, MSB first)
//   post q = b
//   flag q
//   accept q
//
// '#' starts a comment. `flag` defaults to qubit 0 and `accept` to qubit 1
// (qubit 0 on 1-qubit circuits) when the markers are absent. Throws
// SyntaxError with 1-based line/column on malformed text and ValidationError
// on invariant violations.
Circuit parse_circuit(const std::string &text);

// Canonical text for a circuit; parse_circuit(render_circuit(c)) == c.
// CondH gates are program-internal and have no text form (UnsupportedGate).
std::string render_circuit(const Circuit &circuit);

// Truth-table file format: first line `n <n>`, second line 2^n characters
// from {0,1}, most-significant input bits first.
MajorityInstance parse_truth_table(const std::string &text);
std::string render_truth_table(const MajorityInstance &inst);

// Reads a whole file; throws Error when the file cannot be read.
std::string read_file(const std::string &path);

}  // namespace postsim
