#include "postsim/circuit.hpp"

#include "postsim/errors.hpp"

namespace postsim {

void Circuit::validate() const {
    if (num_qubits < 1 || num_qubits > 62) throw ValidationError("qubit count out of range");
    for (const Gate &g : gates) g.validate(num_qubits);
    std::size_t last_position = 0;
    for (const Postselection &p : postselections) {
        if (p.qubit < 0 || p.qubit >= num_qubits) throw ValidationError("postselection qubit out of range");
        if (p.bit != 0 && p.bit != 1) throw ValidationError("postselection bit must be 0 or 1");
        if (p.position > gates.size()) throw ValidationError("postselection position out of range");
        if (p.position < last_position) throw ValidationError("postselection positions must be nondecreasing");
        last_position = p.position;
    }
    if (flag_qubit < 0 || flag_qubit >= num_qubits) throw ValidationError("flag qubit out of range");
    if (accept_qubit < 0 || accept_qubit >= num_qubits) throw ValidationError("accept qubit out of range");
}

bool Circuit::operator==(const Circuit &other) const {
    return num_qubits == other.num_qubits && gates == other.gates &&
           postselections == other.postselections && flag_qubit == other.flag_qubit &&
           accept_qubit == other.accept_qubit;
}

MajorityInstance::MajorityInstance(int n, std::vector<std::uint8_t> table_in)
    : n(n), table(std::move(table_in)) {
    if (n < 1 || n > 20) throw ValidationError("majority instance width must be in [1, 20]");
    if (table.size() != (std::uint64_t{1} << n)) throw ValidationError("truth table length must be 2^n");
    for (std::uint8_t v : table) {
        if (v > 1) throw ValidationError("truth table entries must be 0 or 1");
        ones += v;
    }
}

MajorityInstance MajorityInstance::from_mask(int n, std::uint64_t bits) {
    if (n < 1 || n > 6) throw ValidationError("from_mask supports n <= 6");
    std::vector<std::uint8_t> t(std::uint64_t{1} << n);
    for (std::uint64_t x = 0; x < t.size(); ++x) t[x] = static_cast<std::uint8_t>((bits >> x) & 1u);
    return {n, std::move(t)};
}

}  // namespace postsim
