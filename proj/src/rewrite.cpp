#include "postsim/rewrite.hpp"

#include <cmath>

#include "postsim/errors.hpp"

namespace postsim {

bool is_normal_form(const Circuit &circuit) {
    if (circuit.postselections.size() != 1) return false;
    const Postselection &p = circuit.postselections.front();
    return p.position == circuit.gates.size() && p.qubit == circuit.flag_qubit && p.bit == 1;
}

Circuit normalize_postselections(const Circuit &circuit) {
    circuit.validate();
    if (is_normal_form(circuit)) return circuit;

    const int n = circuit.num_qubits;
    const std::size_t m = circuit.postselections.size();

    if (m == 0) {
        Circuit out(n + 1);
        out.gates = circuit.gates;
        out.accept_qubit = circuit.accept_qubit;
        out.add(Gate::x(n));
        out.flag_qubit = n;
        out.postselect(n, 1);
        out.validate();
        return out;
    }

    const int workspace = m > 1 ? static_cast<int>(m) - 1 : 0;
    Circuit out(n + static_cast<int>(m) + workspace);
    out.accept_qubit = circuit.accept_qubit;

    // Interleave the original gates with one copy-CNOT per postselection
    // point; success means "copy ancilla = 1" regardless of the required bit.
    std::size_t next_post = 0;
    for (std::size_t g = 0; g <= circuit.gates.size(); ++g) {
        while (next_post < m && circuit.postselections[next_post].position == g) {
            const Postselection &p = circuit.postselections[next_post];
            const int copy = n + static_cast<int>(next_post);
            if (p.bit == 0) out.add(Gate::x(p.qubit));
            out.add(Gate::cnot(p.qubit, copy));
            if (p.bit == 0) out.add(Gate::x(p.qubit));
            ++next_post;
        }
        if (g < circuit.gates.size()) out.add(circuit.gates[g]);
    }

    // AND of the copies via a Toffoli tree into fresh workspace.
    std::vector<int> level;
    for (std::size_t j = 0; j < m; ++j) level.push_back(n + static_cast<int>(j));
    int next_workspace = n + static_cast<int>(m);
    while (level.size() > 1) {
        std::vector<int> merged;
        std::size_t j = 0;
        for (; j + 1 < level.size(); j += 2) {
            out.add(Gate::toffoli(level[j], level[j + 1], next_workspace));
            merged.push_back(next_workspace++);
        }
        if (j < level.size()) merged.push_back(level[j]);
        level = std::move(merged);
    }

    out.flag_qubit = level.front();
    out.postselect(out.flag_qubit, 1);
    out.validate();
    return out;
}

Circuit compose_intersection(const Circuit &c1, const Circuit &c2) {
    if (!is_normal_form(c1) || !is_normal_form(c2)) {
        throw ValidationError("compose_intersection expects circuits in normal form");
    }
    const int n1 = c1.num_qubits, n2 = c2.num_qubits;
    Circuit out(n1 + n2 + 2);
    const int joint_flag = n1 + n2;
    const int joint_accept = n1 + n2 + 1;

    out.gates = c1.gates;
    for (const Gate &g : c2.gates) {
        Gate shifted = g;
        for (int &q : shifted.qubits) q += n1;
        out.add(std::move(shifted));
    }
    out.add(Gate::toffoli(c1.flag_qubit, c2.flag_qubit + n1, joint_flag));
    out.add(Gate::toffoli(c1.accept_qubit, c2.accept_qubit + n1, joint_accept));
    out.flag_qubit = joint_flag;
    out.accept_qubit = joint_accept;
    out.postselect(joint_flag, 1);
    out.validate();
    return out;
}

double amplify(double p_accept, int k) {
    if (!(p_accept >= 0.0 && p_accept <= 1.0)) {
        throw PreconditionViolated("acceptance probability must be in [0, 1]");
    }
    if (k < 1 || k % 2 == 0) throw PreconditionViolated("repetition count must be odd and >= 1");
    const long double p = p_accept;
    const long double q = 1.0L - p;
    long double coefficient = 1.0L;  // C(k, j), updated incrementally
    long double total = 0.0L;
    for (int j = 0; j <= k; ++j) {
        if (j > k / 2) total += coefficient * std::pow(p, j) * std::pow(q, k - j);
        coefficient = coefficient * (k - j) / (j + 1);
    }
    return static_cast<double>(total);
}

}  // namespace postsim
