#include "postsim/gate.hpp"

#include <cmath>
#include <cstdlib>

#include "postsim/errors.hpp"

namespace postsim {

const char *gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::CNOT: return "CNOT";
        case GateKind::Toffoli: return "TOF";
        case GateKind::CH: return "CH";
        case GateKind::U1: return "U1";
        case GateKind::U2: return "U2";
        case GateKind::Oracle: return "ORACLE";
        case GateKind::CondH: return "CONDH";
    }
    return "?";
}

Gate Gate::h(int q) {
    Gate g;
    g.kind = GateKind::H;
    g.qubits = {q};
    return g;
}

Gate Gate::x(int q) {
    Gate g;
    g.kind = GateKind::X;
    g.qubits = {q};
    return g;
}

Gate Gate::cnot(int control, int target) {
    Gate g;
    g.kind = GateKind::CNOT;
    g.qubits = {control, target};
    return g;
}

Gate Gate::toffoli(int control1, int control2, int target) {
    Gate g;
    g.kind = GateKind::Toffoli;
    g.qubits = {control1, control2, target};
    return g;
}

Gate Gate::ch(int control, int target) {
    Gate g;
    g.kind = GateKind::CH;
    g.qubits = {control, target};
    return g;
}

static Amplitude det2(const Amplitude *m) { return m[0] * m[3] - m[1] * m[2]; }

static Amplitude det4(const std::array<Amplitude, 16> &m) {
    // Cofactor expansion along the first row.
    auto minor3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return m[r0 * 4 + c0] * (m[r1 * 4 + c1] * m[r2 * 4 + c2] - m[r1 * 4 + c2] * m[r2 * 4 + c1]) -
               m[r0 * 4 + c1] * (m[r1 * 4 + c0] * m[r2 * 4 + c2] - m[r1 * 4 + c2] * m[r2 * 4 + c0]) +
               m[r0 * 4 + c2] * (m[r1 * 4 + c0] * m[r2 * 4 + c1] - m[r1 * 4 + c1] * m[r2 * 4 + c0]);
    };
    return m[0] * minor3(1, 2, 3, 1, 2, 3) - m[1] * minor3(1, 2, 3, 0, 2, 3) +
           m[2] * minor3(1, 2, 3, 0, 1, 3) - m[3] * minor3(1, 2, 3, 0, 1, 2);
}

template <int N>
static bool is_unitary(const Amplitude *m, double tol) {
    for (int r = 0; r < N; ++r) {
        for (int c = 0; c < N; ++c) {
            Amplitude dot(0.0, 0.0);
            for (int k = 0; k < N; ++k) dot += m[r * N + k] * std::conj(m[c * N + k]);
            Amplitude want = (r == c) ? Amplitude(1.0, 0.0) : Amplitude(0.0, 0.0);
            if (std::abs(dot - want) > tol) return false;
        }
    }
    return true;
}

Gate Gate::u1(int q, const std::array<Amplitude, 4> &mat) {
    for (const Amplitude &a : mat) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValidationError("non-finite matrix entry");
        }
    }
    if (std::abs(det2(mat.data())) <= 1e-12) throw ValidationError("U1 matrix is not invertible");
    Gate g;
    g.kind = GateKind::U1;
    g.qubits = {q};
    g.mat1 = mat;
    g.unitary = is_unitary<2>(mat.data(), 1e-9);
    return g;
}

Gate Gate::u2(int q1, int q2, const std::array<Amplitude, 16> &mat) {
    for (const Amplitude &a : mat) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValidationError("non-finite matrix entry");
        }
    }
    if (std::abs(det4(mat)) <= 1e-12) throw ValidationError("U2 matrix is not invertible");
    Gate g;
    g.kind = GateKind::U2;
    g.qubits = {q1, q2};
    g.mat2 = mat;
    g.unitary = is_unitary<4>(mat.data(), 1e-9);
    return g;
}

Gate Gate::oracle(std::vector<int> inputs, int target, std::vector<std::uint8_t> truth_table) {
    Gate g;
    g.kind = GateKind::Oracle;
    g.num_inputs = static_cast<int>(inputs.size());
    if (g.num_inputs < 1 || g.num_inputs > 24) throw ValidationError("oracle input count out of range");
    if (truth_table.size() != (std::uint64_t{1} << g.num_inputs)) {
        throw ValidationError("oracle table length must be 2^inputs");
    }
    g.qubits = std::move(inputs);
    g.qubits.push_back(target);
    g.table = std::make_shared<const std::vector<std::uint8_t>>(std::move(truth_table));
    return g;
}

Gate Gate::cond_h(std::vector<int> watched, int target, std::vector<std::uint8_t> predicate_table) {
    Gate g;
    g.kind = GateKind::CondH;
    g.num_inputs = static_cast<int>(watched.size());
    if (g.num_inputs < 1 || g.num_inputs > 24) throw ValidationError("watched qubit count out of range");
    if (predicate_table.size() != (std::uint64_t{1} << g.num_inputs)) {
        throw ValidationError("predicate table length must be 2^watched");
    }
    g.qubits = std::move(watched);
    g.qubits.push_back(target);
    g.table = std::make_shared<const std::vector<std::uint8_t>>(std::move(predicate_table));
    return g;
}

void Gate::validate(int num_qubits) const {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= num_qubits) {
            throw ValidationError(std::string(gate_kind_name(kind)) + ": qubit index out of range");
        }
        for (std::size_t j = i + 1; j < qubits.size(); ++j) {
            if (qubits[i] == qubits[j]) {
                throw ValidationError(std::string(gate_kind_name(kind)) + ": repeated qubit in one gate");
            }
        }
    }
    if ((kind == GateKind::Oracle || kind == GateKind::CondH) &&
        (!table || table->size() != (std::uint64_t{1} << num_inputs))) {
        throw ValidationError("oracle/predicate table size mismatch");
    }
}

bool Gate::operator==(const Gate &other) const {
    if (kind != other.kind || qubits != other.qubits || num_inputs != other.num_inputs) return false;
    if (kind == GateKind::U1 && mat1 != other.mat1) return false;
    if (kind == GateKind::U2 && mat2 != other.mat2) return false;
    if (kind == GateKind::Oracle || kind == GateKind::CondH) {
        if (static_cast<bool>(table) != static_cast<bool>(other.table)) return false;
        if (table && *table != *other.table) return false;
    }
    return true;
}

}  // namespace postsim
