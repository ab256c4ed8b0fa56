// Shared test utilities: seeded random generators and independent oracles.
// The matrix-application oracle builds gate matrices from first principles so
// it shares no code with the stride kernels it checks.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "postsim/circuit.hpp"
#include "postsim/rng.hpp"
#include "postsim/state.hpp"

namespace postsim::testing {

inline Amplitude random_gaussian(Rng &rng) {
    double u1 = rng.next_double();
    while (u1 == 0.0) u1 = rng.next_double();
    const double u2 = rng.next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
}

inline StateVector random_state(int num_qubits, Rng &rng) {
    std::vector<Amplitude> amps(std::uint64_t{1} << num_qubits);
    double norm_sq = 0.0;
    for (Amplitude &a : amps) {
        a = random_gaussian(rng);
        norm_sq += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (Amplitude &a : amps) a *= scale;
    return StateVector::from_amplitudes(num_qubits, std::move(amps));
}

// Gram-Schmidt over random Gaussian columns: unitary to ~1e-15.
template <int N>
std::array<Amplitude, N * N> random_unitary(Rng &rng) {
    std::array<Amplitude, N * N> m;
    for (int c = 0; c < N; ++c) {
        for (int r = 0; r < N; ++r) m[r * N + c] = random_gaussian(rng);
        for (int prev = 0; prev < c; ++prev) {
            Amplitude overlap(0.0, 0.0);
            for (int r = 0; r < N; ++r) overlap += std::conj(m[r * N + prev]) * m[r * N + c];
            for (int r = 0; r < N; ++r) m[r * N + c] -= overlap * m[r * N + prev];
        }
        double norm_sq = 0.0;
        for (int r = 0; r < N; ++r) norm_sq += std::norm(m[r * N + c]);
        const double scale = 1.0 / std::sqrt(norm_sq);
        for (int r = 0; r < N; ++r) m[r * N + c] *= scale;
    }
    return m;
}

inline std::vector<int> distinct_qubits(Rng &rng, int num_qubits, int count) {
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < count) {
        int q = static_cast<int>(rng.next_below(num_qubits));
        bool used = false;
        for (int c : chosen) used |= c == q;
        if (!used) chosen.push_back(q);
    }
    return chosen;
}

// Random circuit over {H, X, CNOT, TOF} with exactly `hadamard_count` H gates
// placed uniformly among `num_gates` slots.
inline Circuit random_restricted_circuit(Rng &rng, int num_qubits, int num_gates, int hadamard_count) {
    Circuit c(num_qubits);
    std::vector<int> h_slots(num_gates, 0);
    for (int placed = 0; placed < hadamard_count;) {
        int slot = static_cast<int>(rng.next_below(num_gates));
        if (!h_slots[slot]) {
            h_slots[slot] = 1;
            ++placed;
        }
    }
    for (int g = 0; g < num_gates; ++g) {
        if (h_slots[g]) {
            c.add(Gate::h(static_cast<int>(rng.next_below(num_qubits))));
            continue;
        }
        const int max_arity = num_qubits >= 3 ? 3 : num_qubits;
        switch (rng.next_below(max_arity)) {
            case 0: c.add(Gate::x(static_cast<int>(rng.next_below(num_qubits)))); break;
            case 1: {
                auto q = distinct_qubits(rng, num_qubits, 2);
                c.add(Gate::cnot(q[0], q[1]));
                break;
            }
            default: {
                auto q = distinct_qubits(rng, num_qubits, 3);
                c.add(Gate::toffoli(q[0], q[1], q[2]));
                break;
            }
        }
    }
    return c;
}

// Random circuit over the full unitary vocabulary (no postselections).
inline Circuit random_unitary_circuit(Rng &rng, int num_qubits, int num_gates) {
    Circuit c(num_qubits);
    for (int g = 0; g < num_gates; ++g) {
        const int kind = static_cast<int>(rng.next_below(num_qubits >= 3 ? 7 : 6));
        switch (kind) {
            case 0: c.add(Gate::h(static_cast<int>(rng.next_below(num_qubits)))); break;
            case 1: c.add(Gate::x(static_cast<int>(rng.next_below(num_qubits)))); break;
            case 2: c.add(Gate::u1(static_cast<int>(rng.next_below(num_qubits)), random_unitary<2>(rng))); break;
            case 3: {
                auto q = distinct_qubits(rng, num_qubits, 2);
                c.add(Gate::cnot(q[0], q[1]));
                break;
            }
            case 4: {
                auto q = distinct_qubits(rng, num_qubits, 2);
                c.add(Gate::ch(q[0], q[1]));
                break;
            }
            case 5: {
                auto q = distinct_qubits(rng, num_qubits, 2);
                c.add(Gate::u2(q[0], q[1], random_unitary<4>(rng)));
                break;
            }
            default: {
                auto q = distinct_qubits(rng, num_qubits, 3);
                c.add(Gate::toffoli(q[0], q[1], q[2]));
                break;
            }
        }
    }
    return c;
}

inline MajorityInstance random_instance(Rng &rng, int n, bool force_nonzero) {
    std::vector<std::uint8_t> table(std::uint64_t{1} << n);
    std::uint64_t ones = 0;
    for (std::uint8_t &b : table) {
        b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
        ones += b;
    }
    if (force_nonzero && ones == 0) table[rng.next_below(table.size())] = 1;
    return {n, std::move(table)};
}

// Local matrix of a gate over its qubit tuple (bit j of the local index is
// qubits[j], most significant first), built from the gate definitions.
inline std::vector<Amplitude> local_matrix(const Gate &g) {
    const double s = 1.0 / std::sqrt(2.0);
    auto permutation = [](int dim, const std::function<int(int)> &next) {
        std::vector<Amplitude> m(static_cast<std::size_t>(dim) * dim, Amplitude(0.0, 0.0));
        for (int col = 0; col < dim; ++col) m[static_cast<std::size_t>(next(col)) * dim + col] = 1.0;
        return m;
    };
    switch (g.kind) {
        case GateKind::H: return {s, s, s, -s};
        case GateKind::X: return permutation(2, [](int b) { return b ^ 1; });
        case GateKind::CNOT: return permutation(4, [](int b) { return (b & 2) ? b ^ 1 : b; });
        case GateKind::Toffoli:
            return permutation(8, [](int b) { return (b & 6) == 6 ? b ^ 1 : b; });
        case GateKind::CH: {
            std::vector<Amplitude> m(16, Amplitude(0.0, 0.0));
            m[0 * 4 + 0] = m[1 * 4 + 1] = 1.0;
            m[2 * 4 + 2] = m[2 * 4 + 3] = m[3 * 4 + 2] = s;
            m[3 * 4 + 3] = -s;
            return m;
        }
        case GateKind::U1: return {g.mat1.begin(), g.mat1.end()};
        case GateKind::U2: return {g.mat2.begin(), g.mat2.end()};
        case GateKind::Oracle: {
            const std::vector<std::uint8_t> &table = *g.table;
            return permutation(2 << g.num_inputs,
                               [&](int b) { return table[b >> 1] ? b ^ 1 : b; });
        }
        case GateKind::CondH: {
            const std::vector<std::uint8_t> &table = *g.table;
            const int dim = 2 << g.num_inputs;
            std::vector<Amplitude> m(static_cast<std::size_t>(dim) * dim, Amplitude(0.0, 0.0));
            for (int x = 0; x < dim / 2; ++x) {
                if (table[x]) {
                    m[static_cast<std::size_t>(2 * x) * dim + 2 * x] = s;
                    m[static_cast<std::size_t>(2 * x) * dim + 2 * x + 1] = s;
                    m[static_cast<std::size_t>(2 * x + 1) * dim + 2 * x] = s;
                    m[static_cast<std::size_t>(2 * x + 1) * dim + 2 * x + 1] = -s;
                } else {
                    m[static_cast<std::size_t>(2 * x) * dim + 2 * x] = 1.0;
                    m[static_cast<std::size_t>(2 * x + 1) * dim + 2 * x + 1] = 1.0;
                }
            }
            return m;
        }
    }
    return {};
}

// Independent oracle: applies the gate by explicit matrix-vector
// multiplication over the full 2^n-dimensional space.
inline std::vector<Amplitude> apply_gate_by_matrix(const std::vector<Amplitude> &in, int num_qubits,
                                                   const Gate &g) {
    const std::vector<Amplitude> local = local_matrix(g);
    const int arity = static_cast<int>(g.qubits.size());
    const int local_dim = 1 << arity;
    auto local_index = [&](std::uint64_t z) {
        int l = 0;
        for (int j = 0; j < arity; ++j) {
            l = (l << 1) | static_cast<int>((z >> (num_qubits - 1 - g.qubits[j])) & 1u);
        }
        return l;
    };
    auto with_local = [&](std::uint64_t z, int l) {
        for (int j = 0; j < arity; ++j) {
            const std::uint64_t mask = std::uint64_t{1} << (num_qubits - 1 - g.qubits[j]);
            if ((l >> (arity - 1 - j)) & 1) {
                z |= mask;
            } else {
                z &= ~mask;
            }
        }
        return z;
    };
    std::vector<Amplitude> out(in.size(), Amplitude(0.0, 0.0));
    for (std::uint64_t z = 0; z < in.size(); ++z) {
        if (in[z] == Amplitude(0.0, 0.0)) continue;
        const int lz = local_index(z);
        for (int lr = 0; lr < local_dim; ++lr) {
            const Amplitude entry = local[static_cast<std::size_t>(lr) * local_dim + lz];
            if (entry != Amplitude(0.0, 0.0)) out[with_local(z, lr)] += entry * in[z];
        }
    }
    return out;
}

inline double total_variation(const std::vector<double> &a, const std::vector<double> &b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d / 2.0;
}

inline std::vector<double> born_distribution(const StateVector &state) {
    std::vector<double> p(state.amps.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += p[i] = std::norm(state.amps[i]);
    for (double &v : p) v /= total;
    return p;
}

}  // namespace postsim::testing
