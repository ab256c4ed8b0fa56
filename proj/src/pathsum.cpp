#include "postsim/pathsum.hpp"

#include <cmath>

#include "postsim/errors.hpp"
#include "postsim/parallel.hpp"
#include "postsim/rewrite.hpp"

namespace postsim {

namespace {

// x ^= flip wherever all control bits are set; covers X/CNOT/Toffoli.
struct ClassicalOp {
    std::uint64_t ctrl;
    std::uint64_t flip;
};

// A restricted circuit compiled to branch points: segments[d] runs before the
// d-th Hadamard (the last segment runs after the final one).
struct PathProgram {
    int num_qubits = 0;
    std::vector<std::vector<ClassicalOp>> segments;
    std::vector<std::uint64_t> branch_masks;
};

PathProgram compile_restricted(const Circuit &circuit) {
    for (const Postselection &p : circuit.postselections) {
        if (p.position != circuit.gates.size()) {
            throw ValidationError("path enumeration supports only terminal postselections");
        }
    }
    PathProgram prog;
    prog.num_qubits = circuit.num_qubits;
    prog.segments.emplace_back();
    auto mask = [&](int q) { return std::uint64_t{1} << (circuit.num_qubits - 1 - q); };
    for (const Gate &g : circuit.gates) {
        switch (g.kind) {
            case GateKind::H:
                prog.branch_masks.push_back(mask(g.qubits[0]));
                prog.segments.emplace_back();
                break;
            case GateKind::X:
                prog.segments.back().push_back({0, mask(g.qubits[0])});
                break;
            case GateKind::CNOT:
                prog.segments.back().push_back({mask(g.qubits[0]), mask(g.qubits[1])});
                break;
            case GateKind::Toffoli:
                prog.segments.back().push_back({mask(g.qubits[0]) | mask(g.qubits[1]), mask(g.qubits[2])});
                break;
            default:
                throw UnsupportedGate(std::string("path enumeration does not support ") +
                                      gate_kind_name(g.kind));
        }
    }
    return prog;
}

struct PathNode {
    std::size_t depth;
    std::uint64_t x;
    int sign;
};

inline PathNode run_segment(const PathProgram &prog, PathNode node) {
    for (const ClassicalOp &op : prog.segments[node.depth]) {
        if ((node.x & op.ctrl) == op.ctrl) node.x ^= op.flip;
    }
    return node;
}

// Depth-first walk over the remaining branch assignments; `node` must already
// have its segment applied. Prefixes are shared, so each gate segment is
// evaluated once per distinct branch prefix.
void walk(const PathProgram &prog, PathNode node, std::vector<long long> &acc) {
    if (node.depth == prog.branch_masks.size()) {
        acc[node.x] += node.sign;
        return;
    }
    const std::uint64_t m = prog.branch_masks[node.depth];
    const int flipped_sign = (node.x & m) ? -node.sign : node.sign;
    walk(prog, run_segment(prog, {node.depth + 1, node.x & ~m, node.sign}), acc);
    walk(prog, run_segment(prog, {node.depth + 1, node.x | m, flipped_sign}), acc);
}

}  // namespace

long long PathLedger::sum_of_squares() const {
    long long total = 0;
    for (const auto &[z, c] : sums) total += c * c;
    return total;
}

PathLedger enumerate_ledger(const Circuit &circuit, std::uint64_t input) {
    circuit.validate();
    if (input >= (std::uint64_t{1} << circuit.num_qubits)) throw ValidationError("input index out of range");
    PathProgram prog = compile_restricted(circuit);
    const int h = static_cast<int>(prog.branch_masks.size());
    if (h > kPathBudgetBits) {
        throw PathBudgetExceeded("hadamard count " + std::to_string(h) + " exceeds the 2^" +
                                 std::to_string(kPathBudgetBits) + " path budget");
    }

    PathLedger ledger;
    ledger.num_qubits = circuit.num_qubits;
    ledger.hadamard_count = h;

    const std::uint64_t dim = std::uint64_t{1} << circuit.num_qubits;
    PathNode root = run_segment(prog, {0, input, 1});

    // Split the branch tree at a fixed depth into independent subtree tasks;
    // per-worker accumulators merge by addition, which is exact and
    // order-independent.
    const int workers = worker_count();
    int split_depth = 0;
    if (workers > 1 && h >= 12 && circuit.num_qubits <= 24) {
        while ((1 << split_depth) < 4 * workers && split_depth < h - 8) ++split_depth;
    }

    std::vector<PathNode> frontier{root};
    for (int d = 0; d < split_depth; ++d) {
        std::vector<PathNode> next;
        next.reserve(frontier.size() * 2);
        for (const PathNode &node : frontier) {
            const std::uint64_t m = prog.branch_masks[node.depth];
            const int flipped_sign = (node.x & m) ? -node.sign : node.sign;
            next.push_back(run_segment(prog, {node.depth + 1, node.x & ~m, node.sign}));
            next.push_back(run_segment(prog, {node.depth + 1, node.x | m, flipped_sign}));
        }
        frontier = std::move(next);
    }

    std::vector<long long> acc(dim, 0);
    if (frontier.size() == 1) {
        walk(prog, frontier[0], acc);
    } else {
        std::vector<std::vector<long long>> partial(frontier.size());
        parallel_for(0, frontier.size(), 1, [&](std::uint64_t b, std::uint64_t e) {
            for (std::uint64_t t = b; t < e; ++t) {
                partial[t].assign(dim, 0);
                walk(prog, frontier[t], partial[t]);
            }
        });
        for (const auto &part : partial) {
            for (std::uint64_t z = 0; z < dim; ++z) acc[z] += part[z];
        }
    }

    for (std::uint64_t z = 0; z < dim; ++z) {
        if (acc[z] != 0) ledger.sums.emplace(z, acc[z]);
    }
    return ledger;
}

LedgerDecision decide_from_ledger(const PathLedger &ledger, int flag_qubit, int accept_qubit) {
    const std::uint64_t flag_mask = std::uint64_t{1} << (ledger.num_qubits - 1 - flag_qubit);
    const std::uint64_t accept_mask = std::uint64_t{1} << (ledger.num_qubits - 1 - accept_qubit);
    LedgerDecision d;
    for (const auto &[z, c] : ledger.sums) {
        if ((z & flag_mask) == 0) continue;
        if (z & accept_mask) {
            d.accept_weight += c * c;
        } else {
            d.reject_weight += c * c;
        }
    }
    if (d.accept_weight == 0 && d.reject_weight == 0) {
        throw ZeroProbability("flag event has zero weight in the ledger");
    }
    d.accept = d.accept_weight > d.reject_weight;
    d.tie = d.accept_weight == d.reject_weight;
    return d;
}

LedgerDecision ledger_decide(const Circuit &circuit, std::uint64_t input) {
    if (!is_normal_form(circuit)) throw ValidationError("ledger_decide expects a circuit in normal form");
    PathLedger ledger = enumerate_ledger(circuit, input);
    return decide_from_ledger(ledger, circuit.flag_qubit, circuit.accept_qubit);
}

PowerDecision power_ledger_decide(const Circuit &circuit, int p,
                                  const std::function<bool(std::uint64_t)> &subset,
                                  std::uint64_t input) {
    if (p < 4 || p % 2 != 0) throw PreconditionViolated("exponent must be an even integer >= 4");
    if (!circuit.postselections.empty()) {
        throw ValidationError("power_ledger_decide expects a postselection-free circuit");
    }
    int h = 0;
    for (const Gate &g : circuit.gates) h += g.kind == GateKind::H;
    if (h * p > kPathBudgetBits) {
        throw PathBudgetExceeded("term count 2^(h*p) exceeds the 2^" +
                                 std::to_string(kPathBudgetBits) + " budget");
    }
    PathLedger ledger = enumerate_ledger(circuit, input);

    auto ipow = [](long long base, int exp) {
        long long r = 1;
        for (int i = 0; i < exp; ++i) r *= base;
        return r;
    };
    PowerDecision d;
    for (const auto &[z, c] : ledger.sums) {
        (subset(z) ? d.subset_weight : d.complement_weight) += ipow(c, p);
    }
    d.accept = d.subset_weight > d.complement_weight;
    d.tie = d.subset_weight == d.complement_weight;
    return d;
}

}  // namespace postsim
