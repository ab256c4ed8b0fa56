#include "postsim/gadgets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "postsim/dense.hpp"
#include "postsim/errors.hpp"

namespace postsim {

namespace {

constexpr int kMaxBoostAncillas = 4096;
constexpr int kMaxBoostEvents = 31;

std::vector<int> all_qubits(int count) {
    std::vector<int> q(count);
    for (int i = 0; i < count; ++i) q[i] = i;
    return q;
}

}  // namespace

Gate nonunitary_postselect_gadget(int qubit, int q_poly, int bit) {
    if (q_poly < 1) throw PreconditionViolated("q_poly must be >= 1");
    const double eps = std::exp2(-q_poly);
    if (eps == 0.0) throw PreconditionViolated("2^-q_poly underflows to zero; q_poly must be <= 1074");
    if (bit != 0 && bit != 1) throw ValidationError("bit must be 0 or 1");
    // Built directly: diag(eps, 1) (or diag(1, eps)) is invertible for every
    // representable eps > 0, below the generic determinant threshold or not.
    Gate g;
    g.kind = GateKind::U1;
    g.qubits = {qubit};
    g.mat1 = {Amplitude(bit ? eps : 1.0, 0.0), Amplitude(0.0, 0.0),
              Amplitude(0.0, 0.0), Amplitude(bit ? 1.0 : eps, 0.0)};
    g.unitary = false;
    return g;
}

int mass_boost_ancilla_count(double p, int q_poly) {
    if (p == 2.0) throw PreconditionViolated("p = 2 makes the mass-boost gadget vacuous");
    if (q_poly < 1) throw PreconditionViolated("q_poly must be >= 1");
    const double k = std::ceil(2.0 * q_poly / std::fabs(2.0 - p));
    if (!(k >= 1.0) || k > kMaxBoostAncillas) throw PathBudgetExceeded("mass-boost ancilla budget exceeded");
    return static_cast<int>(k);
}

Circuit append_mass_boost(const Circuit &circuit, const std::function<bool(std::uint64_t)> &subset,
                          const MeasurementRule &rule, int ancilla_count) {
    if (rule.p == 2.0) throw PreconditionViolated("p = 2 makes the mass-boost gadget vacuous");
    if (ancilla_count < 1 || ancilla_count > kMaxBoostAncillas) {
        throw PathBudgetExceeded("mass-boost ancilla budget exceeded");
    }
    const int m = circuit.num_qubits;
    if (m > 24) throw ValidationError("core register too wide to materialize the subset predicate");
    const bool condition_on_subset = rule.p < 2.0;
    std::vector<std::uint8_t> table(std::uint64_t{1} << m);
    for (std::uint64_t z = 0; z < table.size(); ++z) {
        table[z] = subset(z) == condition_on_subset ? 1 : 0;
    }

    Circuit out(m + ancilla_count);
    out.gates = circuit.gates;
    out.postselections = circuit.postselections;
    out.flag_qubit = circuit.flag_qubit;
    out.accept_qubit = circuit.accept_qubit;
    Gate layer = Gate::cond_h(all_qubits(m), m, std::move(table));
    for (int k = 0; k < ancilla_count; ++k) {
        layer.qubits.back() = m + k;  // same predicate, fresh ancilla
        out.add(layer);
    }
    out.validate();
    return out;
}

Circuit mass_boost_gadget(const Circuit &circuit, const std::function<bool(std::uint64_t)> &subset,
                          const MeasurementRule &rule, int q_poly) {
    return append_mass_boost(circuit, subset, rule, mass_boost_ancilla_count(rule.p, q_poly));
}

Circuit replace_postselections_nonunitary(const Circuit &circuit, int q_poly) {
    circuit.validate();
    Circuit out(circuit.num_qubits);
    out.flag_qubit = circuit.flag_qubit;
    out.accept_qubit = circuit.accept_qubit;
    std::size_t next_post = 0;
    for (std::size_t g = 0; g <= circuit.gates.size(); ++g) {
        while (next_post < circuit.postselections.size() &&
               circuit.postselections[next_post].position == g) {
            const Postselection &p = circuit.postselections[next_post++];
            out.add(nonunitary_postselect_gadget(p.qubit, q_poly, p.bit));
        }
        if (g < circuit.gates.size()) out.add(circuit.gates[g]);
    }
    out.validate();
    return out;
}

Circuit replace_postselections_boost(const Circuit &circuit, const MeasurementRule &rule,
                                     int ancilla_count) {
    circuit.validate();
    if (rule.p == 2.0) throw PreconditionViolated("p = 2 makes the mass-boost gadget vacuous");
    if (ancilla_count < 1 || ancilla_count > kMaxBoostAncillas) {
        throw PathBudgetExceeded("mass-boost ancilla budget exceeded");
    }
    const int m = circuit.num_qubits;
    const std::size_t events = circuit.postselections.size();
    Circuit out(m + static_cast<int>(events) * ancilla_count);
    out.flag_qubit = circuit.flag_qubit;
    out.accept_qubit = circuit.accept_qubit;
    const bool condition_on_success = rule.p < 2.0;
    std::size_t next_post = 0;
    for (std::size_t g = 0; g <= circuit.gates.size(); ++g) {
        while (next_post < events && circuit.postselections[next_post].position == g) {
            const Postselection &p = circuit.postselections[next_post];
            std::vector<std::uint8_t> table(2, 0);
            table[condition_on_success ? p.bit : 1 - p.bit] = 1;
            Gate layer = Gate::cond_h({p.qubit}, 0, std::move(table));
            const int base = m + static_cast<int>(next_post) * ancilla_count;
            for (int k = 0; k < ancilla_count; ++k) {
                layer.qubits.back() = base + k;
                out.add(layer);
            }
            ++next_post;
        }
        if (g < circuit.gates.size()) out.add(circuit.gates[g]);
    }
    out.validate();
    return out;
}

std::uint64_t run_p_rule(const Circuit &circuit, const MeasurementRule &rule, Rng &rng,
                         std::uint64_t input) {
    if (!circuit.postselections.empty()) {
        throw ValidationError("p-rule runs allow no postselection points");
    }
    for (const Gate &g : circuit.gates) {
        if (!g.unitary) throw ValidationError("p-rule runs allow unitary gates only");
    }
    StateVector final_state = run_circuit(circuit, input);
    return sample_measurement(final_state, rule, rng);
}

std::uint64_t run_p_rule(const Circuit &circuit, const MeasurementRule &rule, std::uint64_t seed,
                         std::uint64_t input) {
    Rng rng(seed);
    return run_p_rule(circuit, rule, rng, input);
}

BoostedPipeline::BoostedPipeline(const Circuit &circuit, const MeasurementRule &rule,
                                 int ancilla_count, std::uint64_t input)
    : core_qubits_(circuit.num_qubits),
      num_events_(static_cast<int>(circuit.postselections.size())),
      ancilla_count_(ancilla_count),
      p_(rule.p) {
    circuit.validate();
    if (ancilla_count < 1 || ancilla_count > kMaxBoostAncillas) {
        throw PathBudgetExceeded("mass-boost ancilla budget exceeded");
    }
    if (num_events_ > kMaxBoostEvents) throw PathBudgetExceeded("too many postselection events");
    if (input >= (std::uint64_t{1} << core_qubits_)) throw ValidationError("input index out of range");
    // Guard the 2^(K|sigma|(1-p/2)) weights against double overflow.
    if (ancilla_count * std::max(num_events_, 1) * std::fabs(1.0 - p_ / 2.0) > 900.0) {
        throw PathBudgetExceeded("boost weights exceed double range");
    }

    const std::uint64_t dim = std::uint64_t{1} << core_qubits_;
    std::vector<Amplitude> initial(dim, Amplitude(0.0, 0.0));
    initial[input] = Amplitude(1.0, 0.0);
    branches_.emplace_back(0u, std::move(initial));

    const bool condition_on_success = p_ < 2.0;
    std::size_t next_post = 0;
    int event_index = 0;
    for (std::size_t g = 0; g <= circuit.gates.size(); ++g) {
        while (next_post < circuit.postselections.size() &&
               circuit.postselections[next_post].position == g) {
            const Postselection &p = circuit.postselections[next_post++];
            const std::uint64_t mask = std::uint64_t{1} << (core_qubits_ - 1 - p.qubit);
            const std::uint64_t want = p.bit ? mask : 0u;
            // The conditioned components gain a fresh uniform ancilla block;
            // the others keep it at |0>^K. Which side is conditioned depends
            // on the rule.
            std::map<std::uint32_t, std::vector<Amplitude>> merged;
            for (auto &[mask_bits, amps] : branches_) {
                std::vector<Amplitude> conditioned(dim, Amplitude(0.0, 0.0));
                std::vector<Amplitude> rest(dim, Amplitude(0.0, 0.0));
                bool any_conditioned = false, any_rest = false;
                for (std::uint64_t z = 0; z < dim; ++z) {
                    const bool succeeded = (z & mask) == want;
                    if (succeeded == condition_on_success) {
                        conditioned[z] = amps[z];
                        any_conditioned |= amps[z] != Amplitude(0.0, 0.0);
                    } else {
                        rest[z] = amps[z];
                        any_rest |= amps[z] != Amplitude(0.0, 0.0);
                    }
                }
                auto merge_into = [&](std::uint32_t key, std::vector<Amplitude> &&v) {
                    auto it = merged.find(key);
                    if (it == merged.end()) {
                        merged.emplace(key, std::move(v));
                    } else {
                        for (std::uint64_t z = 0; z < dim; ++z) it->second[z] += v[z];
                    }
                };
                if (any_conditioned) merge_into(mask_bits | (1u << event_index), std::move(conditioned));
                if (any_rest) merge_into(mask_bits, std::move(rest));
            }
            branches_.assign(std::make_move_iterator(merged.begin()), std::make_move_iterator(merged.end()));
            ++event_index;
        }
        if (g < circuit.gates.size()) {
            for (auto &[mask_bits, amps] : branches_) {
                apply_gate(amps, core_qubits_, circuit.gates[g]);
            }
        }
    }
}

double BoostedPipeline::event_mass(const std::function<bool(std::uint64_t)> &event) const {
    const std::uint64_t dim = std::uint64_t{1} << core_qubits_;
    const std::uint32_t sigma_count = 1u << num_events_;
    const double half_k = 0.5 * ancilla_count_;
    // Per nonzero-ancilla block: (2^K - 1) patterns, each at relative
    // amplitude 2^-K/2; factored as (1 - 2^-K) * 2^(K(1 - p/2)) per block
    // after pulling 2^-K|sigma|/2 into the rescaled amplitude.
    const double nonzero_patterns = 1.0 - std::exp2(-static_cast<double>(ancilla_count_));
    double total = 0.0;
    std::vector<double> sigma_weight(sigma_count);
    for (std::uint32_t sigma = 0; sigma < sigma_count; ++sigma) {
        const int blocks = std::popcount(sigma);
        sigma_weight[sigma] = std::pow(nonzero_patterns, blocks) *
                              std::exp2(static_cast<double>(blocks) * ancilla_count_ * (1.0 - p_ / 2.0));
    }
    for (std::uint64_t z = 0; z < dim; ++z) {
        if (!event(z)) continue;
        for (std::uint32_t sigma = 0; sigma < sigma_count; ++sigma) {
            Amplitude rescaled(0.0, 0.0);
            for (const auto &[mask_bits, amps] : branches_) {
                if ((mask_bits & sigma) != sigma) continue;
                const int extra = std::popcount(mask_bits) - std::popcount(sigma);
                rescaled += amps[z] * std::exp2(-half_k * extra);
            }
            const double magnitude = std::abs(rescaled);
            if (magnitude > 0.0) total += sigma_weight[sigma] * std::pow(magnitude, p_);
        }
    }
    return total;
}

DecisionReport decide_majority_nonunitary(const MajorityInstance &inst, int q_poly,
                                          std::uint64_t reps_per_i, std::uint64_t seed) {
    if (inst.ones == 0) throw PreconditionViolated("instance has no satisfying inputs; pad it first");
    if (reps_per_i < 1) throw PreconditionViolated("reps_per_i must be >= 1");
    DecisionReport report;
    report.n = inst.n;
    report.ones = inst.ones;
    report.mode = DecideMode::Sampled;
    report.repetitions = reps_per_i;
    report.seed = seed;
    const MeasurementRule standard_rule(2.0);
    const int control_qubit = inst.n + 1;

    bool any_witness = false;
    for (int i = -inst.n; i <= inst.n; ++i) {
        Circuit c = build_majority_circuit(inst, i);
        c.add(Gate::h(control_qubit));
        Circuit gadgetized = replace_postselections_nonunitary(c, q_poly);
        StateVector final_state = run_circuit(gadgetized, 0);
        std::uint64_t plus_count = 0;
        for (std::uint64_t rep = 0; rep < reps_per_i; ++rep) {
            Rng rng = stream_for(seed, i, rep);
            plus_count += 1 - (sample_measurement(final_state, standard_rule, rng) & 1u);
        }
        const double frequency = static_cast<double>(plus_count) / static_cast<double>(reps_per_i);
        report.overlaps[i] = frequency;
        any_witness = any_witness || frequency >= kWitnessFrequencyThreshold;
    }
    report.verdict = any_witness;
    return report;
}

DecisionReport decide_majority_boosted(const MajorityInstance &inst, const MeasurementRule &rule,
                                       std::uint64_t reps_per_i, std::uint64_t seed, int q_poly) {
    if (inst.ones == 0) throw PreconditionViolated("instance has no satisfying inputs; pad it first");
    if (reps_per_i < 1) throw PreconditionViolated("reps_per_i must be >= 1");
    const int ancilla_count = mass_boost_ancilla_count(rule.p, q_poly);
    DecisionReport report;
    report.n = inst.n;
    report.ones = inst.ones;
    report.mode = DecideMode::Sampled;
    report.repetitions = reps_per_i;
    report.seed = seed;

    bool any_witness = false;
    for (int i = -inst.n; i <= inst.n; ++i) {
        Circuit c = build_majority_circuit(inst, i);
        c.add(Gate::h(inst.n + 1));
        BoostedPipeline pipeline(c, rule, ancilla_count, 0);
        // Control qubit is the last core qubit: + outcomes have bit 0.
        const double plus_mass = pipeline.event_mass([](std::uint64_t z) { return (z & 1u) == 0; });
        const double minus_mass = pipeline.event_mass([](std::uint64_t z) { return (z & 1u) != 0; });
        if (plus_mass + minus_mass <= 0.0) throw ZeroMass("total measurement mass is zero");
        const double plus_probability = plus_mass / (plus_mass + minus_mass);
        std::uint64_t plus_count = 0;
        for (std::uint64_t rep = 0; rep < reps_per_i; ++rep) {
            Rng rng = stream_for(seed, i, rep);
            plus_count += rng.next_double() < plus_probability ? 1 : 0;
        }
        const double frequency = static_cast<double>(plus_count) / static_cast<double>(reps_per_i);
        report.overlaps[i] = frequency;
        any_witness = any_witness || frequency >= kWitnessFrequencyThreshold;
    }
    report.verdict = any_witness;
    return report;
}

}  // namespace postsim
