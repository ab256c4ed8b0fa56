#include "postsim/majority.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "postsim/dense.hpp"
#include "postsim/errors.hpp"
#include "postsim/rng.hpp"

namespace postsim {

namespace {

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Reduced state of the control qubit (index n+1) after the majority circuit:
// the rest of the register is |0...0>|1> by postselection, so the control
// amplitudes sit at the two indices with function qubit = 1.
StateVector control_qubit_state(const StateVector &state) {
    const std::uint64_t base = 2;  // function qubit = 1, everything else 0
    StateVector out;
    out.num_qubits = 1;
    out.amps = {state.amps[base], state.amps[base | 1]};
    out.refresh_normalized();
    return out;
}

}  // namespace

const char *decide_mode_name(DecideMode mode) {
    switch (mode) {
        case DecideMode::Analytic: return "analytic";
        case DecideMode::Circuit: return "circuit";
        case DecideMode::Sampled: return "sampled";
    }
    return "?";
}

double DecisionReport::max_overlap() const {
    double best = 0.0;
    for (const auto &[i, v] : overlaps) best = std::max(best, v);
    return best;
}

std::string DecisionReport::to_text() const {
    std::ostringstream out;
    out << "mode " << decide_mode_name(mode) << "\n";
    out << "n " << n << "\n";
    out << "s " << ones << "\n";
    out << "claim s < " << (std::uint64_t{1} << (n - 1)) << "\n";
    out << "verdict " << (verdict ? "true" : "false") << "\n";
    if (mode == DecideMode::Sampled) {
        out << "witness_threshold " << fmt6(kWitnessFrequencyThreshold) << "\n";
        out << "reps_per_i " << repetitions << "\n";
        out << "seed " << seed << "\n";
    } else {
        out << "threshold " << fmt6(kOverlapVerdictThreshold) << "\n";
    }
    out << "max_overlap " << fmt6(max_overlap()) << "\n";
    for (const auto &[i, v] : overlaps) out << "overlap " << i << " " << fmt6(v) << "\n";
    return out.str();
}

std::string DecisionReport::to_csv() const {
    std::string out = "i,overlap\n";
    for (const auto &[i, v] : overlaps) out += std::to_string(i) + "," + fmt6(v) + "\n";
    return out;
}

MajorityInstance pad_instance(const MajorityInstance &inst) {
    const std::uint64_t dim = inst.domain_size();
    std::vector<std::uint8_t> padded(dim * 2);
    for (std::uint64_t x = 0; x < dim; ++x) {
        padded[x] = inst.table[x];
        // g(1x) = 1 iff the leading bit of x is 0: exactly 2^(n-1) extra ones.
        padded[dim + x] = x < dim / 2 ? 1 : 0;
    }
    return {inst.n + 1, std::move(padded)};
}

StateVector count_state(const MajorityInstance &inst) {
    const double zeros = static_cast<double>(inst.zeros());
    const double ones = static_cast<double>(inst.ones);
    const double norm = std::sqrt(zeros * zeros + ones * ones);
    return StateVector::from_amplitudes(1, {Amplitude(zeros / norm, 0.0), Amplitude(ones / norm, 0.0)});
}

StateVector probe_state(const MajorityInstance &inst, double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw PreconditionViolated("ratio must be positive and finite");
    const double base = 1.0 / std::sqrt(1.0 + ratio * ratio);
    const double ones = static_cast<double>(inst.ones);
    const double gap = static_cast<double>(inst.zeros()) - ones;  // 2^n - 2s
    const double c0 = base * ones;
    const double c1 = ratio * base * std::sqrt(0.5) * gap;
    const double norm = std::sqrt(c0 * c0 + c1 * c1);
    if (norm == 0.0) throw ZeroProbability("probe state has no support");  // needs ones = 0 and gap = 0; unreachable
    return StateVector::from_amplitudes(1, {Amplitude(c0 / norm, 0.0), Amplitude(c1 / norm, 0.0)});
}

DecisionReport decide_majority_analytic(const MajorityInstance &inst) {
    if (inst.ones == 0) throw PreconditionViolated("instance has no satisfying inputs; pad it first");
    DecisionReport report;
    report.n = inst.n;
    report.ones = inst.ones;
    report.mode = DecideMode::Analytic;
    for (int i = -inst.n; i <= inst.n; ++i) {
        report.overlaps[i] = overlap_plus(probe_state(inst, std::exp2(i)));
    }
    report.verdict = report.max_overlap() >= kOverlapVerdictThreshold;
    return report;
}

Circuit build_majority_circuit(const MajorityInstance &inst, int i) {
    if (inst.ones == 0) throw PreconditionViolated("instance has no satisfying inputs; pad it first");
    if (i < -inst.n || i > inst.n) throw PreconditionViolated("ratio exponent out of [-n, n]");
    const int n = inst.n;
    const int function_qubit = n;
    const int control_qubit = n + 1;

    Circuit c(n + 2);
    for (int q = 0; q < n; ++q) c.add(Gate::h(q));
    std::vector<int> inputs(n);
    for (int q = 0; q < n; ++q) inputs[q] = q;
    c.add(Gate::oracle(inputs, function_qubit, inst.table));
    for (int q = 0; q < n; ++q) c.add(Gate::h(q));
    for (int q = 0; q < n; ++q) c.postselect(q, 0);

    // Rotation taking |0> to alpha|0> + beta|1> with beta/alpha = 2^i.
    const double ratio = std::exp2(i);
    const double alpha = 1.0 / std::sqrt(1.0 + ratio * ratio);
    const double beta = ratio * alpha;
    c.add(Gate::u1(control_qubit, {Amplitude(alpha, 0.0), Amplitude(-beta, 0.0),
                                   Amplitude(beta, 0.0), Amplitude(alpha, 0.0)}));
    c.add(Gate::ch(control_qubit, function_qubit));
    c.postselect(function_qubit, 1);

    c.flag_qubit = function_qubit;
    c.accept_qubit = control_qubit;
    c.validate();
    return c;
}

DecisionReport decide_majority_circuit(const MajorityInstance &inst) {
    if (inst.ones == 0) throw PreconditionViolated("instance has no satisfying inputs; pad it first");
    DecisionReport report;
    report.n = inst.n;
    report.ones = inst.ones;
    report.mode = DecideMode::Circuit;
    for (int i = -inst.n; i <= inst.n; ++i) {
        StateVector final_state = run_circuit(build_majority_circuit(inst, i), 0);
        report.overlaps[i] = overlap_plus(control_qubit_state(final_state));
    }
    report.verdict = report.max_overlap() >= kOverlapVerdictThreshold;
    return report;
}

DecisionReport decide_majority_sampled(const MajorityInstance &inst, std::uint64_t reps_per_i,
                                       std::uint64_t seed) {
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
        // The circuit is deterministic, so one run per i gives the exact
        // per-repetition state; only the terminal measurement is random.
        Circuit c = build_majority_circuit(inst, i);
        c.add(Gate::h(control_qubit));  // measure the control in the +/- basis
        StateVector final_state = run_circuit(c, 0);
        std::uint64_t plus_count = 0;
        for (std::uint64_t rep = 0; rep < reps_per_i; ++rep) {
            Rng rng = stream_for(seed, i, rep);
            std::uint64_t z = sample_measurement(final_state, standard_rule, rng);
            plus_count += 1 - (z & 1u);  // control bit 0 after H <=> |+>
        }
        const double frequency = static_cast<double>(plus_count) / static_cast<double>(reps_per_i);
        report.overlaps[i] = frequency;
        any_witness = any_witness || frequency >= kWitnessFrequencyThreshold;
    }
    report.verdict = any_witness;
    return report;
}

std::string probe_sweep_csv(const MajorityInstance &inst) {
    std::string out = "i,ratio,amp0,amp1,overlap\n";
    for (int i = -inst.n; i <= inst.n; ++i) {
        const double ratio = std::exp2(i);
        StateVector probe = probe_state(inst, ratio);
        out += std::to_string(i) + "," + fmt6(ratio) + "," + fmt6(probe.amps[0].real()) + "," +
               fmt6(probe.amps[1].real()) + "," + fmt6(overlap_plus(probe)) + "\n";
    }
    return out;
}

}  // namespace postsim
