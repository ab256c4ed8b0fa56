#include "postsim/state.hpp"

#include <cmath>
#include <cstdlib>

namespace postsim {

MeasurementRule::MeasurementRule(double exponent) : p(exponent) {
    if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
        throw ValidationError("measurement exponent must be finite and nonnegative");
    }
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t index) {
    if (num_qubits < 1 || num_qubits > 62) throw ValidationError("qubit count out of range");
    std::uint64_t dim = std::uint64_t{1} << num_qubits;
    if (index >= dim) throw ValidationError("basis index out of range");
    StateVector s;
    s.num_qubits = num_qubits;
    s.amps.assign(dim, Amplitude(0.0, 0.0));
    s.amps[index] = Amplitude(1.0, 0.0);
    s.normalized = true;
    return s;
}

StateVector StateVector::from_amplitudes(int num_qubits, std::vector<Amplitude> amplitudes) {
    if (num_qubits < 1 || num_qubits > 62) throw ValidationError("qubit count out of range");
    if (amplitudes.size() != (std::uint64_t{1} << num_qubits)) {
        throw ValidationError("amplitude vector length must be 2^num_qubits");
    }
    StateVector s;
    s.num_qubits = num_qubits;
    s.amps = std::move(amplitudes);
    s.check_finite();
    s.refresh_normalized();
    return s;
}

double StateVector::norm_sq() const {
    double total = 0.0;
    for (const Amplitude &a : amps) total += std::norm(a);
    return total;
}

void StateVector::refresh_normalized() { normalized = std::abs(norm_sq() - 1.0) <= kNormTolerance; }

void StateVector::check_finite() const {
    for (const Amplitude &a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValidationError("non-finite amplitude");
        }
    }
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    StateVector out;
    out.num_qubits = a.num_qubits + b.num_qubits;
    if (out.num_qubits > 62) throw ValidationError("qubit count out of range");
    out.amps.resize(std::uint64_t{1} << out.num_qubits);
    for (std::uint64_t i = 0; i < a.amps.size(); ++i) {
        for (std::uint64_t j = 0; j < b.amps.size(); ++j) {
            out.amps[(i << b.num_qubits) | j] = a.amps[i] * b.amps[j];
        }
    }
    out.normalized = a.normalized && b.normalized;
    return out;
}

double overlap_plus(const StateVector &state) {
    if (state.num_qubits != 1) throw PreconditionViolated("overlap_plus expects a 1-qubit state");
    if (std::abs(state.norm_sq() - 1.0) > kNormTolerance) {
        throw PreconditionViolated("overlap_plus expects a normalized state");
    }
    return std::abs(state.amps[0] + state.amps[1]) / std::sqrt(2.0);
}

static double mass_of(const Amplitude &a, double p) {
    if (p == 2.0) return std::norm(a);
    return std::pow(std::abs(a), p);
}

double p_mass(const StateVector &state, const MeasurementRule &rule,
              const std::function<bool(std::uint64_t)> &subset) {
    double total = 0.0;
    for (std::uint64_t z = 0; z < state.amps.size(); ++z) {
        if (subset(z)) total += mass_of(state.amps[z], rule.p);
    }
    return total;
}

double total_p_mass(const StateVector &state, const MeasurementRule &rule) {
    double total = 0.0;
    for (const Amplitude &a : state.amps) total += mass_of(a, rule.p);
    return total;
}

std::uint64_t sample_measurement(const StateVector &state, const MeasurementRule &rule, Rng &rng) {
    double total = total_p_mass(state, rule);
    if (total <= 0.0) throw ZeroMass("total measurement mass is zero");
    double target = rng.next_double() * total;
    double running = 0.0;
    std::uint64_t last_nonzero = 0;
    bool seen = false;
    for (std::uint64_t z = 0; z < state.amps.size(); ++z) {
        double m = mass_of(state.amps[z], rule.p);
        if (m > 0.0) {
            last_nonzero = z;
            seen = true;
        }
        running += m;
        if (target < running) return z;
    }
    // target == total up to rounding; return the last outcome with support.
    if (!seen) throw ZeroMass("total measurement mass is zero");
    return last_nonzero;
}

std::uint64_t sample_measurement(const StateVector &state, const MeasurementRule &rule,
                                 std::uint64_t seed) {
    Rng rng(seed);
    return sample_measurement(state, rule, rng);
}

}  // namespace postsim
