#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "postsim/errors.hpp"
#include "postsim/rng.hpp"

namespace postsim {

using Amplitude = std::complex<double>;

// Tolerance for treating a squared 2-norm as 1. States outside it are
// rejected by operations that require normalization, never silently fixed.
inline constexpr double kNormTolerance = 1e-9;

// Measurement rule assigning basis state |z> the unnormalized mass |a_z|^p.
// p = 2 is the standard rule.
struct MeasurementRule {
    double p = 2.0;

    explicit MeasurementRule(double exponent);
    MeasurementRule() = default;
};

// Dense complex amplitudes over all 2^n basis states.
//
// Index convention: qubit 0 is the most significant bit of the basis index,
// so on 2 qubits the index 0b10 means qubit 0 = 1, qubit 1 = 0. All modules
// share this convention.
struct StateVector {
    int num_qubits = 0;
    std::vector<Amplitude> amps;
    bool normalized = false;

    // |index> on n qubits.
    static StateVector basis_state(int num_qubits, std::uint64_t index);

    // Takes ownership of the amplitudes; validates the length and finiteness
    // and records whether the 2-norm is within kNormTolerance of 1.
    static StateVector from_amplitudes(int num_qubits, std::vector<Amplitude> amplitudes);

    std::uint64_t dimension() const { return std::uint64_t{1} << num_qubits; }

    double norm_sq() const;

    // Refreshes the `normalized` flag from the actual amplitudes.
    void refresh_normalized();

    // Throws ValidationError if any amplitude is NaN or infinite.
    void check_finite() const;

    // Value of `qubit` in basis index z.
    int bit(std::uint64_t z, int qubit) const {
        return static_cast<int>((z >> (num_qubits - 1 - qubit)) & 1u);
    }

    std::uint64_t qubit_mask(int qubit) const { return std::uint64_t{1} << (num_qubits - 1 - qubit); }
};

// Kronecker product; `a`'s qubits become qubits 0..a.n-1 of the result.
StateVector tensor(const StateVector &a, const StateVector &b);

// |<+|state>| for a single-qubit state, where |+> = (|0>+|1>)/sqrt(2).
// Requires a normalized state; complex inputs use the modulus of the
// complex inner product.
double overlap_plus(const StateVector &state);

// Sum of |a_z|^p over the basis indices selected by `subset`. Unnormalized;
// divide by the total mass for probabilities.
double p_mass(const StateVector &state, const MeasurementRule &rule,
              const std::function<bool(std::uint64_t)> &subset);

double total_p_mass(const StateVector &state, const MeasurementRule &rule);

// Draws one basis index with probability |a_z|^p / sum_y |a_y|^p.
// Throws ZeroMass when the total mass is zero.
std::uint64_t sample_measurement(const StateVector &state, const MeasurementRule &rule, Rng &rng);
std::uint64_t sample_measurement(const StateVector &state, const MeasurementRule &rule,
                                 std::uint64_t seed);

}  // namespace postsim
