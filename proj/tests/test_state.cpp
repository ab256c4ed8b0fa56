#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "postsim/dense.hpp"
#include "postsim/errors.hpp"
#include "postsim/state.hpp"

using namespace postsim;
using namespace postsim::testing;

namespace {

StateVector one_qubit(double a0, double a1) {
    return StateVector::from_amplitudes(1, {Amplitude(a0, 0.0), Amplitude(a1, 0.0)});
}

}  // namespace

TEST_CASE("state vector construction enforces invariants") {
    CHECK_THROWS_AS(StateVector::from_amplitudes(2, {Amplitude(1, 0)}), ValidationError);
    CHECK_THROWS_AS(StateVector::from_amplitudes(1, {Amplitude(NAN, 0), Amplitude(0, 0)}),
                    ValidationError);
    StateVector basis = StateVector::basis_state(3, 5);
    CHECK(basis.normalized);
    CHECK(basis.amps[5] == Amplitude(1.0, 0.0));
    CHECK(basis.bit(5, 0) == 1);  // qubit 0 is the most significant bit
    CHECK(basis.bit(5, 1) == 0);
    CHECK(basis.bit(5, 2) == 1);
    CHECK_THROWS_AS(StateVector::basis_state(2, 4), ValidationError);
    CHECK(!one_qubit(1.0, 1.0).normalized);
}

TEST_CASE("measurement rule validates its exponent") {
    CHECK_THROWS_AS(MeasurementRule(-1.0), ValidationError);
    CHECK_THROWS_AS(MeasurementRule(std::numeric_limits<double>::infinity()), ValidationError);
    CHECK(MeasurementRule(0.0).p == 0.0);
}

TEST_CASE("overlap_plus on the pinned states") {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(overlap_plus(one_qubit(inv_sqrt2, inv_sqrt2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(overlap_plus(one_qubit(1.0, 0.0)) == doctest::Approx(inv_sqrt2).epsilon(1e-12));

    // Worst case of the probe dichotomy: (1 + sqrt 2)/sqrt 6 > 0.985.
    StateVector worst = one_qubit(std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0));
    const double expected = (1.0 + std::sqrt(2.0)) / std::sqrt(6.0);
    CHECK(overlap_plus(worst) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(overlap_plus(worst) > 0.985);
}

TEST_CASE("overlap_plus rejects bad inputs") {
    CHECK_THROWS_AS(overlap_plus(StateVector::basis_state(2, 0)), PreconditionViolated);
    CHECK_THROWS_AS(overlap_plus(one_qubit(1.0, 1.0)), PreconditionViolated);
}

TEST_CASE("overlap_plus is invariant under global negation") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const double theta = rng.next_double() * 2.0 * std::numbers::pi;
        StateVector plus = one_qubit(std::cos(theta), std::sin(theta));
        StateVector minus = one_qubit(-std::cos(theta), -std::sin(theta));
        CHECK(overlap_plus(plus) == doctest::Approx(overlap_plus(minus)).epsilon(1e-12));
    }
}

TEST_CASE("p_mass on pinned subsets") {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    StateVector uniform = one_qubit(inv_sqrt2, inv_sqrt2);
    CHECK(p_mass(uniform, MeasurementRule(2.0), [](std::uint64_t z) { return z == 1; }) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p_mass(uniform, MeasurementRule(4.0), [](std::uint64_t) { return true; }) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("p_mass matches a scalar loop oracle on random states") {
    Rng rng(12);
    StateVector state = random_state(3, rng);
    const double p = 3.0;
    double expected = 0.0;
    for (std::uint64_t z = 0; z < 8; z += 2) {
        expected += std::pow(std::hypot(state.amps[z].real(), state.amps[z].imag()), p);
    }
    const double got = p_mass(state, MeasurementRule(p), [](std::uint64_t z) { return z % 2 == 0; });
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("p_mass is additive over disjoint subsets") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        StateVector state = random_state(4, rng);
        const std::uint64_t split = rng.next_u64();
        MeasurementRule rule(0.5 + rng.next_double() * 4.0);
        const double lhs = p_mass(state, rule, [](std::uint64_t) { return true; });
        const double in = p_mass(state, rule, [&](std::uint64_t z) { return (split >> z) & 1u; });
        const double out = p_mass(state, rule, [&](std::uint64_t z) { return !((split >> z) & 1u); });
        CHECK(lhs == doctest::Approx(in + out).epsilon(1e-12));
    }
}

TEST_CASE("p-mass of a product event factors over tensor factors") {
    Rng rng(14);
    for (double p : {1.0, 2.0, 3.0}) {
        MeasurementRule rule(p);
        StateVector a = random_state(2, rng);
        StateVector b = random_state(2, rng);
        StateVector joint = tensor(a, b);
        auto in_a = [](std::uint64_t z) { return z != 3; };
        auto in_b = [](std::uint64_t z) { return z % 2 == 0; };
        const double product = p_mass(a, rule, in_a) * p_mass(b, rule, in_b);
        const double joint_mass =
            p_mass(joint, rule, [&](std::uint64_t z) { return in_a(z >> 2) && in_b(z & 3u); });
        CHECK(joint_mass == doctest::Approx(product).epsilon(1e-9));
    }
}

TEST_CASE("sample_measurement is a point mass on basis states") {
    StateVector state = one_qubit(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CHECK(sample_measurement(state, MeasurementRule(3.5), seed) == 1);
    }
}

TEST_CASE("sample_measurement frequencies match the rule") {
    const int samples = 100000;

    // Uniform two-qubit state, standard rule: every outcome near 1/4.
    StateVector uniform = StateVector::from_amplitudes(
        2, std::vector<Amplitude>(4, Amplitude(0.5, 0.0)));
    Rng rng(101);
    std::array<int, 4> counts{};
    for (int t = 0; t < samples; ++t) counts[sample_measurement(uniform, MeasurementRule(2.0), rng)]++;
    for (int z = 0; z < 4; ++z) {
        CHECK(std::abs(counts[z] / double(samples) - 0.25) < 0.01);
    }

    // Skewed state under p = 4: P(0) = 0.8^2 / (0.8^2 + 0.2^2).
    StateVector skewed = one_qubit(std::sqrt(0.8), std::sqrt(0.2));
    Rng rng2(102);
    int zeros = 0;
    for (int t = 0; t < samples; ++t) zeros += sample_measurement(skewed, MeasurementRule(4.0), rng2) == 0;
    CHECK(std::abs(zeros / double(samples) - 0.64 / 0.68) < 0.01);
}

TEST_CASE("sample_measurement reports zero total mass") {
    StateVector zero;
    zero.num_qubits = 1;
    zero.amps = {Amplitude(0.0, 0.0), Amplitude(0.0, 0.0)};
    Rng rng(1);
    CHECK_THROWS_AS(sample_measurement(zero, MeasurementRule(2.0), rng), ZeroMass);
}

TEST_CASE("unitary gate application preserves the 2-norm") {
    Rng rng(15);
    for (int trial = 0; trial < 5; ++trial) {
        StateVector state = random_state(4, rng);
        Circuit c = random_unitary_circuit(rng, 4, 30);
        for (const Gate &g : c.gates) apply_gate(state, g);
        CHECK(std::abs(state.norm_sq() - 1.0) < 1e-9);
    }
}

TEST_CASE("tensor places the first factor on the high-order qubits") {
    StateVector a = StateVector::basis_state(1, 1);
    StateVector b = StateVector::basis_state(2, 1);
    StateVector joint = tensor(a, b);
    CHECK(joint.amps[0b101] == Amplitude(1.0, 0.0));
}
