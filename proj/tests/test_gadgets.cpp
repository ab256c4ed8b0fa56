#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "postsim/dense.hpp"
#include "postsim/errors.hpp"
#include "postsim/gadgets.hpp"
#include "postsim/majority.hpp"
#include "postsim/rewrite.hpp"

using namespace postsim;
using namespace postsim::testing;

namespace {

std::vector<double> renormalized_distribution(StateVector state) {
    double mass = state.norm_sq();
    std::vector<double> p(state.amps.size());
    for (std::size_t z = 0; z < p.size(); ++z) p[z] = std::norm(state.amps[z]) / mass;
    return p;
}

}  // namespace

TEST_CASE("nonunitary gadget construction bounds") {
    CHECK_THROWS_AS(nonunitary_postselect_gadget(0, 0), PreconditionViolated);
    CHECK_THROWS_AS(nonunitary_postselect_gadget(0, 1075), PreconditionViolated);
    Gate extreme = nonunitary_postselect_gadget(0, 1074);
    CHECK(extreme.mat1[0].real() > 0.0);
    Gate g = nonunitary_postselect_gadget(0, 10);
    CHECK(!g.unitary);
    CHECK(g.mat1[0].real() == std::exp2(-10));
    CHECK(g.mat1[3].real() == 1.0);
    Gate flipped = nonunitary_postselect_gadget(0, 10, 0);
    CHECK(flipped.mat1[0].real() == 1.0);
    CHECK(flipped.mat1[3].real() == std::exp2(-10));
}

TEST_CASE("nonunitary gadget damps the discarded component as computed") {
    Circuit c(1);
    c.add(Gate::h(0));
    c.add(nonunitary_postselect_gadget(0, 10));
    StateVector state = run_circuit(c, 0);
    const double expected = 1.0 / std::sqrt(1.0 + std::exp2(-20));
    CHECK(std::abs(state.amps[1].real() - expected) < 1e-12);
}

TEST_CASE("nonunitary gadget converges to exact postselection") {
    Rng rng(51);
    for (int trial = 0; trial < 5; ++trial) {
        StateVector state = random_state(3, rng);
        const int qubit = static_cast<int>(rng.next_below(3));
        const int bit = static_cast<int>(rng.next_u64() & 1u);
        std::vector<double> exact = renormalized_distribution(postselect(state, qubit, bit));
        double previous_tv = 1.0;
        for (int q : {4, 8, 12, 16, 20}) {
            StateVector damped = state;
            apply_gate(damped, nonunitary_postselect_gadget(qubit, q, bit));
            const double tv = total_variation(renormalized_distribution(damped), exact);
            // Quartering per unit q beats the required halving; allow float noise.
            CHECK(tv <= previous_tv * std::exp2(-4.0) + 1e-12);
            previous_tv = tv;
            if (q == 20) CHECK(tv <= 1e-4);
        }
    }
}

TEST_CASE("mass boost ancilla counts") {
    CHECK(mass_boost_ancilla_count(1.0, 20) == 40);
    CHECK(mass_boost_ancilla_count(4.0, 20) == 20);
    CHECK(mass_boost_ancilla_count(0.5, 20) == 27);  // ceiling of 80/3
    CHECK_THROWS_AS(mass_boost_ancilla_count(2.0, 20), PreconditionViolated);
}

TEST_CASE("one boost layer on the uniform state hits the pinned masses") {
    // p = 4 > 2: the layer conditions on the complement of S = {1}; the
    // {0}-descended p-mass drops from 1/4 to 1/8 while S-mass is unchanged.
    Circuit c(1);
    c.add(Gate::h(0));
    MeasurementRule rule(4.0);
    Circuit boosted = append_mass_boost(c, [](std::uint64_t z) { return z == 1; }, rule, 1);
    CHECK(boosted.num_qubits == 2);
    StateVector state = run_circuit_raw(boosted, 0);
    const double zero_mass = p_mass(state, rule, [](std::uint64_t z) { return (z >> 1) == 0; });
    const double one_mass = p_mass(state, rule, [](std::uint64_t z) { return (z >> 1) == 1; });
    CHECK(zero_mass == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(one_mass == doctest::Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS(append_mass_boost(c, [](std::uint64_t) { return true; }, MeasurementRule(2.0), 1),
                    PreconditionViolated);
}

TEST_CASE("boost layers scale targeted mass by exactly 2^((2-p)K/2)") {
    Rng rng(52);
    for (double p : {0.5, 1.0, 3.0, 4.0}) {
        for (int k : {1, 2, 4}) {
            MeasurementRule rule(p);
            Circuit preparation = random_unitary_circuit(rng, 2, 6);
            const std::uint64_t subset_bits = 1 + rng.next_below(14);  // proper nonempty subset
            auto subset = [subset_bits](std::uint64_t z) { return (subset_bits >> z) & 1u; };
            StateVector before = run_circuit(preparation, 0);
            Circuit boosted = append_mass_boost(preparation, subset, rule, k);
            StateVector after = run_circuit_raw(boosted, 0);

            const bool boosting_subset = p < 2.0;
            auto targeted_after = [&](std::uint64_t z) { return subset(z >> k) == boosting_subset; };
            auto untargeted_after = [&](std::uint64_t z) { return subset(z >> k) != boosting_subset; };
            auto targeted_before = [&](std::uint64_t z) { return subset(z) == boosting_subset; };
            auto untargeted_before = [&](std::uint64_t z) { return subset(z) != boosting_subset; };

            const double factor = std::exp2((2.0 - p) * k / 2.0);
            const double targeted_ratio =
                p_mass(after, rule, targeted_after) / p_mass(before, rule, targeted_before);
            const double untargeted_ratio =
                p_mass(after, rule, untargeted_after) / p_mass(before, rule, untargeted_before);
            CHECK(targeted_ratio == doctest::Approx(factor).epsilon(1e-9));
            CHECK(untargeted_ratio == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("p-rule runs validate their circuits") {
    Circuit posted(1);
    posted.add(Gate::h(0));
    posted.postselect(0, 1);
    Rng rng(1);
    CHECK_THROWS_AS(run_p_rule(posted, MeasurementRule(2.0), rng), ValidationError);

    Circuit nonunitary(1);
    nonunitary.add(nonunitary_postselect_gadget(0, 4));
    CHECK_THROWS_AS(run_p_rule(nonunitary, MeasurementRule(2.0), rng), ValidationError);
}

TEST_CASE("p-rule sampling frequencies") {
    const int samples = 100000;
    Circuit c(1);
    c.add(Gate::h(0));
    for (double p : {2.0, 4.0}) {
        Rng rng(53);
        int zeros = 0;
        for (int t = 0; t < samples; ++t) zeros += run_p_rule(c, MeasurementRule(p), rng) == 0;
        CHECK(std::abs(zeros / double(samples) - 0.5) < 0.01);  // equal amplitudes for any p
    }
}

TEST_CASE("p-rule sampling matches the normalized p-mass distribution") {
    Rng rng(54);
    Circuit c = random_unitary_circuit(rng, 3, 10);
    const MeasurementRule rule(3.0);
    StateVector final_state = run_circuit(c, 0);
    const double total = total_p_mass(final_state, rule);
    std::vector<double> expected(8);
    for (std::uint64_t z = 0; z < 8; ++z) {
        expected[z] = p_mass(final_state, rule, [z](std::uint64_t y) { return y == z; }) / total;
    }
    const int samples = 100000;
    std::vector<double> observed(8, 0.0);
    Rng sampler(55);
    for (int t = 0; t < samples; ++t) observed[run_p_rule(c, rule, sampler)] += 1.0 / samples;
    CHECK(total_variation(observed, expected) < 0.02);
}

TEST_CASE("joint outcome probabilities factor across disjoint registers") {
    Rng rng(56);
    const MeasurementRule rule(3.0);
    Circuit c1 = random_unitary_circuit(rng, 2, 6);
    Circuit c2 = random_unitary_circuit(rng, 1, 4);
    Circuit joint(3);
    joint.gates = c1.gates;
    for (Gate g : c2.gates) {
        for (int &q : g.qubits) q += 2;
        joint.add(std::move(g));
    }
    StateVector s1 = run_circuit(c1, 0);
    StateVector s2 = run_circuit(c2, 0);
    StateVector sj = run_circuit(joint, 0);
    const double t1 = total_p_mass(s1, rule), t2 = total_p_mass(s2, rule), tj = total_p_mass(sj, rule);
    for (std::uint64_t z1 = 0; z1 < 4; ++z1) {
        for (std::uint64_t z2 = 0; z2 < 2; ++z2) {
            const double joint_prob =
                p_mass(sj, rule, [&](std::uint64_t z) { return z == ((z1 << 1) | z2); }) / tj;
            const double product =
                (p_mass(s1, rule, [&](std::uint64_t z) { return z == z1; }) / t1) *
                (p_mass(s2, rule, [&](std::uint64_t z) { return z == z2; }) / t2);
            CHECK(joint_prob == doctest::Approx(product).epsilon(1e-9));
        }
    }
}

TEST_CASE("the boosted pipeline matches dense simulation of the literal gadget circuit") {
    Rng rng(57);
    for (double p : {1.0, 4.0}) {
        for (int k : {1, 3}) {
            const MeasurementRule rule(p);
            for (int trial = 0; trial < 6; ++trial) {
                // Random 2-qubit circuit with two postselection points.
                Circuit c(2);
                Circuit stage1 = random_unitary_circuit(rng, 2, 3);
                Circuit stage2 = random_unitary_circuit(rng, 2, 3);
                for (const Gate &g : stage1.gates) c.add(g);
                c.postselect(static_cast<int>(rng.next_below(2)), static_cast<int>(rng.next_u64() & 1u));
                for (const Gate &g : stage2.gates) c.add(g);
                c.postselect(static_cast<int>(rng.next_below(2)), static_cast<int>(rng.next_u64() & 1u));

                BoostedPipeline pipeline(c, rule, k, 0);
                Circuit literal = replace_postselections_boost(c, rule, k);
                StateVector dense = run_circuit_raw(literal, 0);
                const int ancilla_bits = literal.num_qubits - 2;
                for (std::uint64_t core = 0; core < 4; ++core) {
                    const double expected = p_mass(
                        dense, rule, [&](std::uint64_t z) { return (z >> ancilla_bits) == core; });
                    const double got = pipeline.event_mass([&](std::uint64_t z) { return z == core; });
                    CHECK(got == doctest::Approx(expected).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("boosted decisions on pinned instances") {
    DecisionReport boundary =
        decide_majority_boosted(MajorityInstance::from_mask(1, 0b01), MeasurementRule(1.0), 100, 5);
    CHECK(!boundary.verdict);

    DecisionReport low =
        decide_majority_boosted(MajorityInstance::from_mask(3, 0b00100100), MeasurementRule(1.0), 100, 9);
    CHECK(low.verdict);

    CHECK_THROWS_AS(decide_majority_boosted(MajorityInstance::from_mask(2, 0b0001),
                                            MeasurementRule(2.0), 10, 1),
                    PreconditionViolated);
}

TEST_CASE("boosted decisions track brute force on random instances") {
    Rng rng(58);
    for (double p : {1.0, 4.0}) {
        int agree = 0;
        const int trials = 20;
        for (int t = 0; t < trials; ++t) {
            MajorityInstance inst = random_instance(rng, 3, true);
            DecisionReport report =
                decide_majority_boosted(inst, MeasurementRule(p), 100, 2000 + t);
            agree += report.verdict == inst.majority_below_half();
        }
        CHECK(agree >= trials - 1);
    }
}

TEST_CASE("nonunitary pipeline decisions on pinned instances") {
    DecisionReport report =
        decide_majority_nonunitary(MajorityInstance::from_mask(3, 0b00100100), 20, 100, 13);
    CHECK(report.verdict);
    DecisionReport boundary =
        decide_majority_nonunitary(MajorityInstance::from_mask(1, 0b01), 20, 100, 13);
    CHECK(!boundary.verdict);
}
