#include <doctest.h>

#include <cmath>

#include "qmodal/simulate.hpp"
#include "test_helpers.hpp"

using namespace qmodal;
using namespace qmodal::testing;

namespace {

const double kPi = 3.14159265358979323846;

Context z_context() { return make_context("Z", ComplexMatrix::identity(2)); }

Context x_context() { return context_from_observable(pauli_x(), "X").first; }

Context tilted_context(double theta, const std::string& id) {
    const SpinRepresentation rep = spin_matrices(0.5);
    return rotated_context(z_context(),
                           rotation_unitary(rep, RotationVector{{0.0, theta, 0.0}}), id);
}

double return_frequency(const SequenceResult& result, int initial) {
    double f = 0.0;
    for (const auto& [tuple, freq] : result.empirical_frequencies())
        if (tuple.back() == initial) f += freq;
    return f;
}

}  // namespace

TEST_SUITE_BEGIN("simulate");

TEST_CASE("re-measuring the same context is exactly repeatable") {
    const Context z = z_context();
    Rng rng(3);
    for (int k = 0; k < 50; ++k) CHECK(measure_outcome(z, 0, z, rng) == 0);

    const SequenceResult rep = run_sequence(z, 1, {z, z, z, z}, 200, 17);
    REQUIRE(rep.counts.size() == 1);
    CHECK(rep.counts.begin()->first == std::vector<int>{1, 1, 1, 1});

    const auto records = rep.records(rep.counts.begin()->first);
    REQUIRE(records.size() == 4);
    CHECK(records[2].step == 2);
    CHECK(records[2].context_id == "Z");
    CHECK(records[2].outcome_index == 1);
}

TEST_CASE("single-step frequencies follow the transition row") {
    const Context z = z_context();
    const long long shots = 100000;

    const SequenceResult zx = run_sequence(z, 0, {x_context()}, shots, 5);
    double zero_freq = 0.0;
    for (const auto& [tuple, freq] : zx.empirical_frequencies())
        if (tuple[0] == 0) zero_freq = freq;
    CHECK(std::abs(zero_freq - 0.5) < 0.0063);  // 4 binomial sigma

    const SequenceResult tilted = run_sequence(z, 0, {tilted_context(kPi / 3.0, "T")}, shots, 6);
    double match_freq = 0.0;
    for (const auto& [tuple, freq] : tilted.empirical_frequencies())
        if (tuple[0] == 0) match_freq = freq;
    CHECK(std::abs(match_freq - 0.75) < 0.0055);  // p = cos^2(pi/6) = 3/4
}

TEST_CASE("three-step return probabilities") {
    const Context z = z_context();
    const long long shots = 100000;

    const SequenceResult zxz = run_sequence(z, 0, {x_context(), z}, shots, 11);
    CHECK(std::abs(return_frequency(zxz, 0) - 0.5) < 0.0063);

    const SequenceResult ztz =
        run_sequence(z, 0, {tilted_context(kPi / 3.0, "T"), z}, shots, 12);
    // p^2 + (1-p)^2 with p = 3/4
    CHECK(std::abs(return_frequency(ztz, 0) - 0.625) < 0.0061);
}

TEST_CASE("sequences are deterministic in the seed") {
    const Context z = z_context();
    const Context x = x_context();
    const SequenceResult a = run_sequence(z, 0, {x, z, x}, 5000, 99);
    const SequenceResult b = run_sequence(z, 0, {x, z, x}, 5000, 99);
    CHECK(a.counts == b.counts);
    const SequenceResult c = run_sequence(z, 0, {x, z, x}, 5000, 100);
    CHECK(a.counts != c.counts);
}

TEST_CASE("marginal consistency across 100 seeded runs") {
    const Context z = z_context();
    const Context tilted = tilted_context(1.1, "T");
    const std::vector<double> row = transition_row(z, 0, tilted);
    const long long shots = 10000;
    int passes = 0;
    for (int seed = 0; seed < 100; ++seed) {
        const SequenceResult run = run_sequence(z, 0, {tilted}, shots, seed);
        bool all_within = true;
        for (int j = 0; j < 2; ++j) {
            double freq = 0.0;
            for (const auto& [tuple, f] : run.empirical_frequencies())
                if (tuple[0] == j) freq = f;
            const double sigma = std::sqrt(row[j] * (1.0 - row[j]) / shots);
            if (std::abs(freq - row[j]) > 4.0 * sigma) all_within = false;
        }
        if (all_within) ++passes;
    }
    CHECK(passes >= 99);
}

TEST_CASE("registry-based measure resets the state") {
    ContextRegistry registry;
    registry.add(z_context());
    registry.add(x_context());
    Rng rng(4);
    SystemState state{Modality{"Z", 0}};
    const auto [outcome, next] = measure(registry, state, registry.get("X"), rng);
    CHECK(next.current.context_id == "X");
    CHECK(next.current.index == outcome);
    const auto [again, same] = measure(registry, next, registry.get("X"), rng);
    CHECK(again == outcome);  // repeatable
    CHECK_THROWS_AS(measure(registry, SystemState{Modality{"gone", 0}}, registry.get("X"), rng),
                    UnknownContext);
}

TEST_CASE("reciprocity estimates") {
    const Context z = z_context();
    const ReciprocityEstimate trivial = estimate_reciprocity(z, z, 1, 1, 1000, 5);
    CHECK(trivial.p_forward == 1.0);
    CHECK(trivial.p_reverse == 1.0);
    CHECK(trivial.stderr_max == 0.0);

    const ReciprocityEstimate zx = estimate_reciprocity(z, x_context(), 0, 0, 100000, 5);
    CHECK(std::abs(zx.p_forward - 0.5) < 0.0063);
    CHECK(std::abs(zx.p_reverse - 0.5) < 0.0063);
    CHECK(std::abs(zx.p_forward - zx.p_reverse) <= 5.0 * zx.stderr_max);

    // random contexts at N=4: both estimates sit near the exact entry
    for (int trial = 0; trial < 5; ++trial) {
        const Context e = random_context(4, 800 + trial, "E");
        const Context ep = random_context(4, 900 + trial, "Ep");
        const TransitionMatrix t = transition_matrix(e, ep);
        Rng picker(42 + trial);
        const int i = static_cast<int>(picker.below(4));
        const int j = static_cast<int>(picker.below(4));
        const ReciprocityEstimate est = estimate_reciprocity(e, ep, i, j, 20000, 70 + trial);
        CHECK(std::abs(est.p_forward - est.p_reverse) <= 5.0 * est.stderr_max);
        const double sigma = std::sqrt(t(i, j) * (1.0 - t(i, j)) / 20000.0) + 1e-12;
        CHECK(std::abs(est.p_forward - t(i, j)) <= 5.0 * sigma);
        CHECK(std::abs(est.p_reverse - t(i, j)) <= 5.0 * sigma);
    }
}

TEST_CASE("classical refinement comparison") {
    const RefinementReport aligned = classical_refinement_demo(0.0, 1000, 3);
    CHECK(aligned.quantum_return_prob == 1.0);
    CHECK(aligned.classical_return_prob == 1.0);
    CHECK(aligned.analytic_quantum == 1.0);

    const RefinementReport orthogonal = classical_refinement_demo(kPi / 2.0, 100000, 3);
    CHECK(orthogonal.classical_return_prob == 1.0);  // exact, not statistical
    CHECK(orthogonal.analytic_quantum == doctest::Approx(0.5));
    CHECK(std::abs(orthogonal.quantum_return_prob - 0.5) < 0.0063);

    const RefinementReport third = classical_refinement_demo(kPi / 3.0, 100000, 4);
    CHECK(third.analytic_quantum == doctest::Approx(0.625));
    CHECK(third.classical_return_prob == 1.0);
    CHECK(std::abs(third.quantum_return_prob - 0.625) < 0.0061);
}

TEST_CASE("quantum dice") {
    const DiceReport still = quantum_dice_demo(RotationVector{}, 2000, 8);
    CHECK(still.frequencies[0] == 1.0);
    CHECK(still.labels[0] == "1");

    // z-rotations leave the jz eigenbasis invariant
    const DiceReport spun = quantum_dice_demo(RotationVector{{0.0, 0.0, 1.23}}, 2000, 8);
    CHECK(spun.frequencies[0] == 1.0);

    const DiceReport tumbled = quantum_dice_demo(RotationVector{{kPi / 2.0, 0.0, 0.0}}, 100000, 9);
    double total = 0.0;
    for (int k = 0; k < 6; ++k) {
        CHECK(tumbled.frequencies[k] > 0.0);  // all six faces occur
        const double sigma =
            std::sqrt(tumbled.expected[k] * (1.0 - tumbled.expected[k]) / 100000.0);
        CHECK(std::abs(tumbled.frequencies[k] - tumbled.expected[k]) <= 4.0 * sigma);
        total += tumbled.frequencies[k];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dimension and index validation") {
    const Context z = z_context();
    Rng rng(1);
    CHECK_THROWS_AS(measure_outcome(z, 0, make_context("W", ComplexMatrix::identity(3)), rng),
                    DimensionMismatch);
    CHECK_THROWS_AS(measure_outcome(z, 5, x_context(), rng), IndexOutOfRange);
    CHECK_THROWS_AS(run_sequence(z, 0, {x_context()}, 0, 1), Error);
}

TEST_SUITE_END();
