#include "qmodal/simulate.hpp"

#include <cmath>

#include "qmodal/fit.hpp"

namespace qmodal {

std::map<std::vector<int>, double> SequenceResult::empirical_frequencies() const {
    std::map<std::vector<int>, double> freq;
    for (const auto& [tuple, count] : counts)
        freq[tuple] = static_cast<double>(count) / static_cast<double>(shots);
    return freq;
}

std::vector<MeasurementRecord> SequenceResult::records(const std::vector<int>& tuple) const {
    if (tuple.size() != chain_ids.size())
        throw LengthMismatch("outcome tuple does not match the chain length");
    std::vector<MeasurementRecord> out(tuple.size());
    for (std::size_t t = 0; t < tuple.size(); ++t)
        out[t] = MeasurementRecord{static_cast<int>(t), chain_ids[t], tuple[t]};
    return out;
}

int measure_outcome(const Context& current_ctx, int current_index, const Context& target,
                    Rng& rng) {
    if (current_ctx.dim() != target.dim())
        throw DimensionMismatch("state and measurement contexts have unequal dimension");
    if (current_index < 0 || current_index >= current_ctx.dim())
        throw IndexOutOfRange("state outcome index out of range");
    if (current_ctx.id == target.id) return current_index;  // repeatability
    const std::vector<double> row = transition_row(current_ctx, current_index, target);
    return sample_outcome(row, rng);
}

std::pair<int, SystemState> measure(const ContextRegistry& registry, const SystemState& state,
                                    const Context& target, Rng& rng) {
    const Context& current = registry.get(state.current.context_id);
    const int outcome = measure_outcome(current, state.current.index, target, rng);
    return {outcome, SystemState{Modality{target.id, outcome}}};
}

SequenceResult run_sequence(const Context& initial_ctx, int initial_index,
                            const std::vector<Context>& chain, long long shots,
                            std::uint64_t seed) {
    if (shots < 1) throw Error("run_sequence requires shots >= 1");
    if (initial_index < 0 || initial_index >= initial_ctx.dim())
        throw IndexOutOfRange("initial outcome index out of range");

    // Precompute each step's transition rows; the per-shot loop then only
    // samples. Same-context steps are marked deterministic.
    const int n = initial_ctx.dim();
    const std::size_t steps = chain.size();
    std::vector<bool> deterministic(steps);
    std::vector<std::vector<std::vector<double>>> rows(steps);
    const Context* previous = &initial_ctx;
    for (std::size_t t = 0; t < steps; ++t) {
        const Context& ctx = chain[t];
        if (ctx.dim() != n) throw DimensionMismatch("chain contexts have unequal dimension");
        deterministic[t] = (ctx.id == previous->id);
        if (!deterministic[t]) {
            rows[t].resize(n);
            for (int i = 0; i < n; ++i) rows[t][i] = transition_row(*previous, i, ctx);
        }
        previous = &ctx;
    }

    SequenceResult result;
    result.shots = shots;
    result.chain_ids.reserve(steps);
    for (const auto& ctx : chain) result.chain_ids.push_back(ctx.id);

    std::vector<int> tuple(steps);
    for (long long shot = 0; shot < shots; ++shot) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(shot));
        int index = initial_index;
        for (std::size_t t = 0; t < steps; ++t) {
            if (!deterministic[t]) index = sample_outcome(rows[t][index], rng);
            tuple[t] = index;
        }
        ++result.counts[tuple];
    }
    return result;
}

ReciprocityEstimate estimate_reciprocity(const Context& e, const Context& e_prime, int i, int j,
                                         long long shots, std::uint64_t seed) {
    if (shots < 100) throw Error("estimate_reciprocity requires shots >= 100");
    if (i < 0 || i >= e.dim() || j < 0 || j >= e_prime.dim())
        throw IndexOutOfRange("outcome index out of range");

    long long hits_forward = 0;
    long long hits_reverse = 0;
    for (long long shot = 0; shot < shots; ++shot) {
        Rng forward = Rng::stream(seed, 2 * static_cast<std::uint64_t>(shot));
        Rng reverse = Rng::stream(seed, 2 * static_cast<std::uint64_t>(shot) + 1);
        if (measure_outcome(e, i, e_prime, forward) == j) ++hits_forward;
        if (measure_outcome(e_prime, j, e, reverse) == i) ++hits_reverse;
    }
    const double pf = static_cast<double>(hits_forward) / static_cast<double>(shots);
    const double pr = static_cast<double>(hits_reverse) / static_cast<double>(shots);
    const double se_f = std::sqrt(pf * (1.0 - pf) / static_cast<double>(shots));
    const double se_r = std::sqrt(pr * (1.0 - pr) / static_cast<double>(shots));
    return ReciprocityEstimate{pf, pr, std::max(se_f, se_r)};
}

RefinementReport classical_refinement_demo(double theta, long long shots, std::uint64_t seed) {
    if (shots < 100) throw Error("classical_refinement_demo requires shots >= 100");

    const SpinRepresentation rep = spin_matrices(0.5);
    const Context alpha = make_context("alpha", ComplexMatrix::identity(2), {"+", "-"});
    const Context beta =
        rotated_context(alpha, rotation_unitary(rep, RotationVector{{0.0, theta, 0.0}}), "beta");

    const SequenceResult quantum = run_sequence(alpha, 0, {beta, alpha}, shots, seed);
    long long returns = 0;
    for (const auto& [tuple, count] : quantum.counts)
        if (tuple.back() == 0) returns += count;

    // Classical arm: predetermined hidden outcomes, read without
    // disturbance, so the chain closes on the initial value every time.
    const std::vector<double> beta_row = transition_row(alpha, 0, beta);
    long long classical_returns = 0;
    for (long long shot = 0; shot < shots; ++shot) {
        Rng rng = Rng::stream(mix_seed(seed, 0x636c6173ULL), static_cast<std::uint64_t>(shot));
        ClassicalRefinementModel model;
        model.hidden_assignment["alpha"] = 0;
        model.hidden_assignment["beta"] = sample_outcome(beta_row, rng);
        int outcome = 0;
        for (const char* step : {"beta", "alpha"}) outcome = model.hidden_assignment.at(step);
        if (outcome == 0) ++classical_returns;
    }

    const double p = std::cos(0.5 * theta) * std::cos(0.5 * theta);
    return RefinementReport{static_cast<double>(returns) / static_cast<double>(shots),
                            static_cast<double>(classical_returns) / static_cast<double>(shots),
                            p * p + (1.0 - p) * (1.0 - p)};
}

DiceReport quantum_dice_demo(const RotationVector& u, long long shots, std::uint64_t seed) {
    if (shots < 1) throw Error("quantum_dice_demo requires shots >= 1");

    // The dice observable has the six face values as its spectrum; its
    // eigenbasis is the standard context with outcomes labeled 1..6.
    ComplexMatrix faces(6, 6);
    for (int k = 0; k < 6; ++k) faces(k, k) = k + 1;
    const Context standard = context_from_observable(faces, "dice-standard").first;
    const SpinRepresentation rep = spin_matrices(2.5);
    const Context rotated = rotated_context(standard, rotation_unitary(rep, u), "dice-rotated");

    const SequenceResult run = run_sequence(standard, 0, {rotated}, shots, seed);

    DiceReport report;
    report.labels = standard.outcome_labels;
    report.frequencies.assign(6, 0.0);
    for (const auto& [tuple, count] : run.counts)
        report.frequencies[tuple[0]] = static_cast<double>(count) / static_cast<double>(shots);
    report.expected = transition_row(standard, 0, rotated);
    return report;
}

}  // namespace qmodal
