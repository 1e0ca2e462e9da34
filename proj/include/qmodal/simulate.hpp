#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmodal/context.hpp"
#include "qmodal/rng.hpp"
#include "qmodal/spin.hpp"

namespace qmodal {

// After a measurement the system simply *is* one modality of the
// measured context.
struct SystemState {
    Modality current;
};

struct MeasurementRecord {
    int step = 0;
    std::string context_id;
    int outcome_index = 0;
};

struct SequenceResult {
    long long shots = 0;
    std::vector<std::string> chain_ids;
    std::map<std::vector<int>, long long> counts;  // outcome tuple -> occurrences

    std::map<std::vector<int>, double> empirical_frequencies() const;
    // expand one outcome tuple back into per-step records
    std::vector<MeasurementRecord> records(const std::vector<int>& tuple) const;
};

// Deterministic hidden outcome per context; measurements read it without
// disturbing anything. The comparator the quantum chain is played against.
struct ClassicalRefinementModel {
    std::map<std::string, int> hidden_assignment;
};

// Re-measuring the current context returns the same outcome with
// certainty ("same" is decided by context id). Anything else samples the
// current row of the transition matrix and resets the state.
int measure_outcome(const Context& current_ctx, int current_index, const Context& target,
                    Rng& rng);

std::pair<int, SystemState> measure(const ContextRegistry& registry, const SystemState& state,
                                    const Context& target, Rng& rng);

// Runs the chain once per shot with a per-shot RNG stream derived from
// (seed, shot index); deterministic and parallelizable by shot.
SequenceResult run_sequence(const Context& initial_ctx, int initial_index,
                            const std::vector<Context>& chain, long long shots,
                            std::uint64_t seed);

struct ReciprocityEstimate {
    double p_forward = 0.0;   // P(outcome j in E' | prepared (E, i))
    double p_reverse = 0.0;   // P(outcome i in E  | prepared (E', j))
    double stderr_max = 0.0;  // max binomial standard error of the two
};

ReciprocityEstimate estimate_reciprocity(const Context& e, const Context& e_prime, int i, int j,
                                         long long shots, std::uint64_t seed);

struct RefinementReport {
    double quantum_return_prob = 0.0;
    double classical_return_prob = 0.0;
    double analytic_quantum = 0.0;  // p^2 + (1-p)^2 with p = cos^2(theta/2)
};

// Chain [E_alpha, E_beta, E_alpha] between spin-1/2 contexts separated by
// Bloch angle theta, against the classical hidden-value comparator.
RefinementReport classical_refinement_demo(double theta, long long shots, std::uint64_t seed);

struct DiceReport {
    std::vector<std::string> labels;      // "1".."6"
    std::vector<double> frequencies;      // empirical
    std::vector<double> expected;         // row 0 of the transition matrix
};

// Six-outcome context rotated by the j = 5/2 representation at u,
// measured from the first standard outcome.
DiceReport quantum_dice_demo(const RotationVector& u, long long shots, std::uint64_t seed);

}  // namespace qmodal
