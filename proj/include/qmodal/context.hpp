#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qmodal/matrix.hpp"

namespace qmodal {

// A maximal set of compatible measurements: an orthonormal basis whose
// columns are the N mutually exclusive outcome vectors.
struct Context {
    std::string id;
    ComplexMatrix basis;  // N x N, columns orthonormal, phase convention applied
    std::vector<std::string> outcome_labels;

    int dim() const { return basis.rows(); }
};

// One of the N exclusive outcomes of a context.
struct Modality {
    std::string context_id;
    int index = 0;
};

struct Observable {
    std::string context_id;
    std::vector<double> values;
    ComplexMatrix op;  // sum_i values[i] * projector_i
};

// Probabilities p_ij connecting the outcomes of two contexts.
struct TransitionMatrix {
    std::string source_context;
    std::string target_context;
    int dim = 0;
    std::vector<double> probs;  // row-major, row = source outcome

    double operator()(int i, int j) const { return probs[static_cast<std::size_t>(i) * dim + j]; }
};

// The unitary mapping the k-th source basis vector onto the k-th target
// basis vector.
struct ContextChange {
    std::string source_context;
    std::string target_context;
    ComplexMatrix sigma;
};

// Validates (dim >= 2, orthonormal within 1e-10, label count) and applies
// the phase convention. Labels default to "0".."N-1".
Context make_context(std::string id, ComplexMatrix basis,
                     std::vector<std::string> outcome_labels = {});

// Eigenbasis of a single hermitian observable, outcomes ordered by
// ascending eigenvalue. Requires a non-degenerate spectrum.
std::pair<Context, std::vector<double>> context_from_observable(const ComplexMatrix& a,
                                                                const std::string& id);

// Joint eigenbasis of a commuting family; outcome labels carry the joint
// eigenvalue tuples.
Context csco_context(const std::vector<ComplexMatrix>& observables, const std::string& id);

// Rank-1 projector onto one outcome vector.
ComplexMatrix projector(const Context& ctx, int index);

Observable observable_operator(const Context& ctx, const std::vector<double>& values);

// p_ij = |<a_i|b_j>|^2, algebraically equal to Tr(pi_i pi_j'). The
// entrywise loop is symmetric under swapping the contexts, so
// transition_matrix(b, a) is bitwise the transpose of transition_matrix(a, b).
TransitionMatrix transition_matrix(const Context& a, const Context& b);

// Single row of the transition matrix (probabilities leaving outcome i of a).
std::vector<double> transition_row(const Context& a, int i, const Context& b);

ContextChange context_change(const Context& a, const Context& b);

// ||[Sigma(e -> e1), Sigma(e -> e2)]||_F.
double context_noncommutativity(const Context& e, const Context& e1, const Context& e2);

// Haar-distributed basis: QR of a complex Gaussian matrix with the
// diagonal phase fix, then the deterministic phase convention.
Context random_context(int n, std::uint64_t seed, const std::string& id = "");

// New context with basis U * ctx.basis; labels are inherited.
Context rotated_context(const Context& ctx, const ComplexMatrix& u, const std::string& id);

// id -> Context map used by the CLI; single-writer, multi-reader.
class ContextRegistry {
public:
    void add(Context ctx);
    bool has(const std::string& id) const;
    const Context& get(const std::string& id) const;  // throws UnknownContext

private:
    std::map<std::string, Context> contexts_;
};

ComplexMatrix projector(const ContextRegistry& registry, const Modality& m);

}  // namespace qmodal
