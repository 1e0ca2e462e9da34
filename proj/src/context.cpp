#include "qmodal/context.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "qmodal/rng.hpp"

namespace qmodal {

namespace {

constexpr double kOrthonormalTol = 1e-10;

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::vector<std::string> default_labels(int n) {
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return labels;
}

// Degeneracy threshold: 1e-8 * (spectral spread, floored at 1).
double degeneracy_threshold(const std::vector<double>& eigenvalues) {
    const auto [lo, hi] = std::minmax_element(eigenvalues.begin(), eigenvalues.end());
    return 1e-8 * std::max(1.0, *hi - *lo);
}

}  // namespace

Context make_context(std::string id, ComplexMatrix basis, std::vector<std::string> outcome_labels) {
    if (!basis.is_square() || basis.rows() < 2)
        throw BadDimension("context basis must be square with dim >= 2");
    if (!basis.all_finite()) throw Error("context basis has non-finite entries");
    if (!is_unitary(basis, kOrthonormalTol))
        throw NotUnitary("context basis is not orthonormal within 1e-10");
    if (outcome_labels.empty()) outcome_labels = default_labels(basis.rows());
    if (static_cast<int>(outcome_labels.size()) != basis.rows())
        throw LengthMismatch("outcome label count does not match dimension");
    apply_phase_convention(basis);
    return Context{std::move(id), std::move(basis), std::move(outcome_labels)};
}

std::pair<Context, std::vector<double>> context_from_observable(const ComplexMatrix& a,
                                                                const std::string& id) {
    HermitianEig eig = hermitian_eigendecomposition(a);
    const double threshold = degeneracy_threshold(eig.eigenvalues);
    for (std::size_t k = 1; k < eig.eigenvalues.size(); ++k)
        if (eig.eigenvalues[k] - eig.eigenvalues[k - 1] <= threshold)
            throw DegenerateSpectrum("observable spectrum is degenerate; a larger commuting set is needed");
    std::vector<std::string> labels(eig.eigenvalues.size());
    for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = format_value(eig.eigenvalues[k]);
    return {make_context(id, std::move(eig.eigenvectors), std::move(labels)),
            std::move(eig.eigenvalues)};
}

Context csco_context(const std::vector<ComplexMatrix>& observables, const std::string& id) {
    if (observables.empty()) throw EmptyInput("csco_context requires at least one observable");
    const int n = observables.front().rows();
    std::vector<ComplexMatrix> sym;
    sym.reserve(observables.size());
    for (const auto& obs : observables) {
        if (obs.rows() != n) throw DimensionMismatch("observables of unequal dimension");
        sym.push_back(require_hermitian(obs));
    }
    for (std::size_t i = 0; i < sym.size(); ++i) {
        for (std::size_t j = i + 1; j < sym.size(); ++j) {
            const double tol =
                1e-8 * std::max(1.0, sym[i].frobenius_norm() * sym[j].frobenius_norm());
            if (commutator_norm(sym[i], sym[j]) > tol)
                throw NotCommuting("observables do not commute");
        }
    }

    ComplexMatrix v = ComplexMatrix::identity(n);
    std::vector<std::vector<int>> clusters{std::vector<int>(n)};
    std::iota(clusters[0].begin(), clusters[0].end(), 0);
    std::vector<std::vector<double>> values_per_column(sym.size(),
                                                       std::vector<double>(n, 0.0));

    for (std::size_t o = 0; o < sym.size(); ++o) {
        const ComplexMatrix& obs = sym[o];
        std::vector<double>& values = values_per_column[o];

        // Diagonalize the observable restricted to each unresolved cluster.
        for (const auto& cluster : clusters) {
            const int k = static_cast<int>(cluster.size());
            if (k == 1) {
                const auto col = v.column(cluster[0]);
                complexd q = 0.0;
                for (int r = 0; r < n; ++r) {
                    complexd av = 0.0;
                    for (int s = 0; s < n; ++s) av += obs(r, s) * col[s];
                    q += std::conj(col[r]) * av;
                }
                values[cluster[0]] = q.real();
                continue;
            }
            ComplexMatrix w(n, k);
            for (int c = 0; c < k; ++c) w.set_column(c, v.column(cluster[c]));
            const ComplexMatrix restricted = w.adjoint() * (obs * w);
            const HermitianEig sub = hermitian_eigendecomposition(restricted);
            const ComplexMatrix rotated = w * sub.eigenvectors;
            for (int c = 0; c < k; ++c) {
                v.set_column(cluster[c], rotated.column(c));
                values[cluster[c]] = sub.eigenvalues[c];
            }
        }

        // Split clusters on gaps larger than the degeneracy threshold.
        const double threshold = degeneracy_threshold(values);
        std::vector<std::vector<int>> next;
        for (const auto& cluster : clusters) {
            std::vector<int> current{cluster[0]};
            for (std::size_t c = 1; c < cluster.size(); ++c) {
                if (values[cluster[c]] - values[cluster[c - 1]] > threshold) {
                    next.push_back(std::move(current));
                    current.clear();
                }
                current.push_back(cluster[c]);
            }
            next.push_back(std::move(current));
        }
        clusters = std::move(next);
    }

    for (const auto& cluster : clusters)
        if (cluster.size() > 1)
            throw DegenerateJointSpectrum("joint spectrum does not resolve all outcomes");

    std::vector<std::string> labels(n);
    for (int c = 0; c < n; ++c) {
        std::string label;
        for (std::size_t o = 0; o < sym.size(); ++o) {
            if (o > 0) label += ",";
            label += format_value(values_per_column[o][c]);
        }
        labels[c] = sym.size() > 1 ? "(" + label + ")" : label;
    }
    return make_context(id, std::move(v), std::move(labels));
}

ComplexMatrix projector(const Context& ctx, int index) {
    if (index < 0 || index >= ctx.dim())
        throw IndexOutOfRange("modality index outside context dimension");
    const auto u = ctx.basis.column(index);
    const int n = ctx.dim();
    ComplexMatrix p(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = u[i] * std::conj(u[j]);
    return p;
}

Observable observable_operator(const Context& ctx, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != ctx.dim())
        throw LengthMismatch("value count does not match context dimension");
    const int n = ctx.dim();
    // basis * diag(values) * basis^dagger
    ComplexMatrix scaled = ctx.basis;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) scaled(i, j) *= values[j];
    return Observable{ctx.id, values, scaled * ctx.basis.adjoint()};
}

namespace {

// |<a_i|b_j>|^2 accumulated so that swapping the two bases negates the
// imaginary accumulator exactly and leaves the probability bit-identical.
double overlap_probability(const ComplexMatrix& a, int i, const ComplexMatrix& b, int j) {
    double re = 0.0;
    double im = 0.0;
    for (int k = 0; k < a.rows(); ++k) {
        const double ar = a(k, i).real(), ai = a(k, i).imag();
        const double br = b(k, j).real(), bi = b(k, j).imag();
        const double p1 = ar * br;
        const double p2 = ai * bi;
        const double q1 = ar * bi;
        const double q2 = ai * br;
        re += p1 + p2;
        im += q1 - q2;
    }
    double p = re * re + im * im;
    if (p > 1.0) p = 1.0;
    return p;
}

}  // namespace

TransitionMatrix transition_matrix(const Context& a, const Context& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("contexts of unequal dimension");
    const int n = a.dim();
    TransitionMatrix t{a.id, b.id, n, std::vector<double>(static_cast<std::size_t>(n) * n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t.probs[static_cast<std::size_t>(i) * n + j] = overlap_probability(a.basis, i, b.basis, j);
    return t;
}

std::vector<double> transition_row(const Context& a, int i, const Context& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("contexts of unequal dimension");
    if (i < 0 || i >= a.dim()) throw IndexOutOfRange("source outcome index out of range");
    std::vector<double> row(a.dim());
    for (int j = 0; j < a.dim(); ++j) row[j] = overlap_probability(a.basis, i, b.basis, j);
    return row;
}

ContextChange context_change(const Context& a, const Context& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("contexts of unequal dimension");
    return ContextChange{a.id, b.id, b.basis * a.basis.adjoint()};
}

double context_noncommutativity(const Context& e, const Context& e1, const Context& e2) {
    if (e.dim() != e1.dim() || e.dim() != e2.dim())
        throw DimensionMismatch("contexts of unequal dimension");
    return commutator_norm(context_change(e, e1).sigma, context_change(e, e2).sigma);
}

Context random_context(int n, std::uint64_t seed, const std::string& id) {
    if (n < 2) throw BadDimension("context dimension must be >= 2");
    Rng rng = Rng::stream(seed, 0);
    std::vector<std::vector<complexd>> columns(n, std::vector<complexd>(n));
    // column-major draw so each Gram-Schmidt input is one Ginibre column
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) columns[j][i] = complexd(rng.gaussian(), rng.gaussian());
    ComplexMatrix basis = gram_schmidt(columns);
    return make_context(id.empty() ? "haar-" + std::to_string(seed) : id, std::move(basis));
}

Context rotated_context(const Context& ctx, const ComplexMatrix& u, const std::string& id) {
    if (u.rows() != ctx.dim() || u.cols() != ctx.dim())
        throw DimensionMismatch("rotation dimension does not match context");
    return make_context(id, u * ctx.basis, ctx.outcome_labels);
}

void ContextRegistry::add(Context ctx) {
    const std::string id = ctx.id;
    contexts_.insert_or_assign(id, std::move(ctx));
}

bool ContextRegistry::has(const std::string& id) const { return contexts_.count(id) > 0; }

const Context& ContextRegistry::get(const std::string& id) const {
    const auto it = contexts_.find(id);
    if (it == contexts_.end()) throw UnknownContext("no context with id '" + id + "'");
    return it->second;
}

ComplexMatrix projector(const ContextRegistry& registry, const Modality& m) {
    return projector(registry.get(m.context_id), m.index);
}

}  // namespace qmodal
