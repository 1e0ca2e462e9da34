#include "qmodal/fit.hpp"

#include <algorithm>
#include <cmath>

namespace qmodal {

namespace {

constexpr double kTargetTol = 1e-8;
constexpr double kMinStep = 1e-14;
constexpr double kMaxStep = 4.0;
constexpr double kStopResidual = 1e-16;

double objective(const ComplexMatrix& u, const DoublyStochasticTarget& b) {
    double f = 0.0;
    for (int i = 0; i < b.dim; ++i)
        for (int j = 0; j < b.dim; ++j) {
            const double d = std::norm(u(i, j)) - b(i, j);
            f += d * d;
        }
    return f;
}

void validate_target(const DoublyStochasticTarget& b) {
    if (b.dim < 2 || b.entries.size() != static_cast<std::size_t>(b.dim) * b.dim)
        throw InvalidTarget("target matrix is not square with dim >= 2");
    if (!is_doubly_stochastic(b, kTargetTol))
        throw InvalidTarget("target matrix is not doubly stochastic");
}

// Realify and re-orthonormalize; keeps the orthogonal trajectory from
// drifting off the manifold over long runs.
ComplexMatrix reorthogonalize_real(const ComplexMatrix& m) {
    std::vector<std::vector<complexd>> cols(m.cols());
    for (int j = 0; j < m.cols(); ++j) {
        cols[j].resize(m.rows());
        for (int i = 0; i < m.rows(); ++i) cols[j][i] = complexd(m(i, j).real(), 0.0);
    }
    ComplexMatrix q = gram_schmidt(cols);
    for (auto& z : q.data()) z = complexd(z.real(), 0.0);
    return q;
}

}  // namespace

bool is_doubly_stochastic(int dim, std::span<const double> entries, double tol) {
    if (dim <= 0 || entries.size() != static_cast<std::size_t>(dim) * dim)
        throw NotSquare("matrix is not square");
    for (const double v : entries)
        if (!(v >= -tol)) return false;
    for (int i = 0; i < dim; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < dim; ++j) {
            row += entries[static_cast<std::size_t>(i) * dim + j];
            col += entries[static_cast<std::size_t>(j) * dim + i];
        }
        if (std::abs(row - 1.0) > tol || std::abs(col - 1.0) > tol) return false;
    }
    return true;
}

bool is_doubly_stochastic(const DoublyStochasticTarget& m, double tol) {
    return is_doubly_stochastic(m.dim, m.entries, tol);
}

namespace detail {

ComplexMatrix haar_unitary(int n, Rng& rng) {
    std::vector<std::vector<complexd>> columns(n, std::vector<complexd>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) columns[j][i] = complexd(rng.gaussian(), rng.gaussian());
    return gram_schmidt(columns);
}

ComplexMatrix random_orthogonal(int n, Rng& rng) {
    std::vector<std::vector<complexd>> columns(n, std::vector<complexd>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) columns[j][i] = complexd(rng.gaussian(), 0.0);
    return gram_schmidt(columns);
}

RestartOutcome fit_single_restart(const DoublyStochasticTarget& b, ComplexMatrix u,
                                  bool orthogonal, const FitConfig& cfg,
                                  std::vector<double>* residual_trace) {
    const int n = b.dim;
    double f = objective(u, b);
    if (residual_trace) residual_trace->push_back(f);
    double step = cfg.initial_step;

    for (int iter = 0; iter < cfg.max_iterations && f > kStopResidual; ++iter) {
        // Euclidean gradient 4 (|U|^2 - B) o U, assembled entrywise.
        ComplexMatrix grad(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                grad(i, j) = 4.0 * (std::norm(u(i, j)) - b(i, j)) * u(i, j);

        // Hermitian tangent generator G = herm(i U grad^dagger); the update
        // U <- exp(-i eps G) U descends. At real points with real gradient
        // this reduces to O <- exp(-eps A) O with A = skew(grad O^T), so the
        // same expression serves the orthogonal restriction.
        const ComplexMatrix m = u * grad.adjoint();
        ComplexMatrix gen(n, n);
        const complexd iu(0.0, 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gen(i, j) = 0.5 * (iu * m(i, j) + std::conj(iu * m(j, i)));
        if (gen.frobenius_norm() <= cfg.gradient_tolerance) break;

        const HermitianEig eig = hermitian_eigendecomposition(gen);
        const auto retract = [&](double eps) {
            ComplexMatrix phases = eig.eigenvectors;
            for (int j = 0; j < n; ++j) {
                const complexd ph = std::exp(complexd(0.0, -eps * eig.eigenvalues[j]));
                for (int i = 0; i < n; ++i) phases(i, j) *= ph;
            }
            ComplexMatrix candidate = (phases * eig.eigenvectors.adjoint()) * u;
            if (orthogonal) candidate = reorthogonalize_real(candidate);
            return candidate;
        };

        // Line search: halve the step on non-decrease, then expand greedily
        // while the objective keeps dropping. The expansion is uncapped:
        // degenerate (quartic) minima, e.g. permutation targets, need steps
        // that grow without bound as the iterate closes in.
        bool accepted = false;
        while (step >= kMinStep) {
            ComplexMatrix candidate = retract(step);
            double fc = objective(candidate, b);
            if (fc < f) {
                double width = step;
                while (width < 1e15) {
                    ComplexMatrix wider = retract(width * 2.0);
                    const double fw = objective(wider, b);
                    if (!(fw < fc)) break;
                    candidate = std::move(wider);
                    fc = fw;
                    width *= 2.0;
                }
                u = std::move(candidate);
                f = fc;
                accepted = true;
                if (residual_trace) residual_trace->push_back(f);
                step = std::min(width * 2.0, kMaxStep);
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // line search stalled
    }
    return RestartOutcome{std::move(u), f};
}

}  // namespace detail

namespace {

FitResult run_fit(const DoublyStochasticTarget& b, const FitConfig& cfg, bool orthogonal) {
    validate_target(b);
    if (cfg.restarts < 1 || cfg.max_iterations < 1)
        throw InvalidTarget("fit config requires restarts >= 1 and max_iterations >= 1");

    FitResult result;
    result.restarts_run = cfg.restarts;
    result.per_restart_residuals.reserve(cfg.restarts);
    int best = -1;
    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(r));
        ComplexMatrix start = orthogonal ? detail::random_orthogonal(b.dim, rng)
                                         : detail::haar_unitary(b.dim, rng);
        detail::RestartOutcome outcome =
            detail::fit_single_restart(b, std::move(start), orthogonal, cfg);
        result.per_restart_residuals.push_back(outcome.residual);
        if (best < 0 || outcome.residual < result.residual) {
            best = r;
            result.residual = outcome.residual;
            result.best_matrix = std::move(outcome.matrix);
        }
    }
    result.converged = result.residual <= kFeasibleResidual;
    return result;
}

}  // namespace

FitResult unistochastic_fit(const DoublyStochasticTarget& b, const FitConfig& cfg) {
    return run_fit(b, cfg, false);
}

FitResult orthostochastic_fit(const DoublyStochasticTarget& b, const FitConfig& cfg) {
    return run_fit(b, cfg, true);
}

ParameterCount parameter_count(int n) {
    if (n < 2) throw BadDimension("parameter_count requires N >= 2");
    return ParameterCount{(n - 1) * (n - 1), n * (n - 1) / 2, (n - 1) * (n - 1)};
}

DoublyStochasticTarget birkhoff_sample(int n, int num_permutations, std::uint64_t seed) {
    if (n < 2) throw BadDimension("birkhoff_sample requires N >= 2");
    if (num_permutations < 1) throw BadDimension("birkhoff_sample requires at least one permutation");
    Rng rng = Rng::stream(seed, 0);

    std::vector<double> weights(num_permutations);
    double total = 0.0;
    for (double& w : weights) {
        w = -std::log(1.0 - rng.uniform());  // Exp(1); Dirichlet(1,..,1) after normalization
        total += w;
    }
    if (total == 0.0) {
        weights.assign(num_permutations, 1.0);
        total = num_permutations;
    }

    DoublyStochasticTarget target{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
    std::vector<int> perm(n);
    for (int p = 0; p < num_permutations; ++p) {
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
        const double w = weights[p] / total;
        for (int i = 0; i < n; ++i)
            target.entries[static_cast<std::size_t>(i) * n + perm[i]] += w;
    }
    return target;
}

int sample_outcome(std::span<const double> probabilities, Rng& rng) {
    if (probabilities.empty()) throw InvalidDistribution("empty probability vector");
    double total = 0.0;
    for (const double p : probabilities) {
        if (!(p >= 0.0)) throw InvalidDistribution("negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidDistribution("probabilities do not sum to 1");

    const double u = rng.uniform() * total;
    double cumulative = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] > 0.0) last_positive = static_cast<int>(i);
        cumulative += probabilities[i];
        if (u < cumulative && probabilities[i] > 0.0) return static_cast<int>(i);
    }
    return last_positive;
}

}  // namespace qmodal
