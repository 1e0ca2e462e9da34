#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmodal/matrix.hpp"
#include "qmodal/rng.hpp"

namespace qmodal {

struct DoublyStochasticTarget {
    int dim = 0;
    std::vector<double> entries;  // row-major

    double operator()(int i, int j) const {
        return entries[static_cast<std::size_t>(i) * dim + j];
    }
};

struct FitConfig {
    int restarts = 32;
    int max_iterations = 2000;
    double gradient_tolerance = 1e-12;
    std::uint64_t seed = 0;
    double initial_step = 0.1;
};

// Residual at or below this value counts as a realized target.
constexpr double kFeasibleResidual = 1e-10;

struct FitResult {
    ComplexMatrix best_matrix;  // unitary (or real orthogonal)
    double residual = 0.0;      // sum_ij (|U_ij|^2 - B_ij)^2
    int restarts_run = 0;
    bool converged = false;     // residual <= kFeasibleResidual
    std::vector<double> per_restart_residuals;
};

bool is_doubly_stochastic(const DoublyStochasticTarget& m, double tol);
bool is_doubly_stochastic(int dim, std::span<const double> entries, double tol);

// Riemannian gradient descent over the unitary group with exponential-map
// retraction and backtracking line search, restarted from Haar-random
// points. Deterministic given cfg.seed.
FitResult unistochastic_fit(const DoublyStochasticTarget& b, const FitConfig& cfg);

// Same optimization restricted to real orthogonal matrices.
FitResult orthostochastic_fit(const DoublyStochasticTarget& b, const FitConfig& cfg);

struct ParameterCount {
    int polytope_dim;         // (N-1)^2, dimension of the Birkhoff polytope
    int orthogonal_dim;       // N(N-1)/2
    int unitary_overlap_dim;  // (N-1)^2 after the phase quotient
};

ParameterCount parameter_count(int n);

// Convex combination of uniformly random permutation matrices with
// Dirichlet(1,...,1) weights.
DoublyStochasticTarget birkhoff_sample(int n, int num_permutations, std::uint64_t seed);

// Inverse-CDF draw from a probability vector (renormalized by its sum).
int sample_outcome(std::span<const double> probabilities, Rng& rng);

namespace detail {

// One gradient-descent trajectory from the given start; exposed so tests
// can check per-iteration monotonicity. residual_trace gets one entry per
// accepted iterate, including the start.
struct RestartOutcome {
    ComplexMatrix matrix;
    double residual;
};

RestartOutcome fit_single_restart(const DoublyStochasticTarget& b, ComplexMatrix start,
                                  bool orthogonal, const FitConfig& cfg,
                                  std::vector<double>* residual_trace = nullptr);

ComplexMatrix haar_unitary(int n, Rng& rng);
ComplexMatrix random_orthogonal(int n, Rng& rng);

}  // namespace detail

}  // namespace qmodal
