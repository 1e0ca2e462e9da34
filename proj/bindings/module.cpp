#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmodal/context.hpp"
#include "qmodal/fit.hpp"
#include "qmodal/matrix.hpp"
#include "qmodal/simulate.hpp"
#include "qmodal/spin.hpp"
#include "qmodal/translation.hpp"

namespace py = pybind11;
using namespace qmodal;

namespace {

using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray& arr) {
    if (arr.ndim() != 2) throw DimensionMismatch("expected a 2-D array");
    const auto rows = static_cast<int>(arr.shape(0));
    const auto cols = static_cast<int>(arr.shape(1));
    ComplexMatrix m(rows, cols);
    auto view = arr.unchecked<2>();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = view(i, j);
    return m;
}

py::array_t<std::complex<double>> from_matrix(const ComplexMatrix& m) {
    py::array_t<std::complex<double>> arr({m.rows(), m.cols()});
    auto view = arr.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) view(i, j) = m(i, j);
    return arr;
}

DoublyStochasticTarget to_target(const RealArray& arr) {
    if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1))
        throw InvalidTarget("expected a square 2-D array");
    const int n = static_cast<int>(arr.shape(0));
    DoublyStochasticTarget t{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
    auto view = arr.unchecked<2>();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.entries[static_cast<std::size_t>(i) * n + j] = view(i, j);
    return t;
}

py::array_t<double> target_to_array(const DoublyStochasticTarget& t) {
    py::array_t<double> arr({t.dim, t.dim});
    auto view = arr.mutable_unchecked<2>();
    for (int i = 0; i < t.dim; ++i)
        for (int j = 0; j < t.dim; ++j) view(i, j) = t(i, j);
    return arr;
}

py::array_t<double> probs_to_array(const TransitionMatrix& t) {
    py::array_t<double> arr({t.dim, t.dim});
    auto view = arr.mutable_unchecked<2>();
    for (int i = 0; i < t.dim; ++i)
        for (int j = 0; j < t.dim; ++j) view(i, j) = t(i, j);
    return arr;
}

RotationVector to_rotation(const std::array<double, 3>& u) { return RotationVector{u}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite-dimensional toolkit for contexts, modalities, transition matrices, "
              "unistochastic fits, spin representations and measurement chains";

    py::register_exception<Error>(m, "Error");

    // --- matrix kernel ---------------------------------------------------
    m.def(
        "hermitian_eigendecomposition",
        [](const ComplexArray& h) {
            const HermitianEig eig = hermitian_eigendecomposition(to_matrix(h));
            return py::make_tuple(eig.eigenvalues, from_matrix(eig.eigenvectors));
        },
        py::arg("h"), "Eigenvalues (ascending) and orthonormal eigenvector columns.");
    m.def(
        "unitary_from_generator",
        [](const ComplexArray& h, double t) { return from_matrix(unitary_from_generator(to_matrix(h), t)); },
        py::arg("h"), py::arg("t"), "exp(-i t H) for hermitian H.");
    m.def(
        "gram_schmidt",
        [](const std::vector<std::vector<complexd>>& vectors) {
            return from_matrix(gram_schmidt(vectors));
        },
        py::arg("vectors"));
    m.def(
        "commutator_norm",
        [](const ComplexArray& a, const ComplexArray& b) {
            return commutator_norm(to_matrix(a), to_matrix(b));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "trace_product",
        [](const ComplexArray& a, const ComplexArray& b) {
            return trace_product(to_matrix(a), to_matrix(b));
        },
        py::arg("a"), py::arg("b"));

    // --- contexts ----------------------------------------------------------
    py::class_<Context>(m, "Context")
        .def_readonly("id", &Context::id)
        .def_readonly("outcome_labels", &Context::outcome_labels)
        .def_property_readonly("dim", &Context::dim)
        .def_property_readonly("basis", [](const Context& c) { return from_matrix(c.basis); })
        .def("__repr__", [](const Context& c) {
            return "<Context '" + c.id + "' dim=" + std::to_string(c.dim()) + ">";
        });

    py::class_<Observable>(m, "Observable")
        .def_readonly("context_id", &Observable::context_id)
        .def_readonly("values", &Observable::values)
        .def_property_readonly("operator",
                               [](const Observable& o) { return from_matrix(o.op); });

    py::class_<TransitionMatrix>(m, "TransitionMatrix")
        .def_readonly("source_context", &TransitionMatrix::source_context)
        .def_readonly("target_context", &TransitionMatrix::target_context)
        .def_readonly("dim", &TransitionMatrix::dim)
        .def_property_readonly("probs", &probs_to_array);

    m.def(
        "make_context",
        [](const std::string& id, const ComplexArray& basis, std::vector<std::string> labels) {
            return make_context(id, to_matrix(basis), std::move(labels));
        },
        py::arg("id"), py::arg("basis"), py::arg("labels") = std::vector<std::string>{});
    m.def(
        "context_from_observable",
        [](const ComplexArray& a, const std::string& id) {
            auto [ctx, values] = context_from_observable(to_matrix(a), id);
            return py::make_tuple(std::move(ctx), std::move(values));
        },
        py::arg("observable"), py::arg("id"));
    m.def(
        "csco_context",
        [](const std::vector<ComplexArray>& observables, const std::string& id) {
            std::vector<ComplexMatrix> mats;
            mats.reserve(observables.size());
            for (const auto& o : observables) mats.push_back(to_matrix(o));
            return csco_context(mats, id);
        },
        py::arg("observables"), py::arg("id"));
    m.def(
        "projector",
        [](const Context& ctx, int index) { return from_matrix(projector(ctx, index)); },
        py::arg("context"), py::arg("index"));
    m.def(
        "observable_operator",
        [](const Context& ctx, const std::vector<double>& values) {
            return observable_operator(ctx, values);
        },
        py::arg("context"), py::arg("values"));
    m.def("transition_matrix", &transition_matrix, py::arg("source"), py::arg("target"));
    m.def(
        "context_change",
        [](const Context& a, const Context& b) { return from_matrix(context_change(a, b).sigma); },
        py::arg("source"), py::arg("target"),
        "Unitary mapping the k-th source basis vector to the k-th target one.");
    m.def("context_noncommutativity", &context_noncommutativity, py::arg("e"), py::arg("e1"),
          py::arg("e2"));
    m.def("random_context", &random_context, py::arg("n"), py::arg("seed"), py::arg("id") = "");
    m.def(
        "rotated_context",
        [](const Context& ctx, const ComplexArray& u, const std::string& id) {
            return rotated_context(ctx, to_matrix(u), id);
        },
        py::arg("context"), py::arg("unitary"), py::arg("id"));

    // --- stochastic fits ------------------------------------------------
    py::class_<FitConfig>(m, "FitConfig")
        .def(py::init([](int restarts, int max_iterations, double gradient_tolerance,
                         std::uint64_t seed, double initial_step) {
                 return FitConfig{restarts, max_iterations, gradient_tolerance, seed, initial_step};
             }),
             py::arg("restarts") = 32, py::arg("max_iterations") = 2000,
             py::arg("gradient_tolerance") = 1e-12, py::arg("seed") = 0,
             py::arg("initial_step") = 0.1)
        .def_readwrite("restarts", &FitConfig::restarts)
        .def_readwrite("max_iterations", &FitConfig::max_iterations)
        .def_readwrite("gradient_tolerance", &FitConfig::gradient_tolerance)
        .def_readwrite("seed", &FitConfig::seed)
        .def_readwrite("initial_step", &FitConfig::initial_step);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("residual", &FitResult::residual)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("restarts_run", &FitResult::restarts_run)
        .def_readonly("per_restart_residuals", &FitResult::per_restart_residuals)
        .def_property_readonly("best_matrix",
                               [](const FitResult& r) { return from_matrix(r.best_matrix); });

    m.def(
        "is_doubly_stochastic",
        [](const RealArray& arr, double tol) { return is_doubly_stochastic(to_target(arr), tol); },
        py::arg("matrix"), py::arg("tol") = 1e-10);
    m.def(
        "unistochastic_fit",
        [](const RealArray& target, const FitConfig& cfg) {
            return unistochastic_fit(to_target(target), cfg);
        },
        py::arg("target"), py::arg("config") = FitConfig{});
    m.def(
        "orthostochastic_fit",
        [](const RealArray& target, const FitConfig& cfg) {
            return orthostochastic_fit(to_target(target), cfg);
        },
        py::arg("target"), py::arg("config") = FitConfig{});
    m.def(
        "parameter_count",
        [](int n) {
            const ParameterCount c = parameter_count(n);
            return py::make_tuple(c.polytope_dim, c.orthogonal_dim, c.unitary_overlap_dim);
        },
        py::arg("n"));
    m.def(
        "birkhoff_sample",
        [](int n, int num_permutations, std::uint64_t seed) {
            return target_to_array(birkhoff_sample(n, num_permutations, seed));
        },
        py::arg("n"), py::arg("num_permutations"), py::arg("seed"));

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def_static("stream", &Rng::stream, py::arg("seed"), py::arg("index"))
        .def("uniform", &Rng::uniform)
        .def("gaussian", &Rng::gaussian);
    m.def(
        "sample_outcome",
        [](const std::vector<double>& probabilities, Rng& rng) {
            return sample_outcome(probabilities, rng);
        },
        py::arg("probabilities"), py::arg("rng"));

    // --- group representations -------------------------------------------
    py::class_<SpinRepresentation>(m, "SpinRepresentation")
        .def_property_readonly("j", &SpinRepresentation::j)
        .def_readonly("dim", &SpinRepresentation::dim)
        .def_property_readonly("jx", [](const SpinRepresentation& r) { return from_matrix(r.jx); })
        .def_property_readonly("jy", [](const SpinRepresentation& r) { return from_matrix(r.jy); })
        .def_property_readonly("jz", [](const SpinRepresentation& r) { return from_matrix(r.jz); });

    m.def("spin_matrices", &spin_matrices, py::arg("j"));
    m.def(
        "rotation_unitary",
        [](const SpinRepresentation& rep, const std::array<double, 3>& u) {
            return from_matrix(rotation_unitary(rep, to_rotation(u)));
        },
        py::arg("rep"), py::arg("u"));
    m.def(
        "rotation_compose",
        [](const std::array<double, 3>& u1, const std::array<double, 3>& u2) {
            return rotation_compose(to_rotation(u1), to_rotation(u2)).u;
        },
        py::arg("u1"), py::arg("u2"));
    m.def(
        "representation_defect",
        [](const SpinRepresentation& rep, const std::array<double, 3>& u1,
           const std::array<double, 3>& u2) {
            return representation_defect(rep, to_rotation(u1), to_rotation(u2));
        },
        py::arg("rep"), py::arg("u1"), py::arg("u2"));
    m.def(
        "physical_observable",
        [](const SpinRepresentation& rep, const std::array<double, 3>& axis, double hbar) {
            return from_matrix(physical_observable(rep, axis, PhysicalScale{hbar}));
        },
        py::arg("rep"), py::arg("axis"), py::arg("hbar") = 1.0);
    m.def("spin_context", &spin_context, py::arg("rep"), py::arg("axis"), py::arg("id"));

    py::class_<CyclicTranslationRep>(m, "CyclicTranslationRep")
        .def_readonly("n", &CyclicTranslationRep::n)
        .def_readonly("position_context", &CyclicTranslationRep::position_context)
        .def_readonly("momentum_context", &CyclicTranslationRep::momentum_context)
        .def_property_readonly("p_dimensionless", [](const CyclicTranslationRep& r) {
            return from_matrix(r.p_dimensionless);
        });
    m.def("cyclic_translation_rep", &cyclic_translation_rep, py::arg("n"));
    m.def(
        "translation_unitary",
        [](const CyclicTranslationRep& rep, double a) {
            return from_matrix(translation_unitary(rep, a));
        },
        py::arg("rep"), py::arg("a") = 1.0);

    // --- measurement simulation -----------------------------------------
    py::class_<SequenceResult>(m, "SequenceResult")
        .def_readonly("shots", &SequenceResult::shots)
        .def_readonly("chain_ids", &SequenceResult::chain_ids)
        .def_property_readonly("counts",
                               [](const SequenceResult& r) {
                                   py::dict out;
                                   for (const auto& [tuple, count] : r.counts)
                                       out[py::tuple(py::cast(tuple))] = count;
                                   return out;
                               })
        .def_property_readonly("frequencies", [](const SequenceResult& r) {
            py::dict out;
            for (const auto& [tuple, freq] : r.empirical_frequencies())
                out[py::tuple(py::cast(tuple))] = freq;
            return out;
        });

    m.def("measure_outcome", &measure_outcome, py::arg("current_context"),
          py::arg("current_index"), py::arg("target"), py::arg("rng"),
          "Outcome of measuring target from the given modality; repeatable when ids match.");
    m.def("run_sequence", &run_sequence, py::arg("initial_context"), py::arg("initial_index"),
          py::arg("chain"), py::arg("shots"), py::arg("seed"));
    m.def(
        "estimate_reciprocity",
        [](const Context& e, const Context& ep, int i, int j, long long shots,
           std::uint64_t seed) {
            const ReciprocityEstimate est = estimate_reciprocity(e, ep, i, j, shots, seed);
            return py::make_tuple(est.p_forward, est.p_reverse, est.stderr_max);
        },
        py::arg("e"), py::arg("e_prime"), py::arg("i"), py::arg("j"), py::arg("shots"),
        py::arg("seed"));
    m.def(
        "classical_refinement_demo",
        [](double theta, long long shots, std::uint64_t seed) {
            const RefinementReport r = classical_refinement_demo(theta, shots, seed);
            py::dict out;
            out["quantum_return_prob"] = r.quantum_return_prob;
            out["classical_return_prob"] = r.classical_return_prob;
            out["analytic_quantum"] = r.analytic_quantum;
            return out;
        },
        py::arg("theta"), py::arg("shots"), py::arg("seed"));
    m.def(
        "quantum_dice_demo",
        [](const std::array<double, 3>& u, long long shots, std::uint64_t seed) {
            const DiceReport r = quantum_dice_demo(to_rotation(u), shots, seed);
            py::dict out;
            out["labels"] = r.labels;
            out["frequencies"] = r.frequencies;
            out["expected"] = r.expected;
            return out;
        },
        py::arg("u"), py::arg("shots"), py::arg("seed"));
}
