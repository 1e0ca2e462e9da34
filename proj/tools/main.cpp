#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmodal/context.hpp"
#include "qmodal/fit.hpp"
#include "qmodal/serialize.hpp"
#include "qmodal/simulate.hpp"
#include "qmodal/spin.hpp"
#include "qmodal/translation.hpp"

namespace {

using namespace qmodal;

constexpr double kPi = 3.141592653589793238462643383279502884;

struct RunConfig {
    std::uint64_t seed = 42;
    double tol = 1e-10;
    long long shots = 100000;
    int restarts = 32;
    std::string format = "json";
    std::string out_path;
};

void add_run_config(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "RNG seed (default 42)");
    cmd->add_option("--tol", cfg.tol, "check tolerance (default 1e-10)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--shots", cfg.shots, "Monte Carlo shots (default 100000)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--restarts", cfg.restarts, "optimizer restarts (default 32)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", cfg.format, "output format (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", cfg.out_path, "output file (default stdout)");
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty())
        std::cout << text;
    else
        write_text_file(cfg.out_path, text);
}

std::vector<double> parse_vector3(const std::string& text) {
    std::vector<double> values;
    std::string cell;
    std::istringstream stream(text);
    while (std::getline(stream, cell, ',')) {
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ParseError("bad component '" + cell + "' in vector argument");
        }
    }
    if (values.size() != 3) throw ParseError("expected three comma-separated components");
    return values;
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// --- transition ------------------------------------------------------

int cmd_transition(const std::string& file_a, const std::string& file_b, const RunConfig& cfg) {
    const Context a = context_from_json(json::parse(read_text_file(file_a)));
    const Context b = context_from_json(json::parse(read_text_file(file_b)));
    const TransitionMatrix t = transition_matrix(a, b);

    double max_deviation = 0.0;
    for (int i = 0; i < t.dim; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < t.dim; ++j) {
            row += t(i, j);
            col += t(j, i);
        }
        max_deviation = std::max({max_deviation, std::abs(row - 1.0), std::abs(col - 1.0)});
    }
    const bool pass = is_doubly_stochastic(t.dim, t.probs, cfg.tol);

    if (cfg.format == "csv") {
        std::string text = transition_to_csv(t);
        text += "# doubly_stochastic=" + std::string(pass ? "true" : "false") +
                " max_deviation=" + format_double(max_deviation) + "\n";
        emit(cfg, text);
    } else {
        json report = transition_to_json(t);
        report["verdict"] = json{{"doubly_stochastic", pass},
                                 {"max_deviation", max_deviation},
                                 {"tol", cfg.tol}};
        emit(cfg, dump_json(report));
    }
    return 0;
}

// --- fit --------------------------------------------------------------

int cmd_fit(const std::string& target_file, const std::string& mode, const RunConfig& cfg) {
    const DoublyStochasticTarget target = target_from_csv(read_text_file(target_file));
    if (!is_doubly_stochastic(target, cfg.tol))
        throw InvalidTarget("target is not doubly stochastic within tolerance");

    FitConfig fit_cfg;
    fit_cfg.restarts = cfg.restarts;
    fit_cfg.seed = cfg.seed;
    const FitResult result = mode == "orthostochastic" ? orthostochastic_fit(target, fit_cfg)
                                                       : unistochastic_fit(target, fit_cfg);

    if (cfg.format == "csv") {
        std::string text = "# residual=" + format_double(result.residual) +
                           " converged=" + (result.converged ? std::string("true") : "false") +
                           " restarts=" + std::to_string(result.restarts_run) + "\n";
        text += "restart,residual\n";
        for (std::size_t r = 0; r < result.per_restart_residuals.size(); ++r)
            text += std::to_string(r) + "," + format_double(result.per_restart_residuals[r]) + "\n";
        emit(cfg, text);
    } else {
        emit(cfg, dump_json(fit_result_to_json(result)));
    }
    return result.converged ? 0 : 3;
}

// --- spin --------------------------------------------------------------

int cmd_spin(double j, const std::string& u_text, double hbar, const std::string& axis_text,
             const RunConfig& cfg) {
    const SpinRepresentation rep = spin_matrices(j);
    const auto uv = parse_vector3(u_text);
    const RotationVector u{{uv[0], uv[1], uv[2]}};
    const auto av = parse_vector3(axis_text);
    const std::array<double, 3> axis{av[0], av[1], av[2]};

    const double scale = std::max(1.0, rep.jz.frobenius_norm());
    const ComplexMatrix ijz = complexd(0.0, 1.0) * rep.jz;
    const ComplexMatrix ijx = complexd(0.0, 1.0) * rep.jx;
    const ComplexMatrix ijy = complexd(0.0, 1.0) * rep.jy;
    const double comm_xy = (rep.jx * rep.jy - rep.jy * rep.jx - ijz).frobenius_norm() / scale;
    const double comm_yz = (rep.jy * rep.jz - rep.jz * rep.jy - ijx).frobenius_norm() / scale;
    const double comm_zx = (rep.jz * rep.jx - rep.jx * rep.jz - ijy).frobenius_norm() / scale;

    const double jj = rep.j();
    const ComplexMatrix casimir = rep.jx * rep.jx + rep.jy * rep.jy + rep.jz * rep.jz -
                                  (jj * (jj + 1.0)) * ComplexMatrix::identity(rep.dim);
    const double casimir_residual = casimir.frobenius_norm() / scale;

    // global phase of U_u against the canonicalized rotation it represents
    const ComplexMatrix actual = rotation_unitary(rep, u);
    const ComplexMatrix canonical = rotation_unitary(rep, rotation_compose(u, RotationVector{}));
    const complexd global_phase = relative_phase(canonical, actual);

    // 2 pi rotation about the axis of u (z if zero): phase must be (-1)^{2j}
    std::array<double, 3> rot_axis{0.0, 0.0, 1.0};
    if (u.angle() > 1e-12)
        rot_axis = {u.u[0] / u.angle(), u.u[1] / u.angle(), u.u[2] / u.angle()};
    const ComplexMatrix full_turn = rotation_unitary(
        rep, RotationVector{{2.0 * kPi * rot_axis[0], 2.0 * kPi * rot_axis[1],
                             2.0 * kPi * rot_axis[2]}});
    const complexd two_pi_phase = full_turn.trace() / static_cast<double>(rep.dim);
    const double expected_sign = (rep.twoj % 2 == 0) ? 1.0 : -1.0;
    const double two_pi_error = std::abs(two_pi_phase - complexd(expected_sign, 0.0));

    const RotationVector half{{0.5 * u.u[0], 0.5 * u.u[1], 0.5 * u.u[2]}};
    const double defect = representation_defect(rep, half, half);

    const ComplexMatrix observable = physical_observable(rep, axis, PhysicalScale{hbar});
    const HermitianEig observable_eig = hermitian_eigendecomposition(observable);

    const bool pass = comm_xy <= cfg.tol && comm_yz <= cfg.tol && comm_zx <= cfg.tol &&
                      casimir_residual <= cfg.tol && two_pi_error <= std::max(cfg.tol, 1e-9) &&
                      defect <= std::max(cfg.tol, 1e-8);

    if (cfg.format == "csv") {
        std::string text = "check,value,threshold,pass\n";
        auto line = [&](const std::string& name, double value, double threshold) {
            text += name + "," + format_double(value) + "," + format_double(threshold) + "," +
                    (value <= threshold ? "true" : "false") + "\n";
        };
        line("commutator_xy", comm_xy, cfg.tol);
        line("commutator_yz", comm_yz, cfg.tol);
        line("commutator_zx", comm_zx, cfg.tol);
        line("casimir", casimir_residual, cfg.tol);
        line("two_pi_phase_error", two_pi_error, std::max(cfg.tol, 1e-9));
        line("representation_defect", defect, std::max(cfg.tol, 1e-8));
        emit(cfg, text);
    } else {
        json spectrum = json::array();
        for (const double v : observable_eig.eigenvalues) spectrum.push_back(v);
        json report{{"representation", spin_representation_to_json(rep)},
                    {"u", json::array({u.u[0], u.u[1], u.u[2]})},
                    {"hbar", hbar},
                    {"axis", json::array({axis[0], axis[1], axis[2]})},
                    {"checks",
                     json{{"commutator_xy", comm_xy},
                          {"commutator_yz", comm_yz},
                          {"commutator_zx", comm_zx},
                          {"casimir", casimir_residual},
                          {"global_phase", json{{"re", global_phase.real()}, {"im", global_phase.imag()}}},
                          {"two_pi_phase", json{{"re", two_pi_phase.real()}, {"im", two_pi_phase.imag()}}},
                          {"two_pi_phase_expected", expected_sign},
                          {"two_pi_phase_error", two_pi_error},
                          {"representation_defect", defect},
                          {"tol", cfg.tol},
                          {"pass", pass}}},
                    {"physical_observable", matrix_to_json(observable)},
                    {"spectrum", std::move(spectrum)}};
        emit(cfg, dump_json(report));
    }
    return 0;
}

// --- simulate -----------------------------------------------------------

int cmd_simulate(const std::string& chain_file, const RunConfig& cfg, bool shots_overridden) {
    const json spec = json::parse(read_text_file(chain_file));
    const std::filesystem::path base = std::filesystem::path(chain_file).parent_path();

    auto load_context = [&base](const std::string& rel) {
        const std::filesystem::path p = base / rel;
        return context_from_json(json::parse(read_text_file(p.string())));
    };

    try {
        const Context initial = load_context(spec.at("initial").at("context").get<std::string>());
        const int index = spec.at("initial").at("index").get<int>();
        std::vector<Context> chain;
        for (const auto& entry : spec.at("chain")) chain.push_back(load_context(entry.get<std::string>()));
        long long shots = cfg.shots;
        if (!shots_overridden && spec.contains("shots")) shots = spec.at("shots").get<long long>();

        const SequenceResult result = run_sequence(initial, index, chain, shots, cfg.seed);
        emit(cfg, cfg.format == "csv" ? sequence_result_to_csv(result)
                                      : dump_json(sequence_result_to_json(result)));
        return 0;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad chain spec: ") + e.what());
    }
}

// --- demos ----------------------------------------------------------------

int demo_dice(const std::string& u_text, const RunConfig& cfg) {
    const auto uv = parse_vector3(u_text);
    const DiceReport report =
        quantum_dice_demo(RotationVector{{uv[0], uv[1], uv[2]}}, cfg.shots, cfg.seed);
    if (cfg.format == "csv") {
        std::string text = "label,frequency,expected\n";
        for (std::size_t k = 0; k < report.labels.size(); ++k)
            text += report.labels[k] + "," + format_double(report.frequencies[k]) + "," +
                    format_double(report.expected[k]) + "\n";
        emit(cfg, text);
    } else {
        emit(cfg, dump_json(json{{"u", json::array({uv[0], uv[1], uv[2]})},
                                 {"shots", cfg.shots},
                                 {"labels", report.labels},
                                 {"frequencies", report.frequencies},
                                 {"expected", report.expected}}));
    }
    return 0;
}

int demo_refinement(int steps, const RunConfig& cfg) {
    json rows = json::array();
    std::string text = "theta,quantum,classical,analytic\n";
    for (int k = 0; k < steps; ++k) {
        const double theta = kPi * static_cast<double>(k) / static_cast<double>(steps - 1);
        const RefinementReport r =
            classical_refinement_demo(theta, cfg.shots, mix_seed(cfg.seed, 1000 + k));
        text += format_double(theta) + "," + format_double(r.quantum_return_prob) + "," +
                format_double(r.classical_return_prob) + "," + format_double(r.analytic_quantum) +
                "\n";
        rows.push_back(json{{"theta", theta},
                            {"quantum", r.quantum_return_prob},
                            {"classical", r.classical_return_prob},
                            {"analytic", r.analytic_quantum}});
    }
    if (cfg.format == "csv")
        emit(cfg, text);
    else
        emit(cfg, dump_json(json{{"shots", cfg.shots}, {"points", std::move(rows)}}));
    return 0;
}

int demo_reciprocity(const RunConfig& cfg) {
    json rows = json::array();
    std::string text = "dim,i,j,p_forward,p_reverse,stderr,agree\n";
    int tuple_index = 0;
    for (const int n : {2, 4}) {
        for (int t = 0; t < 25; ++t, ++tuple_index) {
            const Context e = random_context(n, mix_seed(cfg.seed, 2 * tuple_index), "E");
            const Context ep = random_context(n, mix_seed(cfg.seed, 2 * tuple_index + 1), "Ep");
            Rng picker = Rng::stream(cfg.seed, 4000 + tuple_index);
            const int i = static_cast<int>(picker.below(n));
            const int j = static_cast<int>(picker.below(n));
            const ReciprocityEstimate est =
                estimate_reciprocity(e, ep, i, j, cfg.shots, mix_seed(cfg.seed, 5000 + tuple_index));
            const bool agree = std::abs(est.p_forward - est.p_reverse) <= 5.0 * est.stderr_max;
            text += std::to_string(n) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
                    format_double(est.p_forward) + "," + format_double(est.p_reverse) + "," +
                    format_double(est.stderr_max) + "," + (agree ? "true" : "false") + "\n";
            rows.push_back(json{{"dim", n},
                                {"i", i},
                                {"j", j},
                                {"p_forward", est.p_forward},
                                {"p_reverse", est.p_reverse},
                                {"stderr", est.stderr_max},
                                {"agree", agree}});
        }
    }
    if (cfg.format == "csv")
        emit(cfg, text);
    else
        emit(cfg, dump_json(json{{"shots", cfg.shots}, {"tuples", std::move(rows)}}));
    return 0;
}

int demo_atlas(int dim, int num_targets, const RunConfig& cfg) {
    FitConfig fit_cfg;
    fit_cfg.restarts = cfg.restarts;
    fit_cfg.seed = cfg.seed;

    json rows = json::array();
    std::string text = "target_hash,unistochastic_residual,orthostochastic_residual\n";
    const int mixing = (dim - 1) * (dim - 1) + 1;  // enough permutations to reach the interior
    for (int t = 0; t < num_targets; ++t) {
        const DoublyStochasticTarget target = birkhoff_sample(dim, mixing, mix_seed(cfg.seed, t));
        std::string csv;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                csv += format_double(target(i, j)) + (j + 1 == dim ? "\n" : ",");
        const std::string hash = hex64(fnv1a_hash(csv));
        const FitResult uni = unistochastic_fit(target, fit_cfg);
        const FitResult ortho = orthostochastic_fit(target, fit_cfg);
        text += hash + "," + format_double(uni.residual) + "," + format_double(ortho.residual) + "\n";
        rows.push_back(json{{"target_hash", hash},
                            {"unistochastic_residual", uni.residual},
                            {"orthostochastic_residual", ortho.residual}});
    }
    if (cfg.format == "csv")
        emit(cfg, text);
    else
        emit(cfg, dump_json(json{{"dim", dim}, {"targets", std::move(rows)}}));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional toolkit for contexts, modalities and transition matrices"};
    app.require_subcommand(1);

    RunConfig cfg;

    // transition
    std::string file_a, file_b;
    CLI::App* transition = app.add_subcommand(
        "transition", "transition matrix between two context files, with verdict");
    transition->add_option("context_a", file_a, "source context JSON")->required();
    transition->add_option("context_b", file_b, "target context JSON")->required();
    add_run_config(transition, cfg);

    // fit
    std::string target_file, fit_mode = "unistochastic";
    CLI::App* fit = app.add_subcommand("fit", "fit a unitary/orthogonal matrix to a target");
    fit->add_option("target", target_file, "doubly stochastic target CSV")->required();
    fit->add_option("--mode", fit_mode, "unistochastic or orthostochastic")
        ->check(CLI::IsMember({"unistochastic", "orthostochastic"}));
    add_run_config(fit, cfg);

    // spin
    double spin_j = 0.5, hbar = 1.0;
    std::string u_text = "0,0,0", axis_text = "0,0,1";
    CLI::App* spin = app.add_subcommand("spin", "representation checks and physical observable");
    spin->add_option("j", spin_j, "half-integer spin")->required();
    spin->add_option("u", u_text, "rotation vector ux,uy,uz")->required();
    spin->add_option("--hbar", hbar, "physical scale (default 1.0)");
    spin->add_option("--axis", axis_text, "observable axis (default 0,0,1)");
    add_run_config(spin, cfg);

    // simulate
    std::string chain_file;
    CLI::App* simulate = app.add_subcommand("simulate", "run a measurement chain spec");
    simulate->add_option("chain", chain_file, "chain spec JSON")->required();
    add_run_config(simulate, cfg);

    // demo
    std::string demo_name, demo_u = "1.5707963267948966,0,0";
    int atlas_dim = 3, atlas_targets = 50, refinement_steps = 16;
    CLI::App* demo = app.add_subcommand("demo", "named demonstration reports");
    demo->add_option("name", demo_name, "dice, refinement, reciprocity or atlas")->required();
    demo->add_option("--u", demo_u, "dice rotation vector");
    demo->add_option("--dim", atlas_dim, "atlas target dimension (default 3)")
        ->check(CLI::PositiveNumber);
    demo->add_option("--targets", atlas_targets, "atlas target count (default 50)")
        ->check(CLI::PositiveNumber);
    demo->add_option("--steps", refinement_steps, "refinement sweep points (default 16)")
        ->check(CLI::Range(2, 10000));
    add_run_config(demo, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (transition->parsed()) return cmd_transition(file_a, file_b, cfg);
        if (fit->parsed()) return cmd_fit(target_file, fit_mode, cfg);
        if (spin->parsed()) return cmd_spin(spin_j, u_text, hbar, axis_text, cfg);
        if (simulate->parsed())
            return cmd_simulate(chain_file, cfg, simulate->count("--shots") > 0);
        if (demo->parsed()) {
            if (demo_name == "dice") return demo_dice(demo_u, cfg);
            if (demo_name == "refinement") return demo_refinement(refinement_steps, cfg);
            if (demo_name == "reciprocity") return demo_reciprocity(cfg);
            if (demo_name == "atlas") return demo_atlas(atlas_dim, atlas_targets, cfg);
            std::cerr << "unknown demo '" << demo_name << "'\n";
            return 2;
        }
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
