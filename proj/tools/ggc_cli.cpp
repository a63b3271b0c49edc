// Command-line front end: catalog verification, numerical synthesis,
// trapped-ion physics computations, and circuit export.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>

#include "ggc/catalog.hpp"
#include "ggc/circuit.hpp"
#include "ggc/ionphys.hpp"
#include "ggc/synth.hpp"

using nlohmann::json;
using namespace ggc;
using std::numbers::pi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_angle(const std::string& token) {
    try {
        return angle_from_token(token);
    } catch (const std::exception& e) {
        throw UsageError(std::string("bad angle '") + token + "': " + e.what());
    }
}

std::string matrix_text(const Matrix& m) {
    // Row-major complex pairs "re im", one row per line.
    std::string out;
    char buf[80];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g", m(r, c).real(), m(r, c).imag());
            if (c) out += "  ";
            out += buf;
        }
        out += '\n';
    }
    return out;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

json real_matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open output file: " + path);
    out << text;
}

Matrix resolve_target(const std::string& name) {
    if (!is_target_name(name)) throw UsageError("unknown target gate: " + name);
    return target_matrix(name);
}

// ---- verify ----

struct VerifyArgs {
    std::string catalog_key;
    std::string circuit_file;
    std::string target;
    double tol = 1e-10;
    bool as_json = false;
};

int cmd_verify(const VerifyArgs& args) {
    if (args.catalog_key.empty() == args.circuit_file.empty())
        throw UsageError("verify needs exactly one of --catalog or --circuit");
    Circuit c;
    if (!args.catalog_key.empty()) {
        try {
            c = catalog_circuit(args.catalog_key);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    } else {
        try {
            c = load_circuit(args.circuit_file);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    std::string target_name = args.target;
    if (target_name.empty() && !args.catalog_key.empty())
        target_name = catalog_target(args.catalog_key);
    if (target_name.empty()) throw UsageError("verify needs --target");

    const auto report = verify(c, resolve_target(target_name), args.tol);
    if (args.as_json) {
        json j{{"circuit", c.name},
               {"target", target_name},
               {"tolerance", args.tol},
               {"aligned_distance", report.aligned_distance},
               {"raw_distance", report.raw_distance},
               {"aligning_phase", report.aligning_phase},
               {"passed", report.passed}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("circuit:          %s (%d qubits, %zu ops)\n", c.name.c_str(), c.n_qubits,
                    c.ops.size());
        std::printf("target:           %s\n", target_name.c_str());
        std::printf("aligned distance: %.3e\n", report.aligned_distance);
        std::printf("raw distance:     %.3e\n", report.raw_distance);
        std::printf("result:           %s (tol %.1e)\n", report.passed ? "PASS" : "FAIL",
                    args.tol);
    }
    return report.passed ? kExitOk : kExitFailed;
}

// ---- synthesize ----

struct SynthArgs {
    std::string target;
    std::string coupler = "global-g";
    int max_gates = 3;
    int restarts = 200;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    bool allow_one_nonglobal = false;
    int workers = 0;
    std::string out_file;
    bool as_json = false;
};

int cmd_synthesize(const SynthArgs& args) {
    SynthesisProblem problem;
    problem.target = resolve_target(args.target);
    const auto kind = coupler_from_name(args.coupler);
    if (!kind) throw UsageError("unknown coupler: " + args.coupler);
    problem.coupler.kind = *kind;
    problem.coupler.n_qubits = qubit_count_of_dim(problem.target.rows());
    if (*kind == CouplerKind::CouplingU) {
        if (problem.coupler.n_qubits != 3)
            throw UsageError("coupling-u synthesis is wired for 3-qubit targets");
        const Eigen::MatrixXd j = relabelled_couplings_n3();
        problem.coupler.couplings.assign(9, 0.0);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                problem.coupler.couplings[static_cast<size_t>(r) * 3 + c] = j(r, c);
    }
    problem.max_entanglers = args.max_gates;
    problem.restarts_per_count = args.restarts;
    problem.tolerance = args.tol;
    problem.seed = args.seed;
    problem.allow_one_nonglobal = args.allow_one_nonglobal;
    problem.n_workers = args.workers;
    try {
        problem.coupler.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }

    const SynthesisResult result = synthesize(problem);
    if (!args.out_file.empty() && result.converged) save_circuit(result.circuit, args.out_file);

    if (args.as_json) {
        json j{{"target", args.target},
               {"coupler", args.coupler},
               {"seed", args.seed},
               {"converged", result.converged},
               {"entangler_count", result.entangler_count},
               {"restarts_used", result.restarts_used},
               {"residual_aligned", result.residual_aligned},
               {"residual_raw", result.residual_raw},
               {"circuit", json::parse(serialize(result.circuit))}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("target:           %s over %s (seed %llu)\n", args.target.c_str(),
                    args.coupler.c_str(), static_cast<unsigned long long>(args.seed));
        std::printf("entangler count:  %d\n", result.entangler_count);
        std::printf("restarts used:    %d\n", result.restarts_used);
        std::printf("aligned residual: %.3e\n", result.residual_aligned);
        std::printf("converged:        %s\n", result.converged ? "yes" : "no");
        if (!args.out_file.empty() && result.converged)
            std::printf("circuit written:  %s\n", args.out_file.c_str());
    }
    return result.converged ? kExitOk : kExitFailed;
}

// ---- physics ----

struct CouplingsArgs {
    int ions = 3;
    bool relabel = false;
    double gradient_b = 1.0, g_factor = 2.0, bohr_magneton = 1.0, axial_frequency = 1.0;
    std::string out_file;
    bool as_json = false;
};

int cmd_couplings(const CouplingsArgs& args) {
    Eigen::MatrixXd j;
    try {
        if (args.relabel) {
            if (args.ions != 3) throw UsageError("--relabel applies to --ions 3");
            j = relabelled_couplings_n3();
        } else {
            TrapSpec spec;
            spec.n_ions = args.ions;
            spec.gradient_b = args.gradient_b;
            spec.g_factor = args.g_factor;
            spec.bohr_magneton = args.bohr_magneton;
            spec.axial_frequency = args.axial_frequency;
            spec.validate();
            j = magic_couplings(spec);
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    std::string text;
    for (Eigen::Index r = 0; r < j.rows(); ++r) {
        for (Eigen::Index c = 0; c < j.cols(); ++c) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%s%.12g", c ? "  " : "", j(r, c));
            text += buf;
        }
        text += '\n';
    }
    if (!args.out_file.empty()) write_file(args.out_file, text);
    if (args.as_json) {
        json out{{"ions", args.ions}, {"relabelled", args.relabel}, {"couplings", real_matrix_json(j)}};
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("spin-spin couplings (%d ions%s):\n%s", args.ions,
                    args.relabel ? ", relabelled" : "", text.c_str());
    }
    return kExitOk;
}

struct SmGateArgs {
    double g = 0.25;
    double delta = 1.0;
    std::string phi_token;  // alternative to --g: target gate angle
    int ions = 3;
    std::string basis = "x";
    std::string out_file;
    bool as_json = false;
};

int cmd_sm_gate(const SmGateArgs& args) {
    BichromaticParams p;
    p.delta = args.delta;
    p.n_ions = args.ions;
    if (args.basis == "x")
        p.basis = SpinBasis::X;
    else if (args.basis == "z")
        p.basis = SpinBasis::Z;
    else
        throw UsageError("--basis must be x or z");
    if (!args.phi_token.empty()) {
        const double phi = parse_angle(args.phi_token);
        if (phi <= 0) throw UsageError("--phi must be positive");
        p.g = std::abs(args.delta) * std::sqrt(phi / (4 * pi));
    } else {
        p.g = args.g;
    }
    Matrix u;
    try {
        p.validate();
        u = sm_propagator(p);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    const double phi = 4 * pi * p.g * p.g / (p.delta * p.delta);
    if (!args.out_file.empty()) write_file(args.out_file, matrix_text(u));
    if (args.as_json) {
        json out{{"g", p.g},
                 {"delta", p.delta},
                 {"ions", p.n_ions},
                 {"basis", args.basis},
                 {"gate_angle", phi},
                 {"gate_angle_token", angle_to_token(phi)},
                 {"propagator", matrix_json(u)}};
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("bichromatic propagator at t = 2pi/delta, %d ions, %s basis\n", p.n_ions,
                    args.basis.c_str());
        std::printf("g = %.12g, delta = %.12g  ->  gate angle %s\n", p.g, p.delta,
                    angle_to_token(phi).c_str());
        std::printf("%s", matrix_text(u).c_str());
    }
    return kExitOk;
}

struct FockCheckArgs {
    double g = 0.1;
    double delta = 1.0;
    int ions = 3;
    int cutoff = 20;
    int steps_per_period = 1000;
    bool as_json = false;
};

int cmd_fock_check(const FockCheckArgs& args) {
    BichromaticParams p;
    p.g = args.g;
    p.delta = args.delta;
    p.n_ions = args.ions;
    p.fock_cutoff = args.cutoff;
    p.steps_per_period = args.steps_per_period;
    p.basis = SpinBasis::X;
    FockResult r;
    Matrix closed;
    try {
        p.validate();
        closed = sm_propagator(p);
        r = fock_simulate(p, 2 * pi / std::abs(p.delta));
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const double deviation = (r.spin_block - closed).cwiseAbs().maxCoeff();
    const bool passed = deviation < 1e-6;
    if (args.as_json) {
        json out{{"g", p.g},
                 {"delta", p.delta},
                 {"ions", p.n_ions},
                 {"cutoff", p.fock_cutoff},
                 {"deviation", deviation},
                 {"motional_purity", r.motional_purity},
                 {"high_fock_population", r.max_high_fock_population},
                 {"unitarity_drift", r.unitarity_drift},
                 {"passed", passed}};
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("closed-form vs integrated propagator, %d ions, cutoff %d\n", p.n_ions,
                    p.fock_cutoff);
        std::printf("max entry deviation:  %.3e\n", deviation);
        std::printf("motional purity:      %.12f\n", r.motional_purity);
        std::printf("high-Fock population: %.3e\n", r.max_high_fock_population);
        std::printf("unitarity drift:      %.3e\n", r.unitarity_drift);
        std::printf("result:               %s\n", passed ? "PASS" : "FAIL");
    }
    return passed ? kExitOk : kExitFailed;
}

// ---- export ----

struct ExportArgs {
    std::string catalog_key;
    std::string out_file;
};

int cmd_export(const ExportArgs& args) {
    Circuit c;
    try {
        c = catalog_circuit(args.catalog_key);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (args.out_file.empty()) {
        std::printf("%s\n", serialize(c).c_str());
    } else {
        save_circuit(c, args.out_file);
        std::printf("wrote %s (%zu ops)\n", args.out_file.c_str(), c.ops.size());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Few-qubit circuit constructions from global entangling gates"};
    app.require_subcommand(1);

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "Check a circuit against a target gate");
    verify_cmd->add_option("--catalog", verify_args.catalog_key, "built-in circuit key");
    verify_cmd->add_option("--circuit", verify_args.circuit_file, "circuit JSON file");
    verify_cmd->add_option("--target", verify_args.target, "target gate name");
    verify_cmd->add_option("--tol", verify_args.tol, "aligned-distance tolerance");
    verify_cmd->add_flag("--json", verify_args.as_json, "JSON report");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synthesize", "Search for a circuit numerically");
    synth_cmd->add_option("--target", synth_args.target, "target gate name")->required();
    synth_cmd->add_option("--coupler", synth_args.coupler,
                          "global-g | global-gg | nearest-n | coupling-u");
    synth_cmd->add_option("--max-gates", synth_args.max_gates, "largest entangler count tried");
    synth_cmd->add_option("--restarts", synth_args.restarts, "random restarts per count");
    synth_cmd->add_option("--tol", synth_args.tol, "aligned-distance tolerance");
    synth_cmd->add_option("--seed", synth_args.seed, "random seed");
    synth_cmd->add_flag("--allow-one-nonglobal", synth_args.allow_one_nonglobal,
                        "also try swapping one entangler for a single-pair coupler");
    synth_cmd->add_option("--workers", synth_args.workers, "worker threads (0 = auto)");
    synth_cmd->add_option("--out", synth_args.out_file, "write the circuit here on success");
    synth_cmd->add_flag("--json", synth_args.as_json, "JSON report");

    auto* physics_cmd = app.add_subcommand("physics", "Trapped-ion computations");
    physics_cmd->require_subcommand(1);

    CouplingsArgs coup_args;
    auto* coup_cmd = physics_cmd->add_subcommand("couplings", "Magnetic-gradient couplings");
    coup_cmd->add_option("--ions", coup_args.ions, "ion count (2..4)");
    coup_cmd->add_flag("--relabel", coup_args.relabel,
                       "middle-ion-first qubit order, normalized (3 ions)");
    coup_cmd->add_option("--gradient-b", coup_args.gradient_b, "field gradient (T/m)");
    coup_cmd->add_option("--g-factor", coup_args.g_factor, "electron g-factor");
    coup_cmd->add_option("--bohr-magneton", coup_args.bohr_magneton, "Bohr magneton (J/T)");
    coup_cmd->add_option("--axial-frequency", coup_args.axial_frequency,
                         "axial trap frequency (angular)");
    coup_cmd->add_option("--out", coup_args.out_file, "write the J matrix here");
    coup_cmd->add_flag("--json", coup_args.as_json, "JSON report");

    SmGateArgs sm_args;
    auto* sm_cmd = physics_cmd->add_subcommand("sm-gate", "Closed-form bichromatic propagator");
    sm_cmd->add_option("--g", sm_args.g, "spin-phonon coupling rate");
    sm_cmd->add_option("--phi", sm_args.phi_token,
                       "target gate angle (pi-token or radians); overrides --g");
    sm_cmd->add_option("--delta", sm_args.delta, "detuning");
    sm_cmd->add_option("--ions", sm_args.ions, "ion count (2..4)");
    sm_cmd->add_option("--basis", sm_args.basis, "x or z");
    sm_cmd->add_option("--out", sm_args.out_file, "write the matrix here");
    sm_cmd->add_flag("--json", sm_args.as_json, "JSON report");

    FockCheckArgs fock_args;
    auto* fock_cmd =
        physics_cmd->add_subcommand("fock-check", "Integrated oracle vs closed form");
    fock_cmd->add_option("--g", fock_args.g, "spin-phonon coupling rate");
    fock_cmd->add_option("--delta", fock_args.delta, "detuning");
    fock_cmd->add_option("--ions", fock_args.ions, "ion count (2..4)");
    fock_cmd->add_option("--cutoff", fock_args.cutoff, "Fock-space cutoff");
    fock_cmd->add_option("--steps", fock_args.steps_per_period,
                         "integration steps per detuning period (>= 1000)");
    fock_cmd->add_flag("--json", fock_args.as_json, "JSON report");

    ExportArgs export_args;
    auto* export_cmd = app.add_subcommand("export", "Write a built-in circuit to JSON");
    export_cmd->add_option("--catalog", export_args.catalog_key, "built-in circuit key")
        ->required();
    export_cmd->add_option("--out", export_args.out_file, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*verify_cmd) return cmd_verify(verify_args);
        if (*synth_cmd) return cmd_synthesize(synth_args);
        if (*coup_cmd) return cmd_couplings(coup_args);
        if (*sm_cmd) return cmd_sm_gate(sm_args);
        if (*fock_cmd) return cmd_fock_check(fock_args);
        if (*export_cmd) return cmd_export(export_args);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitUsage;
}
