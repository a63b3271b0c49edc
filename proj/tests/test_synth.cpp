#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <numbers>
#include <random>

#include "ggc/catalog.hpp"
#include "ggc/synth.hpp"

using namespace ggc;
using std::numbers::pi;

namespace {

CouplerModel global_g_coupler() {
    CouplerModel c;
    c.kind = CouplerKind::GlobalG;
    c.n_qubits = 3;
    return c;
}

// The three-entangler cc-phase construction mapped into the ansatz layout.
// The published sequence's middle block P Phi(pi/8) P on qubit 0 equals the
// z-x-z Euler form Phi(pi/4) X(3pi/4) Phi(pi/4); the trailing phase commutes
// through the (diagonal) entangler into the next layer's phase slot.
std::vector<double> ccphase_3g_params() {
    std::vector<double> p(24, 0.0);
    p[1] = pi / 2;                     // layer 1, qubit 0: pulse
    p[6] = pi / 4;  p[7] = 3 * pi / 4; // layer 2, qubit 0: phase, pulse
    p[12] = pi / 4; p[13] = pi / 2;    // layer 3, qubit 0: phase, pulse
    p[18] = pi / 4; p[19] = pi / 4; p[20] = pi / 8;  // entangler angles
    p[21] = pi / 8; p[22] = 5 * pi / 8; p[23] = 5 * pi / 8;  // final phases
    return p;
}

std::vector<double> random_params(int count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    std::vector<double> p(static_cast<size_t>(count));
    for (auto& v : p) v = angle(rng);
    return p;
}

}  // namespace

TEST_CASE("parameter layout") {
    const CouplerModel g = global_g_coupler();
    CHECK(build_ansatz(3, 3, g).parameter_count() == 24);
    CHECK(build_ansatz(3, 0, g).parameter_count() == 9);

    SUBCASE("all-zero parameters give the identity") {
        const Ansatz a = build_ansatz(3, 2, g);
        const std::vector<double> zeros(static_cast<size_t>(a.parameter_count()), 0.0);
        CHECK(raw_distance(ansatz_unitary(a, zeros), identity(8)) < 1e-14);
    }
    SUBCASE("bad inputs throw") {
        CHECK_THROWS(build_ansatz(3, -1, g));
        CouplerModel gg;
        gg.kind = CouplerKind::GlobalGG;
        gg.n_qubits = 4;
        CHECK_THROWS(build_ansatz(3, 1, gg));
        const Ansatz a = build_ansatz(3, 1, g);
        CHECK_THROWS(ansatz_unitary(a, {0.0, 0.0}));
    }
}

TEST_CASE("objective values") {
    const Ansatz a3 = build_ansatz(3, 3, global_g_coupler());
    const Matrix ccp = target_matrix("ccphase");

    SUBCASE("mapped catalog angles hit the target") {
        const auto p = ccphase_3g_params();
        CHECK(objective(p, a3, ccp) < 1e-20);
        CHECK(phase_aligned_distance(ansatz_unitary(a3, p),
                                     evaluate(catalog_circuit("ccphase-global-3G"))) < 1e-12);
    }
    SUBCASE("identity vs cc-phase") {
        const Ansatz a0 = build_ansatz(3, 0, global_g_coupler());
        const std::vector<double> zeros(9, 0.0);
        CHECK(objective(zeros, a0, ccp) == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("nonnegative everywhere") {
        std::mt19937_64 rng(11);
        for (int k = 0; k < 25; ++k)
            CHECK(objective(random_params(24, rng), a3, ccp) >= 0.0);
    }
    SUBCASE("raw mode is the unaligned entrywise distance") {
        std::mt19937_64 rng(12);
        const auto p = random_params(24, rng);
        CHECK(objective(p, a3, ccp, ObjectiveMode::PaperRaw) ==
              doctest::Approx(raw_distance(ccp, ansatz_unitary(a3, p))).epsilon(1e-12));
    }
}

TEST_CASE("analytic gradient matches central finite differences") {
    const Ansatz a = build_ansatz(3, 2, global_g_coupler());
    const Matrix target = target_matrix("ccphase");
    const double h = 1e-5;
    std::mt19937_64 rng(5);
    for (int point = 0; point < 20; ++point) {
        auto p = random_params(a.parameter_count(), rng);
        const auto grad = objective_gradient(p, a, target);
        double gscale = 1.0;
        for (double g : grad) gscale = std::max(gscale, std::abs(g));
        for (size_t i = 0; i < p.size(); ++i) {
            auto pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            const double fd =
                (objective(pp, a, target) - objective(pm, a, target)) / (2 * h);
            CHECK(std::abs(grad[i] - fd) < 1e-5 * gscale);
        }
    }
}

TEST_CASE("optimize_once") {
    const Ansatz a = build_ansatz(3, 3, global_g_coupler());
    const Matrix target = target_matrix("ccphase");

    SUBCASE("an exact solution is a fixed point") {
        const auto out = optimize_once(a, target, ccphase_3g_params());
        CHECK(out.objective_value < 1e-18);
        CHECK(out.iterations == 0);
    }
    SUBCASE("descends from a perturbed solution") {
        auto p = ccphase_3g_params();
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> jitter(-0.05, 0.05);
        for (auto& v : p) v += jitter(rng);
        const double before = objective(p, a, target);
        const auto out = optimize_once(a, target, p);
        CHECK(out.objective_value < before);
        CHECK(out.objective_value < 1e-12);
    }
    SUBCASE("rejects bad starts") {
        CHECK_THROWS(optimize_once(a, target, {1.0, 2.0}));
        auto p = ccphase_3g_params();
        p[0] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS(optimize_once(a, target, p));
    }
}

TEST_CASE("parameter periodicity of the aligned objective") {
    const Ansatz a = build_ansatz(3, 2, global_g_coupler());
    const Matrix target = target_matrix("ccphase");
    std::mt19937_64 rng(17);
    const auto p = random_params(a.parameter_count(), rng);
    const double base = objective(p, a, target);
    const int n = a.n_qubits;
    const int ent_base = a.n_entanglers * 2 * n;

    SUBCASE("2pi shift of any single parameter") {
        for (size_t i = 0; i < p.size(); ++i) {
            auto q = p;
            q[i] += 2 * pi;
            CHECK(std::abs(objective(q, a, target) - base) < 1e-12);
        }
    }
    SUBCASE("pi shift of any phase parameter") {
        for (size_t i = 0; i < p.size(); ++i) {
            const int idx = static_cast<int>(i);
            const bool is_phase = (idx < ent_base && idx % 2 == 0) ||
                                  idx >= ent_base + a.n_entanglers;
            if (!is_phase) continue;
            auto q = p;
            q[i] += pi;
            CHECK(std::abs(objective(q, a, target) - base) < 1e-12);
        }
    }
}

TEST_CASE("explicit second phases are absorbed exactly") {
    // A local layer Phi(phi1) X(theta) Phi(phi2) equals the phi2-free layout
    // with phi2 commuted through the diagonal entangler into the next layer.
    const Ansatz a = build_ansatz(3, 2, global_g_coupler());
    std::mt19937_64 rng(23);
    const auto p = random_params(a.parameter_count(), rng);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    double extra[2][3];
    for (auto& layer : extra)
        for (double& v : layer) v = angle(rng);

    Circuit with_phi2 = a.instantiate(p);
    // Insert Phi(phi2) right after each layer's pulses (before the entangler).
    // Layer L occupies ops [7L, 7L+6]; the entangler sits at 7L+6.
    for (int layer = 1; layer >= 0; --layer)
        for (int q = 2; q >= 0; --q)
            with_phi2.ops.insert(with_phi2.ops.begin() + (7 * layer + 6),
                                 make_phase(q, extra[layer][q]));

    auto merged = p;
    for (int q = 0; q < 3; ++q) {
        merged[static_cast<size_t>((1 * 3 + q) * 2)] += extra[0][q];  // into layer 2 phases
        merged[static_cast<size_t>(2 * 7 + q)] += extra[1][q];        // into final phases
    }
    CHECK(raw_distance(evaluate(with_phi2), ansatz_unitary(a, merged)) < 1e-12);
}

TEST_CASE("synthesis is reproducible across worker counts") {
    SynthesisProblem problem;
    problem.target = target_matrix("ccphase");
    problem.coupler = global_g_coupler();
    problem.max_entanglers = 2;
    problem.restarts_per_count = 6;
    problem.seed = 7;

    problem.n_workers = 1;
    const SynthesisResult serial = synthesize(problem);
    problem.n_workers = 3;
    const SynthesisResult pooled = synthesize(problem);

    CHECK(serial.converged == pooled.converged);
    CHECK(serial.entangler_count == pooled.entangler_count);
    CHECK(serial.residual_aligned == pooled.residual_aligned);
    CHECK(serial.residual_raw == pooled.residual_raw);
    REQUIRE(serial.circuit.ops.size() == pooled.circuit.ops.size());
    for (size_t i = 0; i < serial.circuit.ops.size(); ++i)
        CHECK(serial.circuit.ops[i] == pooled.circuit.ops[i]);
}

TEST_CASE("small-budget synthesis finds the three-entangler cc-phase") {
    SynthesisProblem problem;
    problem.target = target_matrix("ccphase");
    problem.coupler = global_g_coupler();
    problem.max_entanglers = 3;
    problem.restarts_per_count = 24;
    problem.seed = 42;
    const SynthesisResult result = synthesize(problem);
    CHECK(result.converged);
    CHECK(result.entangler_count == 3);
    // A converged result re-verifies through the circuit engine.
    const auto report = verify(result.circuit, problem.target, problem.tolerance);
    CHECK(report.passed);
}

TEST_CASE("problem validation") {
    SynthesisProblem problem;
    problem.target = target_matrix("ccphase");
    problem.coupler = global_g_coupler();
    problem.tolerance = 0.0;
    CHECK_THROWS(synthesize(problem));
    problem.tolerance = 1e-6;
    problem.max_entanglers = 0;
    CHECK_THROWS(synthesize(problem));
}

TEST_CASE("coupler names round-trip") {
    for (auto kind : {CouplerKind::GlobalG, CouplerKind::GlobalGG, CouplerKind::NearestN,
                      CouplerKind::CouplingU})
        CHECK(coupler_from_name(coupler_name(kind)) == kind);
    CHECK(!coupler_from_name("nope").has_value());
}
