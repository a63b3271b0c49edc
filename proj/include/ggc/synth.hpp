#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ggc/circuit.hpp"

namespace ggc {

enum class CouplerKind { GlobalG, GlobalGG, NearestN, CouplingU };

struct CouplerModel {
    CouplerKind kind = CouplerKind::GlobalG;
    int n_qubits = 3;
    // CouplingU only: row-major J, normalized so the entangler angle phi
    // corresponds to evolution time 2*phi/J_01.
    std::vector<double> couplings;

    void validate() const;
    /// The entangler op at angle phi.
    GateOp entangler(double phi) const;
};

enum class ObjectiveMode {
    SmoothAligned,  // sum |F - e^{i theta*} Ftilde|^2, theta* from the trace
    PaperRaw,       // sum |F - Ftilde|, no phase alignment
};

/// Parametrized template: local layers of per-qubit Phase+Pulse interleaved
/// with entangler gates, plus a trailing per-qubit phase layer. Parameter
/// layout: for each layer (layer-major, qubit-minor) the pair {phase, pulse},
/// then the entangler angles, then the final phases. One parameter per op.
struct Ansatz {
    int n_qubits = 3;
    int n_entanglers = 0;
    CouplerModel coupler;
    // When set, the entangler at this position (0-based) is a two-qubit
    // PairZZ on nonglobal_pair instead of the coupler gate.
    std::optional<int> nonglobal_position;
    std::pair<int, int> nonglobal_pair{0, 1};
    // The default trailing layer is phases only, which spans every circuit
    // whose target is diagonal. Non-diagonal targets (e.g. a controlled
    // swap) need a general local after the last entangler: this adds a
    // pulse before each final phase, completing the Euler triple together
    // with the interior phases that commute through the entanglers.
    bool general_final_layer = false;

    int parameter_count() const;  // n_entanglers*(2n+1) + n (+n if general final)
    /// Instantiate the template at a concrete parameter vector.
    Circuit instantiate(const std::vector<double>& params) const;
};

Ansatz build_ansatz(int n_qubits, int n_entanglers, const CouplerModel& coupler);

/// Unitary of the ansatz at the given parameters.
Matrix ansatz_unitary(const Ansatz& a, const std::vector<double>& params);

double objective(const std::vector<double>& params, const Ansatz& a,
                 const Matrix& target,
                 ObjectiveMode mode = ObjectiveMode::SmoothAligned);

/// Analytic gradient of the smooth aligned objective.
std::vector<double> objective_gradient(const std::vector<double>& params,
                                       const Ansatz& a, const Matrix& target);

struct OptimizeOptions {
    int max_iterations = 500;
    double gradient_tol = 1e-10;
    double fd_step = 1e-6;  // Hessian-vector finite-difference step
};

struct OptimizeOutcome {
    std::vector<double> params;
    double objective_value = 0.0;
    int iterations = 0;
};

/// Damped Newton descent on the smooth objective: CG on finite-difference
/// Hessian-vector products, halving line search. Deterministic.
OptimizeOutcome optimize_once(const Ansatz& a, const Matrix& target,
                              const std::vector<double>& initial,
                              const OptimizeOptions& opts = {});

struct SynthesisProblem {
    Matrix target;
    CouplerModel coupler;
    int max_entanglers = 3;
    int restarts_per_count = 200;
    double tolerance = 1e-6;
    std::uint64_t seed = 0;
    bool allow_one_nonglobal = false;
    int n_workers = 0;  // 0 = hardware concurrency
};

struct SynthesisResult {
    Circuit circuit;
    double residual_raw = 0.0;
    double residual_aligned = 0.0;
    int entangler_count = 0;
    int restarts_used = 0;
    bool converged = false;
};

/// Incremental gate-count search with seeded Monte-Carlo restarts. Results
/// are reduced in restart-index order, so the worker count never changes
/// the outcome.
SynthesisResult synthesize(const SynthesisProblem& problem);

/// Re-optimize the five free angles (theta1..3, phi1, phi2) of the
/// unequal-coupling cc-phase template, starting from the published values.
/// Returns the refined circuit; residual_aligned in the result reports the
/// final distance to the cc-phase target.
SynthesisResult refine_unequal_j_angles();

const char* coupler_name(CouplerKind kind);
std::optional<CouplerKind> coupler_from_name(const std::string& name);

}  // namespace ggc
