#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ggc/matrix.hpp"

namespace ggc {

enum class GateKind {
    PauliX,
    PauliY,
    PauliZ,
    Hadamard,
    S,
    T,
    TDag,
    SqrtNot,
    Pulse,     // exp(-i(theta/2) sigma_x); P = Pulse(pi/2), Q = Pulse(pi/4)
    Phase,     // exp(-i phi sigma_z)
    CNOT,      // qubits = {control, target}
    CPhase,    // diag(1,1,1,-1)
    PairZZ,    // exp(i phi sigma_z sigma_z) on one qubit pair
    GlobalG,   // exp(i phi sum_{j<k} sz_j sz_k), three qubits
    GlobalGG,  // same over four qubits, six pairs
    NearestN,  // exp(i phi (sz1 sz2 + sz2 sz3)), chain order
    CouplingU, // exp(i (tau/2) sum_{j<k} J_jk sz_j sz_k); angle = tau
};

const char* kind_name(GateKind kind);
std::optional<GateKind> kind_from_name(const std::string& name);

/// One gate instance bound to qubit indices and, where relevant, an angle.
struct GateOp {
    GateKind kind;
    std::vector<int> qubits;
    double angle = 0.0;
    // Symmetric coupling matrix, CouplingU only; row-major, size k*k for
    // k = qubits.size().
    std::vector<double> couplings;

    bool operator==(const GateOp& other) const = default;
};

bool kind_takes_angle(GateKind kind);
bool kind_is_entangler(GateKind kind);
int kind_arity(GateKind kind);  // 0 for any single arity requirement of 1

// Fixed 2x2 gate matrices.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix hadamard();
Matrix s_gate();
Matrix t_gate();
Matrix sqrt_not();
Matrix pulse(double theta);
Matrix phase_gate(double phi);

Matrix cnot();    // control = first qubit
Matrix cphase();  // diag(1,1,1,-1)

/// Diagonal entangler exp(i * sum over listed (j,k) pairs of w_{jk} s_j s_k)
/// on k qubits, where s = +1 for |0> and -1 for |1>.
Matrix pair_sum_diagonal(int n_qubits,
                         const std::vector<std::pair<int, int>>& pairs,
                         const std::vector<double>& weights);

/// Full 2^n x 2^n matrix of one gate op embedded on n qubits.
Matrix gate_matrix(const GateOp& op, int n_qubits);

/// The matrix of the gate on its own qubits only (dim 2^|qubits|).
Matrix local_gate_matrix(const GateOp& op);

/// G(phi) as a product of three commuting two-qubit sigma_z sigma_z factors.
/// The returned ops are PairZZ on pairs (0,1), (1,2), (0,2).
std::vector<GateOp> decompose_G_as_pair_product(double phi);

// Convenience constructors.
GateOp make_pulse(int qubit, double theta);
GateOp make_phase(int qubit, double phi);
GateOp make_global_g(double phi);               // qubits 0,1,2
GateOp make_global_gg(double phi);              // qubits 0,1,2,3
GateOp make_nearest_n(double phi);              // qubits 0,1,2
GateOp make_coupling_u(const std::vector<double>& j_matrix, int n_qubits,
                       double tau);

}  // namespace ggc
