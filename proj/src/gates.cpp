#include "ggc/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace ggc {

namespace {
using std::numbers::pi;
constexpr Complex I{0.0, 1.0};
const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

const char* kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::PauliX: return "x";
        case GateKind::PauliY: return "y";
        case GateKind::PauliZ: return "z";
        case GateKind::Hadamard: return "h";
        case GateKind::S: return "s";
        case GateKind::T: return "t";
        case GateKind::TDag: return "tdag";
        case GateKind::SqrtNot: return "sqrtnot";
        case GateKind::Pulse: return "pulse";
        case GateKind::Phase: return "phase";
        case GateKind::CNOT: return "cnot";
        case GateKind::CPhase: return "cphase";
        case GateKind::PairZZ: return "pairzz";
        case GateKind::GlobalG: return "g";
        case GateKind::GlobalGG: return "gg";
        case GateKind::NearestN: return "n";
        case GateKind::CouplingU: return "u";
    }
    throw std::logic_error("kind_name: bad kind");
}

std::optional<GateKind> kind_from_name(const std::string& name) {
    static const std::unordered_map<std::string, GateKind> table = {
        {"x", GateKind::PauliX},     {"y", GateKind::PauliY},
        {"z", GateKind::PauliZ},     {"h", GateKind::Hadamard},
        {"s", GateKind::S},          {"t", GateKind::T},
        {"tdag", GateKind::TDag},    {"sqrtnot", GateKind::SqrtNot},
        {"pulse", GateKind::Pulse},  {"phase", GateKind::Phase},
        {"cnot", GateKind::CNOT},    {"cphase", GateKind::CPhase},
        {"pairzz", GateKind::PairZZ},{"g", GateKind::GlobalG},
        {"gg", GateKind::GlobalGG},  {"n", GateKind::NearestN},
        {"u", GateKind::CouplingU},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

bool kind_takes_angle(GateKind kind) {
    switch (kind) {
        case GateKind::Pulse:
        case GateKind::Phase:
        case GateKind::PairZZ:
        case GateKind::GlobalG:
        case GateKind::GlobalGG:
        case GateKind::NearestN:
        case GateKind::CouplingU:
            return true;
        default:
            return false;
    }
}

bool kind_is_entangler(GateKind kind) {
    switch (kind) {
        case GateKind::CNOT:
        case GateKind::CPhase:
        case GateKind::PairZZ:
        case GateKind::GlobalG:
        case GateKind::GlobalGG:
        case GateKind::NearestN:
        case GateKind::CouplingU:
            return true;
        default:
            return false;
    }
}

int kind_arity(GateKind kind) {
    switch (kind) {
        case GateKind::CNOT:
        case GateKind::CPhase:
        case GateKind::PairZZ:
            return 2;
        case GateKind::GlobalG:
        case GateKind::NearestN:
            return 3;
        case GateKind::GlobalGG:
            return 4;
        case GateKind::CouplingU:
            return 0;  // any size 2..4
        default:
            return 1;
    }
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, -I, I, 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix hadamard() {
    Matrix m(2, 2);
    m << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
    return m;
}

Matrix s_gate() {
    Matrix m(2, 2);
    m << 1, 0, 0, I;
    return m;
}

Matrix t_gate() {
    Matrix m(2, 2);
    m << 1, 0, 0, std::polar(1.0, pi / 4);
    return m;
}

Matrix sqrt_not() {
    Matrix m(2, 2);
    m << inv_sqrt2, I * inv_sqrt2, I * inv_sqrt2, inv_sqrt2;
    return m;
}

Matrix pulse(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Matrix m(2, 2);
    m << c, -I * s, -I * s, c;
    return m;
}

Matrix phase_gate(double phi) {
    Matrix m(2, 2);
    m << std::polar(1.0, -phi), 0, 0, std::polar(1.0, phi);
    return m;
}

Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

Matrix cphase() {
    Matrix m = Matrix::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}

Matrix pair_sum_diagonal(int n_qubits,
                         const std::vector<std::pair<int, int>>& pairs,
                         const std::vector<double>& weights) {
    if (pairs.size() != weights.size())
        throw std::invalid_argument("pair_sum_diagonal: pairs/weights length mismatch");
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double sum = 0.0;
        for (size_t p = 0; p < pairs.size(); ++p) {
            const int sj = ((b >> (n_qubits - 1 - pairs[p].first)) & 1) ? -1 : 1;
            const int sk = ((b >> (n_qubits - 1 - pairs[p].second)) & 1) ? -1 : 1;
            sum += weights[p] * sj * sk;
        }
        m(b, b) = std::polar(1.0, sum);
    }
    return m;
}

namespace {

std::vector<std::pair<int, int>> all_pairs(int k) {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < k; ++j)
        for (int l = j + 1; l < k; ++l) out.emplace_back(j, l);
    return out;
}

}  // namespace

Matrix local_gate_matrix(const GateOp& op) {
    const int k = static_cast<int>(op.qubits.size());
    const int arity = kind_arity(op.kind);
    if (arity != 0 && k != arity)
        throw std::invalid_argument(std::string("gate '") + kind_name(op.kind) +
                                    "': wrong qubit count");
    switch (op.kind) {
        case GateKind::PauliX: return pauli_x();
        case GateKind::PauliY: return pauli_y();
        case GateKind::PauliZ: return pauli_z();
        case GateKind::Hadamard: return hadamard();
        case GateKind::S: return s_gate();
        case GateKind::T: return t_gate();
        case GateKind::TDag: return t_gate().adjoint();
        case GateKind::SqrtNot: return sqrt_not();
        case GateKind::Pulse: return pulse(op.angle);
        case GateKind::Phase: return phase_gate(op.angle);
        case GateKind::CNOT: return cnot();
        case GateKind::CPhase: return cphase();
        case GateKind::PairZZ:
            return pair_sum_diagonal(2, {{0, 1}}, {op.angle});
        case GateKind::GlobalG:
            return pair_sum_diagonal(3, all_pairs(3),
                                     std::vector<double>(3, op.angle));
        case GateKind::GlobalGG:
            return pair_sum_diagonal(4, all_pairs(4),
                                     std::vector<double>(6, op.angle));
        case GateKind::NearestN:
            return pair_sum_diagonal(3, {{0, 1}, {1, 2}}, {op.angle, op.angle});
        case GateKind::CouplingU: {
            if (op.couplings.size() != static_cast<size_t>(k) * k)
                throw std::invalid_argument("CouplingU: coupling matrix size mismatch");
            auto pairs = all_pairs(k);
            std::vector<double> w;
            w.reserve(pairs.size());
            for (auto [j, l] : pairs)
                w.push_back(0.5 * op.angle * op.couplings[static_cast<size_t>(j) * k + l]);
            return pair_sum_diagonal(k, pairs, w);
        }
    }
    throw std::logic_error("local_gate_matrix: bad kind");
}

Matrix gate_matrix(const GateOp& op, int n_qubits) {
    return embed(local_gate_matrix(op), op.qubits, n_qubits);
}

std::vector<GateOp> decompose_G_as_pair_product(double phi) {
    std::vector<GateOp> out;
    for (auto [j, k] : all_pairs(3))
        out.push_back(GateOp{GateKind::PairZZ, {j, k}, phi, {}});
    return out;
}

GateOp make_pulse(int qubit, double theta) {
    return GateOp{GateKind::Pulse, {qubit}, theta, {}};
}

GateOp make_phase(int qubit, double phi) {
    return GateOp{GateKind::Phase, {qubit}, phi, {}};
}

GateOp make_global_g(double phi) {
    return GateOp{GateKind::GlobalG, {0, 1, 2}, phi, {}};
}

GateOp make_global_gg(double phi) {
    return GateOp{GateKind::GlobalGG, {0, 1, 2, 3}, phi, {}};
}

GateOp make_nearest_n(double phi) {
    return GateOp{GateKind::NearestN, {0, 1, 2}, phi, {}};
}

GateOp make_coupling_u(const std::vector<double>& j_matrix, int n_qubits,
                       double tau) {
    std::vector<int> qubits(static_cast<size_t>(n_qubits));
    for (int i = 0; i < n_qubits; ++i) qubits[static_cast<size_t>(i)] = i;
    return GateOp{GateKind::CouplingU, qubits, tau, j_matrix};
}

}  // namespace ggc
