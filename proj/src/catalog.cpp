#include "ggc/catalog.hpp"

#include <numbers>
#include <stdexcept>

#include "ggc/ionphys.hpp"

namespace ggc {

namespace {

using std::numbers::pi;

Matrix permutation_target(int dim, int swap_a, int swap_b) {
    Matrix m = Matrix::Identity(dim, dim);
    m(swap_a, swap_a) = m(swap_b, swap_b) = 0;
    m(swap_a, swap_b) = m(swap_b, swap_a) = 1;
    return m;
}

// Appends Pulse(pi/2) on each listed qubit.
void push_pulses(Circuit& c, std::initializer_list<int> qubits, double theta) {
    for (int q : qubits) c.ops.push_back(make_pulse(q, theta));
}

void push_phases(Circuit& c, std::initializer_list<int> qubits, double phi) {
    for (int q : qubits) c.ops.push_back(make_phase(q, phi));
}

Circuit ccphase_global_3g() {
    Circuit c;
    c.n_qubits = 3;
    c.name = "ccphase-global-3G";
    c.ops = {
        make_pulse(0, pi / 2),
        make_global_g(pi / 4),
        make_pulse(0, pi / 2),
        make_phase(0, pi / 8),
        make_pulse(0, pi / 2),
        make_global_g(pi / 4),
        make_pulse(0, pi / 2),
        make_global_g(pi / 8),
        make_phase(0, pi / 8),
        make_phase(1, 5 * pi / 8),
        make_phase(2, 5 * pi / 8),
    };
    return c;
}

Circuit ccphase_ht() {
    Circuit c;
    c.n_qubits = 3;
    c.name = "ccphase-HT";
    auto h0 = GateOp{GateKind::Hadamard, {0}, 0.0, {}};
    c.ops = {
        h0,
        make_global_g(pi / 4),
        h0,
        GateOp{GateKind::TDag, {0}, 0.0, {}},
        h0,
        make_global_g(pi / 4),
        h0,
        make_global_g(pi / 8),
        GateOp{GateKind::T, {0}, 0.0, {}},
        GateOp{GateKind::T, {1}, 0.0, {}},
        GateOp{GateKind::T, {2}, 0.0, {}},
    };
    return c;
}

Circuit fredkin_global_4g() {
    Circuit c;
    c.n_qubits = 3;
    c.name = "fredkin-global-4G";
    c.ops = {
        make_pulse(2, pi / 2),
        make_phase(2, pi / 2),
        make_global_g(pi / 4),
        make_pulse(1, pi / 2),
        make_pulse(2, pi / 2),
        make_phase(0, 3 * pi / 8),
        make_phase(1, 5 * pi / 8),
        make_phase(2, 7 * pi / 8),
        make_global_g(pi / 8),
        make_pulse(1, pi / 2),
        make_global_g(pi / 4),
        make_phase(1, 3 * pi / 4),
        make_pulse(1, pi / 4),  // Q gate
        make_pulse(2, pi / 2),
        make_phase(2, pi / 2),
        make_global_g(pi / 4),
        make_pulse(2, pi / 2),
        make_phase(2, pi / 4),
    };
    return c;
}

Circuit cccphase_global_7gg() {
    Circuit c;
    c.n_qubits = 4;
    c.name = "cccphase-global-7GG";
    push_pulses(c, {0, 1, 2, 3}, pi / 2);
    c.ops.push_back(make_global_gg(pi / 4));
    push_phases(c, {0, 1, 2, 3}, pi / 2);
    push_pulses(c, {0, 1, 2}, pi / 2);
    c.ops.push_back(make_global_gg(pi / 4));
    push_phases(c, {0, 1, 2, 3}, -pi / 4);
    push_pulses(c, {0, 1, 2, 3}, pi / 2);
    push_phases(c, {3}, -pi / 16);
    c.ops.push_back(make_global_gg(pi / 4));
    push_pulses(c, {0, 1, 2, 3}, pi / 2);
    c.ops.push_back(make_global_gg(pi / 4));
    push_phases(c, {3}, -pi / 4);
    push_pulses(c, {3}, pi / 2);
    push_phases(c, {3}, pi / 8);
    push_phases(c, {0, 1, 2, 3}, pi / 16);
    push_pulses(c, {0, 1, 2, 3}, pi / 2);
    c.ops.push_back(make_global_gg(pi / 4));
    push_phases(c, {0, 1, 2, 3}, -pi / 4);
    push_pulses(c, {0, 1, 2, 3}, pi / 2);
    push_phases(c, {3}, pi / 2);
    c.ops.push_back(make_global_gg(pi / 4));
    push_phases(c, {0, 1, 2, 3}, -pi / 4);
    push_pulses(c, {0, 1, 2, 3}, pi / 2);
    c.ops.push_back(make_global_gg(pi / 16));
    push_phases(c, {3}, pi / 2);
    push_phases(c, {0, 1, 2, 3}, 9 * pi / 16);
    return c;
}

Circuit ccphase_unequal_j() {
    Circuit c;
    c.n_qubits = 3;
    c.name = "ccphase-unequal-J";
    c.metadata["note"] = "angles as printed";
    const Eigen::MatrixXd j = relabelled_couplings_n3();
    std::vector<double> flat(9);
    for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) flat[static_cast<size_t>(r) * 3 + col] = j(r, col);
    // U(phi) = free evolution for tau = 2 phi / J_01, with J_01 normalized to 1.
    auto coupler = [&](double phi) { return make_coupling_u(flat, 3, 2.0 * phi); };
    const double phi1 = 0.375 * pi, phi2 = 0.258 * pi;
    const double th1 = 1.032 * pi, th2 = 0.484 * pi, th3 = 1.484 * pi;
    c.ops = {
        make_pulse(0, pi / 2),
        coupler(pi / 4),
        make_pulse(0, pi / 2),
        make_phase(0, pi / 8),
        make_pulse(0, th1),
        coupler(phi1),
        make_pulse(0, th2),
        coupler(phi2),
        make_pulse(0, th3),
        make_phase(0, pi / 8),
        make_phase(1, 5 * pi / 8),
        make_phase(2, 5 * pi / 8),
    };
    return c;
}

Circuit toffoli_standard_6cnot() {
    Circuit c;
    c.n_qubits = 3;
    c.name = "toffoli-standard-6cnot";
    auto h = [](int q) { return GateOp{GateKind::Hadamard, {q}, 0.0, {}}; };
    auto t = [](int q) { return GateOp{GateKind::T, {q}, 0.0, {}}; };
    auto tdag = [](int q) { return GateOp{GateKind::TDag, {q}, 0.0, {}}; };
    auto cx = [](int control, int target) {
        return GateOp{GateKind::CNOT, {control, target}, 0.0, {}};
    };
    c.ops = {
        h(2),
        cx(1, 2), tdag(2),
        cx(0, 2), t(2),
        cx(1, 2), tdag(2),
        cx(0, 2), t(1), t(2),
        cx(0, 1), h(2),
        t(0), tdag(1),
        cx(0, 1),
    };
    return c;
}

}  // namespace

Matrix target_matrix(const std::string& name) {
    if (name == "toffoli") return permutation_target(8, 6, 7);
    if (name == "fredkin") return permutation_target(8, 5, 6);
    if (name == "ccphase") {
        Matrix m = Matrix::Identity(8, 8);
        m(7, 7) = -1;
        return m;
    }
    if (name == "cccphase") {
        Matrix m = Matrix::Identity(16, 16);
        m(15, 15) = -1;
        return m;
    }
    if (name == "cnot") return cnot();
    if (name == "cphase") return cphase();
    throw std::invalid_argument("unknown target gate: " + name);
}

bool is_target_name(const std::string& name) {
    for (const auto& n : target_names())
        if (n == name) return true;
    return false;
}

std::vector<std::string> target_names() {
    return {"toffoli", "ccphase", "cccphase", "fredkin", "cnot", "cphase"};
}

Circuit catalog_circuit(const std::string& key) {
    if (key == "ccphase-global-3G") return ccphase_global_3g();
    if (key == "ccphase-HT") return ccphase_ht();
    if (key == "fredkin-global-4G") return fredkin_global_4g();
    if (key == "cccphase-global-7GG") return cccphase_global_7gg();
    if (key == "ccphase-unequal-J") return ccphase_unequal_j();
    if (key == "toffoli-standard-6cnot") return toffoli_standard_6cnot();
    throw std::invalid_argument("unknown catalog key: " + key);
}

std::vector<std::string> catalog_keys() {
    return {"ccphase-global-3G",   "ccphase-HT",        "fredkin-global-4G",
            "cccphase-global-7GG", "ccphase-unequal-J", "toffoli-standard-6cnot"};
}

std::string catalog_target(const std::string& key) {
    if (key == "fredkin-global-4G") return "fredkin";
    if (key == "cccphase-global-7GG") return "cccphase";
    if (key == "toffoli-standard-6cnot") return "toffoli";
    if (key == "ccphase-global-3G" || key == "ccphase-HT" || key == "ccphase-unequal-J")
        return "ccphase";
    throw std::invalid_argument("unknown catalog key: " + key);
}

}  // namespace ggc
