#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "ggc/gates.hpp"

using namespace ggc;
using std::numbers::pi;

namespace {
constexpr Complex I{0.0, 1.0};

Matrix pauli(char axis) {
    switch (axis) {
        case 'x': return pauli_x();
        case 'y': return pauli_y();
        default: return pauli_z();
    }
}

// J_beta = (1/2) sum_j sigma_j^beta on n qubits.
Matrix collective_spin(char axis, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix j = Matrix::Zero(dim, dim);
    for (int q = 0; q < n; ++q) j += embed(pauli(axis), {q}, n);
    return 0.5 * j;
}

Matrix pair_sum(char axis, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix sum = Matrix::Zero(dim, dim);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            sum += embed(pauli(axis), {j}, n) * embed(pauli(axis), {k}, n);
    return sum;
}
}  // namespace

TEST_CASE("zero-angle phase is identity") {
    CHECK(raw_distance(gate_matrix(make_phase(0, 0.0), 1), identity(2)) == 0.0);
}

TEST_CASE("hadamard matrix") {
    const double r = 1.0 / std::sqrt(2.0);
    const Matrix h = gate_matrix(GateOp{GateKind::Hadamard, {0}, 0, {}}, 1);
    CHECK(h(0, 0) == Complex(r, 0));
    CHECK(h(0, 1) == Complex(r, 0));
    CHECK(h(1, 0) == Complex(r, 0));
    CHECK(h(1, 1) == Complex(-r, 0));
}

TEST_CASE("global G diagonal sign sums") {
    const double phi = 0.7313;
    const Matrix g = gate_matrix(make_global_g(phi), 3);
    const int c[8] = {3, -1, -1, -1, -1, -1, -1, 3};
    for (int b = 0; b < 8; ++b) {
        CHECK(std::abs(g(b, b) - std::polar(1.0, phi * c[b])) < 1e-15);
        for (int col = 0; col < 8; ++col)
            if (col != b) CHECK(g(b, col) == Complex(0, 0));
    }
}

TEST_CASE("all gate kinds produce unitary matrices") {
    const std::vector<GateOp> ops = {
        GateOp{GateKind::PauliX, {0}, 0, {}},
        GateOp{GateKind::PauliY, {0}, 0, {}},
        GateOp{GateKind::PauliZ, {0}, 0, {}},
        GateOp{GateKind::Hadamard, {0}, 0, {}},
        GateOp{GateKind::S, {0}, 0, {}},
        GateOp{GateKind::T, {0}, 0, {}},
        GateOp{GateKind::TDag, {0}, 0, {}},
        GateOp{GateKind::SqrtNot, {0}, 0, {}},
        make_pulse(0, 0.91),
        make_phase(0, 2.13),
        GateOp{GateKind::CNOT, {0, 1}, 0, {}},
        GateOp{GateKind::CPhase, {0, 1}, 0, {}},
        GateOp{GateKind::PairZZ, {0, 1}, 0.4, {}},
        make_global_g(0.3),
        make_nearest_n(1.1),
    };
    for (const auto& op : ops) CHECK(unitarity_defect(gate_matrix(op, 3)) < 1e-12);
    CHECK(unitarity_defect(gate_matrix(make_global_gg(0.77), 4)) < 1e-12);
}

TEST_CASE("G decomposes into three commuting pair factors") {
    SUBCASE("zero angle") {
        for (const auto& op : decompose_G_as_pair_product(0.0))
            CHECK(raw_distance(gate_matrix(op, 3), identity(8)) == 0.0);
    }
    SUBCASE("pi/4") {
        Matrix prod = identity(8);
        for (const auto& op : decompose_G_as_pair_product(pi / 4))
            prod = gate_matrix(op, 3) * prod;
        CHECK(raw_distance(prod, gate_matrix(make_global_g(pi / 4), 3)) < 1e-13);
    }
    SUBCASE("order irrelevant at random angle") {
        std::mt19937_64 rng(11);
        const double phi = std::uniform_real_distribution<double>(0.0, 2 * pi)(rng);
        auto factors = decompose_G_as_pair_product(phi);
        std::sort(factors.begin(), factors.end(),
                  [](const GateOp& a, const GateOp& b) { return a.qubits < b.qubits; });
        Matrix reference;
        bool first = true;
        do {
            Matrix prod = identity(8);
            for (const auto& op : factors) prod = gate_matrix(op, 3) * prod;
            if (first) {
                reference = prod;
                first = false;
            } else {
                CHECK(raw_distance(prod, reference) < 1e-13);
            }
        } while (std::next_permutation(
            factors.begin(), factors.end(),
            [](const GateOp& a, const GateOp& b) { return a.qubits < b.qubits; }));
        CHECK(raw_distance(reference, gate_matrix(make_global_g(phi), 3)) < 1e-12);
    }
}

TEST_CASE("standard-gate relations") {
    CHECK(raw_distance(pauli_x(), I * pulse(pi)) < 1e-15);
    CHECK(raw_distance(s_gate(), std::polar(1.0, pi / 4) * phase_gate(pi / 4)) < 1e-15);
    CHECK(raw_distance(t_gate(), std::polar(1.0, pi / 8) * phase_gate(pi / 8)) < 1e-15);
    CHECK(raw_distance(hadamard(), I * phase_gate(pi / 4) * pulse(pi / 2) * phase_gate(pi / 4)) <
          1e-15);
    CHECK(phase_aligned_distance(pauli_x(), pulse(pi)) < 1e-12);
    CHECK(phase_aligned_distance(s_gate(), phase_gate(pi / 4)) < 1e-12);
    CHECK(phase_aligned_distance(t_gate(), phase_gate(pi / 8)) < 1e-12);
    CHECK(phase_aligned_distance(hadamard(), phase_gate(pi / 4) * pulse(pi / 2) * phase_gate(pi / 4)) <
          1e-12);
}

TEST_CASE("x-z basis conjugation") {
    const Matrix h = hadamard();
    for (double alpha : {0.1, pi / 7, pi / 4}) {
        // exp(-i a sx) = pulse(2a); exp(-i a sz) = phase(a).
        CHECK(raw_distance(h * pulse(2 * alpha) * h, phase_gate(alpha)) < 1e-12);
        CHECK(raw_distance(h * phase_gate(alpha) * h, pulse(2 * alpha)) < 1e-12);
        const Matrix hh = kron(h, h);
        const Matrix zz = gate_matrix(GateOp{GateKind::PairZZ, {0, 1}, -alpha, {}}, 2);
        Matrix xx = Matrix::Zero(4, 4);
        {
            // exp(-i a sx(x)sx) built by direct series on the involution X(x)X.
            const Matrix xkx = kron(pauli_x(), pauli_x());
            xx = std::cos(alpha) * identity(4) - I * std::sin(alpha) * xkx;
        }
        CHECK(raw_distance(hh * zz * hh, xx) < 1e-12);
        CHECK(raw_distance(hh * xx * hh, zz) < 1e-12);
    }
}

TEST_CASE("uniform CouplingU reproduces G") {
    const double j = 0.83, phi = 0.41;
    std::vector<double> jm(9, j);
    jm[0] = jm[4] = jm[8] = 0.0;
    const Matrix u = gate_matrix(make_coupling_u(jm, 3, 2 * phi / j), 3);
    CHECK(raw_distance(u, gate_matrix(make_global_g(phi), 3)) < 1e-13);
}

TEST_CASE("collective spin squared identity") {
    for (int n : {2, 3, 4}) {
        const Eigen::Index dim = Eigen::Index{1} << n;
        for (char axis : {'x', 'y', 'z'}) {
            const Matrix j = collective_spin(axis, n);
            const Matrix rhs = (n / 4.0) * identity(dim) + 0.5 * pair_sum(axis, n);
            CHECK(raw_distance(j * j, rhs) < 1e-13);
        }
    }
}

TEST_CASE("exp(i phi (2Jz^2 - N/2)) equals G(phi) on three qubits") {
    const double phi = 0.456;
    const Matrix jz = collective_spin('z', 3);
    const Matrix arg = 2.0 * (jz * jz) - 1.5 * identity(8);  // diagonal
    Matrix lhs = Matrix::Zero(8, 8);
    for (int b = 0; b < 8; ++b) lhs(b, b) = std::exp(I * phi * arg(b, b));
    CHECK(raw_distance(lhs, gate_matrix(make_global_g(phi), 3)) < 1e-13);
}

TEST_CASE("malformed ops rejected") {
    CHECK_THROWS(gate_matrix(GateOp{GateKind::GlobalG, {0, 1}, 0.5, {}}, 3));
    CHECK_THROWS(gate_matrix(make_global_g(0.5), 2));
    CHECK_THROWS(gate_matrix(GateOp{GateKind::CouplingU, {0, 1, 2}, 1.0, {1, 2, 3}}, 3));
}
