#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "ggc/catalog.hpp"
#include "ggc/gates.hpp"
#include "ggc/matrix.hpp"

using namespace ggc;
using std::numbers::pi;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index dim) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex{dist(rng), dist(rng)};
    return m;
}

Matrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
    const Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, dim));
    return qr.householderQ();
}

// Independent theta-grid minimization, 1<<16 points.
double grid_aligned_distance(const Matrix& f, const Matrix& g) {
    double best = std::numeric_limits<double>::infinity();
    const int points = 1 << 16;
    for (int i = 0; i < points; ++i) {
        const double theta = 2.0 * pi * i / points;
        best = std::min(best, raw_distance(f, std::polar(1.0, theta) * g));
    }
    return best;
}

}  // namespace

TEST_CASE("kron basics") {
    const Matrix i2 = identity(2);
    CHECK(raw_distance(kron(i2, i2), identity(4)) == 0.0);

    const Matrix xx = kron(pauli_x(), pauli_x());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(xx(i, j) == Complex(i + j == 3 ? 1.0 : 0.0, 0.0));

    const Matrix hh = kron(hadamard(), hadamard());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(hh(i, j)) == doctest::Approx(0.5).epsilon(1e-14));
    // Direct expansion oracle.
    const Matrix h = hadamard();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(hh(i, j) == h(i / 2, j / 2) * h(i % 2, j % 2));
}

TEST_CASE("kron associativity") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = random_matrix(rng, 2), b = random_matrix(rng, 2),
                     c = random_matrix(rng, 2);
        // Entries are triple products; grouping changes rounding, not values.
        CHECK(raw_distance(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-13);
    }
}

TEST_CASE("embed identity case") {
    CHECK(raw_distance(embed(pauli_z(), {0}, 1), pauli_z()) == 0.0);
}

TEST_CASE("embed zz on qubits 0,2 of 3") {
    const Matrix zz = kron(pauli_z(), pauli_z());
    const Matrix e = embed(zz, {0, 2}, 3);
    // Hand oracle: diagonal entry is s_0 * s_2 with s = +1 for |0>, -1 for |1>.
    for (int b = 0; b < 8; ++b) {
        const int s0 = (b & 4) ? -1 : 1;
        const int s2 = (b & 1) ? -1 : 1;
        for (int col = 0; col < 8; ++col)
            CHECK(e(b, col) == Complex(col == b ? double(s0 * s2) : 0.0, 0.0));
    }
    CHECK(e(1, 1) == Complex(-1.0, 0.0));  // |001>
}

TEST_CASE("embed permuted CNOT") {
    // Brute-force oracle: CNOT with control on qubit 1, target on qubit 0.
    Matrix expected = Matrix::Zero(4, 4);
    for (int b = 0; b < 4; ++b) {
        const int q0 = (b >> 1) & 1, q1 = b & 1;
        const int out = ((q0 ^ q1) << 1) | q1;
        expected(out, b) = 1.0;
    }
    CHECK(raw_distance(embed(cnot(), {1, 0}, 2), expected) == 0.0);
}

TEST_CASE("embed error paths") {
    CHECK_THROWS(embed(pauli_z(), {2}, 2));
    CHECK_THROWS(embed(cnot(), {0, 0}, 2));
    CHECK_THROWS(embed(cnot(), {0}, 2));
}

TEST_CASE("embed preserves unitarity") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix u = random_unitary(rng, 4);
        CHECK(unitarity_defect(embed(u, {2, 0}, 3)) < 1e-12);
    }
}

TEST_CASE("raw_distance") {
    std::mt19937_64 rng(3);
    const Matrix u = random_unitary(rng, 8);
    CHECK(raw_distance(u, u) == 0.0);
    CHECK(raw_distance(target_matrix("toffoli"), target_matrix("ccphase")) ==
          doctest::Approx(4.0).epsilon(1e-15));
    CHECK(raw_distance(identity(2), pauli_x()) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS(raw_distance(identity(2), identity(4)));
}

TEST_CASE("phase_aligned_distance invariance and oracle") {
    std::mt19937_64 rng(4);
    const Matrix u = random_unitary(rng, 8);
    CHECK(phase_aligned_distance(u, std::polar(1.0, 0.37) * u) < 1e-12);

    const double d = phase_aligned_distance(target_matrix("toffoli"), target_matrix("ccphase"));
    CHECK(d > 1.0);
    // Theta-grid oracle agrees (grid resolution limits the match).
    CHECK(d == doctest::Approx(grid_aligned_distance(target_matrix("toffoli"),
                                                     target_matrix("ccphase")))
                   .epsilon(1e-3));
}

TEST_CASE("H equals i Phi(pi/4) P Phi(pi/4)") {
    const Matrix rhs = phase_gate(pi / 4) * pulse(pi / 2) * phase_gate(pi / 4);
    CHECK(phase_aligned_distance(hadamard(), rhs) < 1e-12);
    CHECK(raw_distance(hadamard(), Complex{0, 1} * rhs) < 1e-14);
}

TEST_CASE("aligned distance bounded by raw distance and symmetric") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix f = random_unitary(rng, 4), g = random_unitary(rng, 4);
        const double aligned = phase_aligned_distance(f, g);
        CHECK(aligned <= raw_distance(f, g) + 1e-12);
        CHECK(aligned == doctest::Approx(phase_aligned_distance(g, f)).epsilon(1e-12));
    }
}
