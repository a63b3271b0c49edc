#include "ggc/ionphys.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ggc/gates.hpp"

namespace ggc {

namespace {
using std::numbers::pi;
constexpr Complex I{0.0, 1.0};
}  // namespace

void BichromaticParams::validate() const {
    if (delta == 0.0) throw std::invalid_argument("bichromatic: delta must be nonzero");
    if (n_ions < 2 || n_ions > 4)
        throw std::invalid_argument("bichromatic: n_ions must be 2..4");
    if (fock_cutoff < 2) throw std::invalid_argument("bichromatic: fock_cutoff < 2");
    if (steps_per_period < 1000)
        throw std::invalid_argument("bichromatic: steps_per_period < 1000");
    if (lamb_dicke_eta != 0.0 && rabi_omega != 0.0) {
        const double expected = lamb_dicke_eta * rabi_omega / std::sqrt(double(n_ions));
        if (std::abs(g - expected) > 1e-12)
            throw std::invalid_argument("bichromatic: g != eta*omega/sqrt(N)");
    }
}

void TrapSpec::validate() const {
    if (n_ions < 2 || n_ions > 4) throw std::invalid_argument("trap: n_ions must be 2..4");
    if (gradient_b <= 0 || g_factor <= 0 || bohr_magneton <= 0 || axial_frequency <= 0)
        throw std::invalid_argument("trap: all parameters must be positive");
}

Complex displacement_envelope(const BichromaticParams& p, double t) {
    p.validate();
    return (2.0 * p.g / p.delta) * (1.0 - std::exp(I * (p.delta * t)));
}

Matrix sm_propagator(const BichromaticParams& p) {
    p.validate();
    const int n = p.n_ions;
    const Eigen::Index dim = Eigen::Index{1} << n;
    const double c = 8.0 * pi * p.g * p.g / (p.delta * p.delta);
    // J_z is diagonal with eigenvalue m = (sum of spin signs)/2, so the
    // z-basis propagator is diag(e^{i c m^2}); the x-basis one is its
    // Hadamard conjugate.
    Matrix u = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        int sign_sum = 0;
        for (int q = 0; q < n; ++q) sign_sum += ((b >> q) & 1) ? -1 : 1;
        const double m = 0.5 * sign_sum;
        u(b, b) = std::polar(1.0, c * m * m);
    }
    if (p.basis == SpinBasis::X) {
        const Matrix h = kron_power(hadamard(), n);
        u = h * u * h;
    }
    return u;
}

FockResult fock_simulate(const BichromaticParams& p, double t,
                         const std::function<bool()>* cancel) {
    p.validate();
    const int n = p.n_ions;
    const Eigen::Index sdim = Eigen::Index{1} << n;
    const Eigen::Index fdim = p.fock_cutoff;
    const Eigen::Index dim = sdim * fdim;

    // Spin part: sum_k sigma_k^x. Motion: a^dag, a on the truncated ladder.
    Matrix sx_sum = Matrix::Zero(sdim, sdim);
    for (int q = 0; q < n; ++q) {
        GateOp op{GateKind::PauliX, {q}, 0.0, {}};
        sx_sum += gate_matrix(op, n);
    }
    Matrix a = Matrix::Zero(fdim, fdim);
    for (Eigen::Index m = 1; m < fdim; ++m) a(m - 1, m) = std::sqrt(double(m));
    const Matrix adag = a.adjoint();

    const Matrix spin_term = sx_sum;  // joint index = spin*fdim + fock
    const Matrix m_up = kron(spin_term, adag);
    const Matrix m_dn = kron(spin_term, a);

    auto hamiltonian = [&](double time) -> Matrix {
        const Complex ph = std::exp(I * (p.delta * time));
        return p.g * (ph * m_up + std::conj(ph) * m_dn);
    };

    const double max_step = 2.0 * pi / (p.steps_per_period * std::abs(p.delta));
    const long n_steps = std::max(1L, static_cast<long>(std::ceil(t / max_step)));
    const double h = t / double(n_steps);

    Matrix u = Matrix::Identity(dim, dim);
    for (long step = 0; step < n_steps; ++step) {
        if (cancel && *cancel && (*cancel)())
            throw std::runtime_error("fock_simulate: cancelled");
        const double t0 = step * h;
        const Matrix k1 = -I * (hamiltonian(t0) * u);
        const Matrix k2 = -I * (hamiltonian(t0 + h / 2) * (u + (h / 2) * k1));
        const Matrix k3 = -I * (hamiltonian(t0 + h / 2) * (u + (h / 2) * k2));
        const Matrix k4 = -I * (hamiltonian(t0 + h) * (u + h * k3));
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    FockResult result;
    result.propagator = u;
    result.unitarity_drift = unitarity_defect(u);
    if (result.unitarity_drift > 1e-8)
        throw std::runtime_error("fock_simulate: step instability, unitarity drift " +
                                 std::to_string(result.unitarity_drift));

    // Spin block between motional ground states.
    result.spin_block = Matrix(sdim, sdim);
    for (Eigen::Index r = 0; r < sdim; ++r)
        for (Eigen::Index c = 0; c < sdim; ++c)
            result.spin_block(r, c) = u(r * fdim, c * fdim);

    // Evolve |00..0>_spin (x) |0>_motion and check Fock truncation and the
    // reduced motional purity.
    Vector psi = Vector::Zero(dim);
    psi(0) = 1.0;
    psi = u * psi;
    double high_pop = 0.0;
    for (Eigen::Index s = 0; s < sdim; ++s)
        for (Eigen::Index m = fdim - 2; m < fdim; ++m)
            high_pop += std::norm(psi(s * fdim + m));
    result.max_high_fock_population = high_pop;
    if (high_pop > 1e-10)
        throw std::runtime_error("fock_simulate: population reached the Fock cutoff");

    Matrix rho = Matrix::Zero(fdim, fdim);
    for (Eigen::Index m1 = 0; m1 < fdim; ++m1)
        for (Eigen::Index m2 = 0; m2 < fdim; ++m2) {
            Complex sum = 0.0;
            for (Eigen::Index s = 0; s < sdim; ++s)
                sum += psi(s * fdim + m1) * std::conj(psi(s * fdim + m2));
            rho(m1, m2) = sum;
        }
    result.motional_purity = (rho * rho).trace().real();
    return result;
}

std::vector<double> equilibrium_positions(int n_ions) {
    if (n_ions < 2 || n_ions > 4)
        throw std::invalid_argument("equilibrium_positions: n_ions must be 2..4");
    const int n = n_ions;
    // Force on ion i: -u_i + sum_{j<i} (u_i-u_j)^-2 - sum_{j>i} (u_j-u_i)^-2.
    std::vector<double> u(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        u[static_cast<size_t>(i)] = -1.0 + 2.0 * i / double(n - 1);  // spread guess

    auto force = [&](const std::vector<double>& x, int i) {
        double f = -x[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
            f += (d > 0 ? 1.0 : -1.0) / (d * d);
        }
        return f;
    };

    // Newton iteration on the force vector; Jacobian is the negated Hessian.
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::VectorXd f(n);
        double resid = 0.0;
        for (int i = 0; i < n; ++i) {
            f(i) = force(u, i);
            resid = std::max(resid, std::abs(f(i)));
        }
        if (resid < 1e-13) break;
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            jac(i, i) = -1.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double d = u[static_cast<size_t>(i)] - u[static_cast<size_t>(j)];
                const double c = 2.0 / std::abs(d * d * d);
                jac(i, i) -= c;
                jac(i, j) += c;
            }
        }
        const Eigen::VectorXd step = jac.fullPivLu().solve(-f);
        for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)] += step(i);
        if (iter == 199) throw std::runtime_error("equilibrium_positions: no convergence");
    }
    double resid = 0.0;
    for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(force(u, i)));
    if (resid > 1e-12) throw std::runtime_error("equilibrium_positions: residual force too large");
    std::sort(u.begin(), u.end());
    return u;
}

Eigen::MatrixXd trap_hessian(int n_ions) {
    const auto u = equilibrium_positions(n_ions);
    const int n = n_ions;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double diag = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double inv3 =
                1.0 / std::pow(std::abs(u[static_cast<size_t>(j)] - u[static_cast<size_t>(k)]), 3);
            diag += 2.0 * inv3;
            a(j, k) = -2.0 * inv3;
        }
        a(j, j) = diag;
    }
    return a;
}

Eigen::MatrixXd magic_couplings(const TrapSpec& spec) {
    spec.validate();
    const Eigen::MatrixXd a = trap_hessian(spec.n_ions);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const double cond =
        svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (cond > 1e12) throw std::runtime_error("magic_couplings: near-singular Hessian");
    const double mu = spec.g_factor * spec.bohr_magneton * spec.gradient_b;
    const double scale = mu * mu / (2.0 * spec.axial_frequency * spec.axial_frequency);
    Eigen::MatrixXd j = scale * lu.inverse();
    j.diagonal().setZero();
    return j;
}

Eigen::MatrixXd relabelled_couplings_n3() {
    TrapSpec spec;
    spec.n_ions = 3;
    Eigen::MatrixXd j = magic_couplings(spec);
    // Ions in position order 0,1,2 -> qubit order 1,0,2: the middle ion
    // becomes qubit 0, so J_01 = J_02.
    const std::array<int, 3> perm = {1, 0, 2};
    Eigen::MatrixXd out(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out(r, c) = j(perm[static_cast<size_t>(r)], perm[static_cast<size_t>(c)]);
    return out / out(0, 1);
}

Matrix free_evolution(const Eigen::MatrixXd& j_matrix, double tau) {
    const int n = static_cast<int>(j_matrix.rows());
    if (j_matrix.cols() != n) throw std::invalid_argument("free_evolution: J not square");
    if ((j_matrix - j_matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("free_evolution: J not symmetric");
    std::vector<double> flat(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) flat[static_cast<size_t>(r) * n + c] = j_matrix(r, c);
    return local_gate_matrix(make_coupling_u(flat, n, tau));
}

}  // namespace ggc
