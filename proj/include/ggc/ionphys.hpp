#pragma once

#include <functional>
#include <vector>

#include "ggc/matrix.hpp"

namespace ggc {

enum class SpinBasis { X, Z };

/// Bichromatic drive parameters, uniform over the chain. Counterpropagating
/// red/blue beams are assumed, so the spin operator is sigma_x.
struct BichromaticParams {
    double g = 0.0;       // spin-phonon coupling rate
    double delta = 1.0;   // detuning, nonzero
    int n_ions = 3;       // 2..4
    SpinBasis basis = SpinBasis::X;
    int fock_cutoff = 20;
    int steps_per_period = 1000;  // integration resolution floor per 2pi/delta
    // Optional: when both are set, g must equal eta*omega/sqrt(N).
    double lamb_dicke_eta = 0.0;
    double rabi_omega = 0.0;

    void validate() const;
};

/// Static trap parameters for magnetic-gradient couplings. Internally the
/// chain is treated in dimensionless trap units; the scale prefactor
/// (g_e mu_B b)^2 / (2 omega^2) is applied at this boundary.
struct TrapSpec {
    int n_ions = 3;
    double gradient_b = 1.0;       // T/m
    double g_factor = 2.0;
    double bohr_magneton = 1.0;    // J/T
    double axial_frequency = 1.0;  // angular frequency

    void validate() const;
};

/// Motional displacement envelope per unit J_x eigenvalue,
/// a(t) = (2g/delta)(1 - e^{i delta t}); vanishes at t = 2 pi / delta.
Complex displacement_envelope(const BichromaticParams& p, double t);

/// Spin propagator at the gate time t = 2 pi / delta:
/// exp(i (8 pi g^2 / delta^2) J_beta^2) on 2^N dimensions.
Matrix sm_propagator(const BichromaticParams& p);

struct FockResult {
    Matrix propagator;       // full spin (x) motion propagator, truncated
    Matrix spin_block;       // <s',0| U |s,0> block
    double motional_purity;  // tr(rho_motion^2) after evolving |000..>(x)|0>
    double max_high_fock_population;  // population in the top two Fock levels
    double unitarity_drift;  // ||U^dag U - I||_max of the integrated propagator
};

/// Time-ordered propagator of the bichromatic Hamiltonian
/// H(t) = g (sum_k sigma_k^x) (a^dag e^{i delta t} + a e^{-i delta t})
/// on the truncated spin (x) Fock space, integrated with fixed-step RK4.
/// Throws if population leaks into the top two Fock levels (> 1e-10) or if
/// the propagator's unitarity defect exceeds 1e-8. `cancel`, when set, is
/// polled between steps.
FockResult fock_simulate(const BichromaticParams& p, double t,
                         const std::function<bool()>* cancel = nullptr);

/// Ion equilibrium positions in dimensionless trap units, sorted ascending.
/// Solves the force balance of harmonic confinement against Coulomb
/// repulsion; residual force < 1e-12.
std::vector<double> equilibrium_positions(int n_ions);

/// Dimensionless axial Hessian at the equilibrium positions:
/// A_jj = 1 + 2 sum_{k!=j} |u_j-u_k|^-3, A_jk = -2 |u_j-u_k|^-3.
Eigen::MatrixXd trap_hessian(int n_ions);

/// MAGIC coupling matrix J = (g_e mu_B b)^2 / 2 * A^{-1}, scaled per spec.
Eigen::MatrixXd magic_couplings(const TrapSpec& spec);

/// The n=3 coupling matrix in the relabelled qubit order (middle ion first),
/// so that J_01 = J_02 != J_12; normalized so J_01 = 1.
Eigen::MatrixXd relabelled_couplings_n3();

/// Free evolution exp(i (tau/2) sum_{j<k} J_jk sz_j sz_k), diagonal.
Matrix free_evolution(const Eigen::MatrixXd& j_matrix, double tau);

}  // namespace ggc
