#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ggc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kDefaultTol = 1e-10;

/// Identity matrix of the given dimension.
Matrix identity(Eigen::Index dim);

/// Kronecker (tensor) product: result((i*db+k),(j*db+l)) = a(i,j)*b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

/// Tensor power a ⊗ a ⊗ ... ⊗ a (count factors).
Matrix kron_power(const Matrix& a, int count);

/// Embed a gate acting on the listed qubits into an n-qubit operator.
/// Qubit 0 is the leftmost ket symbol and the most significant bit of the
/// basis index. Non-adjacent and permuted qubit lists are handled by
/// permuting basis states.
Matrix embed(const Matrix& gate, const std::vector<int>& qubits, int n_qubits);

/// Sum of elementwise absolute differences, D = sum_ij |f_ij - g_ij|.
double raw_distance(const Matrix& f, const Matrix& g);

/// min over theta of raw_distance(f, e^{i theta} g). The trace phase
/// arg(trace(g^dag f)) seeds the search; a 1024-point grid with local
/// refinement covers the cases where that lands off the minimum of the
/// absolute-difference sum. Zero iff f and g agree up to a global phase.
double phase_aligned_distance(const Matrix& f, const Matrix& g);

/// The phase theta minimizing raw_distance(f, e^{i theta} g).
double aligning_phase(const Matrix& f, const Matrix& g);

/// Max-norm unitarity defect ||U^dag U - I||_max.
double unitarity_defect(const Matrix& u);

bool is_unitary(const Matrix& u, double tol = kUnitaryTol);

/// True when dim is 2^k for k >= 0.
bool is_power_of_two(Eigen::Index dim);

/// log2 of a power-of-two dimension.
int qubit_count_of_dim(Eigen::Index dim);

}  // namespace ggc
