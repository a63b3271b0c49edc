#include "ggc/matrix.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ggc {

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Matrix kron(const Matrix& a, const Matrix& b) {
    const Eigen::Index da = a.rows(), db = b.rows();
    if (a.cols() != da || b.cols() != db)
        throw std::invalid_argument("kron: matrices must be square");
    Matrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            out.block(i * db, j * db, db, db) = a(i, j) * b;
    return out;
}

Matrix kron_power(const Matrix& a, int count) {
    if (count < 1) throw std::invalid_argument("kron_power: count < 1");
    Matrix out = a;
    for (int i = 1; i < count; ++i) out = kron(out, a);
    return out;
}

Matrix embed(const Matrix& gate, const std::vector<int>& qubits, int n_qubits) {
    const int k = static_cast<int>(qubits.size());
    if (gate.rows() != gate.cols())
        throw std::invalid_argument("embed: gate must be square");
    if (gate.rows() != (Eigen::Index{1} << k))
        throw std::invalid_argument("embed: gate dimension does not match qubit count");
    std::vector<bool> seen(static_cast<size_t>(n_qubits), false);
    for (int q : qubits) {
        if (q < 0 || q >= n_qubits) throw std::out_of_range("embed: qubit index out of range");
        if (seen[static_cast<size_t>(q)]) throw std::invalid_argument("embed: duplicate qubit index");
        seen[static_cast<size_t>(q)] = true;
    }

    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Matrix out = Matrix::Zero(dim, dim);
    // Qubit q contributes bit (n_qubits-1-q) of the basis index.
    auto sub_index = [&](Eigen::Index full) {
        Eigen::Index s = 0;
        for (int i = 0; i < k; ++i) {
            const int bit = (full >> (n_qubits - 1 - qubits[static_cast<size_t>(i)])) & 1;
            s |= static_cast<Eigen::Index>(bit) << (k - 1 - i);
        }
        return s;
    };
    auto rest_index = [&](Eigen::Index full) {
        Eigen::Index r = 0;
        for (int q = 0; q < n_qubits; ++q) {
            if (seen[static_cast<size_t>(q)]) continue;
            const int bit = static_cast<int>((full >> (n_qubits - 1 - q)) & 1);
            r = (r << 1) | bit;
        }
        return r;
    };
    for (Eigen::Index col = 0; col < dim; ++col) {
        const Eigen::Index sc = sub_index(col);
        const Eigen::Index rc = rest_index(col);
        for (Eigen::Index row = 0; row < dim; ++row) {
            if (rest_index(row) != rc) continue;
            out(row, col) = gate(sub_index(row), sc);
        }
    }
    return out;
}

double raw_distance(const Matrix& f, const Matrix& g) {
    if (f.rows() != g.rows() || f.cols() != g.cols())
        throw std::invalid_argument("raw_distance: dimension mismatch");
    return (f - g).cwiseAbs().sum();
}

double aligning_phase(const Matrix& f, const Matrix& g) {
    if (f.rows() != g.rows() || f.cols() != g.cols())
        throw std::invalid_argument("aligning_phase: dimension mismatch");
    auto dist_at = [&](double theta) {
        return (f - std::polar(1.0, theta) * g).cwiseAbs().sum();
    };
    // Trace alignment is exact for the Frobenius norm; for the
    // absolute-difference sum it can land off the minimum, so also scan a
    // 1024-point grid (theta = 0 included) and refine the best bracket.
    const Complex tr = (g.adjoint() * f).trace();
    double best_theta = std::abs(tr) > 1e-14 ? std::arg(tr) : 0.0;
    double best = dist_at(best_theta);
    const int points = 1024;
    const double step = 2.0 * std::numbers::pi / points;
    int best_i = -1;
    for (int i = 0; i < points; ++i) {
        const double d = dist_at(i * step);
        if (d < best) {
            best = d;
            best_theta = i * step;
            best_i = i;
        }
    }
    if (best_i >= 0) {
        // Golden-section refinement inside the bracketing grid cells.
        double lo = (best_i - 1) * step, hi = (best_i + 1) * step;
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = hi - ratio * (hi - lo), b = lo + ratio * (hi - lo);
        double fa = dist_at(a), fb = dist_at(b);
        for (int it = 0; it < 120 && hi - lo > 1e-14; ++it) {
            if (fa < fb) {
                hi = b; b = a; fb = fa;
                a = hi - ratio * (hi - lo);
                fa = dist_at(a);
            } else {
                lo = a; a = b; fa = fb;
                b = lo + ratio * (hi - lo);
                fb = dist_at(b);
            }
        }
        const double mid = 0.5 * (lo + hi);
        if (dist_at(mid) < best) best_theta = mid;
    }
    return best_theta;
}

double phase_aligned_distance(const Matrix& f, const Matrix& g) {
    const double theta = aligning_phase(f, g);
    return raw_distance(f, std::polar(1.0, theta) * g);
}

double unitarity_defect(const Matrix& u) {
    return ((u.adjoint() * u) - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& u, double tol) {
    return u.rows() == u.cols() && unitarity_defect(u) < tol;
}

bool is_power_of_two(Eigen::Index dim) { return dim > 0 && (dim & (dim - 1)) == 0; }

int qubit_count_of_dim(Eigen::Index dim) {
    if (!is_power_of_two(dim)) throw std::invalid_argument("dimension is not a power of two");
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    return n;
}

}  // namespace ggc
