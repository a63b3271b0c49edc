#pragma once

#include <map>
#include <string>
#include <vector>

#include "ggc/gates.hpp"

namespace ggc {

/// Time-ordered gate sequence; ops[0] acts first.
struct Circuit {
    int n_qubits = 0;
    std::vector<GateOp> ops;
    std::string name;
    std::map<std::string, std::string> metadata;

    int entangler_count() const;
};

struct VerificationReport {
    double aligned_distance = 0.0;
    double raw_distance = 0.0;
    bool passed = false;
    double aligning_phase = 0.0;
};

/// Product M_k ... M_2 M_1 of the embedded gate matrices, reversed so the
/// first op in the list acts first in time.
Matrix evaluate(const Circuit& c);

VerificationReport verify(const Circuit& c, const Matrix& target, double tol);

/// ASAP layer index per op: an op lands one layer after the latest previous
/// op that shares a qubit with it.
std::vector<int> greedy_layers(const Circuit& c);

/// Number of distinct layers occupied by Phase/S/T/TDag ops (T-depth).
int phase_group_count(const Circuit& c);

std::string serialize(const Circuit& c);
Circuit parse(const std::string& text);

// Angle <-> token helpers ("pi/8", "5pi/8", "-pi/4", "0", or a plain
// decimal in radians when no small pi-rational matches).
std::string angle_to_token(double angle);
double angle_from_token(const std::string& token);

void save_circuit(const Circuit& c, const std::string& path);
Circuit load_circuit(const std::string& path);

}  // namespace ggc
