#include "ggc/circuit.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ggc {

namespace {
using std::numbers::pi;
using nlohmann::json;
}  // namespace

int Circuit::entangler_count() const {
    int count = 0;
    for (const auto& op : ops)
        if (kind_is_entangler(op.kind)) ++count;
    return count;
}

Matrix evaluate(const Circuit& c) {
    const Eigen::Index dim = Eigen::Index{1} << c.n_qubits;
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto& op : c.ops) u = gate_matrix(op, c.n_qubits) * u;
    return u;
}

VerificationReport verify(const Circuit& c, const Matrix& target, double tol) {
    const Matrix u = evaluate(c);
    if (u.rows() != target.rows())
        throw std::invalid_argument("verify: dimension mismatch");
    VerificationReport r;
    r.raw_distance = raw_distance(target, u);
    r.aligning_phase = aligning_phase(target, u);
    r.aligned_distance = raw_distance(target, std::polar(1.0, r.aligning_phase) * u);
    r.passed = r.aligned_distance < tol;
    return r;
}

std::vector<int> greedy_layers(const Circuit& c) {
    std::vector<int> layers(c.ops.size(), 0);
    std::vector<int> frontier(static_cast<size_t>(c.n_qubits), 0);
    for (size_t i = 0; i < c.ops.size(); ++i) {
        int layer = 0;
        for (int q : c.ops[i].qubits)
            layer = std::max(layer, frontier[static_cast<size_t>(q)]);
        layers[i] = layer;
        for (int q : c.ops[i].qubits) frontier[static_cast<size_t>(q)] = layer + 1;
    }
    return layers;
}

int phase_group_count(const Circuit& c) {
    auto is_phase_kind = [](GateKind k) {
        return k == GateKind::Phase || k == GateKind::S || k == GateKind::T ||
               k == GateKind::TDag;
    };
    const auto layers = greedy_layers(c);
    std::vector<int> occupied;
    for (size_t i = 0; i < c.ops.size(); ++i) {
        if (!is_phase_kind(c.ops[i].kind)) continue;
        if (std::find(occupied.begin(), occupied.end(), layers[i]) == occupied.end())
            occupied.push_back(layers[i]);
    }
    return static_cast<int>(occupied.size());
}

std::string angle_to_token(double angle) {
    if (angle == 0.0) return "0";
    for (int q = 1; q <= 3600; ++q) {
        const double p_real = angle * q / pi;
        const double p = std::round(p_real);
        if (std::abs(p) > 1e6 || std::abs(p_real - p) > 1e-9) continue;
        if ((p * pi) / q != angle) continue;  // require bit-exact round trip
        const long pl = static_cast<long>(p);
        std::ostringstream out;
        if (pl == -1)
            out << "-";
        else if (pl != 1)
            out << pl;
        out << "pi";
        if (q != 1) out << "/" << q;
        return out.str();
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", angle);
    return buf;
}

double angle_from_token(const std::string& token) {
    const auto pi_pos = token.find("pi");
    if (pi_pos == std::string::npos) {
        size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size())
            throw std::invalid_argument("bad angle token: " + token);
        return v;
    }
    std::string num = token.substr(0, pi_pos);
    std::string rest = token.substr(pi_pos + 2);
    double p = 1.0;
    if (num == "-")
        p = -1.0;
    else if (!num.empty()) {
        size_t used = 0;
        p = std::stod(num, &used);
        if (used != num.size()) throw std::invalid_argument("bad angle token: " + token);
    }
    double q = 1.0;
    if (!rest.empty()) {
        if (rest[0] != '/') throw std::invalid_argument("bad angle token: " + token);
        size_t used = 0;
        q = std::stod(rest.substr(1), &used);
        if (used != rest.size() - 1 || q == 0.0)
            throw std::invalid_argument("bad angle token: " + token);
    }
    return (p * pi) / q;
}

std::string serialize(const Circuit& c) {
    json doc;
    doc["format"] = "qc-1";
    doc["n_qubits"] = c.n_qubits;
    if (!c.name.empty()) doc["name"] = c.name;
    if (!c.metadata.empty()) doc["metadata"] = c.metadata;
    doc["ops"] = json::array();
    for (const auto& op : c.ops) {
        json j;
        j["kind"] = kind_name(op.kind);
        j["qubits"] = op.qubits;
        if (kind_takes_angle(op.kind)) j["angle"] = angle_to_token(op.angle);
        if (!op.couplings.empty()) j["couplings"] = op.couplings;
        doc["ops"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

Circuit parse(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed circuit document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n_qubits") || !doc.contains("ops"))
        throw std::runtime_error("malformed circuit document: missing n_qubits or ops");
    Circuit c;
    c.n_qubits = doc["n_qubits"].get<int>();
    if (c.n_qubits < 1 || c.n_qubits > 4)
        throw std::runtime_error("n_qubits out of range 1..4");
    if (doc.contains("name")) c.name = doc["name"].get<std::string>();
    if (doc.contains("metadata"))
        c.metadata = doc["metadata"].get<std::map<std::string, std::string>>();
    size_t index = 0;
    for (const auto& j : doc["ops"]) {
        const std::string where = "op " + std::to_string(index);
        if (!j.contains("kind") || !j.contains("qubits"))
            throw std::runtime_error(where + ": missing kind or qubits");
        const std::string kname = j["kind"].get<std::string>();
        const auto kind = kind_from_name(kname);
        if (!kind) throw std::runtime_error(where + ": unknown gate kind '" + kname + "'");
        GateOp op;
        op.kind = *kind;
        op.qubits = j["qubits"].get<std::vector<int>>();
        for (int q : op.qubits)
            if (q < 0 || q >= c.n_qubits)
                throw std::runtime_error(where + ": qubit index out of range");
        if (kind_takes_angle(op.kind)) {
            if (!j.contains("angle")) throw std::runtime_error(where + ": missing angle");
            op.angle = angle_from_token(j["angle"].get<std::string>());
        }
        if (j.contains("couplings"))
            op.couplings = j["couplings"].get<std::vector<double>>();
        // Arity and coupling-size errors surface here rather than at evaluate.
        local_gate_matrix(op);
        c.ops.push_back(std::move(op));
        ++index;
    }
    return c;
}

void save_circuit(const Circuit& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << serialize(c);
}

Circuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace ggc
