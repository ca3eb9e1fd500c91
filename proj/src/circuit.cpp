#include "histloc/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace histloc::circuit {

using qmath::Complex;
using qmath::Ket;
using qmath::Operator;

std::string gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CZ: return "CZ";
        case GateKind::RZ: return "RZ";
        case GateKind::RY: return "RY";
        case GateKind::Unitary: return "U";
    }
    throw std::logic_error("unknown gate kind");
}

GateKind gate_kind_from_name(const std::string& name) {
    if (name == "H") return GateKind::H;
    if (name == "X") return GateKind::X;
    if (name == "Z") return GateKind::Z;
    if (name == "CNOT") return GateKind::CNOT;
    if (name == "CZ") return GateKind::CZ;
    if (name == "RZ") return GateKind::RZ;
    if (name == "RY") return GateKind::RY;
    if (name == "U") return GateKind::Unitary;
    throw std::invalid_argument("unknown gate kind: " + name);
}

Gate h(int q) { return Gate{GateKind::H, {q}}; }
Gate x(int q) { return Gate{GateKind::X, {q}}; }
Gate z(int q) { return Gate{GateKind::Z, {q}}; }
Gate cnot(int control, int target) { return Gate{GateKind::CNOT, {control, target}}; }
Gate cz(int q1, int q2) { return Gate{GateKind::CZ, {q1, q2}}; }
Gate rz(int q, double theta) { return Gate{GateKind::RZ, {q}, theta}; }
Gate ry(int q, double theta) { return Gate{GateKind::RY, {q}, theta}; }
Gate rz(int q, std::string param) { return Gate{GateKind::RZ, {q}, 0.0, std::move(param)}; }
Gate ry(int q, std::string param) { return Gate{GateKind::RY, {q}, 0.0, std::move(param)}; }

Gate unitary(std::vector<int> qubits, qmath::Operator matrix) {
    Gate g{GateKind::Unitary, std::move(qubits)};
    if (!qmath::is_unitary(matrix)) throw std::invalid_argument("explicit gate matrix is not unitary");
    g.matrix = std::move(matrix);
    return g;
}

int TimedCircuit::time_index(const std::string& label) const {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] == label) return static_cast<int>(i);
    throw std::invalid_argument("unknown time label: " + label);
}

const std::string& TimedCircuit::label(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits) throw std::out_of_range("qubit index out of range");
    return qubit_labels[qubit];
}

namespace {

Operator rotation_z(double theta) {
    Operator m = Operator::Zero(2, 2);
    m(0, 0) = std::exp(Complex(0.0, -theta / 2.0));
    m(1, 1) = std::exp(Complex(0.0, theta / 2.0));
    return m;
}

Operator rotation_y(double theta) {
    Operator m(2, 2);
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    m << c, -s, s, c;
    return m;
}

double gate_angle(const Gate& g, const ParamBinding& binding) {
    if (g.param.empty()) return g.theta;
    const auto it = binding.find(g.param);
    if (it == binding.end()) throw std::invalid_argument("unbound gate parameter: " + g.param);
    return it->second;
}

void check_gate_qubits(const Gate& g, int n_qubits, std::size_t expected) {
    if (g.qubits.size() != expected)
        throw std::invalid_argument("gate " + gate_kind_name(g.kind) + ": wrong qubit count");
    for (int q : g.qubits)
        if (q < 0 || q >= n_qubits) throw std::out_of_range("gate qubit index out of range");
    if (expected == 2 && g.qubits[0] == g.qubits[1])
        throw std::invalid_argument("two-qubit gate with repeated qubit");
}

}  // namespace

Operator gate_matrix(const Gate& g, int n_qubits, const ParamBinding& binding) {
    using qmath::embed;
    switch (g.kind) {
        case GateKind::H:
            check_gate_qubits(g, n_qubits, 1);
            return embed(qmath::hadamard(), g.qubits, n_qubits);
        case GateKind::X:
            check_gate_qubits(g, n_qubits, 1);
            return embed(qmath::pauli_x(), g.qubits, n_qubits);
        case GateKind::Z:
            check_gate_qubits(g, n_qubits, 1);
            return embed(qmath::pauli_z(), g.qubits, n_qubits);
        case GateKind::RZ:
            check_gate_qubits(g, n_qubits, 1);
            return embed(rotation_z(gate_angle(g, binding)), g.qubits, n_qubits);
        case GateKind::RY:
            check_gate_qubits(g, n_qubits, 1);
            return embed(rotation_y(gate_angle(g, binding)), g.qubits, n_qubits);
        case GateKind::CNOT: {
            check_gate_qubits(g, n_qubits, 2);
            const Operator p0 = embed(qmath::dyad(qmath::ket0()), {g.qubits[0]}, n_qubits);
            const Operator p1 = embed(qmath::dyad(qmath::ket1()), {g.qubits[0]}, n_qubits);
            return p0 + p1 * embed(qmath::pauli_x(), {g.qubits[1]}, n_qubits);
        }
        case GateKind::CZ: {
            check_gate_qubits(g, n_qubits, 2);
            const Operator p0 = embed(qmath::dyad(qmath::ket0()), {g.qubits[0]}, n_qubits);
            const Operator p1 = embed(qmath::dyad(qmath::ket1()), {g.qubits[0]}, n_qubits);
            return p0 + p1 * embed(qmath::pauli_z(), {g.qubits[1]}, n_qubits);
        }
        case GateKind::Unitary: {
            std::vector<int> sorted = g.qubits;
            if (sorted.size() == 2 && sorted[0] > sorted[1])
                throw std::invalid_argument("explicit gate qubits must be ascending");
            return embed(g.matrix, sorted, n_qubits);
        }
    }
    throw std::logic_error("unknown gate kind");
}

Operator propagator(const TimedCircuit& c, const std::string& from, const std::string& to,
                    const ParamBinding& binding) {
    const int i = c.time_index(from);
    const int j = c.time_index(to);
    if (i > j) throw std::invalid_argument("propagator: from is later than to");
    Operator u = qmath::identity(1 << c.n_qubits);
    for (int layer = i; layer < j; ++layer)
        for (const Gate& g : c.layers[layer]) u = gate_matrix(g, c.n_qubits, binding) * u;
    return u;
}

Ket evolve(const TimedCircuit& c, const Ket& psi0, const std::string& to,
           const ParamBinding& binding) {
    if (psi0.size() != (1 << c.n_qubits)) throw std::invalid_argument("evolve: dimension mismatch");
    return propagator(c, c.times.front(), to, binding) * psi0;
}

namespace {

std::vector<std::string> time_labels(int count) {
    std::vector<std::string> t;
    for (int i = 0; i < count; ++i) t.push_back("t" + std::to_string(i));
    return t;
}

void fill_regions(TimedCircuit& c, int qubit, const std::vector<std::string>& per_time) {
    for (std::size_t i = 0; i < c.times.size(); ++i) c.regions[c.times[i]][qubit] = per_time[i];
}

}  // namespace

TimedCircuit dense_coding_circuit() {
    TimedCircuit c;
    c.n_qubits = 4;  // a, ā, b, c
    c.times = time_labels(9);
    c.qubit_labels = {"a", "ā", "b", "c"};
    c.layers.assign(8, {});
    c.layers[0] = {h(2)};        // entangle b with c in Bob's lab
    c.layers[1] = {cnot(2, 3)};
    // (t2,t3): b in transit to Alice
    c.layers[3] = {cnot(1, 2)};  // Alice writes ā
    c.layers[4] = {cz(0, 2)};    // Alice writes a
    // (t5,t6): b in transit back to Bob
    c.layers[6] = {cnot(2, 3)};  // Bob inverts the entangling step
    c.layers[7] = {h(2)};

    fill_regions(c, 0, std::vector<std::string>(9, "Alice"));
    fill_regions(c, 1, std::vector<std::string>(9, "Alice"));
    fill_regions(c, 2, {"Bob", "Bob", "Bob", "transit", "Alice", "Alice", "transit", "Bob", "Bob"});
    fill_regions(c, 3, std::vector<std::string>(9, "Bob"));
    return c;
}

TimedCircuit teleportation_circuit() {
    TimedCircuit c;
    c.n_qubits = 3;  // a, b, c
    c.times = time_labels(9);
    c.qubit_labels = {"a", "b", "c"};
    c.layers.assign(8, {});
    c.layers[0] = {h(1)};        // entangle b with c
    c.layers[1] = {cnot(1, 2)};
    // (t2,t3): b in transit to Alice
    c.layers[3] = {cnot(0, 1)};  // Bell-basis rotation on (a,b)
    c.layers[4] = {h(0)};
    // (t5,t6): a and b in transit to Bob
    c.layers[6] = {cnot(1, 2)};  // conditional corrections on c
    c.layers[7] = {cz(0, 2)};

    fill_regions(c, 0, {"Alice", "Alice", "Alice", "Alice", "Alice", "Alice", "transit", "Bob", "Bob"});
    fill_regions(c, 1, {"Bob", "Bob", "Bob", "transit", "Alice", "Alice", "transit", "Bob", "Bob"});
    fill_regions(c, 2, std::vector<std::string>(9, "Bob"));
    return c;
}

nlohmann::ordered_json to_json(const TimedCircuit& c) {
    nlohmann::ordered_json j;
    j["n_qubits"] = c.n_qubits;
    j["qubit_labels"] = c.qubit_labels;
    j["times"] = c.times;
    j["layers"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < c.layers.size(); ++i) {
        nlohmann::ordered_json layer;
        layer["from"] = c.times[i];
        layer["to"] = c.times[i + 1];
        layer["gates"] = nlohmann::ordered_json::array();
        for (const Gate& g : c.layers[i]) {
            nlohmann::ordered_json gate;
            gate["kind"] = gate_kind_name(g.kind);
            gate["qubits"] = g.qubits;
            if (g.kind == GateKind::RZ || g.kind == GateKind::RY) {
                if (g.param.empty())
                    gate["theta"] = g.theta;
                else
                    gate["param"] = g.param;
            }
            if (g.kind == GateKind::Unitary) {
                nlohmann::ordered_json rows = nlohmann::ordered_json::array();
                for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
                    nlohmann::ordered_json row = nlohmann::ordered_json::array();
                    for (Eigen::Index col = 0; col < g.matrix.cols(); ++col)
                        row.push_back({g.matrix(r, col).real(), g.matrix(r, col).imag()});
                    rows.push_back(row);
                }
                gate["matrix"] = rows;
            }
            layer["gates"].push_back(gate);
        }
        j["layers"].push_back(layer);
    }
    nlohmann::ordered_json regions;
    for (const std::string& t : c.times) {
        const auto it = c.regions.find(t);
        if (it == c.regions.end()) continue;
        nlohmann::ordered_json per_qubit;
        for (const auto& [q, region] : it->second) per_qubit[std::to_string(q)] = region;
        regions[t] = per_qubit;
    }
    j["regions"] = regions;
    return j;
}

TimedCircuit circuit_from_json(const nlohmann::json& j) {
    TimedCircuit c;
    c.n_qubits = j.at("n_qubits").get<int>();
    if (c.n_qubits < 1 || c.n_qubits > 4)
        throw std::invalid_argument("circuit_from_json: supported qubit counts are 1..4");
    c.times = j.at("times").get<std::vector<std::string>>();
    if (c.times.size() < 2) throw std::invalid_argument("circuit_from_json: need at least two times");
    if (j.contains("qubit_labels"))
        c.qubit_labels = j.at("qubit_labels").get<std::vector<std::string>>();
    else
        for (int q = 0; q < c.n_qubits; ++q) c.qubit_labels.push_back("q" + std::to_string(q));
    if (static_cast<int>(c.qubit_labels.size()) != c.n_qubits)
        throw std::invalid_argument("circuit_from_json: qubit_labels size mismatch");

    c.layers.assign(c.times.size() - 1, {});
    for (const auto& layer : j.at("layers")) {
        const int from = c.time_index(layer.at("from").get<std::string>());
        const int to = c.time_index(layer.at("to").get<std::string>());
        if (to != from + 1) throw std::invalid_argument("circuit_from_json: layer must span adjacent times");
        for (const auto& gj : layer.at("gates")) {
            Gate g;
            g.kind = gate_kind_from_name(gj.at("kind").get<std::string>());
            g.qubits = gj.at("qubits").get<std::vector<int>>();
            if (gj.contains("theta")) g.theta = gj.at("theta").get<double>();
            if (gj.contains("param")) g.param = gj.at("param").get<std::string>();
            if (g.kind == GateKind::Unitary) {
                const auto& rows = gj.at("matrix");
                const auto dim = rows.size();
                qmath::Operator m(dim, dim);
                for (std::size_t r = 0; r < dim; ++r)
                    for (std::size_t col = 0; col < dim; ++col)
                        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
                            Complex(rows[r][col][0].get<double>(), rows[r][col][1].get<double>());
                g.matrix = std::move(m);
            }
            // validates qubit indices and parameter shape
            gate_matrix(g, c.n_qubits, g.param.empty() ? ParamBinding{} : ParamBinding{{g.param, 0.0}});
            c.layers[from].push_back(std::move(g));
        }
    }
    if (j.contains("regions"))
        for (const auto& [t, per_qubit] : j.at("regions").items()) {
            c.time_index(t);
            for (const auto& [q, region] : per_qubit.items())
                c.regions[t][std::stoi(q)] = region.get<std::string>();
        }
    return c;
}

}  // namespace histloc::circuit
