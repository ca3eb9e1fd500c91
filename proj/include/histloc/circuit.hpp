#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "histloc/qmath.hpp"

namespace histloc::circuit {

enum class GateKind { H, X, Z, CNOT, CZ, RZ, RY, Unitary };

std::string gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);

/// Values bound to named gate parameters when a propagator is built.
using ParamBinding = std::map<std::string, double>;

struct Gate {
    GateKind kind = GateKind::H;
    std::vector<int> qubits;  // one entry, or (control, target) / (q1, q2)
    double theta = 0.0;       // RZ/RY fixed angle, ignored when param is set
    std::string param;        // non-empty: angle comes from the ParamBinding
    qmath::Operator matrix;   // Unitary kind only, one- or two-qubit
};

Gate h(int q);
Gate x(int q);
Gate z(int q);
Gate cnot(int control, int target);
Gate cz(int q1, int q2);
Gate rz(int q, double theta);
Gate ry(int q, double theta);
Gate rz(int q, std::string param);
Gate ry(int q, std::string param);
Gate unitary(std::vector<int> qubits, qmath::Operator matrix);

/// A circuit as gate layers between named times t0..tf. Layers are
/// instantaneous; "transport" intervals are simply empty layers, with spatial
/// location kept as per-time region metadata for report rendering.
struct TimedCircuit {
    int n_qubits = 0;
    std::vector<std::string> times;               // size L+1
    std::vector<std::vector<Gate>> layers;        // size L, layers[i] acts on (times[i], times[i+1])
    std::vector<std::string> qubit_labels;        // defaults to q0..q{n-1}
    std::map<std::string, std::map<int, std::string>> regions;

    int time_index(const std::string& label) const;  // throws on unknown label
    const std::string& label(int qubit) const;
};

/// Full-space matrix of a single gate. Throws on an unbound named parameter.
qmath::Operator gate_matrix(const Gate& g, int n_qubits, const ParamBinding& binding = {});

/// Unitary product of the gate layers between two time labels, most recent
/// layer leftmost. Requires from <= to.
qmath::Operator propagator(const TimedCircuit& c, const std::string& from, const std::string& to,
                           const ParamBinding& binding = {});

/// propagator(t0, to) applied to psi0.
qmath::Ket evolve(const TimedCircuit& c, const qmath::Ket& psi0, const std::string& to,
                  const ParamBinding& binding = {});

/// The four-qubit dense-coding circuit (qubits a, ā, b, c; times t0..t8).
TimedCircuit dense_coding_circuit();
/// The three-qubit teleportation circuit (qubits a, b, c; times t0..t8).
TimedCircuit teleportation_circuit();

nlohmann::ordered_json to_json(const TimedCircuit& c);
TimedCircuit circuit_from_json(const nlohmann::json& j);

}  // namespace histloc::circuit
