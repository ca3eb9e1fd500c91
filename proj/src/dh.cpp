#include "histloc/dh.hpp"

#include <stdexcept>

namespace histloc::dh {

using qmath::Ket;
using qmath::Operator;

namespace {

Operator pauli(int j) {
    switch (j) {
        case 0: return qmath::pauli_x();
        case 1: return qmath::pauli_y();
        case 2: return qmath::pauli_z();
    }
    throw std::out_of_range("pauli index must be 0, 1 or 2");
}

}  // namespace

Operator heisenberg_operator(const circuit::TimedCircuit& c, int alpha, int j,
                             const std::string& t, const circuit::ParamBinding& binding) {
    const Operator sigma = qmath::embed(pauli(j), {alpha}, c.n_qubits);
    const Operator u = circuit::propagator(c, c.times.front(), t, binding);
    return u.adjoint() * sigma * u;
}

HeisenbergDescriptor descriptor(const circuit::TimedCircuit& c, int alpha, const std::string& t,
                                const circuit::ParamBinding& binding) {
    HeisenbergDescriptor d;
    d.qubit = alpha;
    d.time = t;
    for (int j = 0; j < 3; ++j) d.sigma[j] = heisenberg_operator(c, alpha, j, t, binding);
    return d;
}

DependenceResult parameter_dependence(const circuit::TimedCircuit& c, int alpha,
                                      const std::string& t, const std::string& param,
                                      circuit::ParamBinding binding, double dtheta) {
    if (dtheta <= 0.0) throw std::invalid_argument("parameter_dependence: dtheta must be positive");
    const auto it = binding.find(param);
    if (it == binding.end())
        throw std::invalid_argument("parameter_dependence: no base value for " + param);
    const double theta0 = it->second;

    DependenceResult result;
    for (int j = 0; j < 3; ++j) {
        binding[param] = theta0 + dtheta;
        const Operator plus = heisenberg_operator(c, alpha, j, t, binding);
        binding[param] = theta0 - dtheta;
        const Operator minus = heisenberg_operator(c, alpha, j, t, binding);
        result.magnitude =
            std::max(result.magnitude, qmath::max_abs((plus - minus) / (2.0 * dtheta)));
    }
    binding[param] = theta0;
    result.depends = result.magnitude > kDependenceThreshold;
    return result;
}

AccessibilityResult accessibility_test(const circuit::TimedCircuit& c, int alpha,
                                       const std::string& t, const std::string& param,
                                       circuit::ParamBinding binding,
                                       std::span<const double> theta_samples) {
    if (theta_samples.size() < 2)
        throw std::invalid_argument("accessibility_test: need at least two parameter samples");

    const Ket zero = qmath::basis_ket(c.n_qubits, 0);
    std::vector<Operator> reduced;
    for (double theta : theta_samples) {
        binding[param] = theta;
        const Ket psi = circuit::evolve(c, zero, t, binding);
        reduced.push_back(qmath::partial_trace(qmath::dyad(psi), {alpha}, c.n_qubits));
    }

    AccessibilityResult result;
    for (std::size_t i = 0; i < reduced.size(); ++i)
        for (std::size_t j = i + 1; j < reduced.size(); ++j)
            result.variation = std::max(result.variation, qmath::max_abs(reduced[i] - reduced[j]));
    result.accessible = result.variation > kAccessThreshold;
    return result;
}

}  // namespace histloc::dh
