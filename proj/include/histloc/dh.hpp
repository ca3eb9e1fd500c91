#pragma once

#include <array>
#include <span>
#include <string>

#include "histloc/circuit.hpp"
#include "histloc/qmath.hpp"

namespace histloc::dh {

// Finite-difference step and dependence threshold; numerical stand-ins for
// symbolic dependence on a gate parameter.
inline constexpr double kDependenceStep = 1e-6;
inline constexpr double kDependenceThreshold = 1e-6;
inline constexpr double kAccessThreshold = 1e-9;

/// Pauli operators of one qubit conjugated back to the reference time:
/// sigma_hat(t) = T(0,t) sigma T(t,0).
struct HeisenbergDescriptor {
    int qubit = 0;
    std::string time;
    std::array<qmath::Operator, 3> sigma;  // x, y, z
};

/// j: 0 = x, 1 = y, 2 = z. Throws on an unbound parameter.
qmath::Operator heisenberg_operator(const circuit::TimedCircuit& c, int alpha, int j,
                                    const std::string& t, const circuit::ParamBinding& binding = {});

HeisenbergDescriptor descriptor(const circuit::TimedCircuit& c, int alpha, const std::string& t,
                                const circuit::ParamBinding& binding = {});

struct DependenceResult {
    bool depends = false;
    double magnitude = 0.0;  // max-norm central difference, maximized over x,y,z
};

/// Does the descriptor of qubit alpha at time t depend on the named gate
/// parameter? Central finite difference around binding[param].
DependenceResult parameter_dependence(const circuit::TimedCircuit& c, int alpha,
                                      const std::string& t, const std::string& param,
                                      circuit::ParamBinding binding,
                                      double dtheta = kDependenceStep);

struct AccessibilityResult {
    bool accessible = false;
    double variation = 0.0;  // max-norm spread of the reduced states
};

/// Dependence can be present yet invisible to local statistics: the reduced
/// state of qubit alpha (from the all-|0> initial state) is compared across
/// parameter samples.
AccessibilityResult accessibility_test(const circuit::TimedCircuit& c, int alpha,
                                       const std::string& t, const std::string& param,
                                       circuit::ParamBinding binding,
                                       std::span<const double> theta_samples);

}  // namespace histloc::dh
