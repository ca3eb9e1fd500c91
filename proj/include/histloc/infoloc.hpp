#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "histloc/circuit.hpp"
#include "histloc/histories.hpp"
#include "histloc/parallel.hpp"
#include "histloc/qmath.hpp"

namespace histloc::infoloc {

/// Finite joint pmf over (preparation label M, outcome label N).
struct JointDistribution {
    std::vector<std::string> m_labels;
    std::vector<std::string> n_labels;
    Eigen::MatrixXd pmf;  // m_labels.size() x n_labels.size()
};

void validate_pmf(const JointDistribution& j, double eps = 1e-12);

/// I(M:N) = H(M) + H(N) - H(M,N) in bits, with 0 log 0 := 0.
double mutual_information(const JointDistribution& j);

/// True iff every outcome N of positive probability determines a unique M
/// with Pr(M|N)=1, and those M cover the support of M.
bool contains_information(const JointDistribution& j, double eps = 1e-9);

/// Canonical domain: |lambda| < 1, or |lambda| = 1 with arg in [0, pi).
/// lambda and -1/conj(lambda) label the same decomposition with the two
/// basis vectors swapped; out-of-domain input is folded accordingly.
struct LambdaBasis {
    qmath::Complex lambda;
    bool folded = false;  // input was outside the canonical domain
    qmath::Ket p0, p1;
};

qmath::Complex canonical_lambda(qmath::Complex lambda, bool* folded = nullptr);
LambdaBasis lambda_basis(qmath::Complex lambda);

struct SubsystemFactorization {
    std::vector<int> b_qubits;  // ascending, non-empty
    std::vector<int> f_qubits;  // complement, possibly empty
    int n_qubits = 0;
};

SubsystemFactorization factorization(std::vector<int> b_qubits, int n_qubits);

/// Channel preparation: a lambda basis written into one qubit, every other
/// qubit in a fixed environment state.
struct ChannelPrep {
    LambdaBasis basis;
    int input_qubit = 0;
    qmath::Ket env;  // state of the remaining qubits, ascending index order
};

qmath::Ket prepared_state(const ChannelPrep& prep, int n_qubits, int m);

struct SubsystemInfoResult {
    bool located = false;
    // worst deviation of the constructed decomposition from the defining
    // correlation P^m |Psi^m'> = delta_mm' |Psi^m>
    double residual = 0.0;
    std::optional<qmath::IdentityDecomposition> projectors;
};

/// Decides whether the information about the prepared basis is carried by
/// the subsystem at the given time: evolves both basis states, reduces onto
/// the subsystem and tests the supports for orthogonality. On success the
/// support projectors, extended by identity on the complement, form the
/// located decomposition (plus remainder).
SubsystemInfoResult info_in_subsystem(const circuit::TimedCircuit& c, const ChannelPrep& prep,
                                      const std::string& time, const SubsystemFactorization& fact,
                                      double eps = qmath::kEpsNorm);

/// Closed-form decomposition showing the channel on the (a,b) pair at the
/// post-Hadamard time of the teleportation circuit: two rank-2 projectors on
/// (a,b), extended by identity on c.
qmath::IdentityDecomposition teleport_pair_decomposition(qmath::Complex lambda);

/// The eight-member contextual product basis on (a,b,c): third-qubit states
/// p, Xp, Zp, XZp attached to |00>, |01>, |10>, |11|.
qmath::IdentityDecomposition contextual_basis(qmath::Complex lambda);

struct SubsetVerdict {
    std::vector<int> qubits;
    bool located = false;
    std::optional<qmath::Complex> witness_lambda;  // first failing grid point
};

struct ChannelLocationReport {
    std::string time;
    std::vector<SubsetVerdict> subsets;           // ordered by (size, lexicographic)
    std::vector<std::vector<int>> minimal;        // inclusion-minimal located subsets
    std::uint64_t grid_seed = 0;
    double eps = 0.0;
    std::string construction = "support_projectors";
};

/// 9 structured lambdas plus n_random seeded pseudo-random points in the
/// canonical domain. The structured points include the boundary cases the
/// analysis singles out (computational, S_x, S_y bases).
std::vector<qmath::Complex> default_lambda_grid(std::uint64_t seed, int n_random = 64);

/// Sweeps every non-empty qubit subset against every grid lambda; a subset
/// is located only if info_in_subsystem succeeds for all of them. Sound for
/// failure, sampled for success.
ChannelLocationReport locate_channel(const circuit::TimedCircuit& c, int input_qubit,
                                     const qmath::Ket& env, const std::string& time,
                                     std::span<const qmath::Complex> grid, double eps,
                                     ExecMode mode = ExecMode::openmp,
                                     std::uint64_t grid_seed = 0);

/// Joint pmf over (initial label, branch label) aggregated from branch
/// probabilities; bridges history families to the information criteria.
JointDistribution framework_joint(const histories::HistoryFamily& family,
                                  const std::function<std::string(int)>& m_label,
                                  const std::function<std::string(const histories::Branch&)>& n_label);

nlohmann::ordered_json to_json(const ChannelLocationReport& r,
                               const std::vector<std::string>& qubit_labels = {});

}  // namespace histloc::infoloc
