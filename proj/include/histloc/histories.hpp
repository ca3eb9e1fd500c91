#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "histloc/circuit.hpp"
#include "histloc/qmath.hpp"

namespace histloc::histories {

inline constexpr double kEpsConsistency = 1e-9;
// Branches below this probability are dropped as roundoff artifacts.
inline constexpr double kPruneThreshold = 1e-12;

/// A framework over a timed circuit: a (prior, ket) initial ensemble with
/// mutually orthogonal kets, plus one decomposition of the identity per
/// event time.
struct HistoryFamily {
    circuit::TimedCircuit circuit;
    std::vector<std::pair<double, qmath::Ket>> initial;
    std::vector<std::pair<std::string, qmath::IdentityDecomposition>> events;
    std::string name;
};

/// Throws std::invalid_argument on malformed families and
/// SingleFrameworkViolation when two events at one time label use
/// non-commuting decompositions.
void validate_family(const HistoryFamily& f, double eps = qmath::kEpsNorm);

struct BranchChoice {
    int initial_index = 0;
    // one projector index per event; a decomposition's remainder, when
    // present, is addressed by index projectors.size().
    std::vector<int> choices;
};

struct Branch {
    int initial_index = 0;
    std::vector<int> choices;
    qmath::Ket chain;
    double probability = 0.0;  // prior x squared chain-ket norm
};

struct ConsistencyReport {
    bool consistent = false;
    double worst_overlap = 0.0;
    std::optional<std::pair<BranchChoice, BranchChoice>> offending;
};

class SingleFrameworkViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InconsistentFamilyError : public std::runtime_error {
  public:
    InconsistentFamilyError(std::string what, ConsistencyReport rep)
        : std::runtime_error(std::move(what)), report(std::move(rep)) {}
    ConsistencyReport report;
};

/// K = P_k T(t_k,t_{k-1}) ... P_1 T(t_1,t_0) |psi_0>, unnormalized.
qmath::Ket chain_ket(const HistoryFamily& f, const BranchChoice& b);

/// Chain-ket criterion: pairwise orthogonality of chain kets sharing an
/// initial ket (sufficient for pure orthogonal initial ensembles).
ConsistencyReport consistency_check(const HistoryFamily& f, double eps = kEpsConsistency);

/// All branches with nonzero probability, lexicographic in (initial, choices).
/// Refuses inconsistent families with InconsistentFamilyError.
std::vector<Branch> branch_probabilities(const HistoryFamily& f, double eps = kEpsConsistency,
                                         int* pruned = nullptr);

/// True iff every projector of d1 commutes with every projector of d2.
bool frameworks_compatible(const qmath::IdentityDecomposition& d1,
                           const qmath::IdentityDecomposition& d2, double eps = qmath::kEpsNorm);

nlohmann::ordered_json to_json(const ConsistencyReport& r);
nlohmann::ordered_json family_to_json(const HistoryFamily& f);
HistoryFamily family_from_json(const nlohmann::json& j);

}  // namespace histloc::histories
