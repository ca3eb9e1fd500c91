#include "histloc/histories.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace histloc::histories {

using qmath::Complex;
using qmath::IdentityDecomposition;
using qmath::Ket;
using qmath::Operator;

void validate_family(const HistoryFamily& f, double eps) {
    if (f.initial.empty()) throw std::invalid_argument("family: empty initial ensemble");
    const int dim = 1 << f.circuit.n_qubits;

    double prior_sum = 0.0;
    for (const auto& [prior, ket] : f.initial) {
        if (prior < 0.0) throw std::invalid_argument("family: negative prior");
        if (ket.size() != dim) throw std::invalid_argument("family: initial ket dimension mismatch");
        if (!qmath::is_normalized(ket, eps))
            throw std::invalid_argument("family: initial ket is not normalized");
        prior_sum += prior;
    }
    if (std::abs(prior_sum - 1.0) > eps) throw std::invalid_argument("family: priors do not sum to 1");
    for (std::size_t i = 0; i < f.initial.size(); ++i)
        for (std::size_t j = i + 1; j < f.initial.size(); ++j)
            if (std::abs(f.initial[i].second.dot(f.initial[j].second)) > eps)
                throw std::invalid_argument("family: initial kets are not orthogonal");

    for (std::size_t i = 0; i < f.events.size(); ++i) {
        const auto& [time, decomposition] = f.events[i];
        f.circuit.time_index(time);
        if (i > 0 && f.circuit.time_index(f.events[i - 1].first) > f.circuit.time_index(time))
            throw std::invalid_argument("family: events must be ordered by time");
        if (decomposition.dim() != dim)
            throw std::invalid_argument("family: decomposition dimension mismatch");
        if (!qmath::verify_decomposition(decomposition, eps).ok)
            throw std::invalid_argument("family: event is not a decomposition of the identity");
    }

    // Single framework rule: two decompositions attached to one time label
    // may only coexist if they commute.
    for (std::size_t i = 0; i < f.events.size(); ++i)
        for (std::size_t j = i + 1; j < f.events.size(); ++j) {
            if (f.events[i].first != f.events[j].first) continue;
            if (!frameworks_compatible(f.events[i].second, f.events[j].second, eps))
                throw SingleFrameworkViolation(
                    "incompatible decompositions at time " + f.events[i].first +
                    ": refusing to combine them in one framework");
        }
}

namespace {

const qmath::Projector& member(const IdentityDecomposition& d, int index) {
    if (index >= 0 && index < static_cast<int>(d.projectors.size())) return d.projectors[index];
    if (d.remainder && index == static_cast<int>(d.projectors.size())) return *d.remainder;
    throw std::out_of_range("branch choice: projector index out of range");
}

int member_count(const IdentityDecomposition& d) {
    return static_cast<int>(d.projectors.size()) + (d.remainder ? 1 : 0);
}

// Propagators between consecutive event times (first leg starts at t0).
std::vector<Operator> event_propagators(const HistoryFamily& f) {
    std::vector<Operator> steps;
    std::string prev = f.circuit.times.front();
    for (const auto& [time, decomposition] : f.events) {
        steps.push_back(circuit::propagator(f.circuit, prev, time));
        prev = time;
    }
    return steps;
}

struct BranchEnumeration {
    std::vector<Branch> branches;  // all with squared norm > threshold
    int pruned = 0;
};

BranchEnumeration enumerate_branches(const HistoryFamily& f, double threshold) {
    validate_family(f);
    const auto steps = event_propagators(f);
    BranchEnumeration out;

    for (std::size_t init = 0; init < f.initial.size(); ++init) {
        const double prior = f.initial[init].first;
        std::vector<int> choices(f.events.size(), 0);

        const std::function<void(std::size_t, const Ket&)> descend =
            [&](std::size_t level, const Ket& partial) {
                if (level == f.events.size()) {
                    Branch b;
                    b.initial_index = static_cast<int>(init);
                    b.choices = choices;
                    b.chain = partial;
                    b.probability = prior * partial.squaredNorm();
                    out.branches.push_back(std::move(b));
                    return;
                }
                const Ket propagated = steps[level] * partial;
                const auto& decomposition = f.events[level].second;
                for (int k = 0; k < member_count(decomposition); ++k) {
                    choices[level] = k;
                    const Ket next = member(decomposition, k).op * propagated;
                    if (next.squaredNorm() <= threshold) {
                        ++out.pruned;
                        continue;
                    }
                    descend(level + 1, next);
                }
            };
        descend(0, f.initial[init].second);
    }
    return out;
}

}  // namespace

Ket chain_ket(const HistoryFamily& f, const BranchChoice& b) {
    if (b.initial_index < 0 || b.initial_index >= static_cast<int>(f.initial.size()))
        throw std::out_of_range("branch choice: initial index out of range");
    if (b.choices.size() != f.events.size())
        throw std::invalid_argument("branch choice: one projector index per event required");

    const auto steps = event_propagators(f);
    Ket k = f.initial[b.initial_index].second;
    for (std::size_t level = 0; level < f.events.size(); ++level)
        k = member(f.events[level].second, b.choices[level]).op * (steps[level] * k);
    return k;
}

ConsistencyReport consistency_check(const HistoryFamily& f, double eps) {
    const auto enumeration = enumerate_branches(f, kPruneThreshold);
    ConsistencyReport report;
    report.consistent = true;

    const auto& branches = enumeration.branches;
    for (std::size_t i = 0; i < branches.size(); ++i)
        for (std::size_t j = i + 1; j < branches.size(); ++j) {
            if (branches[i].initial_index != branches[j].initial_index) continue;
            const double overlap = std::abs(branches[i].chain.dot(branches[j].chain));
            if (overlap > report.worst_overlap) {
                report.worst_overlap = overlap;
                report.offending = {{branches[i].initial_index, branches[i].choices},
                                    {branches[j].initial_index, branches[j].choices}};
            }
        }
    report.consistent = report.worst_overlap <= eps;
    if (report.consistent) report.offending.reset();
    return report;
}

std::vector<Branch> branch_probabilities(const HistoryFamily& f, double eps, int* pruned) {
    const auto report = consistency_check(f, eps);
    if (!report.consistent)
        throw InconsistentFamilyError(
            "family '" + f.name + "' violates the consistency conditions (worst chain-ket overlap " +
                std::to_string(report.worst_overlap) + "); probabilities are meaningless",
            report);

    auto enumeration = enumerate_branches(f, kPruneThreshold);
    if (pruned) *pruned = enumeration.pruned;

    double total = 0.0;
    for (const Branch& b : enumeration.branches) total += b.probability;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::runtime_error("branch probabilities do not sum to 1");
    return std::move(enumeration.branches);
}

bool frameworks_compatible(const IdentityDecomposition& d1, const IdentityDecomposition& d2,
                           double eps) {
    if (d1.dim() != d2.dim())
        throw std::invalid_argument("frameworks_compatible: dimension mismatch");
    for (const auto* p : d1.members())
        for (const auto* q : d2.members())
            if (!qmath::projectors_commute(*p, *q, eps)) return false;
    return true;
}

namespace {

nlohmann::ordered_json choice_to_json(const BranchChoice& b) {
    return {{"initial", b.initial_index}, {"choices", b.choices}};
}

nlohmann::ordered_json matrix_to_json(const Operator& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

Operator matrix_from_json(const nlohmann::json& rows) {
    const auto dim = rows.size();
    Operator m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Complex(rows[r][c][0].get<double>(), rows[r][c][1].get<double>());
    return m;
}

}  // namespace

nlohmann::ordered_json to_json(const ConsistencyReport& r) {
    nlohmann::ordered_json j;
    j["consistent"] = r.consistent;
    j["worst_overlap"] = r.worst_overlap;
    if (r.offending) {
        j["offending_pair"] = {choice_to_json(r.offending->first), choice_to_json(r.offending->second)};
    }
    return j;
}

nlohmann::ordered_json family_to_json(const HistoryFamily& f) {
    nlohmann::ordered_json j;
    j["name"] = f.name;
    j["circuit"] = circuit::to_json(f.circuit);
    j["initial"] = nlohmann::ordered_json::array();
    for (const auto& [prior, ket] : f.initial) {
        nlohmann::ordered_json amplitudes = nlohmann::ordered_json::array();
        for (Eigen::Index i = 0; i < ket.size(); ++i)
            amplitudes.push_back({ket(i).real(), ket(i).imag()});
        j["initial"].push_back({{"prior", prior}, {"ket", amplitudes}});
    }
    j["events"] = nlohmann::ordered_json::array();
    for (const auto& [time, decomposition] : f.events) {
        nlohmann::ordered_json e;
        e["time"] = time;
        e["projectors"] = nlohmann::ordered_json::array();
        for (const auto& p : decomposition.projectors) e["projectors"].push_back(matrix_to_json(p.op));
        if (decomposition.remainder) e["remainder"] = matrix_to_json(decomposition.remainder->op);
        j["events"].push_back(e);
    }
    return j;
}

HistoryFamily family_from_json(const nlohmann::json& j) {
    HistoryFamily f;
    f.name = j.value("name", "");
    f.circuit = circuit::circuit_from_json(j.at("circuit"));
    for (const auto& entry : j.at("initial")) {
        const auto& amplitudes = entry.at("ket");
        Ket ket(amplitudes.size());
        for (std::size_t i = 0; i < amplitudes.size(); ++i)
            ket(static_cast<Eigen::Index>(i)) =
                Complex(amplitudes[i][0].get<double>(), amplitudes[i][1].get<double>());
        f.initial.emplace_back(entry.at("prior").get<double>(), std::move(ket));
    }
    for (const auto& e : j.at("events")) {
        IdentityDecomposition d;
        for (const auto& rows : e.at("projectors"))
            d.projectors.push_back(qmath::make_projector(matrix_from_json(rows)));
        if (e.contains("remainder"))
            d.remainder = qmath::make_projector(matrix_from_json(e.at("remainder")));
        f.events.emplace_back(e.at("time").get<std::string>(), std::move(d));
    }
    validate_family(f);
    return f;
}

}  // namespace histloc::histories
