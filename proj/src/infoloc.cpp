#include "histloc/infoloc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <nlohmann/json.hpp>

namespace histloc::infoloc {

using qmath::Complex;
using qmath::IdentityDecomposition;
using qmath::Ket;
using qmath::Operator;
using qmath::Projector;

void validate_pmf(const JointDistribution& j, double eps) {
    if (j.pmf.rows() != static_cast<Eigen::Index>(j.m_labels.size()) ||
        j.pmf.cols() != static_cast<Eigen::Index>(j.n_labels.size()))
        throw std::invalid_argument("joint distribution: label/pmf shape mismatch");
    if (j.pmf.minCoeff() < -eps) throw std::invalid_argument("joint distribution: negative entry");
    if (std::abs(j.pmf.sum() - 1.0) > std::max(eps, 1e-9))
        throw std::invalid_argument("joint distribution: pmf does not sum to 1");
}

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p) h -= plogp(v);
    return h;
}

}  // namespace

double mutual_information(const JointDistribution& j) {
    validate_pmf(j);
    std::vector<double> pm(j.pmf.rows(), 0.0), pn(j.pmf.cols(), 0.0);
    double h_joint = 0.0;
    for (Eigen::Index m = 0; m < j.pmf.rows(); ++m)
        for (Eigen::Index n = 0; n < j.pmf.cols(); ++n) {
            const double p = std::max(j.pmf(m, n), 0.0);
            pm[m] += p;
            pn[n] += p;
            h_joint -= plogp(p);
        }
    return entropy(pm) + entropy(pn) - h_joint;
}

bool contains_information(const JointDistribution& j, double eps) {
    validate_pmf(j);
    std::vector<bool> recovered(j.pmf.rows(), false);
    for (Eigen::Index n = 0; n < j.pmf.cols(); ++n) {
        const double pn = j.pmf.col(n).sum();
        if (pn <= eps) continue;
        bool deterministic = false;
        for (Eigen::Index m = 0; m < j.pmf.rows(); ++m) {
            if (j.pmf(m, n) / pn >= 1.0 - eps) {
                recovered[m] = true;
                deterministic = true;
                break;
            }
        }
        if (!deterministic) return false;
    }
    for (Eigen::Index m = 0; m < j.pmf.rows(); ++m)
        if (j.pmf.row(m).sum() > eps && !recovered[m]) return false;
    return true;
}

Complex canonical_lambda(Complex lambda, bool* folded) {
    bool did_fold = false;
    const double mag = std::abs(lambda);
    constexpr double kBoundary = 1e-12;
    if (std::abs(mag - 1.0) <= kBoundary) {
        double phi = std::arg(lambda / mag);  // exact unit modulus
        if (phi < 0.0) phi += 2.0 * M_PI;
        if (phi >= M_PI) {  // same decomposition, labels swapped
            phi -= M_PI;
            did_fold = true;
        }
        lambda = std::polar(1.0, phi);
    } else if (mag > 1.0) {
        // the rays (1, lambda) and (1, -1/conj(lambda)) are orthogonal, so
        // both parameters label the same decomposition with m=0 and m=1
        // exchanged; fold into the unit disk.
        lambda = -1.0 / std::conj(lambda);
        did_fold = true;
    }
    if (folded) *folded = did_fold;
    return lambda;
}

LambdaBasis lambda_basis(Complex lambda) {
    LambdaBasis basis;
    basis.lambda = canonical_lambda(lambda, &basis.folded);
    const double norm = std::sqrt(1.0 + std::norm(basis.lambda));
    basis.p0 = Ket(2);
    basis.p0 << 1.0 / norm, basis.lambda / norm;
    basis.p1 = Ket(2);
    basis.p1 << std::conj(basis.lambda) / norm, -1.0 / norm;
    return basis;
}

SubsystemFactorization factorization(std::vector<int> b_qubits, int n_qubits) {
    std::sort(b_qubits.begin(), b_qubits.end());
    SubsystemFactorization fact;
    fact.n_qubits = n_qubits;
    fact.b_qubits = std::move(b_qubits);
    if (fact.b_qubits.empty()) throw std::invalid_argument("factorization: empty subsystem");
    std::size_t k = 0;
    for (int q = 0; q < n_qubits; ++q) {
        if (k < fact.b_qubits.size() && fact.b_qubits[k] == q) {
            ++k;
        } else {
            fact.f_qubits.push_back(q);
        }
    }
    if (k != fact.b_qubits.size())
        throw std::out_of_range("factorization: qubit index out of range");
    return fact;
}

Ket prepared_state(const ChannelPrep& prep, int n_qubits, int m) {
    if (m != 0 && m != 1) throw std::out_of_range("prepared_state: m must be 0 or 1");
    if (prep.input_qubit < 0 || prep.input_qubit >= n_qubits)
        throw std::out_of_range("prepared_state: input qubit out of range");
    if (prep.env.size() != (1 << (n_qubits - 1)))
        throw std::invalid_argument("prepared_state: environment dimension mismatch");

    const Ket& input = m == 0 ? prep.basis.p0 : prep.basis.p1;
    const int dim = 1 << n_qubits;
    Ket full(dim);
    for (int idx = 0; idx < dim; ++idx) {
        const int shift = n_qubits - 1 - prep.input_qubit;
        const int input_bit = (idx >> shift) & 1;
        const int low_mask = (1 << shift) - 1;
        const int env_index = ((idx >> (shift + 1)) << shift) | (idx & low_mask);
        full(idx) = input(input_bit) * prep.env(env_index);
    }
    return full;
}

namespace {

struct SubsystemInputs {
    Ket psi0, psi1;  // evolved states for m = 0, 1
};

SubsystemInfoResult subsystem_verdict(const SubsystemInputs& in, const SubsystemFactorization& fact,
                                      double eps) {
    SubsystemInfoResult result;
    const int n = fact.n_qubits;

    const Operator rho0 = qmath::partial_trace(qmath::dyad(in.psi0), fact.b_qubits, n);
    const Operator rho1 = qmath::partial_trace(qmath::dyad(in.psi1), fact.b_qubits, n);
    const Projector s0 = qmath::support_projector(rho0);
    const Projector s1 = qmath::support_projector(rho1);

    IdentityDecomposition d;
    d.projectors.push_back(Projector{qmath::embed(s0.op, fact.b_qubits, n), s0.rank << fact.f_qubits.size()});
    d.projectors.push_back(Projector{qmath::embed(s1.op, fact.b_qubits, n), s1.rank << fact.f_qubits.size()});
    const Operator rest = qmath::identity(1 << n) - d.projectors[0].op - d.projectors[1].op;
    const int rest_rank = static_cast<int>(std::lround(rest.trace().real()));
    if (rest_rank > 0) d.remainder = Projector{rest, rest_rank};

    // Defining correlation: P^m picks out exactly the m-th evolved state.
    const std::array<const Ket*, 2> psi = {&in.psi0, &in.psi1};
    double residual = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int mp = 0; mp < 2; ++mp) {
            const Ket delta = d.projectors[m].op * (*psi[mp]) - (m == mp ? *psi[mp] : Ket::Zero(psi[mp]->size()).eval());
            residual = std::max(residual, delta.cwiseAbs().maxCoeff());
        }
    result.residual = residual;
    result.located = residual <= eps && qmath::verify_decomposition(d, std::max(eps, qmath::kEpsNorm)).ok;
    if (result.located) result.projectors = std::move(d);
    return result;
}

}  // namespace

SubsystemInfoResult info_in_subsystem(const circuit::TimedCircuit& c, const ChannelPrep& prep,
                                      const std::string& time, const SubsystemFactorization& fact,
                                      double eps) {
    if (fact.n_qubits != c.n_qubits)
        throw std::invalid_argument("info_in_subsystem: factorization does not match circuit");
    SubsystemInputs in{circuit::evolve(c, prepared_state(prep, c.n_qubits, 0), time),
                       circuit::evolve(c, prepared_state(prep, c.n_qubits, 1), time)};
    return subsystem_verdict(in, fact, eps);
}

IdentityDecomposition teleport_pair_decomposition(Complex lambda) {
    const LambdaBasis basis = lambda_basis(lambda);
    const Operator had = qmath::hadamard();
    const Operator zee = qmath::pauli_z();
    const Operator plus = qmath::dyad(qmath::ket_plus());
    const Operator minus = qmath::dyad(qmath::ket_minus());

    IdentityDecomposition d;
    for (const Ket* p : {&basis.p0, &basis.p1}) {
        const Operator on_pair = qmath::kron(had * qmath::dyad(*p) * had, plus) +
                                 qmath::kron(had * zee * qmath::dyad(*p) * zee * had, minus);
        d.projectors.push_back(Projector{qmath::kron(on_pair, qmath::identity(2)), 4});
    }
    return d;  // the two projectors already sum to the identity
}

IdentityDecomposition contextual_basis(Complex lambda) {
    const LambdaBasis basis = lambda_basis(lambda);
    const Operator ex = qmath::pauli_x();
    const Operator zee = qmath::pauli_z();

    IdentityDecomposition d;
    for (int ab = 0; ab < 4; ++ab) {
        // third-qubit states p, Xp, Zp, XZp for ab = 00, 01, 10, 11
        const Operator transform = ab == 0   ? qmath::identity(2)
                                   : ab == 1 ? ex
                                   : ab == 2 ? zee
                                             : Operator(ex * zee);
        for (const Ket* p : {&basis.p0, &basis.p1})
            d.projectors.push_back(
                qmath::ray_projector(qmath::kron(qmath::basis_ket(2, ab), Ket(transform * (*p)))));
    }
    return d;
}

std::vector<Complex> default_lambda_grid(std::uint64_t seed, int n_random) {
    std::vector<Complex> grid = {
        {0.0, 0.0},  {1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0},
        std::polar(1.0, M_PI / 4.0), {0.3, 0.0}, {0.5, 0.5}, std::polar(0.7, M_PI / 3.0)};
    std::mt19937_64 rng(seed);
    // explicit 53-bit mapping: identical streams on every standard library
    const auto canonical = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < n_random; ++i) {
        const double r = std::sqrt(canonical());
        const double phi = 2.0 * M_PI * canonical();
        grid.push_back(std::polar(r, phi));
    }
    for (Complex& l : grid) l = canonical_lambda(l);
    return grid;
}

namespace {

std::vector<std::vector<int>> nonempty_subsets(int n_qubits) {
    std::vector<std::vector<int>> subsets;
    for (int mask = 1; mask < (1 << n_qubits); ++mask) {
        std::vector<int> qubits;
        for (int q = 0; q < n_qubits; ++q)
            if (mask & (1 << (n_qubits - 1 - q))) qubits.push_back(q);
        subsets.push_back(std::move(qubits));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return subsets;
}

}  // namespace

ChannelLocationReport locate_channel(const circuit::TimedCircuit& c, int input_qubit,
                                     const Ket& env, const std::string& time,
                                     std::span<const Complex> grid, double eps, ExecMode mode,
                                     std::uint64_t grid_seed) {
    if (grid.empty()) throw std::invalid_argument("locate_channel: empty lambda grid");
    ChannelLocationReport report;
    report.time = time;
    report.grid_seed = grid_seed;
    report.eps = eps;

    const auto subsets = nonempty_subsets(c.n_qubits);
    std::vector<SubsystemFactorization> facts;
    facts.reserve(subsets.size());
    for (const auto& s : subsets) facts.push_back(factorization(s, c.n_qubits));

    const int n_lambda = static_cast<int>(grid.size());
    const int n_subsets = static_cast<int>(subsets.size());
    std::vector<char> located(static_cast<std::size_t>(n_lambda) * n_subsets, 0);

    // lambda sweep: the data-parallel loop; one slot per (lambda, subset)
    parallel_for(mode, n_lambda, [&](int li) {
        const LambdaBasis basis = lambda_basis(grid[li]);
        const ChannelPrep prep{basis, input_qubit, env};
        const SubsystemInputs in{circuit::evolve(c, prepared_state(prep, c.n_qubits, 0), time),
                                 circuit::evolve(c, prepared_state(prep, c.n_qubits, 1), time)};
        for (int si = 0; si < n_subsets; ++si)
            located[static_cast<std::size_t>(li) * n_subsets + si] =
                subsystem_verdict(in, facts[si], eps).located ? 1 : 0;
    });

    for (int si = 0; si < n_subsets; ++si) {
        SubsetVerdict verdict;
        verdict.qubits = subsets[si];
        verdict.located = true;
        for (int li = 0; li < n_lambda; ++li) {
            if (!located[static_cast<std::size_t>(li) * n_subsets + si]) {
                verdict.located = false;
                verdict.witness_lambda = grid[li];
                break;
            }
        }
        report.subsets.push_back(std::move(verdict));
    }

    for (const auto& v : report.subsets) {
        if (!v.located) continue;
        bool minimal = true;
        for (const auto& smaller : report.minimal) {
            if (std::includes(v.qubits.begin(), v.qubits.end(), smaller.begin(), smaller.end())) {
                minimal = false;
                break;
            }
        }
        if (minimal) report.minimal.push_back(v.qubits);
    }
    return report;
}

JointDistribution framework_joint(const histories::HistoryFamily& family,
                                  const std::function<std::string(int)>& m_label,
                                  const std::function<std::string(const histories::Branch&)>& n_label) {
    const auto branches = histories::branch_probabilities(family);

    std::map<std::string, int> m_index, n_index;
    std::vector<std::tuple<int, int, double>> mass;
    JointDistribution joint;
    for (const auto& b : branches) {
        const std::string m = m_label(b.initial_index);
        const std::string n = n_label(b);
        if (!m_index.count(m)) {
            m_index[m] = static_cast<int>(joint.m_labels.size());
            joint.m_labels.push_back(m);
        }
        if (!n_index.count(n)) {
            n_index[n] = static_cast<int>(joint.n_labels.size());
            joint.n_labels.push_back(n);
        }
        mass.emplace_back(m_index[m], n_index[n], b.probability);
    }
    joint.pmf = Eigen::MatrixXd::Zero(joint.m_labels.size(), joint.n_labels.size());
    for (const auto& [m, n, p] : mass) joint.pmf(m, n) += p;
    validate_pmf(joint, 1e-9);
    return joint;
}

namespace {

nlohmann::ordered_json lambda_to_json(const Complex& l) { return {l.real(), l.imag()}; }

nlohmann::ordered_json qubits_to_json(const std::vector<int>& qubits,
                                      const std::vector<std::string>& labels) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (int q : qubits) {
        if (q < static_cast<int>(labels.size()))
            out.push_back(labels[q]);
        else
            out.push_back("q" + std::to_string(q));
    }
    return out;
}

}  // namespace

nlohmann::ordered_json to_json(const ChannelLocationReport& r,
                               const std::vector<std::string>& qubit_labels) {
    nlohmann::ordered_json j;
    j["time"] = r.time;
    j["subsets"] = nlohmann::ordered_json::array();
    for (const auto& v : r.subsets) {
        nlohmann::ordered_json s;
        s["qubits"] = qubits_to_json(v.qubits, qubit_labels);
        s["located"] = v.located;
        if (v.witness_lambda) s["witness_lambda"] = lambda_to_json(*v.witness_lambda);
        j["subsets"].push_back(s);
    }
    j["minimal"] = nlohmann::ordered_json::array();
    for (const auto& m : r.minimal) j["minimal"].push_back(qubits_to_json(m, qubit_labels));
    j["grid_seed"] = r.grid_seed;
    j["eps"] = r.eps;
    j["construction"] = r.construction;
    return j;
}

}  // namespace histloc::infoloc
