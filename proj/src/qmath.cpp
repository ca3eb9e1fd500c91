#include "histloc/qmath.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace histloc::qmath {

namespace {
constexpr Complex kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

int qubit_count(int dim) {
    if (dim < 2) throw std::invalid_argument("dimension must be at least 2");
    int n = 0;
    int d = dim;
    while (d > 1) {
        if (d % 2 != 0) throw std::invalid_argument("dimension is not a power of two");
        d /= 2;
        ++n;
    }
    return n;
}

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator pauli_x() {
    Operator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Operator pauli_y() {
    Operator m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

Operator pauli_z() {
    Operator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Operator hadamard() {
    Operator m(2, 2);
    m << 1, 1, 1, -1;
    return kInvSqrt2 * m;
}

Ket ket0() {
    Ket k(2);
    k << 1, 0;
    return k;
}

Ket ket1() {
    Ket k(2);
    k << 0, 1;
    return k;
}

Ket ket_plus() {
    Ket k(2);
    k << kInvSqrt2, kInvSqrt2;
    return k;
}

Ket ket_minus() {
    Ket k(2);
    k << kInvSqrt2, -kInvSqrt2;
    return k;
}

Ket basis_ket(int n_qubits, int index) {
    const int dim = 1 << n_qubits;
    if (index < 0 || index >= dim) throw std::out_of_range("basis index out of range");
    Ket k = Ket::Zero(dim);
    k(index) = 1.0;
    return k;
}

Ket bell(int j, int k) {
    if ((j | k) & ~1) throw std::out_of_range("bell indices must be 0 or 1");
    Ket b = Ket::Zero(4);
    const double sign = j == 0 ? 1.0 : -1.0;
    if (k == 0) {  // (|00> ± |11>)/sqrt(2)
        b(0) = kInvSqrt2;
        b(3) = sign * kInvSqrt2;
    } else {  // (|01> ± |10>)/sqrt(2)
        b(1) = kInvSqrt2;
        b(2) = sign * kInvSqrt2;
    }
    return b;
}

double max_abs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }

bool is_normalized(const Ket& k, double eps) { return std::abs(k.squaredNorm() - 1.0) <= eps; }

bool is_hermitian(const Operator& a, double eps) {
    return max_abs(a - a.adjoint()) <= eps;
}

bool is_unitary(const Operator& u, double eps) {
    if (u.rows() != u.cols()) return false;
    return max_abs(u.adjoint() * u - identity(static_cast<int>(u.rows()))) <= eps;
}

bool ray_equal(const Ket& u, const Ket& v, double eps) {
    if (u.size() != v.size()) return false;
    const double overlap = std::abs(u.dot(v));  // Eigen dot conjugates the left factor
    return std::abs(overlap - u.norm() * v.norm()) <= eps;
}

Ket kron(const Ket& a, const Ket& b) {
    Ket out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Ket tensor_product(std::span<const Ket> factors) {
    if (factors.empty()) throw std::invalid_argument("tensor_product: empty input");
    Ket out = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
    return out;
}

Operator tensor_product(std::span<const Operator> factors) {
    if (factors.empty()) throw std::invalid_argument("tensor_product: empty input");
    Operator out = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
    return out;
}

Operator dyad(const Ket& u) { return u * u.adjoint(); }

namespace {

// Interleaves a subsystem index and its complement index into a full basis
// index, following the qubit-0-is-most-significant convention.
int compose_index(const std::vector<int>& sub, int sub_bits, const std::vector<int>& rest,
                  int rest_bits, int n_qubits) {
    int full = 0;
    std::size_t si = 0, ri = 0;
    for (int q = 0; q < n_qubits; ++q) {
        int bit;
        if (si < sub.size() && sub[si] == q) {
            bit = (sub_bits >> (sub.size() - 1 - si)) & 1;
            ++si;
        } else {
            bit = (rest_bits >> (rest.size() - 1 - ri)) & 1;
            ++ri;
        }
        full = (full << 1) | bit;
    }
    return full;
}

std::vector<int> complement(const std::vector<int>& qubits, int n_qubits) {
    std::vector<int> rest;
    std::size_t k = 0;
    for (int q = 0; q < n_qubits; ++q) {
        if (k < qubits.size() && qubits[k] == q) {
            ++k;
        } else {
            rest.push_back(q);
        }
    }
    return rest;
}

void check_qubit_list(const std::vector<int>& qubits, int n_qubits, const char* what) {
    if (qubits.empty()) throw std::invalid_argument(std::string(what) + ": empty qubit set");
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= n_qubits)
            throw std::out_of_range(std::string(what) + ": qubit index out of range");
        if (i > 0 && qubits[i] <= qubits[i - 1])
            throw std::invalid_argument(std::string(what) + ": qubit list must be strictly increasing");
    }
}

}  // namespace

Operator partial_trace(const Operator& rho, const std::vector<int>& keep, int n_qubits) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("partial_trace: non-square input");
    if (rho.rows() != (1 << n_qubits))
        throw std::invalid_argument("partial_trace: dimension mismatch");
    check_qubit_list(keep, n_qubits, "partial_trace");

    const std::vector<int> rest = complement(keep, n_qubits);
    const int dk = 1 << keep.size();
    const int dr = 1 << rest.size();
    Operator out = Operator::Zero(dk, dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j)
            for (int f = 0; f < dr; ++f)
                out(i, j) += rho(compose_index(keep, i, rest, f, n_qubits),
                                 compose_index(keep, j, rest, f, n_qubits));
    return out;
}

Operator embed(const Operator& op, const std::vector<int>& qubits, int n_qubits) {
    check_qubit_list(qubits, n_qubits, "embed");
    if (op.rows() != op.cols() || op.rows() != (1 << qubits.size()))
        throw std::invalid_argument("embed: operator dimension does not match qubit list");

    const std::vector<int> rest = complement(qubits, n_qubits);
    const int dim = 1 << n_qubits;
    const int ds = 1 << qubits.size();
    const int dr = 1 << rest.size();
    Operator out = Operator::Zero(dim, dim);
    for (int i = 0; i < ds; ++i)
        for (int j = 0; j < ds; ++j) {
            if (op(i, j) == Complex{0.0, 0.0}) continue;
            for (int f = 0; f < dr; ++f)
                out(compose_index(qubits, i, rest, f, n_qubits),
                    compose_index(qubits, j, rest, f, n_qubits)) = op(i, j);
        }
    return out;
}

Projector make_projector(const Operator& op, double eps) {
    if (op.rows() != op.cols()) throw std::invalid_argument("projector: non-square matrix");
    if (!is_hermitian(op, eps)) throw std::invalid_argument("projector: not Hermitian");
    if (max_abs(op * op - op) > eps) throw std::invalid_argument("projector: not idempotent");
    const double tr = op.trace().real();
    const int rank = static_cast<int>(std::lround(tr));
    if (std::abs(tr - rank) > std::max(eps, 1e-8))
        throw std::invalid_argument("projector: trace is not close to an integer");
    return Projector{op, rank};
}

Projector ray_projector(const Ket& u) {
    const double n2 = u.squaredNorm();
    if (n2 <= 0.0) throw std::invalid_argument("ray_projector: zero vector");
    return Projector{dyad(u) / n2, 1};
}

int IdentityDecomposition::dim() const {
    if (!projectors.empty()) return static_cast<int>(projectors.front().op.rows());
    if (remainder) return static_cast<int>(remainder->op.rows());
    return 0;
}

std::vector<const Projector*> IdentityDecomposition::members() const {
    std::vector<const Projector*> m;
    m.reserve(projectors.size() + 1);
    for (const auto& p : projectors) m.push_back(&p);
    if (remainder) m.push_back(&*remainder);
    return m;
}

double DecompositionReport::worst() const {
    return std::max(std::max(worst_orthogonality, worst_hermiticity),
                    std::max(worst_idempotence, worst_completeness));
}

std::string DecompositionReport::describe() const {
    std::ostringstream os;
    os << (ok ? "ok" : "violated") << " (orthogonality " << worst_orthogonality
       << ", hermiticity " << worst_hermiticity << ", idempotence " << worst_idempotence
       << ", completeness " << worst_completeness << ")";
    return os.str();
}

DecompositionReport verify_decomposition(const IdentityDecomposition& d, double eps) {
    DecompositionReport rep;
    const auto members = d.members();
    if (members.empty()) return rep;

    const auto dim = members.front()->op.rows();
    for (const auto* p : members)
        if (p->op.rows() != dim || p->op.cols() != dim)
            throw std::invalid_argument("verify_decomposition: mixed dimensions");

    Operator sum = Operator::Zero(dim, dim);
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Operator& p = members[i]->op;
        rep.worst_hermiticity = std::max(rep.worst_hermiticity, max_abs(p - p.adjoint()));
        rep.worst_idempotence = std::max(rep.worst_idempotence, max_abs(p * p - p));
        sum += p;
        for (std::size_t j = i + 1; j < members.size(); ++j)
            rep.worst_orthogonality =
                std::max(rep.worst_orthogonality, max_abs(p * members[j]->op));
    }
    rep.worst_completeness = max_abs(sum - identity(static_cast<int>(dim)));
    rep.ok = rep.worst() <= eps;
    return rep;
}

Projector support_projector(const Operator& rho, double eps) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("support_projector: non-square");
    if (!is_hermitian(rho, std::max(eps, kEpsNorm)))
        throw std::invalid_argument("support_projector: not Hermitian");

    Eigen::SelfAdjointEigenSolver<Operator> solver((rho + rho.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("support_projector: eigensolver failed");

    const auto& vals = solver.eigenvalues();
    if (vals.minCoeff() < -eps)
        throw std::domain_error("support_projector: negative eigenvalue, not a density operator");

    Operator proj = Operator::Zero(rho.rows(), rho.cols());
    int rank = 0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) > eps) {
            proj += dyad(solver.eigenvectors().col(i));
            ++rank;
        }
    }
    return Projector{proj, rank};
}

bool projectors_commute(const Projector& p, const Projector& q, double eps) {
    if (p.op.rows() != q.op.rows()) throw std::invalid_argument("projectors_commute: dimension mismatch");
    return max_abs(p.op * q.op - q.op * p.op) <= eps;
}

}  // namespace histloc::qmath
