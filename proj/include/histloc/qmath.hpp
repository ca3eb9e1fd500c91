#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace histloc::qmath {

using Complex = std::complex<double>;
using Ket = Eigen::VectorXcd;
using Operator = Eigen::MatrixXcd;

// Default tolerance for algebraic identities; Hilbert spaces here are at
// most 16-dimensional, so roundoff stays far below this.
inline constexpr double kEpsNorm = 1e-10;
// Eigenvalue cutoff for support projectors.
inline constexpr double kEpsSupport = 1e-9;

/// Number of qubits for a dimension; throws if dim is not a power of two.
int qubit_count(int dim);

Operator identity(int dim);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator hadamard();

Ket ket0();
Ket ket1();
Ket ket_plus();
Ket ket_minus();
/// Computational basis ket |index> on n qubits (qubit 0 = most significant bit).
Ket basis_ket(int n_qubits, int index);
/// The four Bell states B_jk, j,k in {0,1}.
Ket bell(int j, int k);

double max_abs(const Operator& a);
bool is_normalized(const Ket& k, double eps = kEpsNorm);
bool is_hermitian(const Operator& a, double eps = kEpsNorm);
bool is_unitary(const Operator& u, double eps = kEpsNorm);
/// Ray (projective) equality: |<u|v>| = ||u|| ||v|| within eps.
bool ray_equal(const Ket& u, const Ket& v, double eps = kEpsNorm);

Ket kron(const Ket& a, const Ket& b);
Operator kron(const Operator& a, const Operator& b);
Ket tensor_product(std::span<const Ket> factors);
Operator tensor_product(std::span<const Operator> factors);

/// |u><u|
Operator dyad(const Ket& u);

/// Reduced density operator on `keep` (ascending qubit indices); remaining
/// qubits are traced out. Trace is preserved.
Operator partial_trace(const Operator& rho, const std::vector<int>& keep, int n_qubits);

/// Extends an operator acting on the listed qubits (ascending order) by
/// identity on all others.
Operator embed(const Operator& op, const std::vector<int>& qubits, int n_qubits);

/// Permutation operator exchanging two qubits.
Operator swap_qubits(int q1, int q2, int n_qubits);

struct Projector {
    Operator op;
    int rank = 0;
};

/// Validates P=P†, P²=P and an integer trace; throws std::invalid_argument.
Projector make_projector(const Operator& op, double eps = kEpsNorm);
Projector ray_projector(const Ket& u);

struct IdentityDecomposition {
    std::vector<Projector> projectors;
    std::optional<Projector> remainder;

    int dim() const;
    /// projectors followed by remainder (if any).
    std::vector<const Projector*> members() const;
};

struct DecompositionReport {
    bool ok = false;
    double worst_orthogonality = 0.0;
    double worst_hermiticity = 0.0;
    double worst_idempotence = 0.0;
    double worst_completeness = 0.0;

    double worst() const;
    std::string describe() const;
};

/// Checks orthogonality, Hermiticity, idempotence and completeness of a
/// decomposition of the identity. Reports violations, never throws on
/// mathematical failure.
DecompositionReport verify_decomposition(const IdentityDecomposition& d, double eps = kEpsNorm);

/// Projector onto the span of eigenvectors of rho with eigenvalue > eps.
/// A negative eigenvalue below -eps throws std::domain_error.
Projector support_projector(const Operator& rho, double eps = kEpsSupport);

/// max-norm of PQ - QP <= eps. Throws on dimension mismatch.
bool projectors_commute(const Projector& p, const Projector& q, double eps = kEpsNorm);

}  // namespace histloc::qmath
