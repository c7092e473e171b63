#pragma once

// Small dense Hermitian linear algebra: cyclic Jacobi eigen-decomposition and an
// orthonormal basis of the kernel of a complex linear functional.

#include "worm/jet.hpp"

namespace worm {

struct HermitianEigen {
    Eigen::VectorXd values; ///< ascending
    CMat vectors;           ///< column k belongs to values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi with complex rotations.  Converged when the off-diagonal
/// Frobenius norm is below tol * max(1, ||A||_F).  Throws NumericalError after
/// max_sweeps sweeps without convergence.  Only the upper triangle of `a` is
/// assumed Hermitian-consistent; the lower triangle is ignored.
HermitianEigen jacobi_eigen(const CMat& a, double tol = 1e-12, int max_sweeps = 100);

/// Columns form an orthonormal basis of {a : sum_j g_j a_j = 0}.  Built from the
/// Householder reflector that sends conj(g)/|g| onto the `pivot` axis; the
/// reflector's remaining columns are returned in order.  Throws DomainError
/// when |g| <= min_norm.
CMat tangent_basis(const CVec& g, int pivot = 0, double min_norm = 1e-12);

} // namespace worm
