#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qcalc/operator.hpp"

namespace qcalc {

/// Identity followed by the d^2 - 1 generalized Gell-Mann matrices on the
/// whole of `space` (d = total_dim). Together they span the real vector space
/// of Hermitian operators on `space`.
std::vector<Operator> hermitian_basis(const FactorSpace& space);

/// Hilbert-Schmidt Gram matrix G_ij = Re trace(A_i A_j) of Hermitian operators.
Eigen::MatrixXd gram_matrix(const std::vector<Operator>& ops);

/// Numerical rank of a real symmetric matrix (singular values above
/// tol * largest singular value).
Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

/// Real coefficients c with H = sum_i c_i A_i, by solving the Gram system.
Eigen::VectorXd expansion_coefficients(const std::vector<Operator>& basis, const Operator& h);

Operator reconstruct(const std::vector<Operator>& basis, const Eigen::VectorXd& coefficients);

}  // namespace qcalc
