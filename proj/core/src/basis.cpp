#include "qcalc/basis.hpp"

#include <cmath>

#include "qcalc/errors.hpp"

namespace qcalc {

std::vector<Operator> hermitian_basis(const FactorSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.total_dim());
  std::vector<Operator> out;
  out.reserve(static_cast<std::size_t>(d * d));
  out.push_back(Operator::identity(space));

  const Complex i_unit(0.0, 1.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      out.emplace_back(space, std::move(sym));

      Matrix anti = Matrix::Zero(d, d);
      anti(j, k) = -i_unit;
      anti(k, j) = i_unit;
      out.emplace_back(space, std::move(anti));
    }
  }
  for (Eigen::Index l = 1; l < d; ++l) {
    const double norm = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    Matrix diag = Matrix::Zero(d, d);
    for (Eigen::Index m = 0; m < l; ++m) diag(m, m) = norm;
    diag(l, l) = -norm * static_cast<double>(l);
    out.emplace_back(space, std::move(diag));
  }
  return out;
}

Eigen::MatrixXd gram_matrix(const std::vector<Operator>& ops) {
  const auto n = static_cast<Eigen::Index>(ops.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      g(i, j) = g(j, i) = trace_pairing(ops[i], ops[j]).real();
    }
  }
  return g;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

Eigen::VectorXd expansion_coefficients(const std::vector<Operator>& basis, const Operator& h) {
  if (basis.empty()) throw ShapeError("expansion over an empty basis");
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = trace_pairing(basis[i], h).real();
  return gram_matrix(basis).completeOrthogonalDecomposition().solve(rhs);
}

Operator reconstruct(const std::vector<Operator>& basis, const Eigen::VectorXd& coefficients) {
  if (basis.empty() || static_cast<Eigen::Index>(basis.size()) != coefficients.size()) {
    throw ShapeError("reconstruct: basis and coefficient counts differ");
  }
  Matrix sum = Matrix::Zero(basis[0].matrix().rows(), basis[0].matrix().cols());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    sum += coefficients(static_cast<Eigen::Index>(i)) * reorder(basis[i], basis[0].space()).matrix();
  }
  return Operator(basis[0].space(), std::move(sum));
}

}  // namespace qcalc
