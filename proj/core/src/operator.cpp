#include "qcalc/operator.hpp"

#include <algorithm>
#include <cmath>

#include "qcalc/errors.hpp"

namespace qcalc {
namespace {

void require_same_space(const Operator& a, const Operator& b, const char* what) {
  if (!(a.space() == b.space())) {
    throw SpaceError(std::string(what) + ": operands live on " +
                     a.space().describe() + " and " + b.space().describe());
  }
}

// For every basis index of `from`, the index of the same basis vector in
// `to`. Both spaces carry the same factors, possibly in another order.
std::vector<Eigen::Index> index_map(const FactorSpace& from, const FactorSpace& to) {
  const auto n = from.size();
  std::vector<std::size_t> to_pos(n);
  for (std::size_t i = 0; i < n; ++i) to_pos[i] = to.position(from.factors()[i].label);

  // stride of each factor in `to`
  std::vector<std::size_t> to_stride(n, 1);
  for (std::size_t i = n; i-- > 1;) to_stride[i - 1] = to_stride[i] * to.factors()[i].dim;

  std::vector<Eigen::Index> out(from.total_dim());
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t idx = 0; idx < from.total_dim(); ++idx) {
    std::size_t target = 0;
    for (std::size_t i = 0; i < n; ++i) target += digits[i] * to_stride[to_pos[i]];
    out[idx] = static_cast<Eigen::Index>(target);
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < from.factors()[i].dim) break;
      digits[i] = 0;
    }
  }
  return out;
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

}  // namespace

Operator::Operator(FactorSpace space, Matrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(space_.total_dim());
  if (entries_.rows() != d || entries_.cols() != d) {
    throw ShapeError("operator matrix is " + std::to_string(entries_.rows()) + "x" +
                     std::to_string(entries_.cols()) + " but space " +
                     space_.describe() + " has dimension " + std::to_string(d));
  }
  if (!entries_.allFinite()) throw InvariantError("operator has non-finite entries");
}

Operator Operator::identity(const FactorSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.total_dim());
  return Operator(space, Matrix::Identity(d, d));
}

Operator Operator::zero(const FactorSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.total_dim());
  return Operator(space, Matrix::Zero(d, d));
}

Operator Operator::adjoint() const { return Operator(space_, entries_.adjoint()); }

Operator Operator::scaled(Complex factor) const { return Operator(space_, entries_ * factor); }

Operator operator+(const Operator& a, const Operator& b) {
  require_same_space(a, b, "operator +");
  return Operator(a.space(), a.matrix() + b.matrix());
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_space(a, b, "operator -");
  return Operator(a.space(), a.matrix() - b.matrix());
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a, b, "operator *");
  return Operator(a.space(), a.matrix() * b.matrix());
}

Operator tensor(const Operator& a, const Operator& b) {
  FactorSpace space = a.space().concat(b.space());
  const auto da = a.matrix().rows();
  const auto db = b.matrix().rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return Operator(std::move(space), std::move(out));
}

Operator reorder(const Operator& a, const FactorSpace& target) {
  if (a.space() == target) return a;
  if (!a.space().same_labels(target)) {
    throw LabelError("cannot reorder " + a.space().describe() + " into " +
                     target.describe());
  }
  const auto map = index_map(a.space(), target);
  const auto d = static_cast<Eigen::Index>(a.dim());
  Matrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out(map[i], map[j]) = a.matrix()(i, j);
  }
  return Operator(target, std::move(out));
}

Operator partial_trace(const Operator& a, std::span<const std::string> labels) {
  for (const auto& l : labels) a.space().position(l);
  if (labels.empty()) return a;

  FactorSpace kept = a.space().without(labels);
  FactorSpace traced = a.space().restricted_to(labels);
  // Move traced factors last, then sum the diagonal blocks.
  Operator arranged = reorder(a, kept.concat(traced));
  const auto dk = static_cast<Eigen::Index>(kept.total_dim());
  const auto dt = static_cast<Eigen::Index>(traced.total_dim());
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex sum = 0;
      for (Eigen::Index t = 0; t < dt; ++t) sum += arranged.matrix()(i * dt + t, j * dt + t);
      out(i, j) = sum;
    }
  }
  return Operator(std::move(kept), std::move(out));
}

Operator embed(const Operator& a, const FactorSpace& target) {
  for (const auto& f : a.space().factors()) {
    if (target.dim_of(f.label) != f.dim) {
      throw ShapeError("factor '" + f.label + "' has different dims in " +
                       a.space().describe() + " and " + target.describe());
    }
  }
  const auto labels = a.space().labels();
  FactorSpace rest = target.without(labels);
  if (rest.empty()) return reorder(a, target);
  return reorder(tensor(a, Operator::identity(rest)), target);
}

bool validate(const Operator& a, Validation kind, double tol) {
  const Matrix& m = a.matrix();
  if (kind == Validation::unitary) {
    const Matrix defect = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
    return defect.cwiseAbs().maxCoeff() <= tol;
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (kind == Validation::hermitian) return true;
  const Eigen::VectorXd ev = eigenvalues(a);
  if (ev.minCoeff() < -tol) return false;
  if (kind == Validation::psd) return true;
  return ev.maxCoeff() <= 1.0 + tol;
}

Operator conjugate(const Operator& a, const Operator& u) {
  if (!(a.space() == u.space())) {
    throw ShapeError("conjugate: operator on " + a.space().describe() +
                     " but unitary on " + u.space().describe());
  }
  if (!validate(u, Validation::unitary)) throw InvariantError("conjugate: u is not unitary");
  return Operator(a.space(), u.matrix() * a.matrix() * u.matrix().adjoint());
}

Eigen::VectorXd eigenvalues(const Operator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a.matrix()),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Operator sqrt_psd(const Operator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a.matrix()));
  Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = solver.eigenvectors();
  return Operator(a.space(), v * roots.cast<Complex>().asDiagonal() * v.adjoint());
}

Operator symmetrized_product(const Operator& a, const Operator& b) {
  const Operator bb = reorder(b, a.space());
  return Operator(a.space(), (a.matrix() * bb.matrix() + bb.matrix() * a.matrix()) / 2.0);
}

Complex trace_pairing(const Operator& a, const Operator& b) {
  const Operator bb = reorder(b, a.space());
  // trace(AB) = sum_ij A_ij B_ji
  return a.matrix().cwiseProduct(bb.matrix().transpose()).sum();
}

double max_abs_diff(const Operator& a, const Operator& b) {
  const Operator bb = reorder(b, a.space());
  if (a.dim() == 0) return 0.0;
  return (a.matrix() - bb.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace qcalc
