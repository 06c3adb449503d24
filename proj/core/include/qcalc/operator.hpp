#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcalc/factor_space.hpp"

namespace qcalc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Tolerance discipline shared by every module.
inline constexpr double kStructuralTol = 1e-9;   // type-invariant validation
inline constexpr double kIdentityTol = 1e-9;     // identity checks pass at or below
inline constexpr double kFailThreshold = 1e-3;   // criterion failures sit at or above
inline constexpr double kDegenerateNorm = 1e-12; // division norms below are undefined

/// Complex square matrix tagged with the factor space it acts on.
///
/// Immutable after construction. Every operation below returns a new value.
class Operator {
 public:
  // Throws ShapeError when the matrix is not total_dim x total_dim and
  // InvariantError when an entry is not finite.
  Operator(FactorSpace space, Matrix entries);

  static Operator identity(const FactorSpace& space);
  static Operator zero(const FactorSpace& space);

  const FactorSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return space_.total_dim(); }

  Complex trace() const { return entries_.trace(); }
  Operator adjoint() const;
  Operator scaled(Complex factor) const;

  // Operands of + - * must share one factor space (same order); SpaceError
  // otherwise. Use reorder() first when only the labels agree.
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  FactorSpace space_;
  Matrix entries_;
};

enum class Validation { hermitian, psd, effect, unitary };

/// Kronecker product in factor order (a's factors first).
/// DisjointnessError when the label sets overlap.
Operator tensor(const Operator& a, const Operator& b);

/// Traces out the named factors. Unknown labels raise LabelError.
Operator partial_trace(const Operator& a, std::span<const std::string> labels);

/// Re-expresses `a` in the factor order of `target`, which must carry the same
/// labels and dims (LabelError otherwise).
Operator reorder(const Operator& a, const FactorSpace& target);

/// a tensored with identity on the factors of `target` that `a` lacks, laid
/// out in `target`'s order. a's labels must be a subset of target's.
Operator embed(const Operator& a, const FactorSpace& target);

bool validate(const Operator& a, Validation kind, double tol = kStructuralTol);

/// u a u-dagger. ShapeError on mismatched spaces, InvariantError when u is
/// not unitary.
Operator conjugate(const Operator& a, const Operator& u);

// Eigenvalues of the Hermitian part, ascending.
Eigen::VectorXd eigenvalues(const Operator& a);

/// Principal square root of the Hermitian part; eigenvalues below zero are
/// clamped, so pass only operators that validated as psd.
Operator sqrt_psd(const Operator& a);

/// (ab + ba) / 2. Operands must share a label set.
Operator symmetrized_product(const Operator& a, const Operator& b);

/// trace(a b) after aligning b to a's factor order.
Complex trace_pairing(const Operator& a, const Operator& b);

/// Largest entrywise modulus of a - b after aligning b to a's order.
double max_abs_diff(const Operator& a, const Operator& b);

}  // namespace qcalc
