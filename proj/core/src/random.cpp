#include "qcalc/random.hpp"

#include <cmath>
#include <numbers>

#include "qcalc/errors.hpp"

namespace qcalc {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : key_(seed), engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream))) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ConfigError("Rng::below: bound must be positive");
  // rejection to avoid modulo bias
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

Operator random_hermitian(const FactorSpace& space, Rng& rng) {
  const Matrix g = ginibre(space.total_dim(), space.total_dim(), rng);
  return Operator(space, (g + g.adjoint()) / 2.0);
}

Operator random_density(const FactorSpace& space, Rng& rng) {
  const Matrix g = ginibre(space.total_dim(), space.total_dim(), rng);
  Matrix rho = g * g.adjoint();
  rho = (rho + rho.adjoint()) / 2.0;
  return Operator(space, rho / rho.trace().real());
}

Operator random_effect(const FactorSpace& space, Rng& rng) {
  const Matrix g = ginibre(space.total_dim(), space.total_dim(), rng);
  Matrix a = g * g.adjoint();
  a = (a + a.adjoint()) / 2.0;
  const double top = eigenvalues(Operator(space, a)).maxCoeff();
  const double ceiling = 0.2 + 0.8 * rng.uniform();
  return Operator(space, a * (ceiling / top));
}

Operator random_unitary(const FactorSpace& space, Rng& rng) {
  const Matrix g = ginibre(space.total_dim(), space.total_dim(), rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return Operator(space, std::move(q));
}

std::vector<Operator> random_bindle(const FactorSpace& space, std::size_t k, Rng& rng) {
  if (k == 0) throw ConfigError("random_bindle: k must be at least 1");
  const auto d = static_cast<Eigen::Index>(space.total_dim());
  if (k == 1) return {Operator::identity(space)};

  std::vector<Matrix> parts;
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < k; ++i) {
    const Matrix g = ginibre(space.total_dim(), space.total_dim(), rng);
    Matrix a = g * g.adjoint();
    a = (a + a.adjoint()) / 2.0;
    sum += a;
    parts.push_back(std::move(a));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sum);
  const Eigen::VectorXd inv_root = solver.eigenvalues().cwiseSqrt().cwiseInverse();
  const Matrix w = solver.eigenvectors() * inv_root.cast<Complex>().asDiagonal() *
                   solver.eigenvectors().adjoint();
  std::vector<Operator> out;
  out.reserve(k);
  for (const auto& a : parts) {
    Matrix e = w * a * w;
    out.emplace_back(space, (e + e.adjoint()) / 2.0);
  }
  return out;
}

std::vector<Operator> random_projective_bindle(const FactorSpace& space, Rng& rng) {
  const Operator u = random_unitary(space, rng);
  std::vector<Operator> out;
  for (Eigen::Index j = 0; j < u.matrix().cols(); ++j) {
    const Eigen::VectorXcd v = u.matrix().col(j);
    out.emplace_back(space, v * v.adjoint());
  }
  return out;
}

Operator random_density(const FactorSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(space, rng);
}

Operator random_effect(const FactorSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  return random_effect(space, rng);
}

Operator random_unitary(const FactorSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(space, rng);
}

std::vector<Operator> random_bindle(const FactorSpace& space, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  return random_bindle(space, k, rng);
}

}  // namespace qcalc
