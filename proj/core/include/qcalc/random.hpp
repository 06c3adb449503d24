#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qcalc/operator.hpp"

namespace qcalc {

/// Seedable, splittable random stream.
///
/// A stream is identified by (seed, stream index); split() derives child
/// streams by index so parallel workers draw from independent, reproducible
/// sequences regardless of scheduling. Draws are built from raw 64-bit words
/// (no std:: distributions), so output is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  Rng split(std::uint64_t stream) const { return Rng(key_, stream); }

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  // [0, 1)
  double normal();
  Complex complex_normal();  // real and imaginary parts each N(0, 1/2)
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Ginibre matrix with complex_normal entries.
Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

Operator random_hermitian(const FactorSpace& space, Rng& rng);
// psd, trace one
Operator random_density(const FactorSpace& space, Rng& rng);
// 0 <= E <= I with largest eigenvalue drawn uniformly from [0.2, 1]
Operator random_effect(const FactorSpace& space, Rng& rng);
// Haar unitary: QR of a Ginibre matrix with the phase of R's diagonal removed
Operator random_unitary(const FactorSpace& space, Rng& rng);
// k effects summing to the identity: S^{-1/2} A_i S^{-1/2}, S = sum A_i
std::vector<Operator> random_bindle(const FactorSpace& space, std::size_t k, Rng& rng);
// Rank-one projectors onto a random orthonormal basis.
std::vector<Operator> random_projective_bindle(const FactorSpace& space, Rng& rng);

// Seed-only conveniences: stream 0 of `seed`.
Operator random_density(const FactorSpace& space, std::uint64_t seed);
Operator random_effect(const FactorSpace& space, std::uint64_t seed);
Operator random_unitary(const FactorSpace& space, std::uint64_t seed);
std::vector<Operator> random_bindle(const FactorSpace& space, std::size_t k, std::uint64_t seed);

}  // namespace qcalc
