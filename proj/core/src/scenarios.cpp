#include "qcalc/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "qcalc/errors.hpp"
#include "qcalc/random.hpp"

namespace qcalc::lab {
namespace {

using Index = Eigen::Index;

std::vector<CoOrbit> as_coorbits(const std::vector<Operator>& ops) {
  std::vector<CoOrbit> out;
  out.reserve(ops.size());
  for (const auto& op : ops) out.emplace_back(op);
  return out;
}

Bindle computational_bindle(const FactorSpace& space) {
  const auto d = static_cast<Index>(space.total_dim());
  std::vector<CoOrbit> out;
  for (Index i = 0; i < d; ++i) {
    Matrix m = Matrix::Zero(d, d);
    m(i, i) = 1.0;
    out.emplace_back(Operator(space, std::move(m)));
  }
  return Bindle(std::move(out));
}

// d effects, all diagonal, with random column-stochastic weights.
Bindle random_diagonal_bindle(const FactorSpace& space, Rng& rng) {
  const auto d = static_cast<Index>(space.total_dim());
  Eigen::MatrixXd w(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) w(i, j) = 0.1 + rng.uniform();
  }
  for (Index j = 0; j < d; ++j) w.col(j) /= w.col(j).sum();
  std::vector<CoOrbit> out;
  for (Index i = 0; i < d; ++i) {
    Matrix m = Matrix::Zero(d, d);
    for (Index j = 0; j < d; ++j) m(j, j) = w(i, j);
    out.emplace_back(Operator(space, std::move(m)));
  }
  return Bindle(std::move(out));
}

// Projectors onto e^{i phi_j} / sqrt(d) sum_j omega^{jm} |j>.
Bindle fourier_bindle(const FactorSpace& space, Rng& rng) {
  const auto d = static_cast<Index>(space.total_dim());
  std::vector<double> phase(static_cast<std::size_t>(d));
  for (auto& p : phase) p = 2.0 * std::numbers::pi * rng.uniform();
  std::vector<CoOrbit> out;
  for (Index m = 0; m < d; ++m) {
    Eigen::VectorXcd v(d);
    for (Index j = 0; j < d; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(j * m) /
                               static_cast<double>(d) +
                           phase[static_cast<std::size_t>(j)];
      v(j) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), angle);
    }
    out.emplace_back(Operator(space, v * v.adjoint()));
  }
  return Bindle(std::move(out));
}

Operator basis_projector(const FactorSpace& space, Index k) {
  const auto d = static_cast<Index>(space.total_dim());
  Matrix m = Matrix::Zero(d, d);
  m(k, k) = 1.0;
  return Operator(space, std::move(m));
}

// Permutation unitary on `space` sending basis index i to perm(i).
template <typename Perm>
Operator permutation(const FactorSpace& space, Perm perm) {
  const auto n = static_cast<Index>(space.total_dim());
  Matrix u = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) u(perm(i), i) = 1.0;
  return Operator(space, std::move(u));
}

// |j, k> -> |j, k + j mod d>
Operator controlled_shift(const FactorSpace& space, Index d) {
  return permutation(space, [d](Index i) {
    const Index j = i / d, k = i % d;
    return j * d + (k + j) % d;
  });
}

// |x, a, m> -> |x, a + x, m + x [if shift_memory]>
Operator memory_coupling(const FactorSpace& space, Index d, bool shift_memory) {
  return permutation(space, [d, shift_memory](Index i) {
    const Index x = i / (d * d), a = (i / d) % d, m = i % d;
    const Index m2 = shift_memory ? (m + x) % d : m;
    return x * d * d + ((a + x) % d) * d + m2;
  });
}

// sum_k w_k |k><k|_a x |k><k|_m with w_k ~ (k + 1)^2 (1 + u_k / 2).
Operator correlated_record(const FactorSpace& am, Index d, Rng& rng) {
  Matrix q = Matrix::Zero(d * d, d * d);
  double total = 0.0;
  std::vector<double> w(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k) {
    const double kk = static_cast<double>(k + 1);
    w[static_cast<std::size_t>(k)] = kk * kk * (1.0 + 0.5 * rng.uniform());
    total += w[static_cast<std::size_t>(k)];
  }
  for (Index k = 0; k < d; ++k) q(k * d + k, k * d + k) = w[static_cast<std::size_t>(k)] / total;
  return Operator(am, std::move(q));
}

void check_dims(std::size_t dims, std::size_t cap, const std::string& what) {
  if (dims < 2) throw ConfigError(what + ": dims must be at least 2");
  if (dims > cap) {
    throw ConfigError(what + ": dims must be at most " + std::to_string(cap));
  }
}

struct Spaces {
  FactorSpace x, q, xq, a, m, am, xam;
};

Spaces spaces(std::size_t d) {
  Spaces s{FactorSpace::single("x", d), FactorSpace::single("q", d),
           FactorSpace{{"x", d}, {"q", d}}, FactorSpace::single("a", d),
           FactorSpace::single("m", d), FactorSpace{{"a", d}, {"m", d}},
           FactorSpace{{"x", d}, {"a", d}, {"m", d}}};
  return s;
}

Scenario pointer(std::string name, std::string description, bool holds, std::size_t d,
                 Orbit instrument, Bindle primitive) {
  const Spaces s = spaces(d);
  InstrumentedObservation inst(std::move(instrument),
                               controlled_shift(s.xq, static_cast<Index>(d)),
                               computational_bindle(s.q));
  return Scenario{std::move(name), std::move(description), Family::transparency, holds,
                  ExamineeSpace(s.x), std::move(inst), std::move(primitive)};
}

Scenario memory(std::string name, std::string description, bool holds, std::size_t d,
                Orbit record, Operator coupling) {
  const Spaces s = spaces(d);
  InstrumentedObservation inst(std::move(record), std::move(coupling),
                               computational_bindle(s.a));
  return Scenario{std::move(name), std::move(description), Family::invisibility, holds,
                  ExamineeSpace(s.x), std::move(inst), computational_bindle(s.m)};
}

}  // namespace

std::string_view to_string(Family f) {
  return f == Family::transparency ? "transparency" : "invisibility";
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "decoupled", "pointer_nondisturbing", "pointer_disturbing", "memory_antenna",
      "memory_antenna_violating"};
  return names;
}

Scenario build_scenario(const std::string& name, std::size_t dims, std::uint64_t seed) {
  Rng rng(seed);
  const auto d = static_cast<Index>(dims);

  if (name == "decoupled") {
    check_dims(dims, 8, name);
    const Spaces s = spaces(dims);
    InstrumentedObservation inst(Orbit::pegged(random_density(s.q, rng)),
                                 Operator::identity(s.xq),
                                 Bindle(as_coorbits(random_bindle(s.q, dims, rng))));
    Bindle primitive(as_coorbits(random_bindle(s.x, dims, rng)));
    return Scenario{name, "identity coupling; random instrument, look and primitive",
                    Family::transparency, true, ExamineeSpace(s.x), std::move(inst),
                    std::move(primitive)};
  }
  if (name == "pointer_nondisturbing") {
    check_dims(dims, 8, name);
    const Spaces s = spaces(dims);
    return pointer(name, "controlled-shift pointer; primitive diagonal in the pointer basis",
                   true, dims, Orbit::pegged(basis_projector(s.q, 0)),
                   random_diagonal_bindle(s.x, rng));
  }
  if (name == "pointer_disturbing") {
    check_dims(dims, 8, name);
    const Spaces s = spaces(dims);
    return pointer(name, "controlled-shift pointer; primitive in a phased Fourier basis",
                   false, dims, Orbit::pegged(basis_projector(s.q, 0)),
                   fourier_bindle(s.x, rng));
  }
  if (name == "memory_antenna" || name == "memory_antenna_violating") {
    check_dims(dims, 4, name);
    const Spaces s = spaces(dims);
    const bool violating = name == "memory_antenna_violating";
    return memory(name,
                  violating ? "coupling shifts antenna and memory; primitive reads memory"
                            : "coupling shifts the antenna only; primitive reads memory",
                  !violating, dims, Orbit::pegged(correlated_record(s.am, d, rng)),
                  memory_coupling(s.xam, d, violating));
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

Scenario perturbed_scenario(std::size_t index, std::size_t dims, std::uint64_t seed) {
  Rng rng(seed, index);
  const std::string name = "perturbed[" + std::to_string(index) + "]";
  switch (index % 4) {
    case 0: {
      check_dims(dims, 8, name);
      const Spaces s = spaces(dims);
      return pointer(name, "pointer, random instrument, diagonal primitive", true, dims,
                     Orbit::pegged(random_density(s.q, rng)),
                     random_diagonal_bindle(s.x, rng));
    }
    case 1: {
      check_dims(dims, 8, name);
      const Spaces s = spaces(dims);
      return pointer(name, "pointer, random primitive", false, dims,
                     Orbit::pegged(basis_projector(s.q, 0)),
                     Bindle(as_coorbits(random_bindle(s.x, dims, rng))));
    }
    case 2: {
      check_dims(dims, 4, name);
      const Spaces s = spaces(dims);
      const FactorSpace xa{{"x", dims}, {"a", dims}};
      Operator coupling = tensor(random_unitary(xa, rng), Operator::identity(s.m));
      return memory(name, "memory, random record, random coupling off the memory", true,
                    dims, Orbit::pegged(random_density(s.am, rng)), std::move(coupling));
    }
    default: {
      check_dims(dims, 4, name);
      const Spaces s = spaces(dims);
      return memory(name, "memory, random coupling on every factor", false, dims,
                    Orbit::pegged(random_density(s.am, rng)), random_unitary(s.xam, rng));
    }
  }
}

std::vector<CriterionReport> evaluate_scenario(const Scenario& s, const Thresholds& thr) {
  std::vector<CriterionReport> out;
  const Bindle& look = s.inst.look();
  const bool transparency = s.family == Family::transparency;
  for (std::size_t i = 0; i < look.size(); ++i) {
    for (std::size_t j = 0; j < s.primitive.size(); ++j) {
      auto r = transparency ? check_import(s.examinee, s.inst, i, s.primitive[j], thr)
                            : check_bearing(s.examinee, s.inst, i, s.primitive[j], thr);
      r.name += "[t=" + std::to_string(j) + "]";
      out.push_back(std::move(r));
    }
  }
  for (std::size_t j = 0; j < s.primitive.size(); ++j) {
    auto r = transparency ? check_transparency(s.examinee, s.inst, s.primitive[j], thr)
                          : check_invisibility(s.examinee, s.inst, s.primitive[j], thr);
    r.name += "[t=" + std::to_string(j) + "]";
    out.push_back(std::move(r));
  }
  out.push_back(transparency ? chain_transparency(s.examinee, s.inst, s.primitive, thr)
                             : chain_invisibility(s.examinee, s.inst, s.primitive, thr));
  return out;
}

CriterionReport blanket_criterion(const Scenario& s, const Thresholds& thr) {
  std::optional<CriterionReport> worst;
  for (std::size_t j = 0; j < s.primitive.size(); ++j) {
    auto r = s.family == Family::transparency
                 ? check_transparency(s.examinee, s.inst, s.primitive[j], thr)
                 : check_invisibility(s.examinee, s.inst, s.primitive[j], thr);
    r.witness = "t=" + std::to_string(j) + ", " + r.witness;
    if (!worst || r.max_deviation > worst->max_deviation) worst = std::move(r);
  }
  return *worst;
}

}  // namespace qcalc::lab
