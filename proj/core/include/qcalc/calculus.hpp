#pragma once

#include <string>
#include <vector>

#include "qcalc/operator.hpp"

namespace qcalc {

/// Real number in [0, 1]; used for norms and scale factors.
class Bambino {
 public:
  explicit Bambino(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Positive operator with trace in (0, 1]. The trace is the orbit's norm: the
/// probability of the event that made this orbit the pertinent one. A pegged
/// orbit has norm one.
class Orbit {
 public:
  explicit Orbit(Operator op, bool pegged = false, double tol = kStructuralTol);

  static Orbit pegged(Operator op) { return Orbit(std::move(op), true); }

  const Operator& op() const noexcept { return op_; }
  const FactorSpace& space() const noexcept { return op_.space(); }
  bool is_pegged() const noexcept { return pegged_; }
  double norm() const { return op_.trace().real(); }

 private:
  Operator op_;
  bool pegged_;
};

/// Effect operator, 0 <= E <= I: the information carried by one observation
/// result.
class CoOrbit {
 public:
  explicit CoOrbit(Operator effect, double tol = kStructuralTol);

  static CoOrbit identity(const FactorSpace& space) {
    return CoOrbit(Operator::identity(space));
  }

  const Operator& effect() const noexcept { return effect_; }
  const FactorSpace& space() const noexcept { return effect_.space(); }

 private:
  Operator effect_;
};

/// All possible results of one observation: co-orbits on a common space whose
/// sum is norm * I. Duplicates are allowed.
class Bindle {
 public:
  explicit Bindle(std::vector<CoOrbit> elements, double tol = kStructuralTol);

  const std::vector<CoOrbit>& elements() const noexcept { return elements_; }
  const CoOrbit& operator[](std::size_t i) const { return elements_.at(i); }
  std::size_t size() const noexcept { return elements_.size(); }
  const FactorSpace& space() const noexcept { return elements_.front().space(); }
  Bambino norm() const noexcept { return norm_; }

 private:
  std::vector<CoOrbit> elements_;
  Bambino norm_;
};

/// Whether the look and primitive effects of an instrumented observation are
/// written after the coupling (and so pulled back through it) or before it.
enum class Placement { post_coupling, pre_coupling };

/// Instrument orbit q on factors Q, a coupling unitary on X u Q (the
/// examinee X is whatever the coupling acts on besides Q), and the look
/// bindle on a subset of X u Q.
class InstrumentedObservation {
 public:
  InstrumentedObservation(Orbit instrument, Operator coupling, Bindle look,
                          Placement placement = Placement::post_coupling);

  const Orbit& instrument() const noexcept { return instrument_; }
  const Operator& coupling() const noexcept { return coupling_; }
  const Bindle& look() const noexcept { return look_; }
  Placement placement() const noexcept { return placement_; }

  // Coupling factors minus instrument factors, in coupling order.
  const FactorSpace& examinee_space() const noexcept { return examinee_; }
  // Examinee factors followed by instrument factors.
  const FactorSpace& joint_space() const noexcept { return joint_; }

  // Pulls an effect on a subset of the joint space back to the pre-coupling
  // picture: U^dagger (e x I) U for post-coupling placement, e x I otherwise.
  Operator to_initial_picture(const Operator& effect) const;

 private:
  Orbit instrument_;
  Operator coupling_;
  Bindle look_;
  Placement placement_;
  FactorSpace examinee_;
  FactorSpace joint_;
};

// Born probability trace(p s). Spaces must carry the same labels (any order).
double born(const Orbit& p, const CoOrbit& s);

// p x q: tensor of past-distinct (label-disjoint) orbits; norms multiply.
Orbit past_product(const Orbit& p, const Orbit& q);

// S (*) T: tensor of future-distinct (label-disjoint) co-orbits. The caller
// asserts the two observations do not interfere.
CoOrbit future_product(const CoOrbit& s, const CoOrbit& t);

Orbit scale(Bambino a, const Orbit& x);
CoOrbit scale(Bambino a, const CoOrbit& x);

// Rescales to norm one; DegenerateOrbitError when the norm is below 1e-12.
Orbit normalize(const Orbit& x);

/// First division p // S: conditions p on the result S and keeps the
/// joint-probability normalization, so norm(p // S) = born(p, S x I).
/// S lives on a proper, nonempty subset G of p's factors; the result lives on
/// the rest.
Orbit divide_orbit(const Orbit& p, const CoOrbit& s);

/// Second division S // q: reduces a result on F to a co-orbit on F minus G
/// using the known orbit q on G. born(p, S // q) = born(p x q, S).
CoOrbit divide_coorbit(const CoOrbit& s, const Orbit& q);

/// The bindle {S_i // q} of an instrumented observation; its norm is
/// norm(q) times the look's norm.
Bindle reduce_look(const InstrumentedObservation& inst);

// Bindles on disjoint factor sets. Never true for a bindle and itself.
bool consonant(const Bindle& b1, const Bindle& b2);

/// Operator-level kernels behind the typed API. They accept any Hermitian
/// operators (the criteria lab feeds them non-positive spanning elements, on
/// which every criterion is linear) and skip the type-invariant checks.
namespace kernel {

// Re trace(state * effect), with `effect` embedded into the state's space
// when it acts on a subset of its factors.
double born(const Operator& state, const Operator& effect);

// sqrt(E) state sqrt(E) with E = effect x I, kept on the state's full space.
Operator condition(const Operator& state, const Operator& effect);

// partial_trace over the effect's factors of condition(state, effect).
Operator first_division(const Operator& state, const Operator& effect);

// partial_trace over the instrument's factors of
// (I x sqrt(q)) effect (I x sqrt(q)). `instrument` must be psd.
Operator second_division(const Operator& effect, const Operator& instrument);

// Linear, one-sided form: partial_trace over the instrument's factors of
// effect (I x r). Agrees with second_division for psd r and also accepts
// Hermitian r.
Operator second_division_linear(const Operator& effect, const Operator& r);

// Symmetrized conditioning (state E + E state) / 2 on the state's space. It
// satisfies born(result, T) = born(state, E o T) for the symmetrized product
// E o T, and reduces to the sandwich form against every T commuting with E.
Operator symmetrized_condition(const Operator& state, const Operator& effect);

}  // namespace kernel

}  // namespace qcalc
