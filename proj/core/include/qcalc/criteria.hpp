#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qcalc/calculus.hpp"

namespace qcalc::lab {

/// Pass/fail bands. A deviation at or below `tol` passes, at or above
/// `fail_threshold` fails, and anything in between is reported as
/// indeterminate rather than coerced either way.
struct Thresholds {
  double tol = kIdentityTol;
  double fail_threshold = kFailThreshold;
};

enum class Status { pass, fail, indeterminate };

std::string_view to_string(Status s);
Status classify(double deviation, const Thresholds& thr);

struct ChainStep {
  std::string from;
  std::string to;
  std::string reason;
  double deviation = 0.0;
};

struct Metric {
  std::string name;
  double value = 0.0;
};

struct CriterionReport {
  std::string name;
  bool holds = false;  // max_deviation <= tol
  Status status = Status::fail;
  double max_deviation = 0.0;
  std::string witness;  // which spanning element and co-orbits reached the max

  // Chains only.
  std::vector<ChainStep> steps;
  std::string first_failing_step;  // "c->d"; empty when every step holds
  bool vacuous = false;            // some hypothesis failed
  std::vector<CriterionReport> preconditions;

  std::vector<Metric> metrics;
  std::vector<std::string> notes;
};

/// The space x of examinee orbits, with a finite spanning set of Hermitian
/// operators. Every criterion is linear in the examinee orbit, so checking it
/// on a spanning set checks it for every orbit in x.
class ExamineeSpace {
 public:
  // Spanned by hermitian_basis(space).
  explicit ExamineeSpace(FactorSpace space);
  // Custom spanning set; InvariantError unless its Gram rank is d^2.
  ExamineeSpace(FactorSpace space, std::vector<Operator> spanning);

  const FactorSpace& space() const noexcept { return space_; }
  const std::vector<Operator>& spanning() const noexcept { return spanning_; }

 private:
  FactorSpace space_;
  std::vector<Operator> spanning_;
};

/// Criterion of innocence: born(p, s) = sum_j born(p, s (*) t_j) for every
/// spanning p and every s in b1. ConsonanceError unless the bindles are
/// consonant.
CriterionReport check_innocence(const ExamineeSpace& x, const Bindle& b1, const Bindle& b2,
                                const Thresholds& thr = {});

/// p // (S (*) T) against (p // S) // T, as operators and as norms.
CriterionReport check_combined_conditioning(const Orbit& p, const CoOrbit& s,
                                            const CoOrbit& t, const Thresholds& thr = {});

/// S // (p x q) against (S // p) // q.
CriterionReport check_instrument_composition(const CoOrbit& s, const Orbit& p,
                                             const Orbit& q, const Thresholds& thr = {});

/// Criterion of import of the instrumented result look[look_index] // q with
/// respect to the primitive result t (an effect on examinee factors, disjoint
/// from the look's factors). Compares
///   born((p x q), S (*) T), born((p x q) // S, T), born(p // (S // q), T).
/// When S // q and T share examinee factors the last conditioning is the
/// symmetrized one (see kernel::symmetrized_condition).
CriterionReport check_import(const ExamineeSpace& x, const InstrumentedObservation& inst,
                             std::size_t look_index, const CoOrbit& t,
                             const Thresholds& thr = {});

/// Criterion of transparency: born(p x q, T) = born(p, T). Requires a pegged
/// instrument (PeggingError).
CriterionReport check_transparency(const ExamineeSpace& x, const InstrumentedObservation& inst,
                                   const CoOrbit& t, const Thresholds& thr = {});

/// Replays the argument that import for every look result plus innocence
/// gives transparency, step by step, for every t in `primitive`.
CriterionReport chain_transparency(const ExamineeSpace& x, const InstrumentedObservation& inst,
                                   const Bindle& primitive, const Thresholds& thr = {});

/// Criterion of bearing through the instrument alone for look[look_index]
/// and a primitive result t on instrument factors. Compares
///   born(p x q, S (*) T), born(p, (S (*) T) // q), born(p, S // (q // T)),
///   born(p x (q // T), S).
CriterionReport check_bearing(const ExamineeSpace& x, const InstrumentedObservation& inst,
                              std::size_t look_index, const CoOrbit& t,
                              const Thresholds& thr = {});

/// Criterion of total invisibility: born(p x q, T) = born(q, T) for pegged p,
/// checked in the linear form born(p x q, T) = trace(p) born(q, T).
CriterionReport check_invisibility(const ExamineeSpace& x, const InstrumentedObservation& inst,
                                   const CoOrbit& t, const Thresholds& thr = {});

/// Replays the argument that bearing for every look result gives total
/// invisibility, for every t in `primitive`.
CriterionReport chain_invisibility(const ExamineeSpace& x, const InstrumentedObservation& inst,
                                   const Bindle& primitive, const Thresholds& thr = {});

}  // namespace qcalc::lab
