#include "qcalc/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "qcalc/errors.hpp"

namespace qcalc {
namespace {

void require_proper_subset(const FactorSpace& outer, const FactorSpace& inner,
                           const char* what) {
  const auto labels = inner.labels();
  if (!outer.contains_all(labels)) {
    throw LabelError(std::string(what) + ": " + inner.describe() + " is not within " +
                     outer.describe());
  }
  if (labels.empty() || labels.size() >= outer.size()) {
    throw LabelError(std::string(what) + ": " + inner.describe() +
                     " must be a proper, nonempty subset of " + outer.describe());
  }
}

Operator embedded_root(const Operator& small, const FactorSpace& target) {
  return embed(sqrt_psd(small), target);
}

}  // namespace

Bambino::Bambino(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvariantError("bambino must lie in [0, 1], got " + std::to_string(value));
  }
}

Orbit::Orbit(Operator op, bool pegged, double tol) : op_(std::move(op)), pegged_(pegged) {
  if (!validate(op_, Validation::psd, tol)) throw InvariantError("orbit operator is not psd");
  const double tr = norm();
  if (!(tr > 0.0) || tr > 1.0 + tol) {
    throw InvariantError("orbit norm must lie in (0, 1], got " + std::to_string(tr));
  }
  if (pegged_ && std::abs(tr - 1.0) > tol) {
    throw PeggingError("pegged orbit must have norm one, got " + std::to_string(tr));
  }
}

CoOrbit::CoOrbit(Operator effect, double tol) : effect_(std::move(effect)) {
  if (!validate(effect_, Validation::effect, tol)) {
    throw InvariantError("co-orbit operator is not an effect (0 <= E <= I)");
  }
}

namespace {

Bambino bindle_norm(const std::vector<CoOrbit>& elements, double tol) {
  if (elements.empty()) throw InvariantError("bindle must have at least one element");
  const FactorSpace& space = elements.front().space();
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(space.total_dim()),
                            static_cast<Eigen::Index>(space.total_dim()));
  for (const auto& e : elements) {
    if (!e.space().same_labels(space)) {
      throw SpaceError("bindle elements live on different spaces: " + space.describe() +
                       " and " + e.space().describe());
    }
    sum += reorder(e.effect(), space).matrix();
  }
  const double d = static_cast<double>(space.total_dim());
  const double norm = sum.trace().real() / d;
  const Matrix defect = sum - norm * Matrix::Identity(sum.rows(), sum.cols());
  if (defect.cwiseAbs().maxCoeff() > tol) {
    throw InvariantError("bindle elements do not sum to a multiple of the identity");
  }
  if (!(norm > 0.0) || norm > 1.0 + tol) {
    throw InvariantError("bindle norm must lie in (0, 1], got " + std::to_string(norm));
  }
  return Bambino(std::min(norm, 1.0));
}

}  // namespace

Bindle::Bindle(std::vector<CoOrbit> elements, double tol)
    : elements_(std::move(elements)), norm_(bindle_norm(elements_, tol)) {}

InstrumentedObservation::InstrumentedObservation(Orbit instrument, Operator coupling,
                                                 Bindle look, Placement placement)
    : instrument_(std::move(instrument)),
      coupling_(std::move(coupling)),
      look_(std::move(look)),
      placement_(placement) {
  require_proper_subset(coupling_.space(), instrument_.space(), "instrumented observation");
  examinee_ = coupling_.space().without(instrument_.space().labels());
  joint_ = examinee_.concat(instrument_.space());
  for (const auto& f : instrument_.space().factors()) {
    if (coupling_.space().dim_of(f.label) != f.dim) {
      throw ShapeError("instrument factor '" + f.label + "' disagrees with the coupling");
    }
  }
  coupling_ = reorder(coupling_, joint_);
  if (!validate(coupling_, Validation::unitary)) {
    throw InvariantError("coupling is not unitary");
  }
  if (!joint_.contains_all(look_.space().labels())) {
    throw LabelError("look acts outside the coupled space: " + look_.space().describe());
  }
}

Operator InstrumentedObservation::to_initial_picture(const Operator& effect) const {
  Operator e = embed(effect, joint_);
  if (placement_ == Placement::pre_coupling) return e;
  const Matrix& u = coupling_.matrix();
  return Operator(joint_, u.adjoint() * e.matrix() * u);
}

double born(const Orbit& p, const CoOrbit& s) {
  if (!p.space().same_labels(s.space())) {
    throw SpaceError("born: orbit on " + p.space().describe() + " but co-orbit on " +
                     s.space().describe());
  }
  return trace_pairing(p.op(), s.effect()).real();
}

Orbit past_product(const Orbit& p, const Orbit& q) {
  return Orbit(tensor(p.op(), q.op()), p.is_pegged() && q.is_pegged());
}

CoOrbit future_product(const CoOrbit& s, const CoOrbit& t) {
  return CoOrbit(tensor(s.effect(), t.effect()));
}

Orbit scale(Bambino a, const Orbit& x) {
  if (a.value() == 0.0) throw InvariantError("scaling an orbit by zero leaves no orbit");
  return Orbit(x.op().scaled(a.value()), x.is_pegged() && a.value() == 1.0);
}

CoOrbit scale(Bambino a, const CoOrbit& x) { return CoOrbit(x.effect().scaled(a.value())); }

Orbit normalize(const Orbit& x) {
  const double n = x.norm();
  if (n < kDegenerateNorm) throw DegenerateOrbitError("cannot normalize an orbit of norm ~0");
  return Orbit::pegged(x.op().scaled(1.0 / n));
}

Orbit divide_orbit(const Orbit& p, const CoOrbit& s) {
  require_proper_subset(p.space(), s.space(), "divide_orbit");
  Operator r = kernel::first_division(p.op(), s.effect());
  if (r.trace().real() < kDegenerateNorm) {
    throw DegenerateOrbitError("divide_orbit: the result has probability ~0");
  }
  return Orbit(std::move(r));
}

CoOrbit divide_coorbit(const CoOrbit& s, const Orbit& q) {
  require_proper_subset(s.space(), q.space(), "divide_coorbit");
  return CoOrbit(kernel::second_division(s.effect(), q.op()));
}

Bindle reduce_look(const InstrumentedObservation& inst) {
  std::vector<CoOrbit> reduced;
  reduced.reserve(inst.look().size());
  for (const auto& s : inst.look().elements()) {
    const CoOrbit pulled(inst.to_initial_picture(s.effect()));
    reduced.push_back(divide_coorbit(pulled, inst.instrument()));
  }
  return Bindle(std::move(reduced));
}

bool consonant(const Bindle& b1, const Bindle& b2) {
  if (&b1 == &b2) return false;
  return b1.space().disjoint_from(b2.space());
}

namespace kernel {

double born(const Operator& state, const Operator& effect) {
  if (state.space().same_labels(effect.space())) return trace_pairing(state, effect).real();
  return trace_pairing(state, embed(effect, state.space())).real();
}

Operator condition(const Operator& state, const Operator& effect) {
  const Operator root = embedded_root(effect, state.space());
  return Operator(state.space(), root.matrix() * state.matrix() * root.matrix());
}

Operator first_division(const Operator& state, const Operator& effect) {
  require_proper_subset(state.space(), effect.space(), "first division");
  const auto traced = effect.space().labels();
  return partial_trace(condition(state, effect), traced);
}

Operator second_division(const Operator& effect, const Operator& instrument) {
  require_proper_subset(effect.space(), instrument.space(), "second division");
  const Operator root = embedded_root(instrument, effect.space());
  const Operator sandwich(effect.space(), root.matrix() * effect.matrix() * root.matrix());
  const auto traced = instrument.space().labels();
  return partial_trace(sandwich, traced);
}

Operator second_division_linear(const Operator& effect, const Operator& r) {
  require_proper_subset(effect.space(), r.space(), "second division");
  const Operator wide = embed(r, effect.space());
  const auto traced = r.space().labels();
  return partial_trace(effect * wide, traced);
}

Operator symmetrized_condition(const Operator& state, const Operator& effect) {
  return symmetrized_product(state, embed(effect, state.space()));
}

}  // namespace kernel

}  // namespace qcalc
