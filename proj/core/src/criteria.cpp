#include "qcalc/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "qcalc/basis.hpp"
#include "qcalc/errors.hpp"

namespace qcalc::lab {
namespace {

struct MaxTracker {
  double value = 0.0;
  std::string witness;

  void offer(double deviation, const std::string& where) {
    if (deviation > value || witness.empty()) {
      value = std::max(value, deviation);
      witness = where;
    }
  }
};

std::string index_tag(const char* what, std::size_t i) {
  return std::string(what) + "[" + std::to_string(i) + "]";
}

CriterionReport finish(std::string name, const MaxTracker& tracker, const Thresholds& thr) {
  CriterionReport r;
  r.name = std::move(name);
  r.max_deviation = tracker.value;
  r.witness = tracker.witness;
  r.holds = tracker.value <= thr.tol;
  r.status = classify(tracker.value, thr);
  return r;
}

void require_examinee(const ExamineeSpace& x, const InstrumentedObservation& inst) {
  if (!x.space().same_labels(inst.examinee_space())) {
    throw SpaceError("examinee space " + x.space().describe() +
                     " does not match the coupling's examinee " +
                     inst.examinee_space().describe());
  }
}

void require_within(const FactorSpace& outer, const FactorSpace& inner, const char* what) {
  if (!outer.contains_all(inner.labels())) {
    throw LabelError(std::string(what) + ": " + inner.describe() + " must act within " +
                     outer.describe());
  }
}

void require_disjoint(const FactorSpace& a, const FactorSpace& b, const char* what) {
  if (!a.disjoint_from(b)) {
    throw LabelError(std::string(what) + ": " + a.describe() + " and " + b.describe() +
                     " must act on disjoint factors");
  }
}

// p x q laid out on the joint space of `inst`.
Operator joint_initial(const InstrumentedObservation& inst, const Operator& p,
                       const Operator& q) {
  return tensor(reorder(p, inst.examinee_space()), q);
}

// The joint orbit carried through the coupling, for pairing with effects in
// their own (post-coupling) picture.
Operator evolve(const InstrumentedObservation& inst, const Operator& joint) {
  if (inst.placement() == Placement::pre_coupling) return joint;
  const Matrix& u = inst.coupling().matrix();
  return Operator(joint.space(), u * joint.matrix() * u.adjoint());
}

double pairwise_spread(std::initializer_list<double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

double instrument_norm_defect(const InstrumentedObservation& inst) {
  return std::abs(inst.instrument().norm() - 1.0);
}

CriterionReport norm_precondition(std::string name, double defect, const Thresholds& thr) {
  MaxTracker t;
  t.offer(defect, "norm");
  return finish(std::move(name), t, thr);
}

// Fills steps/first_failing_step/holds/status of a chain from per-step maxima.
void settle_chain(CriterionReport& r, const std::vector<std::string>& letters,
                  const std::vector<std::string>& reasons, const std::vector<MaxTracker>& steps,
                  const Thresholds& thr) {
  double worst = 0.0;
  std::string worst_witness;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    ChainStep s;
    s.from = letters[i];
    s.to = letters[i + 1];
    s.reason = reasons[i];
    s.deviation = steps[i].value;
    if (s.deviation > thr.tol && r.first_failing_step.empty()) {
      r.first_failing_step = s.from + "->" + s.to;
    }
    if (s.deviation > worst || worst_witness.empty()) {
      worst = std::max(worst, s.deviation);
      worst_witness = s.from + "->" + s.to + " at " + steps[i].witness;
    }
    r.steps.push_back(std::move(s));
  }
  r.max_deviation = worst;
  r.witness = worst_witness;
  r.holds = worst <= thr.tol;
  r.status = classify(worst, thr);
  r.vacuous = std::any_of(r.preconditions.begin(), r.preconditions.end(),
                          [](const CriterionReport& p) { return !p.holds; });
  if (!r.vacuous && !r.holds) {
    r.notes.push_back("hypotheses hold but the chain breaks: the implication failed");
  }
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::indeterminate: return "indeterminate";
  }
  return "unknown";
}

Status classify(double deviation, const Thresholds& thr) {
  if (!(deviation == deviation)) return Status::indeterminate;  // NaN
  if (deviation <= thr.tol) return Status::pass;
  if (deviation >= thr.fail_threshold) return Status::fail;
  return Status::indeterminate;
}

ExamineeSpace::ExamineeSpace(FactorSpace space)
    : space_(std::move(space)), spanning_(hermitian_basis(space_)) {}

ExamineeSpace::ExamineeSpace(FactorSpace space, std::vector<Operator> spanning)
    : space_(std::move(space)), spanning_(std::move(spanning)) {
  for (auto& op : spanning_) {
    op = reorder(op, space_);
    if (!validate(op, Validation::hermitian)) {
      throw InvariantError("spanning elements must be Hermitian");
    }
  }
  const auto d = static_cast<Eigen::Index>(space_.total_dim());
  if (numerical_rank(gram_matrix(spanning_)) != d * d) {
    throw InvariantError("spanning set does not span the Hermitian operators on " +
                         space_.describe());
  }
}

CriterionReport check_innocence(const ExamineeSpace& x, const Bindle& b1, const Bindle& b2,
                                const Thresholds& thr) {
  if (!consonant(b1, b2)) {
    throw ConsonanceError("innocence requires consonant bindles: " + b1.space().describe() +
                          " vs " + b2.space().describe());
  }
  require_within(x.space(), b1.space(), "innocence");
  require_within(x.space(), b2.space(), "innocence");

  MaxTracker tracker;
  for (std::size_t i = 0; i < b1.size(); ++i) {
    const Operator alone = embed(b1[i].effect(), x.space());
    std::vector<Operator> together;
    for (const auto& t : b2.elements()) {
      together.push_back(embed(future_product(b1[i], t).effect(), x.space()));
    }
    for (std::size_t k = 0; k < x.spanning().size(); ++k) {
      const Operator& p = x.spanning()[k];
      double summed = 0.0;
      for (const auto& e : together) summed += trace_pairing(p, e).real();
      const double dev = std::abs(trace_pairing(p, alone).real() - summed);
      tracker.offer(dev, index_tag("p=spanning", k) + ", " + index_tag("s=b1", i));
    }
  }
  return finish("innocence", tracker, thr);
}

CriterionReport check_combined_conditioning(const Orbit& p, const CoOrbit& s, const CoOrbit& t,
                                            const Thresholds& thr) {
  require_disjoint(s.space(), t.space(), "combined conditioning");
  require_within(p.space(), s.space(), "combined conditioning");
  require_within(p.space(), t.space(), "combined conditioning");
  if (s.space().size() + t.space().size() >= p.space().size()) {
    throw LabelError("combined conditioning: the two results must leave some factor of " +
                     p.space().describe() + " unobserved");
  }

  const Operator together = kernel::first_division(p.op(), future_product(s, t).effect());
  const Operator stepwise = kernel::first_division(kernel::first_division(p.op(), s.effect()),
                                                   t.effect());
  const double op_dev = max_abs_diff(together, stepwise);
  const double norm_dev = std::abs(together.trace().real() - stepwise.trace().real());

  MaxTracker tracker;
  tracker.offer(op_dev, "operator entries");
  tracker.offer(norm_dev, "norms");
  auto r = finish("combined_conditioning", tracker, thr);
  r.metrics = {{"operator_deviation", op_dev},
               {"norm_deviation", norm_dev},
               {"norm_together", together.trace().real()},
               {"norm_stepwise", stepwise.trace().real()}};
  return r;
}

CriterionReport check_instrument_composition(const CoOrbit& s, const Orbit& p, const Orbit& q,
                                             const Thresholds& thr) {
  require_disjoint(p.space(), q.space(), "instrument composition");
  require_within(s.space(), p.space(), "instrument composition");
  require_within(s.space(), q.space(), "instrument composition");
  if (p.space().size() + q.space().size() >= s.space().size()) {
    throw LabelError("instrument composition: the result must keep an examinee factor");
  }

  const Operator en_bloc = kernel::second_division(s.effect(), tensor(p.op(), q.op()));
  const Operator one_at_a_time =
      kernel::second_division(kernel::second_division(s.effect(), p.op()), q.op());
  MaxTracker tracker;
  tracker.offer(max_abs_diff(en_bloc, one_at_a_time), "operator entries");
  auto r = finish("instrument_composition", tracker, thr);
  r.metrics = {{"operator_deviation", tracker.value}};
  return r;
}

CriterionReport check_import(const ExamineeSpace& x, const InstrumentedObservation& inst,
                             std::size_t look_index, const CoOrbit& t, const Thresholds& thr) {
  require_examinee(x, inst);
  const CoOrbit& s = inst.look()[look_index];
  require_within(inst.examinee_space(), t.space(), "import");
  require_disjoint(s.space(), t.space(), "import");

  const Operator& q = inst.instrument().op();
  const Operator joint_effect = inst.to_initial_picture(tensor(s.effect(), t.effect()));
  const Operator reduced = kernel::second_division(inst.to_initial_picture(s.effect()), q);
  const FactorSpace after_look = inst.joint_space().without(s.space().labels());
  const bool same_space = after_look.same_labels(inst.examinee_space());

  MaxTracker tracker;
  MaxTracker orbit_equality;
  for (std::size_t k = 0; k < x.spanning().size(); ++k) {
    const Operator& p = x.spanning()[k];
    const Operator pq = joint_initial(inst, p, q);
    const double joint = trace_pairing(pq, joint_effect).real();
    const Operator conditioned_joint = kernel::first_division(evolve(inst, pq), s.effect());
    const double via_look = kernel::born(conditioned_joint, t.effect());
    const Operator conditioned_examinee = kernel::symmetrized_condition(p, reduced);
    const double via_result = kernel::born(conditioned_examinee, t.effect());
    tracker.offer(pairwise_spread({joint, via_look, via_result}), index_tag("p=spanning", k));
    if (same_space) {
      orbit_equality.offer(max_abs_diff(conditioned_examinee, conditioned_joint),
                           index_tag("p=spanning", k));
    }
  }
  auto r = finish("import[look=" + std::to_string(look_index) + "]", tracker, thr);
  if (same_space) {
    r.metrics.push_back({"orbit_equality_deviation", orbit_equality.value});
  } else {
    r.notes.push_back(
        "orbit-level comparison skipped: (p x q) // S and p // (S // q) live on different "
        "factor spaces; compared through Born pairings with t only");
  }
  return r;
}

CriterionReport check_transparency(const ExamineeSpace& x, const InstrumentedObservation& inst,
                                   const CoOrbit& t, const Thresholds& thr) {
  require_examinee(x, inst);
  if (!inst.instrument().is_pegged()) {
    throw PeggingError("transparency is defined for a pegged instrument");
  }
  require_within(inst.examinee_space(), t.space(), "transparency");

  const Operator& q = inst.instrument().op();
  const Operator pulled = inst.to_initial_picture(t.effect());
  MaxTracker tracker;
  for (std::size_t k = 0; k < x.spanning().size(); ++k) {
    const Operator& p = x.spanning()[k];
    const double with_instrument = trace_pairing(joint_initial(inst, p, q), pulled).real();
    const double bare = kernel::born(p, t.effect());
    tracker.offer(std::abs(with_instrument - bare), index_tag("p=spanning", k));
  }
  return finish("transparency", tracker, thr);
}

CriterionReport chain_transparency(const ExamineeSpace& x, const InstrumentedObservation& inst,
                                   const Bindle& primitive, const Thresholds& thr) {
  require_examinee(x, inst);
  require_within(inst.examinee_space(), primitive.space(), "transparency chain");
  const Bindle& look = inst.look();
  const Operator& q = inst.instrument().op();

  CriterionReport r;
  r.name = "transparency_chain";
  r.preconditions.push_back(
      norm_precondition("instrument_norm_one", instrument_norm_defect(inst), thr));
  try {
    const ExamineeSpace joint_x(inst.joint_space());
    r.preconditions.push_back(check_innocence(joint_x, look, primitive, thr));
  } catch (const ConsonanceError& e) {
    CriterionReport failed;
    failed.name = "innocence";
    failed.max_deviation = std::numeric_limits<double>::infinity();
    failed.status = Status::fail;
    failed.notes.push_back(e.what());
    r.preconditions.push_back(std::move(failed));
  }
  for (std::size_t i = 0; i < look.size(); ++i) {
    for (std::size_t j = 0; j < primitive.size(); ++j) {
      auto imp = check_import(x, inst, i, primitive[j], thr);
      imp.name += "[t=" + std::to_string(j) + "]";
      r.preconditions.push_back(std::move(imp));
    }
  }

  std::vector<Operator> reduced;
  for (const auto& s : look.elements()) {
    reduced.push_back(kernel::second_division(inst.to_initial_picture(s.effect()), q));
  }

  std::vector<MaxTracker> steps(5);
  for (std::size_t j = 0; j < primitive.size(); ++j) {
    const Operator& t = primitive[j].effect();
    const Operator t_pulled = inst.to_initial_picture(t);
    std::vector<Operator> st_pulled;
    for (const auto& s : look.elements()) {
      st_pulled.push_back(inst.to_initial_picture(tensor(s.effect(), t)));
    }
    const Operator t_examinee = embed(t, x.space());
    std::vector<Operator> reduced_products;
    for (const auto& u : reduced) {
      reduced_products.push_back(symmetrized_product(reorder(u, x.space()), t_examinee));
    }

    for (std::size_t k = 0; k < x.spanning().size(); ++k) {
      const Operator& p = x.spanning()[k];
      const Operator pq = joint_initial(inst, p, q);
      const Operator evolved = evolve(inst, pq);
      double b = 0.0, c = 0.0, d = 0.0, e = 0.0;
      for (std::size_t i = 0; i < look.size(); ++i) {
        b += trace_pairing(pq, st_pulled[i]).real();
        c += kernel::born(kernel::first_division(evolved, look[i].effect()), t);
        d += kernel::born(kernel::symmetrized_condition(p, reduced[i]), t);
        e += trace_pairing(p, reduced_products[i]).real();
      }
      const double a = trace_pairing(pq, t_pulled).real();
      const double f = kernel::born(p, t);
      const std::string where = index_tag("p=spanning", k) + ", " + index_tag("t", j);
      const double values[] = {a, b, c, d, e, f};
      for (std::size_t s = 0; s < 5; ++s) {
        steps[s].offer(std::abs(values[s + 1] - values[s]), where);
      }
    }
  }
  settle_chain(r, {"a", "b", "c", "d", "e", "f"},
               {"innocence between look and primitive bindles",
                "first division of the coupled orbit by each look result",
                "import of each instrumented result",
                "defining identity of conditioning on the instrumented result",
                "instrumented bindle innocent toward t, instrument of norm one"},
               steps, thr);
  return r;
}

CriterionReport check_bearing(const ExamineeSpace& x, const InstrumentedObservation& inst,
                              std::size_t look_index, const CoOrbit& t, const Thresholds& thr) {
  require_examinee(x, inst);
  const CoOrbit& s = inst.look()[look_index];
  require_within(inst.instrument().space(), t.space(), "bearing");
  require_disjoint(s.space(), t.space(), "bearing");

  const Operator& q = inst.instrument().op();
  const Operator q_given_t = kernel::condition(q, t.effect());
  const Operator s_pulled = inst.to_initial_picture(s.effect());
  const Operator st_pulled = inst.to_initial_picture(tensor(s.effect(), t.effect()));
  const Operator combined_reduced = kernel::second_division(st_pulled, q);
  const Operator reduced_by_conditioned = kernel::second_division(s_pulled, q_given_t);

  MaxTracker tracker;
  for (std::size_t k = 0; k < x.spanning().size(); ++k) {
    const Operator& p = x.spanning()[k];
    const double joint = trace_pairing(joint_initial(inst, p, q), st_pulled).real();
    const double via_combined = kernel::born(p, combined_reduced);
    const double via_conditioned = kernel::born(p, reduced_by_conditioned);
    const double via_product =
        kernel::born(evolve(inst, joint_initial(inst, p, q_given_t)), s.effect());
    tracker.offer(pairwise_spread({joint, via_combined, via_conditioned, via_product}),
                  index_tag("p=spanning", k));
  }
  auto r = finish("bearing[look=" + std::to_string(look_index) + "]", tracker, thr);
  r.metrics.push_back(
      {"coorbit_equality_deviation", max_abs_diff(combined_reduced, reduced_by_conditioned)});
  r.notes.push_back("p x (q // t) is formed without checking that p and q // t are past distinct");
  return r;
}

CriterionReport check_invisibility(const ExamineeSpace& x, const InstrumentedObservation& inst,
                                   const CoOrbit& t, const Thresholds& thr) {
  require_examinee(x, inst);
  require_within(inst.joint_space(), t.space(), "invisibility");

  const Operator& q = inst.instrument().op();
  const Operator pulled = inst.to_initial_picture(t.effect());
  const bool on_instrument = inst.instrument().space().contains_all(t.space().labels());

  double reference = 0.0;
  CriterionReport r;
  if (on_instrument) {
    reference = kernel::born(q, t.effect());
  } else {
    const double d = static_cast<double>(x.space().total_dim());
    const Operator mixed = Operator::identity(x.space()).scaled(1.0 / d);
    reference = trace_pairing(joint_initial(inst, mixed, q), pulled).real();
    r.notes.push_back(
        "t reads examinee factors: compared against its probability for the maximally "
        "mixed examinee");
  }

  MaxTracker tracker;
  for (std::size_t k = 0; k < x.spanning().size(); ++k) {
    const Operator& p = x.spanning()[k];
    const double with_examinee = trace_pairing(joint_initial(inst, p, q), pulled).real();
    const double expected = p.trace().real() * reference;
    tracker.offer(std::abs(with_examinee - expected), index_tag("p=spanning", k));
  }
  auto out = finish("invisibility", tracker, thr);
  out.notes = std::move(r.notes);
  out.metrics.push_back({"instrument_probability", reference});
  return out;
}

CriterionReport chain_invisibility(const ExamineeSpace& x, const InstrumentedObservation& inst,
                                   const Bindle& primitive, const Thresholds& thr) {
  require_examinee(x, inst);
  require_within(inst.instrument().space(), primitive.space(), "invisibility chain");
  const Bindle& look = inst.look();
  const Operator& q = inst.instrument().op();

  CriterionReport r;
  r.name = "invisibility_chain";
  r.preconditions.push_back(
      norm_precondition("look_norm_one", std::abs(look.norm().value() - 1.0), thr));
  try {
    const ExamineeSpace joint_x(inst.joint_space());
    r.preconditions.push_back(check_innocence(joint_x, look, primitive, thr));
  } catch (const ConsonanceError& e) {
    CriterionReport failed;
    failed.name = "innocence";
    failed.max_deviation = std::numeric_limits<double>::infinity();
    failed.status = Status::fail;
    failed.notes.push_back(e.what());
    r.preconditions.push_back(std::move(failed));
  }
  for (std::size_t i = 0; i < look.size(); ++i) {
    for (std::size_t j = 0; j < primitive.size(); ++j) {
      auto bearing = check_bearing(x, inst, i, primitive[j], thr);
      bearing.name += "[t=" + std::to_string(j) + "]";
      r.preconditions.push_back(std::move(bearing));
    }
  }

  std::vector<Operator> s_pulled;
  for (const auto& s : look.elements()) s_pulled.push_back(inst.to_initial_picture(s.effect()));

  std::vector<MaxTracker> steps(5);
  for (std::size_t j = 0; j < primitive.size(); ++j) {
    const Operator& t = primitive[j].effect();
    const Operator t_pulled = inst.to_initial_picture(t);
    const Operator q_given_t = kernel::condition(q, t);
    const double t_probability = kernel::born(q, t);
    std::vector<Operator> st_pulled, combined_reduced, conditioned_reduced;
    for (std::size_t i = 0; i < look.size(); ++i) {
      st_pulled.push_back(inst.to_initial_picture(tensor(look[i].effect(), t)));
      combined_reduced.push_back(kernel::second_division(st_pulled.back(), q));
      conditioned_reduced.push_back(kernel::second_division(s_pulled[i], q_given_t));
    }

    for (std::size_t k = 0; k < x.spanning().size(); ++k) {
      const Operator& p = x.spanning()[k];
      const Operator pq = joint_initial(inst, p, q);
      const Operator p_with_conditioned = evolve(inst, joint_initial(inst, p, q_given_t));
      double b = 0.0, c = 0.0, d = 0.0, e = 0.0;
      for (std::size_t i = 0; i < look.size(); ++i) {
        b += trace_pairing(pq, st_pulled[i]).real();
        c += kernel::born(p, combined_reduced[i]);
        d += kernel::born(p, conditioned_reduced[i]);
        e += kernel::born(p_with_conditioned, look[i].effect());
      }
      const double a = trace_pairing(pq, t_pulled).real();
      const double f = p.trace().real() * t_probability;
      const std::string where = index_tag("p=spanning", k) + ", " + index_tag("t", j);
      const double values[] = {a, b, c, d, e, f};
      for (std::size_t s = 0; s < 5; ++s) {
        steps[s].offer(std::abs(values[s + 1] - values[s]), where);
      }
    }
  }
  settle_chain(r, {"a'", "b'", "c'", "d'", "e'", "f'"},
               {"innocence between look and primitive bindles",
                "defining identity of the second division",
                "bearing through the instrument alone",
                "defining identity of the second division with p x (q // t)",
                "look of norm one; norm of q // t is born(q, t)"},
               steps, thr);
  return r;
}

}  // namespace qcalc::lab
