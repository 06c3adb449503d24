#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcalc/criteria.hpp"

namespace qcalc::lab {

// Which pair of criteria a scenario exercises.
enum class Family { transparency, invisibility };

std::string_view to_string(Family f);

/// A concrete instrumented observation together with the examinee space it is
/// checked over and the primitive bindle its criteria quantify over.
struct Scenario {
  std::string name;
  std::string description;
  Family family;
  bool expected_to_hold;
  ExamineeSpace examinee;
  InstrumentedObservation inst;
  Bindle primitive;
};

// Names accepted by build_scenario, in table order.
const std::vector<std::string>& scenario_names();

/// Named scenarios:
///   decoupled                 x:d, q:d, identity coupling, random q, look
///                             and primitive random bindles.
///   pointer_nondisturbing     controlled shift |j,k> -> |j,k+j>, q = |0><0|,
///                             look reads the pointer, primitive diagonal on x.
///   pointer_disturbing        same pointer, primitive in a phased Fourier
///                             basis of x.
///   memory_antenna            x:d, antenna a:d, memory m:d; coupling shifts a
///                             by x, q correlates a with m, look reads a,
///                             primitive reads m.
///   memory_antenna_violating  the coupling also shifts m by x.
/// ConfigError on an unknown name or dims < 2; the memory scenarios need
/// dims <= 4 and the others dims <= 8.
Scenario build_scenario(const std::string& name, std::size_t dims, std::uint64_t seed);

/// Randomized variants for fuzzing the implication theorems. index % 4 picks:
///   0 pointer, random instrument, random diagonal primitive
///   1 pointer, random primitive bindle
///   2 memory, random q, random coupling on {x, a} only
///   3 memory, random coupling on all of {x, a, m}
/// Variants 0 and 2 are expected to hold; 1 and 3 carry no expectation
/// (expected_to_hold is false but passing is not an error).
Scenario perturbed_scenario(std::size_t index, std::size_t dims, std::uint64_t seed);

/// Every criterion of the scenario's family: the per-result criterion for each
/// look element and primitive element, the blanket criterion for each
/// primitive element, and the chain, in that order.
std::vector<CriterionReport> evaluate_scenario(const Scenario& s, const Thresholds& thr = {});

/// Worst blanket-criterion report (transparency or invisibility over all
/// primitive elements).
CriterionReport blanket_criterion(const Scenario& s, const Thresholds& thr = {});

}  // namespace qcalc::lab
