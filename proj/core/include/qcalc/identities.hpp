#pragma once

#include <cstdint>

#include "qcalc/criteria.hpp"

namespace qcalc::lab {

/// Seeded random suites for the three identities of the calculus. Instance i
/// draws from Rng(seed, i), with every factor dimension in [2, 4], so any
/// single instance can be replayed alone. Each suite returns one report whose
/// deviation is the worst over all instances and whose witness names the
/// instance.
CriterionReport run_innocence_suite(std::uint64_t seed, std::size_t instances = 200,
                                    const Thresholds& thr = {});
CriterionReport run_combined_conditioning_suite(std::uint64_t seed, std::size_t instances = 200,
                                                const Thresholds& thr = {});
CriterionReport run_instrument_composition_suite(std::uint64_t seed,
                                                 std::size_t instances = 200,
                                                 const Thresholds& thr = {});

}  // namespace qcalc::lab
