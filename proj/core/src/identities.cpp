#include "qcalc/identities.hpp"

#include <algorithm>
#include <functional>

#include "qcalc/random.hpp"

namespace qcalc::lab {
namespace {

std::size_t draw_dim(Rng& rng) { return 2 + static_cast<std::size_t>(rng.below(3)); }

// Factors in a random order, so the checks also exercise label-keyed reordering.
FactorSpace shuffled(std::vector<Factor> factors, Rng& rng) {
  for (std::size_t i = factors.size(); i > 1; --i) {
    std::swap(factors[i - 1], factors[rng.below(i)]);
  }
  return FactorSpace(std::move(factors));
}

std::vector<CoOrbit> as_coorbits(const std::vector<Operator>& ops) {
  return {ops.begin(), ops.end()};
}

CriterionReport aggregate(std::string name, std::uint64_t seed, std::size_t instances,
                          const Thresholds& thr,
                          const std::function<CriterionReport(Rng&)>& one) {
  CriterionReport out;
  out.name = std::move(name);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(seed, i);
    const CriterionReport r = one(rng);
    if (i == 0 || r.max_deviation > out.max_deviation) {
      out.max_deviation = r.max_deviation;
      out.witness = "instance " + std::to_string(i) + ": " + r.witness;
      worst = i;
    }
  }
  out.holds = out.max_deviation <= thr.tol;
  out.status = classify(out.max_deviation, thr);
  out.metrics = {{"instances", static_cast<double>(instances)},
                 {"worst_instance", static_cast<double>(worst)}};
  return out;
}

}  // namespace

CriterionReport run_innocence_suite(std::uint64_t seed, std::size_t instances,
                                    const Thresholds& thr) {
  return aggregate("innocence", seed, instances, thr, [&](Rng& rng) {
    const std::size_t du = draw_dim(rng), dv = draw_dim(rng);
    std::vector<Factor> factors{{"u", du}, {"v", dv}};
    if (du * dv <= 8) factors.push_back({"w", draw_dim(rng)});
    const ExamineeSpace x(shuffled(factors, rng));
    const Bindle b1(as_coorbits(random_bindle(FactorSpace::single("u", du), draw_dim(rng), rng)));
    const Bindle b2(as_coorbits(random_bindle(FactorSpace::single("v", dv), draw_dim(rng), rng)));
    return check_innocence(x, b1, b2, thr);
  });
}

CriterionReport run_combined_conditioning_suite(std::uint64_t seed, std::size_t instances,
                                                const Thresholds& thr) {
  return aggregate("combined_conditioning", seed, instances, thr, [&](Rng& rng) {
    const std::size_t d1 = draw_dim(rng), d2 = draw_dim(rng), dr = draw_dim(rng);
    const FactorSpace all = shuffled({{"g1", d1}, {"g2", d2}, {"r", dr}}, rng);
    const Orbit p = Orbit::pegged(random_density(all, rng));
    const CoOrbit s(random_effect(FactorSpace::single("g1", d1), rng));
    const CoOrbit t(random_effect(FactorSpace::single("g2", d2), rng));
    return check_combined_conditioning(p, s, t, thr);
  });
}

CriterionReport run_instrument_composition_suite(std::uint64_t seed, std::size_t instances,
                                                 const Thresholds& thr) {
  return aggregate("instrument_composition", seed, instances, thr, [&](Rng& rng) {
    const std::size_t dx = draw_dim(rng), dp = draw_dim(rng), dq = draw_dim(rng);
    const FactorSpace all = shuffled({{"x", dx}, {"p", dp}, {"q", dq}}, rng);
    const CoOrbit s(random_effect(all, rng));
    const Orbit p = Orbit::pegged(random_density(FactorSpace::single("p", dp), rng));
    const Orbit q = Orbit::pegged(random_density(FactorSpace::single("q", dq), rng));
    return check_instrument_composition(s, p, q, thr);
  });
}

}  // namespace qcalc::lab
