#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcalc/calculus.hpp"

namespace qcalc::bell {

// cos^2(pi / 8): the same-outcome probability at a 45 degree relative angle.
inline const double kQuantumFavored = 0.5 + 0.25 * 1.4142135623730951;

/// Analyzer angles (radians, kept in [0, 2 pi)) for the two left settings a, b
/// and the two right settings j, k. With label_flip the right wing's outcome
/// labels are swapped, so equal angles give equal outcomes.
struct AnalyzerConfig {
  double a = 0.0, b = 0.0, j = 0.0, k = 0.0;
  bool label_flip = true;

  // ConfigError on a non-finite angle.
  static AnalyzerConfig from_radians(double a, double b, double j, double k, bool flip = true);
  static AnalyzerConfig from_degrees(double a, double b, double j, double k, bool flip = true);
};

enum class Pair { AJ, AK, BJ, BK };

inline constexpr std::array<Pair, 4> kAllPairs = {Pair::AJ, Pair::AK, Pair::BJ, Pair::BK};

std::string_view to_string(Pair p);
// "AJ", "AK", "BJ", "BK" (case-insensitive); ConfigError otherwise.
Pair parse_pair(std::string_view s);

/// Singlet orbit on factors L, R and one two-outcome bindle per setting.
struct MerminSetup {
  Orbit singlet;
  Bindle a, b, j, k;

  const Bindle& left(Pair p) const;
  const Bindle& right(Pair p) const;
};

MerminSetup mermin_setup(const AnalyzerConfig& cfg);

struct CorrelationTable {
  double aj = 0.0, ak = 0.0, bj = 0.0, bk = 0.0;
  double at(Pair p) const;
};

// Same-outcome probability of each pair, from Born pairings of the singlet.
CorrelationTable pair_correlation(const AnalyzerConfig& cfg);

/// One wing's record of outcomes.
class OutcomeSequence {
 public:
  // LengthError when empty, ConfigError on a value other than 0 or 1.
  explicit OutcomeSequence(std::vector<std::uint8_t> bits);

  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }

  friend bool operator==(const OutcomeSequence&, const OutcomeSequence&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct BreakStats {
  std::size_t breaks = 0;
  double rate = 0.0;
};

// Positions where the two records disagree. LengthError on unequal lengths.
BreakStats break_stats(const OutcomeSequence& s1, const OutcomeSequence& s2);

/// Largest B-K break rate compatible with the B-J, J-A and A-K break rates:
/// min(1, r_bj + r_ja + r_ak). The sum is rounded to 15 significant digits so
/// that decimal inputs give decimal answers. ConfigError on a rate outside
/// [0, 1].
double triangle_bound(double r_bj, double r_ja, double r_ak);

struct QQCertificate {
  double required;  // favored - epsilon: the B-K break rate the pair must reach
  double bound;     // triangle_bound at three links of 1 - favored + epsilon
  std::string text;
};

struct Quadruple {
  OutcomeSequence a, j, b, k;
};

struct QQResult {
  bool empty = false;
  QQCertificate certificate;
  // For a nonempty verdict: four length-n records meeting every band, when
  // the band edges admit integer break counts at this n.
  std::optional<Quadruple> witness;
};

/// Whether records B in B-hat and K in K-hat can break the B-K pattern at a
/// rate of at least favored - epsilon when each of the three links B-J, J-A,
/// A-K breaks at a rate within epsilon of 1 - favored. ConfigError unless
/// favored is in (0.5, 1], epsilon >= 0 and n >= 1.
QQResult qq_empty(std::size_t n, double favored, double epsilon);

/// n independent runs of one pair, drawn from the Born distribution of its
/// four joint outcomes. Runs are drawn in fixed chunks, chunk c from
/// Rng(seed, c), so the records depend only on the arguments and not on how
/// many threads share the work. LengthError when n == 0.
std::pair<OutcomeSequence, OutcomeSequence> sample_pair(const AnalyzerConfig& cfg, Pair pair,
                                                        std::size_t n, std::uint64_t seed);

/// log10 P(X/n < lo or X/n > hi) for X ~ Binomial(n, p), summed exactly in
/// the log domain. Returns -infinity when no outcome lies outside [lo, hi].
/// ConfigError unless 0 < p < 1, 0 <= lo < hi <= 1 and 1 <= n <= 1e7.
double tail_log10(std::uint64_t n, double p, double lo, double hi);

}  // namespace qcalc::bell
