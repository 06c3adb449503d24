#include "qcalc/bell.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>

#include "qcalc/errors.hpp"
#include "qcalc/random.hpp"

namespace qcalc::bell {
namespace {

constexpr std::size_t kChunk = 65536;
constexpr double kLatticeSlack = 1e-9;

double wrap_angle(double x) {
  if (!std::isfinite(x)) throw ConfigError("analyzer angles must be finite");
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  return r >= two_pi ? 0.0 : r;
}

double round15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

// Spin projectors (I +- n.sigma) / 2 with n = (sin theta, 0, cos theta).
Bindle analyzer(const std::string& wing, double theta, bool flip) {
  const FactorSpace space = FactorSpace::single(wing, 2);
  const double c = std::cos(theta), s = std::sin(theta);
  Matrix plus(2, 2), minus(2, 2);
  plus << (1.0 + c) / 2.0, s / 2.0, s / 2.0, (1.0 - c) / 2.0;
  minus << (1.0 - c) / 2.0, -s / 2.0, -s / 2.0, (1.0 + c) / 2.0;
  std::vector<CoOrbit> out{CoOrbit(Operator(space, plus)), CoOrbit(Operator(space, minus))};
  if (flip) std::swap(out[0], out[1]);
  return Bindle(std::move(out));
}

Orbit singlet() {
  const FactorSpace lr{{"L", 2}, {"R", 2}};
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(1) = 1.0 / std::numbers::sqrt2;   // |01>
  v(2) = -1.0 / std::numbers::sqrt2;  // |10>
  return Orbit::pegged(Operator(lr, v * v.adjoint()));
}

// Joint outcome probabilities P(x, y), index 2x + y.
std::array<double, 4> joint_distribution(const MerminSetup& setup, Pair pair) {
  const Bindle& l = setup.left(pair);
  const Bindle& r = setup.right(pair);
  std::array<double, 4> out{};
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      out[2 * x + y] = std::max(0.0, born(setup.singlet, future_product(l[x], r[y])));
    }
  }
  return out;
}

double log_choose(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

AnalyzerConfig AnalyzerConfig::from_radians(double a, double b, double j, double k, bool flip) {
  return AnalyzerConfig{wrap_angle(a), wrap_angle(b), wrap_angle(j), wrap_angle(k), flip};
}

AnalyzerConfig AnalyzerConfig::from_degrees(double a, double b, double j, double k, bool flip) {
  const double r = std::numbers::pi / 180.0;
  return from_radians(a * r, b * r, j * r, k * r, flip);
}

std::string_view to_string(Pair p) {
  switch (p) {
    case Pair::AJ: return "AJ";
    case Pair::AK: return "AK";
    case Pair::BJ: return "BJ";
    case Pair::BK: return "BK";
  }
  return "?";
}

Pair parse_pair(std::string_view s) {
  std::string up(s);
  for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Pair p : kAllPairs) {
    if (to_string(p) == up) return p;
  }
  throw ConfigError("unknown pair '" + std::string(s) + "' (expected AJ, AK, BJ or BK)");
}

const Bindle& MerminSetup::left(Pair p) const {
  return (p == Pair::AJ || p == Pair::AK) ? a : b;
}

const Bindle& MerminSetup::right(Pair p) const {
  return (p == Pair::AJ || p == Pair::BJ) ? j : k;
}

MerminSetup mermin_setup(const AnalyzerConfig& cfg) {
  return MerminSetup{singlet(), analyzer("L", cfg.a, false), analyzer("L", cfg.b, false),
                     analyzer("R", cfg.j, cfg.label_flip), analyzer("R", cfg.k, cfg.label_flip)};
}

double CorrelationTable::at(Pair p) const {
  switch (p) {
    case Pair::AJ: return aj;
    case Pair::AK: return ak;
    case Pair::BJ: return bj;
    case Pair::BK: return bk;
  }
  return 0.0;
}

CorrelationTable pair_correlation(const AnalyzerConfig& cfg) {
  const MerminSetup setup = mermin_setup(cfg);
  auto same = [&](Pair p) {
    const auto dist = joint_distribution(setup, p);
    return std::clamp(dist[0] + dist[3], 0.0, 1.0);
  };
  return CorrelationTable{same(Pair::AJ), same(Pair::AK), same(Pair::BJ), same(Pair::BK)};
}

OutcomeSequence::OutcomeSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw LengthError("an outcome sequence needs at least one run");
  for (auto b : bits_) {
    if (b > 1) throw ConfigError("outcomes must be 0 or 1");
  }
}

BreakStats break_stats(const OutcomeSequence& s1, const OutcomeSequence& s2) {
  if (s1.size() != s2.size()) {
    throw LengthError("break_stats: lengths " + std::to_string(s1.size()) + " and " +
                      std::to_string(s2.size()) + " differ");
  }
  std::size_t breaks = 0;
  for (std::size_t i = 0; i < s1.size(); ++i) breaks += s1[i] != s2[i];
  return {breaks, static_cast<double>(breaks) / static_cast<double>(s1.size())};
}

double triangle_bound(double r_bj, double r_ja, double r_ak) {
  for (double r : {r_bj, r_ja, r_ak}) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("break rates must lie in [0, 1]");
  }
  return std::min(1.0, round15(r_bj + r_ja + r_ak));
}

QQResult qq_empty(std::size_t n, double favored, double epsilon) {
  if (!(favored > 0.5 && favored <= 1.0)) throw ConfigError("favored must lie in (0.5, 1]");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be finite and non-negative");
  }
  if (n == 0) throw ConfigError("n must be at least 1");

  const double link_hi = std::min(1.0, round15(1.0 - favored + epsilon));
  const double link_lo = std::max(0.0, round15(1.0 - favored - epsilon));
  QQResult out;
  out.certificate.required = round15(favored - epsilon);
  out.certificate.bound = triangle_bound(link_hi, link_hi, link_hi);
  out.empty = out.certificate.required > out.certificate.bound + 1e-12;
  out.certificate.text = fmt(out.certificate.required) + (out.empty ? " > " : " <= ") +
                         fmt(out.certificate.bound);
  if (out.empty) return out;

  // Break counts per link lie in [least, most]. With A = 0 the three links
  // are break sets D1 = J, D2 = B ^ J, D3 = K, and B ^ K = D1 ^ D2 ^ D3.
  const double nd = static_cast<double>(n);
  const auto most = static_cast<long long>(std::floor(link_hi * nd + kLatticeSlack));
  const auto least = std::max(
      0LL, static_cast<long long>(std::ceil(link_lo * nd - kLatticeSlack)));
  if (least > most) return out;
  const auto len = static_cast<long long>(n);

  // Sizes c and the largest |D1 ^ D2 ^ D3| they allow: the sum when the sets
  // fit side by side, otherwise n or n - 1 by parity, reached by sharing t
  // runs among all three sets.
  std::array<long long, 3> c{most, most, most};
  long long bk = 3 * most;
  if (3 * most > len) {
    if (3 * least <= len) {
      c = {least, least, least};
      for (auto& x : c) {
        const long long add = std::min(most - x, len - (c[0] + c[1] + c[2]));
        x += add;
      }
      bk = len;
    } else {
      c = {least, least, least};
      if ((3 * least - len) % 2 != 0 && least < most) c[2] += 1;
      const long long s = c[0] + c[1] + c[2];
      bk = (s - len) % 2 == 0 ? len : len - 1;
    }
  }
  if (static_cast<double>(bk) + kLatticeSlack < out.certificate.required * nd) return out;

  const long long shared = (c[0] + c[1] + c[2] - bk) / 2;
  std::array<std::vector<std::uint8_t>, 3> d;
  long long pos = shared;
  for (std::size_t i = 0; i < 3; ++i) {
    d[i].assign(n, 0);
    for (long long r = 0; r < shared; ++r) d[i][static_cast<std::size_t>(r)] = 1;
    for (long long r = shared; r < c[i]; ++r, ++pos) d[i][static_cast<std::size_t>(pos)] = 1;
  }
  std::vector<std::uint8_t> a(n, 0), b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = d[0][i] ^ d[1][i];
  out.witness = Quadruple{OutcomeSequence(std::move(a)), OutcomeSequence(d[0]),
                          OutcomeSequence(std::move(b)), OutcomeSequence(d[2])};
  return out;
}

std::pair<OutcomeSequence, OutcomeSequence> sample_pair(const AnalyzerConfig& cfg, Pair pair,
                                                        std::size_t n, std::uint64_t seed) {
  if (n == 0) throw LengthError("sample_pair: n must be at least 1");
  const auto dist = joint_distribution(mermin_setup(cfg), pair);
  const double total = dist[0] + dist[1] + dist[2] + dist[3];
  const double c0 = dist[0] / total, c1 = c0 + dist[1] / total, c2 = c1 + dist[2] / total;

  std::vector<std::uint8_t> left(n), right(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  auto draw = [&](std::size_t chunk) {
    Rng rng(seed, chunk);
    const std::size_t end = std::min(n, (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const double u = rng.uniform();
      const int outcome = u < c0 ? 0 : u < c1 ? 1 : u < c2 ? 2 : 3;
      left[i] = static_cast<std::uint8_t>(outcome >> 1);
      right[i] = static_cast<std::uint8_t>(outcome & 1);
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(chunks, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) draw(c);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) draw(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  return {OutcomeSequence(std::move(left)), OutcomeSequence(std::move(right))};
}

double tail_log10(std::uint64_t n, double p, double lo, double hi) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0, 1)");
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) throw ConfigError("need 0 <= lo < hi <= 1");
  if (n < 1 || n > 10'000'000) throw ConfigError("n must lie in [1, 1e7]");

  const double nd = static_cast<double>(n);
  const double log_p = std::log(p), log_q = std::log1p(-p);
  std::vector<double> terms;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double frac = static_cast<double>(k) / nd;
    if (frac >= lo && frac <= hi) continue;
    terms.push_back(log_choose(n, k) + static_cast<double>(k) * log_p +
                    static_cast<double>(n - k) * log_q);
  }
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return (top + std::log(sum)) / std::numbers::ln10;
}

}  // namespace qcalc::bell
