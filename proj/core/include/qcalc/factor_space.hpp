#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qcalc {

// Product dimension above which a FactorSpace is rejected. Everything here is
// dense, so this keeps matrices at desk scale.
inline constexpr std::size_t kDefaultDimensionCap = 64;

struct Factor {
  std::string label;
  std::size_t dim = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Ordered list of labeled tensor factors. The order fixes the Kronecker
/// layout: the first factor is the most significant index.
///
/// An empty factor list is the one-dimensional scalar space, which is what a
/// partial trace over every factor produces.
class FactorSpace {
 public:
  FactorSpace() = default;
  explicit FactorSpace(std::vector<Factor> factors,
                       std::size_t dimension_cap = kDefaultDimensionCap);
  FactorSpace(std::initializer_list<Factor> factors);

  static FactorSpace single(std::string label, std::size_t dim);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  bool empty() const noexcept { return factors_.empty(); }
  std::size_t total_dim() const noexcept { return total_dim_; }

  bool contains(const std::string& label) const;
  // Index of `label` in the factor list; throws LabelError when absent.
  std::size_t position(const std::string& label) const;
  std::size_t dim_of(const std::string& label) const;

  std::vector<std::string> labels() const;
  bool contains_all(std::span<const std::string> labels) const;
  bool disjoint_from(const FactorSpace& other) const;
  // Same labels with the same dims, in any order.
  bool same_labels(const FactorSpace& other) const;

  // Factors of this followed by factors of `other`; DisjointnessError on a
  // shared label.
  FactorSpace concat(const FactorSpace& other) const;
  // Factors whose labels are not in `labels`, original order kept.
  FactorSpace without(std::span<const std::string> labels) const;
  // Factors named by `labels`, in this space's order.
  FactorSpace restricted_to(std::span<const std::string> labels) const;

  std::string describe() const;

  friend bool operator==(const FactorSpace& a, const FactorSpace& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<Factor> factors_;
  std::size_t total_dim_ = 1;
};

}  // namespace qcalc
