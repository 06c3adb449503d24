#include "qcalc/factor_space.hpp"

#include <algorithm>
#include <set>

#include "qcalc/errors.hpp"

namespace qcalc {

FactorSpace::FactorSpace(std::vector<Factor> factors, std::size_t dimension_cap)
    : factors_(std::move(factors)) {
  std::set<std::string> seen;
  for (const auto& f : factors_) {
    if (f.label.empty()) throw LabelError("factor label must be non-empty");
    if (f.dim == 0) throw ShapeError("factor '" + f.label + "' has dimension 0");
    if (!seen.insert(f.label).second) {
      throw LabelError("duplicate factor label '" + f.label + "'");
    }
    total_dim_ *= f.dim;
    if (total_dim_ > dimension_cap) {
      throw ShapeError("product dimension exceeds cap of " +
                       std::to_string(dimension_cap));
    }
  }
}

FactorSpace::FactorSpace(std::initializer_list<Factor> factors)
    : FactorSpace(std::vector<Factor>(factors)) {}

FactorSpace FactorSpace::single(std::string label, std::size_t dim) {
  return FactorSpace({Factor{std::move(label), dim}});
}

bool FactorSpace::contains(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t FactorSpace::position(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label == label) return i;
  }
  throw LabelError("unknown factor label '" + label + "' in " + describe());
}

std::size_t FactorSpace::dim_of(const std::string& label) const {
  return factors_[position(label)].dim;
}

std::vector<std::string> FactorSpace::labels() const {
  std::vector<std::string> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

bool FactorSpace::contains_all(std::span<const std::string> labels) const {
  return std::all_of(labels.begin(), labels.end(),
                     [&](const std::string& l) { return contains(l); });
}

bool FactorSpace::disjoint_from(const FactorSpace& other) const {
  return std::none_of(factors_.begin(), factors_.end(),
                      [&](const Factor& f) { return other.contains(f.label); });
}

bool FactorSpace::same_labels(const FactorSpace& other) const {
  if (size() != other.size()) return false;
  return std::all_of(factors_.begin(), factors_.end(), [&](const Factor& f) {
    return other.contains(f.label) && other.dim_of(f.label) == f.dim;
  });
}

FactorSpace FactorSpace::concat(const FactorSpace& other) const {
  if (!disjoint_from(other)) {
    throw DisjointnessError("factor label collision between " + describe() +
                            " and " + other.describe());
  }
  auto merged = factors_;
  merged.insert(merged.end(), other.factors_.begin(), other.factors_.end());
  return FactorSpace(std::move(merged));
}

FactorSpace FactorSpace::without(std::span<const std::string> labels) const {
  std::vector<Factor> kept;
  for (const auto& f : factors_) {
    if (std::find(labels.begin(), labels.end(), f.label) == labels.end()) {
      kept.push_back(f);
    }
  }
  return FactorSpace(std::move(kept));
}

FactorSpace FactorSpace::restricted_to(std::span<const std::string> labels) const {
  for (const auto& l : labels) position(l);
  std::vector<Factor> kept;
  for (const auto& f : factors_) {
    if (std::find(labels.begin(), labels.end(), f.label) != labels.end()) {
      kept.push_back(f);
    }
  }
  return FactorSpace(std::move(kept));
}

std::string FactorSpace::describe() const {
  std::string out = "{";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += ", ";
    out += factors_[i].label + ":" + std::to_string(factors_[i].dim);
  }
  return out + "}";
}

}  // namespace qcalc
