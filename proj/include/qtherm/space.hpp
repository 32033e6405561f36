// Bookkeeping for tensor-product spaces: an ordered list of labeled factors.
// The first factor is the most significant index, so a composite basis state
// |x> ⊗ |y> sits at flat index x * dim_y + y.
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qtherm/errors.hpp"

namespace qtherm {

struct Factor {
  std::string label;
  Eigen::Index dim = 0;

  friend bool operator==(const Factor&, const Factor&) = default;
};

// Factor order is significant and is preserved by every operation that
// produces a derived layout (partial traces keep factors in original order).
class SpaceLayout {
 public:
  SpaceLayout() = default;

  explicit SpaceLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
    for (const auto& f : factors_) {
      if (f.label.empty()) throw ValidationError("space layout: empty factor label");
      if (f.dim < 1) {
        throw ValidationError("space layout: factor '" + f.label + "' has dimension " +
                              std::to_string(f.dim) + ", expected >= 1");
      }
      for (const auto& g : factors_) {
        if (&f != &g && f.label == g.label) {
          throw ValidationError("space layout: duplicate factor label '" + f.label + "'");
        }
      }
      if (total_dim_ > (Eigen::Index{1} << 40) / f.dim) {
        throw ValidationError("space layout: total dimension overflow");
      }
      total_dim_ *= f.dim;
    }
  }

  static SpaceLayout single(std::string label, Eigen::Index dim) {
    return SpaceLayout({{std::move(label), dim}});
  }

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t factor_count() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  Eigen::Index total_dim() const { return total_dim_; }

  bool has_label(std::string_view label) const {
    for (const auto& f : factors_)
      if (f.label == label) return true;
    return false;
  }

  std::size_t index_of(std::string_view label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (factors_[i].label == label) return i;
    throw ValidationError("space layout: unknown factor label '" + std::string(label) + "'");
  }

  // Concatenation for tensor products; labels must stay unique.
  SpaceLayout joined(const SpaceLayout& other) const {
    std::vector<Factor> all = factors_;
    all.insert(all.end(), other.factors_.begin(), other.factors_.end());
    return SpaceLayout(std::move(all));
  }

  friend bool operator==(const SpaceLayout&, const SpaceLayout&) = default;

 private:
  std::vector<Factor> factors_;
  Eigen::Index total_dim_ = 1;
};

}  // namespace qtherm
