#pragma once

#include <cstddef>

namespace onlinecp {

// How many leading explanatory variables the ridge fit uses at step n, plus
// the ridge coefficient. Before `threshold` only the leading block is used,
// from `threshold` on all `features`.
struct FeatureSchedule {
  std::size_t features = 0;
  std::size_t threshold = 3;
  std::size_t leading_block = 0;
  double ridge = 0.01;

  // threshold K + 3, leading block min(10, K), ridge 0.01. For K = 100 this
  // is K† = 10 before step 103 and 100 afterwards.
  static FeatureSchedule defaults(std::size_t features);

  std::size_t features_at(std::size_t step) const;

  // Throws UsageError if leading_block > features or ridge <= 0.
  void validate() const;
};

}  // namespace onlinecp
