#include "onlinecp/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "onlinecp/error.hpp"

namespace onlinecp {

FeatureSchedule FeatureSchedule::defaults(std::size_t features) {
  return {features, features + 3, std::min<std::size_t>(10, features), 0.01};
}

std::size_t FeatureSchedule::features_at(std::size_t step) const {
  return step < threshold ? leading_block : features;
}

void FeatureSchedule::validate() const {
  if (leading_block > features) {
    throw UsageError("feature schedule: leading block exceeds the number of features");
  }
  if (!(ridge > 0.0) || !std::isfinite(ridge)) {
    throw UsageError("feature schedule: ridge coefficient must be positive");
  }
}

}  // namespace onlinecp
