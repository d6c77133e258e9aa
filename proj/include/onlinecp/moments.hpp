#pragma once

#include <cstddef>

#include "onlinecp/linalg.hpp"

namespace onlinecp {

// (1, x): the explanatory vector with the dummy coordinate prepended.
Vector augment(const Vector& x);

// Running sums over augmented vectors z = (1, x):
//   sum z z'  (holds n, sum x, sum x x')
//   sum y z   (holds sum y, sum y x)
//   sum y^2
// These are the MVA sufficient statistics, and every other predictor state
// derives what it needs from them.
class CrossMoments {
 public:
  CrossMoments() = default;
  explicit CrossMoments(std::size_t features);

  void add(const Vector& x, double y);

  std::size_t features() const { return features_; }
  std::size_t count() const { return count_; }
  const Matrix& zz() const { return zz_; }
  const Vector& zy() const { return zy_; }
  double yy() const { return yy_; }
  double sum_y() const { return zy_.size() > 0 ? zy_[0] : 0.0; }

 private:
  std::size_t features_ = 0;
  std::size_t count_ = 0;
  Matrix zz_;
  Vector zy_;
  double yy_ = 0.0;
};

}  // namespace onlinecp
