#include "onlinecp/moments.hpp"

#include <string>

#include "onlinecp/error.hpp"

namespace onlinecp {

Vector augment(const Vector& x) {
  Vector z(x.size() + 1);
  z[0] = 1.0;
  z.tail(x.size()) = x;
  return z;
}

CrossMoments::CrossMoments(std::size_t features)
    : features_(features),
      zz_(Matrix::Zero(static_cast<Eigen::Index>(features + 1),
                       static_cast<Eigen::Index>(features + 1))),
      zy_(Vector::Zero(static_cast<Eigen::Index>(features + 1))) {}

void CrossMoments::add(const Vector& x, double y) {
  if (static_cast<std::size_t>(x.size()) != features_) {
    throw DataError("observation has dimension " + std::to_string(x.size()) +
                    ", expected " + std::to_string(features_));
  }
  const Vector z = augment(x);
  zz_.selfadjointView<Eigen::Lower>().rankUpdate(z);
  zz_.triangularView<Eigen::StrictlyUpper>() = zz_.transpose();
  zy_ += y * z;
  yy_ += y * y;
  ++count_;
}

}  // namespace onlinecp
