#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "onlinecp/moments.hpp"
#include "onlinecp/region.hpp"
#include "onlinecp/residuals.hpp"
#include "onlinecp/schedule.hpp"

namespace onlinecp {

// Bag of observations seen so far. The cross-moment sums are a cached
// function of the bag that makes the ridge fit O(p^3 + n p) per step.
class IidState {
 public:
  IidState() = default;
  explicit IidState(std::size_t features) : moments_(features) {}

  void update(const Observation& obs);

  std::size_t count() const { return bag_.size(); }
  std::size_t features() const { return moments_.features(); }
  const std::vector<Observation>& bag() const { return bag_; }
  const CrossMoments& moments() const { return moments_; }

 private:
  std::vector<Observation> bag_;
  CrossMoments moments_;
};

/// Smoothed conformal p-value of the last score among all of them:
/// (#{i : a_i > a_n} + tau #{i : a_i = a_n}) / n.
double iid_pvalue(std::span<const double> scores, double tau);

/// Ridge residuals of the bag plus the candidate (x_new, y), affine in y.
AffineResiduals iid_residuals(const IidState& state, const Vector& x_new,
                              const FeatureSchedule& schedule);

// Piecewise-constant p-value over the candidate response. Critical points
// split the line into degenerate closed pieces and the open gaps between
// them; for each piece we hold (#greater, #equal) counts of |e_i| vs |e_n|.
class PValueProfile {
 public:
  // Critical points closer than this are merged.
  static constexpr double kMergeTolerance = 1e-12;
  // |b_i -+ b_n| below this gives no crossing.
  static constexpr double kParallelTolerance = 1e-12;

  // Sweep over the sorted critical points, O(n log n).
  static PValueProfile from_residuals(const AffineResiduals& residuals);

  std::size_t sample_size() const { return n_; }
  const std::vector<double>& points() const { return points_; }

  // p-value on gap k (k = 0 left of points()[0]; k = points().size() rightmost).
  double gap_pvalue(std::size_t k, double tau) const;
  double point_pvalue(std::size_t k, double tau) const;

  // {y : p(y) > epsilon}.
  PredictionRegion region(double epsilon, double tau) const;

 private:
  struct Counts {
    std::size_t greater = 0;
    std::size_t equal = 0;
  };

  std::size_t n_ = 0;
  std::vector<double> points_;
  std::vector<Counts> at_point_;
  std::vector<Counts> in_gap_;
};

PredictionRegion iid_region(const IidState& state, const Vector& x_new, double epsilon,
                            double tau, const FeatureSchedule& schedule);

}  // namespace onlinecp
