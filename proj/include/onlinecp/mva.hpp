#pragma once

#include <vector>

#include "onlinecp/moments.hpp"
#include "onlinecp/region.hpp"
#include "onlinecp/residuals.hpp"
#include "onlinecp/schedule.hpp"

namespace onlinecp {

// Running sums of x, y, x x', y x, y^2 and the count. The observations are
// also retained, but only mva_residual_affine reads them; region computation
// uses the sums alone.
class MvaState {
 public:
  MvaState() = default;
  explicit MvaState(std::size_t features) : moments_(features) {}

  void update(const Observation& obs);

  std::size_t count() const { return moments_.count(); }
  std::size_t features() const { return moments_.features(); }
  const CrossMoments& moments() const { return moments_; }
  const std::vector<Observation>& history() const { return history_; }

 private:
  CrossMoments moments_;
  std::vector<Observation> history_;
};

/// Residuals of all n observations, affine in the candidate response. Uses
/// the same computation as iid_residuals, so the two agree bit for bit.
AffineResiduals mva_residual_affine(const MvaState& state, const Vector& x_new,
                                    const FeatureSchedule& schedule);

// The studentized last residual as a function of the candidate response y:
//   sqrt((n-1)/n) |e_n(y) - mean_{i<n} e_i(y)| / sqrt(SS(y) / (n-2)),
// with SS(y) = sum_{i<n} (e_i(y) - mean)^2 quadratic in y. t-distributed with
// n - 2 degrees of freedom.
struct MvaStatistic {
  std::size_t n = 0;
  double dev0 = 0.0, dev1 = 0.0;          // e_n - mean, affine
  double ss0 = 0.0, ss1 = 0.0, ss2 = 0.0;  // SS, quadratic

  double deviation(double y) const { return dev0 + dev1 * y; }
  double spread(double y) const { return ss0 + y * (ss1 + y * ss2); }
  double statistic(double y) const;
  // Two-sided p-value; tau only matters for n < 3, where it is the p-value.
  double p_value(double y, double tau) const;
  // {y : statistic(y) < t^{eps/2}_{n-2}}: an interval, two rays, empty, or
  // the whole line. The whole line for n < 3.
  PredictionRegion region(double epsilon) const;
};

/// Coefficients from the sufficient statistics of the first n - 1
/// observations plus x_new.
MvaStatistic mva_statistic(const MvaState& state, const Vector& x_new,
                           const FeatureSchedule& schedule);

PredictionRegion mva_region(const MvaState& state, const Vector& x_new, double epsilon,
                            const FeatureSchedule& schedule);

}  // namespace onlinecp
