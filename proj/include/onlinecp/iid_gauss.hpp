#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "onlinecp/moments.hpp"
#include "onlinecp/random.hpp"
#include "onlinecp/region.hpp"
#include "onlinecp/schedule.hpp"

namespace onlinecp {

// Bag of explanatory vectors plus sum y, sum y x, sum y^2. The responses
// themselves are not kept.
class IidGaussState {
 public:
  IidGaussState() = default;
  explicit IidGaussState(std::size_t features) : moments_(features) {}

  void update(const Observation& obs);

  std::size_t count() const { return moments_.count(); }
  std::size_t features() const { return moments_.features(); }
  const std::vector<Vector>& bag() const { return bag_; }
  const CrossMoments& moments() const { return moments_; }

 private:
  std::vector<Vector> bag_;
  CrossMoments moments_;
};

// One draw from the conditional law of the sequence given its summary.
struct ConditionalSample {
  std::vector<std::size_t> order;  // slot i holds bag()[order[i]]
  std::vector<Vector> xs;
  Vector y;
};

/// Uniform random ordering of the bag, then responses uniform on
/// {y : Z'y = (sum y, sum y x), y'y = sum y^2}. Throws NumericalError when the
/// summary admits no such y. Requires count() >= 1.
ConditionalSample iidgauss_sample_conditional(const IidGaussState& state, RngStream& rng);

// Monte Carlo p-value function for one step (bag plus x_new, candidate y).
//
// The conditional law of the last-slot residual is reduced by symmetry: a
// draw is a uniform slot J plus the first coordinate T of a uniform unit
// vector in the null space of Z', and A = |mu_J(y) + s(y) rho_J T|. Draws
// are stratified (every slot equally often) and antithetic (T and -T), which
// makes the estimate exact while the sphere is a point or a pair of points.
// The same draws serve every candidate y, so p_hat is a deterministic
// function of y and the regions for different epsilons are nested.
class IidGaussStep {
 public:
  static constexpr std::size_t kGridPoints = 201;
  static constexpr double kGridHalfWidths = 8.0;

  IidGaussStep(const IidGaussState& state, const Vector& x_new,
               const FeatureSchedule& schedule, RngStream& rng, std::size_t mc_samples,
               double tau);

  std::size_t sample_size() const { return n_; }
  // At least the requested mc_samples, rounded up to a multiple of 2n.
  std::size_t draws() const { return slot_.size(); }

  double p_value(double y) const;
  // Limits of p_value(y) as y -> -inf and +inf.
  double p_value_left() const { return p_left_; }
  double p_value_right() const { return p_right_; }

  /// Convex hull of the closure of {y : p_value(y) > epsilon}.
  PredictionRegion region(double epsilon) const;

  double grid_center() const { return center_; }
  double grid_half_width() const { return half_width_; }

 private:
  // Shared comparison: A_k = |mu_J + s rho_J T_k| against a_obs, with
  // mu = mu_base + mu_slope y_scale.
  double estimate(double mu_base_weight, double y_scale, double s, double a_obs) const;
  double refine(double inside, double outside, double epsilon) const;

  std::size_t n_ = 0;
  double tau_ = 1.0;
  Vector mu0_, mu1_;   // mu(y) = mu0 + mu1 y
  Vector rho_;         // sqrt(1 - h_j)
  double rss0_ = 0.0, rss1_ = 0.0, rss2_ = 0.0;
  double obs0_ = 0.0, obs1_ = 0.0;  // observed last residual e_n(y)
  std::vector<std::uint32_t> slot_;
  std::vector<double> coord_;
  double p_left_ = 0.0, p_right_ = 0.0;
  double center_ = 0.0, half_width_ = 1.0;
  std::vector<double> grid_;
  std::vector<double> grid_p_;
};

PredictionRegion iidgauss_region(const IidGaussState& state, const Vector& x_new,
                                 double epsilon, const FeatureSchedule& schedule,
                                 RngStream& rng, std::size_t mc_samples, double tau = 1.0);

}  // namespace onlinecp
