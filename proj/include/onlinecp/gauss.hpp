#pragma once

#include <optional>
#include <vector>

#include "onlinecp/linalg.hpp"
#include "onlinecp/moments.hpp"
#include "onlinecp/region.hpp"

namespace onlinecp {

// x_1..x_n in order plus sum y, sum y x, sum y^2 (held inside the cross
// moments, whose sum z z' is the Gram matrix Z'Z). The factorization of Z'Z
// is refreshed on every update once n >= K + 1.
class GaussState {
 public:
  GaussState() = default;
  explicit GaussState(std::size_t features) : moments_(features) {}

  void update(const Observation& obs);

  std::size_t count() const { return moments_.count(); }
  std::size_t features() const { return moments_.features(); }
  const std::vector<Vector>& xs() const { return xs_; }
  const CrossMoments& moments() const { return moments_; }
  // Valid once count() >= features() + 1.
  const SpdFactor& gram_factor() const { return factor_; }

 private:
  std::vector<Vector> xs_;
  CrossMoments moments_;
  SpdFactor factor_;
};

// Classical prediction for the next response.
struct GaussFit {
  double prediction = 0.0;  // gamma_hat_{n-1} . z_n
  double leverage = 0.0;    // z_n'(Z'Z)^{-1} z_n
  double sigma = 0.0;       // sigma_hat_{n-1}
  double df = 0.0;          // n - K - 2

  double scale() const;     // sqrt(1 + leverage) * sigma
};

/// Least-squares fit for the step after `state`; std::nullopt while
/// n < K + 3 (n counting the step being predicted). Throws NumericalError on
/// a singular design.
std::optional<GaussFit> gauss_fit(const GaussState& state, const Vector& x_new);

/// T_n = (y - y_hat) / (sqrt(1 + leverage) sigma_hat), t-distributed with
/// n - K - 2 degrees of freedom. Throws when n < K + 3 or sigma_hat = 0.
double gauss_tstat(const GaussState& state, const Vector& x_new, double y_new);

/// y_hat +- t^{eps/2}_{n-K-2} sqrt(1 + leverage) sigma_hat (open), the whole
/// line while n < K + 3, and the point {y_hat} when sigma_hat = 0.
PredictionRegion gauss_region(const GaussState& state, const Vector& x_new, double epsilon);
PredictionRegion gauss_region(const GaussFit& fit, double epsilon);

}  // namespace onlinecp
