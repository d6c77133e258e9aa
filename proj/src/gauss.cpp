#include "onlinecp/gauss.hpp"

#include <cmath>

#include "onlinecp/error.hpp"
#include "onlinecp/student_t.hpp"

namespace onlinecp {

namespace {

// Residual sums of squares below this fraction of sum y^2 are cancellation
// noise from the sufficient-statistic route, i.e. an exact fit.
constexpr double kExactFitTolerance = 1e-12;

}  // namespace

void GaussState::update(const Observation& obs) {
  moments_.add(obs.x, obs.y);
  xs_.push_back(obs.x);
  if (count() >= features() + 1) factor_ = SpdFactor(moments_.zz());
}

double GaussFit::scale() const { return std::sqrt(1.0 + leverage) * sigma; }

std::optional<GaussFit> gauss_fit(const GaussState& state, const Vector& x_new) {
  if (static_cast<std::size_t>(x_new.size()) != state.features()) {
    throw DataError("gauss_fit: x_new has the wrong dimension");
  }
  const std::size_t l = state.count();
  const std::size_t k = state.features();
  if (l + 1 < k + 3) return std::nullopt;

  const SpdFactor& factor = state.gram_factor();
  if (!factor.full_rank()) {
    throw NumericalError("gauss_fit: design matrix is rank deficient");
  }
  const CrossMoments& m = state.moments();
  const Vector gamma = factor.solve(m.zy());
  const Vector z = augment(x_new);

  GaussFit fit;
  fit.prediction = gamma.dot(z);
  fit.leverage = factor.inverse_quadratic_form(z);
  fit.df = static_cast<double>(l - k - 1);
  double rss = m.yy() - gamma.dot(m.zy());
  if (rss <= kExactFitTolerance * m.yy()) rss = 0.0;
  fit.sigma = std::sqrt(rss / fit.df);
  return fit;
}

double gauss_tstat(const GaussState& state, const Vector& x_new, double y_new) {
  const auto fit = gauss_fit(state, x_new);
  if (!fit) throw NumericalError("gauss_tstat: needs n >= K + 3");
  const double scale = fit->scale();
  if (scale == 0.0) throw NumericalError("gauss_tstat: zero residual variance");
  return (y_new - fit->prediction) / scale;
}

PredictionRegion gauss_region(const GaussFit& fit, double epsilon) {
  SignificanceLevel{epsilon};
  const double scale = fit.scale();
  if (scale == 0.0) return PredictionRegion::point(fit.prediction);
  const double half = t_upper_point(0.5 * epsilon, fit.df) * scale;
  return PredictionRegion::from_pieces(
      {Interval::open(fit.prediction - half, fit.prediction + half)});
}

PredictionRegion gauss_region(const GaussState& state, const Vector& x_new, double epsilon) {
  SignificanceLevel{epsilon};
  const auto fit = gauss_fit(state, x_new);
  if (!fit) return PredictionRegion::real_line();
  return gauss_region(*fit, epsilon);
}

}  // namespace onlinecp
