#include "onlinecp/mva.hpp"

#include <cmath>

#include "onlinecp/error.hpp"
#include "onlinecp/student_t.hpp"

namespace onlinecp {

namespace {

// |A| below this fraction of its two contributions is treated as zero.
constexpr double kDegenerateQuadratic = 1e-13;

}  // namespace

void MvaState::update(const Observation& obs) {
  moments_.add(obs.x, obs.y);
  history_.push_back(obs);
}

AffineResiduals mva_residual_affine(const MvaState& state, const Vector& x_new,
                                    const FeatureSchedule& schedule) {
  return scheduled_residuals(state.history(), state.moments(), x_new, schedule);
}

double MvaStatistic::statistic(double y) const {
  const double dev = std::fabs(deviation(y));
  const double ss = spread(y);
  if (!(ss > 0.0)) return dev == 0.0 ? 0.0 : kInf;
  const double nn = static_cast<double>(n);
  return std::sqrt((nn - 1.0) / nn) * dev / std::sqrt(ss / (nn - 2.0));
}

double MvaStatistic::p_value(double y, double tau) const {
  if (n < 3) return tau;
  const double t = statistic(y);
  if (std::isinf(t)) return 0.0;
  return 2.0 * t_sf(t, static_cast<double>(n - 2));
}

PredictionRegion MvaStatistic::region(double epsilon) const {
  SignificanceLevel{epsilon};
  if (n < 3) return PredictionRegion::real_line();
  const double nn = static_cast<double>(n);
  const double t = t_upper_point(0.5 * epsilon, nn - 2.0);
  const double t2 = t * t;
  const double k = (nn - 1.0) * (nn - 2.0) / nn;

  // k dev(y)^2 - t^2 SS(y) < 0
  const double a = k * dev1 * dev1 - t2 * ss2;
  const double b = 2.0 * k * dev0 * dev1 - t2 * ss1;
  const double c = k * dev0 * dev0 - t2 * ss0;

  if (std::fabs(a) <= kDegenerateQuadratic * (k * dev1 * dev1 + t2 * std::fabs(ss2))) {
    if (b == 0.0) return c < 0.0 ? PredictionRegion::real_line() : PredictionRegion{};
    const double root = -c / b;
    if (b > 0.0) return PredictionRegion::from_pieces({Interval::open(-kInf, root)});
    return PredictionRegion::from_pieces({Interval::open(root, kInf)});
  }

  const double disc = b * b - 4.0 * a * c;
  if (a > 0.0 && disc <= 0.0) return {};
  if (a < 0.0 && disc < 0.0) return PredictionRegion::real_line();
  const double q = -0.5 * (b + std::copysign(std::sqrt(std::fmax(disc, 0.0)), b));
  double r1 = q / a;
  double r2 = q != 0.0 ? c / q : r1;
  if (r1 > r2) std::swap(r1, r2);
  if (a > 0.0) return PredictionRegion::from_pieces({Interval::open(r1, r2)});
  return PredictionRegion::from_pieces(
      {Interval::open(-kInf, r1), Interval::open(r2, kInf)});
}

MvaStatistic mva_statistic(const MvaState& state, const Vector& x_new,
                           const FeatureSchedule& schedule) {
  if (static_cast<std::size_t>(x_new.size()) != state.features()) {
    throw DataError("mva_statistic: x_new has the wrong dimension");
  }
  MvaStatistic s;
  s.n = state.count() + 1;
  if (s.n < 3) return s;

  const std::size_t k = schedule.features_at(s.n);
  const auto p = static_cast<Eigen::Index>(k + 1);
  const double a = schedule.ridge;
  const CrossMoments& m = state.moments();

  const Vector u = augment(x_new).head(p);
  Matrix gram = m.zz().topLeftCorner(p, p);
  gram.noalias() += u * u.transpose();
  Matrix M = gram;
  M.diagonal().array() += a;
  const Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) throw NumericalError("mva_statistic: Cholesky failed");

  // Ridge coefficients c(y) = c0 + d y with U'y = g0 + u y.
  const Vector g0 = m.zy().head(p);
  const Vector c0 = llt.solve(g0);
  const Vector d = llt.solve(u);
  const double ud = u.dot(d);
  const double uc0 = u.dot(c0);
  const Vector ones_u = gram.col(0);  // sum of the rows of U

  // e_n(y)
  const double en0 = -uc0;
  const double en1 = 1.0 - ud;
  // sum_i e_i(y) over all n
  const double se0 = m.sum_y() - ones_u.dot(c0);
  const double se1 = 1.0 - ones_u.dot(d);
  // sum_i e_i(y)^2 over all n:  y'y - g'c - a c'c
  const double sq0 = m.yy() - g0.dot(c0) - a * c0.squaredNorm();
  const double sq1 = -2.0 * uc0 - 2.0 * a * c0.dot(d);
  const double sq2 = 1.0 - ud - a * d.squaredNorm();

  // Restrict both sums to i < n.
  const double s1_0 = se0 - en0;
  const double s1_1 = se1 - en1;
  const double s2_0 = sq0 - en0 * en0;
  const double s2_1 = sq1 - 2.0 * en0 * en1;
  const double s2_2 = sq2 - en1 * en1;

  const double prev = static_cast<double>(s.n - 1);
  s.dev0 = en0 - s1_0 / prev;
  s.dev1 = en1 - s1_1 / prev;
  s.ss0 = s2_0 - s1_0 * s1_0 / prev;
  s.ss1 = s2_1 - 2.0 * s1_0 * s1_1 / prev;
  s.ss2 = s2_2 - s1_1 * s1_1 / prev;
  return s;
}

PredictionRegion mva_region(const MvaState& state, const Vector& x_new, double epsilon,
                            const FeatureSchedule& schedule) {
  return mva_statistic(state, x_new, schedule).region(epsilon);
}

}  // namespace onlinecp
