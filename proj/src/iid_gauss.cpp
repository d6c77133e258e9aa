#include "onlinecp/iid_gauss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "onlinecp/error.hpp"
#include "onlinecp/student_t.hpp"

namespace onlinecp {

namespace {

constexpr double kTieTolerance = 1e-9;
constexpr int kMaxDoublings = 60;
constexpr double kRefineFraction = 1e-3;

Matrix stacked(const std::vector<Vector>& xs, const std::vector<std::size_t>& order,
               std::size_t features) {
  Matrix Z(static_cast<Eigen::Index>(order.size()), static_cast<Eigen::Index>(features + 1));
  for (std::size_t i = 0; i < order.size(); ++i) {
    Z.row(static_cast<Eigen::Index>(i)) = augment(xs[order[i]]).transpose();
  }
  return Z;
}

}  // namespace

void IidGaussState::update(const Observation& obs) {
  moments_.add(obs.x, obs.y);
  bag_.push_back(obs.x);
}

ConditionalSample iidgauss_sample_conditional(const IidGaussState& state, RngStream& rng) {
  const std::size_t n = state.count();
  if (n == 0) throw UsageError("iidgauss_sample_conditional: empty state");
  ConditionalSample out;
  out.order = sample_permutation(rng, n);
  const Matrix Z = stacked(state.bag(), out.order, state.features());
  const CrossMoments& m = state.moments();
  out.y = AffineSliceSphere(Z, m.zy(), m.yy(), true).sample(rng);
  out.xs.reserve(n);
  for (std::size_t i : out.order) out.xs.push_back(state.bag()[i]);
  return out;
}

IidGaussStep::IidGaussStep(const IidGaussState& state, const Vector& x_new,
                           const FeatureSchedule& schedule, RngStream& rng,
                           std::size_t mc_samples, double tau)
    : tau_(tau) {
  if (mc_samples == 0) throw UsageError("IidGaussStep: mc_samples must be positive");
  if (!(tau >= 0.0 && tau <= 1.0)) throw UsageError("IidGaussStep: tau must lie in [0, 1]");
  const std::size_t features = state.features();
  if (static_cast<std::size_t>(x_new.size()) != features) {
    throw DataError("IidGaussStep: x_new has dimension " + std::to_string(x_new.size()) +
                    ", expected " + std::to_string(features));
  }
  schedule.validate();
  if (schedule.features != features) {
    throw UsageError("IidGaussStep: schedule is for a different number of features");
  }
  const CrossMoments& m = state.moments();
  n_ = state.count() + 1;
  const auto n = static_cast<Eigen::Index>(n_);

  Matrix Z(n, static_cast<Eigen::Index>(features + 1));
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    Z.row(i) = augment(state.bag()[static_cast<std::size_t>(i)]).transpose();
  }
  const Vector z_new = augment(x_new);
  Z.row(n - 1) = z_new.transpose();

  // Projection onto col(Z) through a thin orthonormal basis.
  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(kRankTolerance);
  qr.compute(Z);
  const Eigen::Index r = qr.rank();
  const Matrix Qr = qr.householderQ() * Matrix::Identity(n, r);
  rho_ = (1.0 - Qr.rowwise().squaredNorm().array()).max(0.0).sqrt().matrix();

  // Z'y = g0 + z_new y; w(y) = Qr' y for any y with that cross product.
  const auto solve_head = [&](const Vector& g) -> Vector {
    const Vector pg = qr.colsPermutation().transpose() * g;
    return qr.matrixR()
        .topLeftCorner(r, r)
        .triangularView<Eigen::Upper>()
        .transpose()
        .solve(pg.head(r));
  };
  const Vector w0 = solve_head(m.zy());
  const Vector w1 = solve_head(z_new);
  const Vector a0 = Qr * w0;
  const Vector a1 = Qr * w1;

  // Ridge residual operator C = I - U (U'U + aI)^{-1} U' applied to the
  // projection; C fixes everything orthogonal to col(Z).
  const auto p = static_cast<Eigen::Index>(schedule.features_at(n_) + 1);
  const Matrix U = Z.leftCols(p);
  Matrix M = U.transpose() * U;
  M.diagonal().array() += schedule.ridge;
  const Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) throw NumericalError("IidGaussStep: Cholesky failed");
  mu0_ = a0 - U * llt.solve(U.transpose() * a0);
  mu1_ = a1 - U * llt.solve(U.transpose() * a1);

  obs0_ = mu0_[n - 1] - a0[n - 1];
  obs1_ = mu1_[n - 1] + 1.0 - a1[n - 1];
  rss0_ = m.yy() - w0.squaredNorm();
  rss1_ = -2.0 * w0.dot(w1);
  rss2_ = 1.0 - w1.squaredNorm();

  // Draws are balanced over slots and antithetic in T, so the estimate is
  // exact whenever the sphere has dimension 0 or 1; mc_samples is a floor.
  const std::size_t free = n_ - static_cast<std::size_t>(r);
  const std::size_t pairs = std::max<std::size_t>(1, (mc_samples + 2 * n_ - 1) / (2 * n_));
  slot_.reserve(2 * pairs * n_);
  coord_.reserve(2 * pairs * n_);
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t k = 0; k < pairs; ++k) {
      double t = 0.0;
      if (free == 1) {
        t = 1.0;
      } else if (free >= 2) {
        const double g = rng.gaussian();
        const double rest = 2.0 * rng.gamma(0.5 * static_cast<double>(free - 1));
        t = g / std::sqrt(g * g + rest);
      }
      slot_.push_back(static_cast<std::uint32_t>(j));
      coord_.push_back(t);
      slot_.push_back(static_cast<std::uint32_t>(j));
      coord_.push_back(-t);
    }
  }

  // Grid around the classical prediction, else around the sample mean.
  const std::size_t l = state.count();
  bool have_center = false;
  if (l >= features + 2) {
    const SpdFactor factor(m.zz());
    if (factor.full_rank()) {
      const Vector gamma = factor.solve(m.zy());
      const double df = static_cast<double>(l - features - 1);
      const double rss = std::fmax(0.0, m.yy() - gamma.dot(m.zy()));
      const double scale =
          std::sqrt((1.0 + factor.inverse_quadratic_form(z_new)) * rss / df);
      const double hw = kGridHalfWidths * t_upper_point(0.025, df) * scale;
      if (hw > 0.0 && std::isfinite(hw)) {
        center_ = gamma.dot(z_new);
        half_width_ = hw;
        have_center = true;
      }
    }
  }
  if (!have_center) {
    if (l == 0) {
      center_ = 0.0;
      half_width_ = 1.0;
    } else {
      const double cnt = static_cast<double>(l);
      const double mean = m.sum_y() / cnt;
      const double sd = std::sqrt(std::fmax(0.0, m.yy() / cnt - mean * mean));
      // |y_i - mean| <= sd sqrt(l - 1) bounds the data range.
      center_ = mean;
      half_width_ = sd * (std::sqrt(cnt - 1.0) + 3.0);
      if (!(half_width_ > 0.0)) half_width_ = 1e-3 * (1.0 + std::fabs(mean));
    }
  }

  grid_.resize(kGridPoints);
  grid_p_.resize(kGridPoints);
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    grid_[i] = center_ - half_width_ +
               2.0 * half_width_ * static_cast<double>(i) / static_cast<double>(kGridPoints - 1);
    grid_p_[i] = p_value(grid_[i]);
  }
  // As y -> +-inf everything scales with |y|.
  p_left_ = estimate(0.0, -1.0, std::sqrt(std::fmax(0.0, rss2_)), std::fabs(obs1_));
  p_right_ = estimate(0.0, 1.0, std::sqrt(std::fmax(0.0, rss2_)), std::fabs(obs1_));
}

double IidGaussStep::estimate(double mu_base_weight, double y_scale, double s,
                              double a_obs) const {
  std::size_t greater = 0;
  std::size_t equal = 0;
  for (std::size_t k = 0; k < slot_.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(slot_[k]);
    const double mu = mu_base_weight * mu0_[j] + y_scale * mu1_[j];
    const double a = std::fabs(mu + s * rho_[j] * coord_[k]);
    const double tol = kTieTolerance * (a_obs + std::fabs(mu) + s);
    if (a > a_obs + tol) {
      ++greater;
    } else if (std::fabs(a - a_obs) <= tol) {
      ++equal;
    }
  }
  return (static_cast<double>(greater) + tau_ * static_cast<double>(equal)) /
         static_cast<double>(slot_.size());
}

double IidGaussStep::p_value(double y) const {
  const double s = std::sqrt(std::fmax(0.0, rss0_ + y * (rss1_ + y * rss2_)));
  return estimate(1.0, y, s, std::fabs(obs0_ + obs1_ * y));
}

double IidGaussStep::refine(double inside, double outside, double epsilon) const {
  const double width = kRefineFraction * half_width_ / kGridHalfWidths;
  while (std::fabs(outside - inside) > width) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    if (p_value(mid) > epsilon) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

PredictionRegion IidGaussStep::region(double epsilon) const {
  SignificanceLevel{epsilon};
  const bool left_open = p_left_ > epsilon;
  const bool right_open = p_right_ > epsilon;

  struct Probe {
    double y;
    bool in;
  };
  std::vector<Probe> probes;
  probes.reserve(kGridPoints + 2 * kMaxDoublings);
  bool any_in = false;
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    const bool in = grid_p_[i] > epsilon;
    any_in = any_in || in;
    probes.push_back({grid_[i], in});
  }

  // Walk outwards until the boundary is bracketed (or the tail is known to be in).
  std::vector<Probe> left;
  for (int j = 1; j <= kMaxDoublings; ++j) {
    const bool edge_in = left.empty() ? probes.front().in : left.back().in;
    const bool need = left_open ? !any_in : edge_in;
    if (!need) break;
    const double y = center_ - half_width_ * std::ldexp(1.0, j);
    const bool in = p_value(y) > epsilon;
    any_in = any_in || in;
    left.push_back({y, in});
  }
  std::vector<Probe> right;
  for (int j = 1; j <= kMaxDoublings; ++j) {
    const bool edge_in = right.empty() ? probes.back().in : right.back().in;
    const bool need = right_open ? !any_in : edge_in;
    if (!need) break;
    const double y = center_ + half_width_ * std::ldexp(1.0, j);
    const bool in = p_value(y) > epsilon;
    any_in = any_in || in;
    right.push_back({y, in});
  }
  std::reverse(left.begin(), left.end());
  probes.insert(probes.begin(), left.begin(), left.end());
  probes.insert(probes.end(), right.begin(), right.end());

  if (!any_in) {
    return left_open || right_open ? PredictionRegion::real_line() : PredictionRegion{};
  }
  std::size_t first = 0;
  while (!probes[first].in) ++first;
  std::size_t last = probes.size() - 1;
  while (!probes[last].in) --last;

  const double lo = left_open    ? -kInf
                    : first == 0 ? probes[0].y
                                 : refine(probes[first].y, probes[first - 1].y, epsilon);
  const double hi = right_open                  ? kInf
                    : last + 1 == probes.size() ? probes[last].y
                                                : refine(probes[last].y, probes[last + 1].y, epsilon);
  return PredictionRegion::from_pieces({Interval::closed(lo, hi)});
}

PredictionRegion iidgauss_region(const IidGaussState& state, const Vector& x_new,
                                 double epsilon, const FeatureSchedule& schedule,
                                 RngStream& rng, std::size_t mc_samples, double tau) {
  SignificanceLevel{epsilon};
  return IidGaussStep(state, x_new, schedule, rng, mc_samples, tau).region(epsilon);
}

}  // namespace onlinecp
