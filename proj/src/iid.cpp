#include "onlinecp/iid.hpp"

#include <algorithm>
#include <cmath>

#include "onlinecp/error.hpp"

namespace onlinecp {

void IidState::update(const Observation& obs) {
  moments_.add(obs.x, obs.y);
  bag_.push_back(obs);
}

double iid_pvalue(std::span<const double> scores, double tau) {
  if (scores.empty()) throw UsageError("iid_pvalue: no scores");
  const double last = scores.back();
  std::size_t greater = 0;
  std::size_t equal = 0;
  for (double s : scores) {
    if (s > last) {
      ++greater;
    } else if (s == last) {
      ++equal;
    }
  }
  return (static_cast<double>(greater) + tau * static_cast<double>(equal)) /
         static_cast<double>(scores.size());
}

AffineResiduals iid_residuals(const IidState& state, const Vector& x_new,
                              const FeatureSchedule& schedule) {
  return scheduled_residuals(state.bag(), state.moments(), x_new, schedule);
}

namespace {

struct Factor {
  bool constant = false;
  int sign_left = 0;  // sign at -inf (or the constant sign)
  double root = 0.0;
};

Factor make_factor(double slope, double intercept) {
  Factor f;
  if (std::fabs(slope) < PValueProfile::kParallelTolerance) {
    f.constant = true;
    f.sign_left = (intercept > 0.0) - (intercept < 0.0);
    return f;
  }
  f.root = -intercept / slope;
  f.sign_left = slope > 0.0 ? -1 : 1;
  return f;
}

struct Event {
  double y;
  std::size_t index;
};

}  // namespace

PValueProfile PValueProfile::from_residuals(const AffineResiduals& residuals) {
  const auto n = static_cast<std::size_t>(residuals.size());
  if (n == 0) throw UsageError("PValueProfile: no residuals");
  const double bn = residuals.slope[static_cast<Eigen::Index>(n - 1)];
  const double cn = residuals.intercept[static_cast<Eigen::Index>(n - 1)];

  // Observation i is "greater" where g_i(y) = (e_i - e_n)(e_i + e_n) > 0 and
  // "equal" where g_i(y) = 0; g_i changes sign at each of its simple roots.
  std::vector<int> sign(n - 1, 0);
  std::vector<Event> events;
  events.reserve(2 * (n - 1));
  Counts running{0, 1};  // the candidate always ties with itself
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double bi = residuals.slope[ii];
    const double ci = residuals.intercept[ii];
    const Factor diff = make_factor(bi - bn, ci - cn);
    const Factor sum = make_factor(bi + bn, ci + cn);
    if ((diff.constant && diff.sign_left == 0) || (sum.constant && sum.sign_left == 0)) {
      ++running.equal;  // identical |e_i| and |e_n| for every y
      continue;
    }
    sign[i] = diff.sign_left * sum.sign_left;
    if (!diff.constant) events.push_back({diff.root, i});
    if (!sum.constant) events.push_back({sum.root, i});
    if (sign[i] > 0) ++running.greater;
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.y < b.y; });

  PValueProfile profile;
  profile.n_ = n;
  profile.in_gap_.push_back(running);

  std::vector<std::size_t> touched;
  std::size_t start = 0;
  while (start < events.size()) {
    const double anchor = events[start].y;
    std::size_t stop = start;
    while (stop < events.size() && events[stop].y - anchor <= kMergeTolerance) ++stop;

    touched.clear();
    for (std::size_t e = start; e < stop; ++e) touched.push_back(events[e].index);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    Counts at = running;
    for (std::size_t i : touched) {
      if (sign[i] > 0) --at.greater;
      ++at.equal;
    }
    // One flip per root; a double root inside one group leaves the sign as is.
    for (std::size_t e = start; e < stop; ++e) sign[events[e].index] *= -1;
    running = at;
    running.equal -= touched.size();
    for (std::size_t i : touched) {
      if (sign[i] > 0) ++running.greater;
    }

    profile.points_.push_back(anchor);
    profile.at_point_.push_back(at);
    profile.in_gap_.push_back(running);
    start = stop;
  }
  return profile;
}

double PValueProfile::gap_pvalue(std::size_t k, double tau) const {
  const auto& c = in_gap_.at(k);
  return (static_cast<double>(c.greater) + tau * static_cast<double>(c.equal)) /
         static_cast<double>(n_);
}

double PValueProfile::point_pvalue(std::size_t k, double tau) const {
  const auto& c = at_point_.at(k);
  return (static_cast<double>(c.greater) + tau * static_cast<double>(c.equal)) /
         static_cast<double>(n_);
}

PredictionRegion PValueProfile::region(double epsilon, double tau) const {
  std::vector<Interval> pieces;
  const std::size_t m = points_.size();
  for (std::size_t k = 0; k <= m; ++k) {
    if (gap_pvalue(k, tau) > epsilon) {
      const double lo = k == 0 ? -kInf : points_[k - 1];
      const double hi = k == m ? kInf : points_[k];
      pieces.push_back(Interval::open(lo, hi));
    }
    if (k < m && point_pvalue(k, tau) > epsilon) {
      pieces.push_back(Interval::closed(points_[k], points_[k]));
    }
  }
  return PredictionRegion::from_pieces(std::move(pieces));
}

PredictionRegion iid_region(const IidState& state, const Vector& x_new, double epsilon,
                            double tau, const FeatureSchedule& schedule) {
  SignificanceLevel{epsilon};
  return PValueProfile::from_residuals(iid_residuals(state, x_new, schedule))
      .region(epsilon, tau);
}

}  // namespace onlinecp
