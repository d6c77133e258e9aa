#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "stats.hpp"
#include "onlinecp/error.hpp"
#include "onlinecp/gauss.hpp"
#include "onlinecp/iid.hpp"
#include "onlinecp/iid_gauss.hpp"
#include "onlinecp/mva.hpp"
#include "onlinecp/predictor.hpp"
#include "onlinecp/random.hpp"
#include "onlinecp/student_t.hpp"
#include "onlinecp/wilks.hpp"

using namespace onlinecp;

namespace {

std::vector<Observation> linear_stream(RngStream& rng, std::size_t n, std::size_t k,
                                       double noise = 1.0) {
  std::vector<Observation> out;
  for (std::size_t i = 0; i < n; ++i) {
    Observation o;
    o.x = sample_gaussian(rng, k);
    o.y = 1.0 + o.x.sum() + noise * rng.gaussian();
    out.push_back(o);
  }
  return out;
}

template <class State>
State fold(std::size_t k, const std::vector<Observation>& obs) {
  State s(k);
  for (const auto& o : obs) s.update(o);
  return s;
}

std::vector<Vector> xs_of(const std::vector<Observation>& obs, const Vector& x_new) {
  std::vector<Vector> xs;
  for (const auto& o : obs) xs.push_back(o.x);
  xs.push_back(x_new);
  return xs;
}

// Residual vector at candidate y via the explicit C matrix.
Vector oracle_residuals(const std::vector<Observation>& history, const Vector& x_new, double y,
                        std::size_t cols, double a) {
  const auto U = oracle::with_intercept(xs_of(history, x_new), static_cast<Eigen::Index>(cols));
  Vector yy(U.rows());
  for (std::size_t i = 0; i < history.size(); ++i) yy[static_cast<Eigen::Index>(i)] = history[i].y;
  yy[U.rows() - 1] = y;
  return oracle::ridge_c(U, a) * yy;
}

bool near_endpoint(const PredictionRegion& r, double y) {
  for (const auto& p : r.pieces()) {
    if (std::fabs(y - p.lo) <= 1e-9 * std::max(1.0, std::fabs(y)) ||
        std::fabs(y - p.hi) <= 1e-9 * std::max(1.0, std::fabs(y))) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("iid_pvalue examples") {
  CHECK(iid_pvalue(std::vector<double>{1, 2, 3}, 1.0) == doctest::Approx(1.0 / 3.0));
  CHECK(iid_pvalue(std::vector<double>{5, 5, 5, 5}, 1.0) == 1.0);
  CHECK(iid_pvalue(std::vector<double>{2, 1, 4, 3}, 0.5) == doctest::Approx(0.375));
  CHECK_THROWS_AS(iid_pvalue(std::vector<double>{}, 1.0), UsageError);
}

TEST_CASE("iid residuals against hand computation") {
  // Dummy column only, n = 2, y_1 = 0: C = I - J / 2.01.
  FeatureSchedule s{1, 1000, 0, 0.01};
  IidState state(1);
  state.update({Vector::Constant(1, 0.3), 0.0});
  const auto r = iid_residuals(state, Vector::Constant(1, -0.7), s);
  CHECK(r.slope[0] == doctest::Approx(-1.0 / 2.01).epsilon(1e-14));
  CHECK(r.slope[1] == doctest::Approx(1.0 - 1.0 / 2.01).epsilon(1e-14));
  CHECK(r.intercept[0] == doctest::Approx(0.0));
  CHECK(r.intercept[1] == doctest::Approx(0.0));

  RngStream rng(2);
  const auto obs = linear_stream(rng, 9, 2);
  const auto st = fold<IidState>(2, obs);
  const Vector x = sample_gaussian(rng, 2);

  FeatureSchedule heavy{2, 0, 2, 1e12};
  const auto big = iid_residuals(st, x, heavy);
  CHECK(big.slope[9] == doctest::Approx(1.0).epsilon(1e-9));

  FeatureSchedule light{2, 0, 2, 1e-10};
  const auto ls = iid_residuals(st, x, light);
  CHECK(std::fabs(ls.at(3.7).sum()) < 1e-7);

  FeatureSchedule usual{2, 0, 2, 0.01};
  const auto e = iid_residuals(st, x, usual).at(1.3);
  const Vector expect = oracle_residuals(obs, x, 1.3, 2, 0.01);
  CHECK((e - expect).norm() < 1e-10 * (1.0 + expect.norm()));
}

TEST_CASE("iid region with one observation") {
  IidState empty(2);
  const auto s = FeatureSchedule::defaults(2);
  CHECK(iid_region(empty, Vector::Zero(2), 0.1, 1.0, s).is_real_line());
  CHECK(iid_region(empty, Vector::Zero(2), 0.1, 0.05, s).empty());
}

TEST_CASE("iid region matches a dense-grid oracle") {
  RngStream rng(101);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t k = 1 + rng.below(3);
    const std::size_t n = 2 + rng.below(19);
    const auto obs = linear_stream(rng, n - 1, k, 3.0);
    const auto state = fold<IidState>(k, obs);
    const Vector x = sample_gaussian(rng, k);
    const FeatureSchedule s = FeatureSchedule::defaults(k);
    const double eps = 0.05 + 0.3 * rng.uniform01();
    const double tau = rng.uniform01() < 0.5 ? 1.0 : rng.uniform01();
    const auto region = iid_region(state, x, eps, tau, s);
    const auto U = oracle::with_intercept(xs_of(obs, x), static_cast<Eigen::Index>(s.features_at(n)));
    const oracle::Matrix C = oracle::ridge_c(U, s.ridge);
    Vector yv(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i + 1 < n; ++i) yv[static_cast<Eigen::Index>(i)] = obs[i].y;
    int disagreements = 0;
    for (int g = 0; g < 10000; ++g) {
      const double y = -50.0 + 100.0 * g / 9999.0;
      if (near_endpoint(region, y)) continue;
      yv[yv.size() - 1] = y;
      const bool in = oracle::conformal_p(C * yv, tau) > eps;
      if (in != region.contains(y)) ++disagreements;
    }
    CHECK(disagreements == 0);
  }
}

TEST_CASE("deterministic iid region is unbounded before 1/eps") {
  RngStream rng(5);
  const auto obs = linear_stream(rng, 60, 2);
  IidState state(2);
  const auto s = FeatureSchedule::defaults(2);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const std::size_t n = i + 1;
    for (double eps : {0.05, 0.1, 0.2}) {
      if (iid_region(state, obs[i].x, eps, 1.0, s).convex_hull().bounded()) {
        CHECK(static_cast<double>(n) >= std::ceil(1.0 / eps - 1e-12));
      }
    }
    state.update(obs[i]);
  }
}

TEST_CASE("gauss t statistic") {
  RngStream rng(3);
  const auto obs = linear_stream(rng, 5, 1);
  const auto state = fold<GaussState>(1, obs);
  const Vector x = sample_gaussian(rng, 1);
  const auto fit = gauss_fit(state, x);
  REQUIRE(fit);
  CHECK(gauss_tstat(state, x, fit->prediction) == doctest::Approx(0.0));
  CHECK(gauss_tstat(state, x, fit->prediction + 1.7) ==
        doctest::Approx(-gauss_tstat(state, x, fit->prediction - 1.7)));

  // K = 1, n = 6, composed by hand with explicit inverses.
  std::vector<Vector> xs;
  oracle::Vector y(5);
  for (int i = 0; i < 5; ++i) {
    xs.push_back(obs[static_cast<std::size_t>(i)].x);
    y[i] = obs[static_cast<std::size_t>(i)].y;
  }
  const auto Z = oracle::with_intercept(xs, 1);
  const oracle::Matrix inv = (Z.transpose() * Z).inverse();
  const oracle::Vector gamma = inv * Z.transpose() * y;
  const double sigma2 = (y - Z * gamma).squaredNorm() / 3.0;
  const oracle::Vector z{{1.0, x[0]}};
  const double scale = std::sqrt((1.0 + z.dot(inv * z)) * sigma2);
  CHECK(gauss_tstat(state, x, 2.5) == doctest::Approx((2.5 - gamma.dot(z)) / scale).epsilon(1e-10));

  CHECK_THROWS_AS(gauss_tstat(fold<GaussState>(1, {obs[0], obs[1]}), x, 0.0), NumericalError);
}

TEST_CASE("gauss region") {
  RngStream rng(4);
  const auto obs = linear_stream(rng, 120, 100);
  GaussState state(100);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto r = gauss_region(state, obs[i].x, 0.05);
    if (i + 1 < 103) {
      CHECK(r.is_real_line());
    } else {
      CHECK(r.bounded());
      const auto fit = gauss_fit(state, obs[i].x);
      CHECK(r.lower() + r.upper() == doctest::Approx(2.0 * fit->prediction));
    }
    state.update(obs[i]);
  }

  GaussState exact(1);
  for (double v : {0.0, 1.0, 2.0, 3.0}) exact.update({Vector::Constant(1, v), v});
  for (double eps : {0.5, 0.05, 0.001}) {
    const auto r = gauss_region(exact, Vector::Constant(1, 4.0), eps);
    CHECK(r == PredictionRegion::point(4.0));
  }
}

TEST_CASE("gauss interval equals the conformal t predicate") {
  RngStream rng(6);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t k = 1 + rng.below(3);
    const std::size_t n = k + 3 + rng.below(15);
    const auto obs = linear_stream(rng, n - 1, k);
    const auto state = fold<GaussState>(k, obs);
    const Vector x = sample_gaussian(rng, k);
    const double eps = 0.02 + 0.3 * rng.uniform01();
    const auto region = gauss_region(state, x, eps);
    const double t = t_upper_point(0.5 * eps, static_cast<double>(n - k - 2));
    for (int g = 0; g < 2000; ++g) {
      const double y = -30.0 + 60.0 * g / 1999.0;
      if (near_endpoint(region, y)) continue;
      CHECK((std::fabs(gauss_tstat(state, x, y)) < t) == region.contains(y));
    }
  }
}

TEST_CASE("mva residuals") {
  RngStream rng(12);
  const auto obs = linear_stream(rng, 14, 3);
  const auto iid = fold<IidState>(3, obs);
  const auto mva = fold<MvaState>(3, obs);
  const Vector x = sample_gaussian(rng, 3);
  const auto s = FeatureSchedule::defaults(3);
  const auto a = iid_residuals(iid, x, s);
  const auto b = mva_residual_affine(mva, x, s);
  CHECK(a.slope == b.slope);
  CHECK(a.intercept == b.intercept);

  // Dummy only, n = 3, a = 0.01: C = I - J / 3.01.
  FeatureSchedule dummy{1, 1000, 0, 0.01};
  MvaState small(1);
  small.update({Vector::Constant(1, 0.1), 2.0});
  small.update({Vector::Constant(1, 0.2), -1.0});
  const auto r = mva_residual_affine(small, Vector::Constant(1, 0.5), dummy);
  const double c = 1.0 / 3.01;
  CHECK(r.slope[0] == doctest::Approx(-c));
  CHECK(r.slope[2] == doctest::Approx(1.0 - c));
  CHECK(r.intercept[0] == doctest::Approx(2.0 - c * 1.0));
  CHECK(r.intercept[1] == doctest::Approx(-1.0 - c * 1.0));
  CHECK(r.intercept[2] == doctest::Approx(-c * 1.0));
}

TEST_CASE("mva statistic from sums equals the direct formula") {
  RngStream rng(13);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t k = 1 + rng.below(3);
    const std::size_t n = 3 + rng.below(13);
    const auto obs = linear_stream(rng, n - 1, k, 2.0);
    const auto state = fold<MvaState>(k, obs);
    const Vector x = sample_gaussian(rng, k);
    const auto s = FeatureSchedule::defaults(k);
    const auto stat = mva_statistic(state, x, s);
    for (double y : {-5.0, 0.0, 0.7, 12.0}) {
      const Vector e = oracle_residuals(obs, x, y, s.features_at(n), s.ridge);
      CHECK(stat.statistic(y) == doctest::Approx(oracle::mva_statistic(e)).epsilon(1e-7));
    }
  }
}

TEST_CASE("mva region") {
  MvaState two(1);
  two.update({Vector::Constant(1, 1.0), 1.0});
  CHECK(mva_region(two, Vector::Constant(1, 0.0), 0.1, FeatureSchedule::defaults(1)).is_real_line());

  RngStream rng(14);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t k = 1 + rng.below(2);
    const std::size_t n = 3 + rng.below(13);
    const auto obs = linear_stream(rng, n - 1, k, 2.0);
    const auto state = fold<MvaState>(k, obs);
    const Vector x = sample_gaussian(rng, k);
    const auto s = FeatureSchedule::defaults(k);
    const double eps = 0.1;
    const auto region = mva_region(state, x, eps, s);
    const double t = t_upper_point(0.5 * eps, static_cast<double>(n - 2));
    const auto U = oracle::with_intercept(xs_of(obs, x), static_cast<Eigen::Index>(s.features_at(n)));
    const oracle::Matrix C = oracle::ridge_c(U, s.ridge);
    Vector yv(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i + 1 < n; ++i) yv[static_cast<Eigen::Index>(i)] = obs[i].y;
    int disagreements = 0;
    for (int g = 0; g < 10000; ++g) {
      const double y = -50.0 + 100.0 * g / 9999.0;
      if (near_endpoint(region, y)) continue;
      yv[yv.size() - 1] = y;
      const double st = oracle::mva_statistic(C * yv);
      if (std::fabs(st - t) <= 1e-9 * t) continue;
      if ((st < t) != region.contains(y)) ++disagreements;
    }
    CHECK(disagreements == 0);
  }
}

TEST_CASE("updates agree with batch summaries") {
  RngStream rng(15);
  const auto obs = linear_stream(rng, 7, 3);
  const auto mva = fold<MvaState>(3, obs);
  oracle::Matrix zz = oracle::Matrix::Zero(4, 4);
  oracle::Vector zy = oracle::Vector::Zero(4);
  double yy = 0.0;
  for (const auto& o : obs) {
    oracle::Vector z(4);
    z << 1.0, o.x;
    zz += z * z.transpose();
    zy += o.y * z;
    yy += o.y * o.y;
  }
  CHECK((mva.moments().zz() - zz).norm() <= 1e-12 * zz.norm());
  CHECK((mva.moments().zy() - zy).norm() <= 1e-12 * zy.norm());
  CHECK(mva.moments().yy() == doctest::Approx(yy).epsilon(1e-12));
  CHECK(mva.count() == 7);

  const auto g = fold<GaussState>(3, obs);
  CHECK(g.gram_factor().full_rank());
  const oracle::Vector probe = sample_gaussian(rng, 4);
  CHECK(g.gram_factor().solve(probe).isApprox(zz.inverse() * probe, 1e-10));
  CHECK_THROWS(make_predictor(PredictorKind::mva, 3)->update({Vector::Zero(2), 0.0}));
}

TEST_CASE("conditional sampler reproduces the summary") {
  RngStream rng(31);
  IidGaussState one(2);
  one.update({Vector{{0.5, -1.0}}, -3.0});
  for (int i = 0; i < 5; ++i) {
    const auto s = iidgauss_sample_conditional(one, rng);
    CHECK(s.y[0] == doctest::Approx(-3.0));
  }

  const auto obs = linear_stream(rng, 9, 2);
  const auto state = fold<IidGaussState>(2, obs);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = iidgauss_sample_conditional(state, rng);
    IidGaussState again(2);
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      again.update({s.xs[i], s.y[static_cast<Eigen::Index>(i)]});
    }
    CHECK((again.moments().zy() - state.moments().zy()).norm() <=
          1e-9 * state.moments().zy().norm());
    CHECK(again.moments().yy() == doctest::Approx(state.moments().yy()).epsilon(1e-9));
    auto order = s.order;
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == i);
  }
}

TEST_CASE("conditional sampler is exchangeable across slots") {
  RngStream rng(32);
  const auto obs = linear_stream(rng, 5, 1);
  const auto state = fold<IidGaussState>(1, obs);
  const auto sched = FeatureSchedule::defaults(1);
  std::vector<double> counts(5, 0.0);
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    const auto s = iidgauss_sample_conditional(state, rng);
    const auto U = oracle::with_intercept(s.xs, static_cast<Eigen::Index>(sched.features_at(5)));
    const oracle::Vector e = (oracle::ridge_c(U, sched.ridge) * s.y).cwiseAbs();
    int rank = 0;
    for (int i = 0; i < 4; ++i) rank += e[i] < e[4];
    counts[static_cast<std::size_t>(rank)] += 1.0;
  }
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - draws / 5.0) * (c - draws / 5.0) / (draws / 5.0);
  CHECK(chi2 < 13.28);  // chi-square(4) upper 1% point
}

namespace {

// p-value of the candidate (x_new, y) from literal conditional draws.
double literal_pvalue(const std::vector<Observation>& history, const Vector& x_new, double y,
                      const FeatureSchedule& sched, RngStream& rng, int draws) {
  const std::size_t k = static_cast<std::size_t>(x_new.size());
  auto full = history;
  full.push_back({x_new, y});
  const auto state = fold<IidGaussState>(k, full);
  const std::size_t n = full.size();
  const auto cols = static_cast<Eigen::Index>(sched.features_at(n));
  const Vector e_obs = oracle_residuals(history, x_new, y, static_cast<std::size_t>(cols), sched.ridge);
  const double a_obs = std::fabs(e_obs[e_obs.size() - 1]);
  double greater = 0.0, equal = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto s = iidgauss_sample_conditional(state, rng);
    const auto U = oracle::with_intercept(s.xs, cols);
    const oracle::Vector e = oracle::ridge_c(U, sched.ridge) * s.y;
    const double a = std::fabs(e[e.size() - 1]);
    const double tol = 1e-9 * (a + a_obs);
    if (a > a_obs + tol) {
      greater += 1.0;
    } else if (std::fabs(a - a_obs) <= tol) {
      equal += 1.0;
    }
  }
  return (greater + equal) / draws;
}

}  // namespace

TEST_CASE("iid-gauss symmetry reduction agrees with literal sampling") {
  RngStream rng(33);
  struct Case {
    std::size_t k, n;
  };
  // Sphere of dimension >= 1, exactly two points (n = K + 2), and one point.
  for (const Case c : {Case{1, 8}, Case{3, 5}, Case{3, 4}}) {
    const auto obs = linear_stream(rng, c.n - 1, c.k, 2.0);
    const auto state = fold<IidGaussState>(c.k, obs);
    const Vector x = sample_gaussian(rng, c.k);
    const auto sched = FeatureSchedule::defaults(c.k);
    RngStream mc(7);
    const IidGaussStep step(state, x, sched, mc, 40000, 1.0);
    for (double y : {-6.0, -1.0, 0.5, 2.0, 9.0, 40.0}) {
      const double fast = step.p_value(y);
      const double slow = literal_pvalue(obs, x, y, sched, rng, 8000);
      const double se = std::sqrt(std::max(fast * (1.0 - fast), 0.01) / 8000.0);
      CHECK(std::fabs(fast - slow) < 4.5 * se + 1e-12);
    }
  }
}

TEST_CASE("iid-gauss with two-point spheres can be bounded at n = K + 2") {
  // p >= 1 / (2n) there, so eps = 0.2 > 1/10 allows a bounded region at
  // n = 5 with K = 3 even though 1/eps = 5 = n and K + 3 = 6.
  RngStream rng(34);
  int bounded = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const auto obs = linear_stream(rng, 4, 3, 2.0);
    const auto state = fold<IidGaussState>(3, obs);
    const Vector x = sample_gaussian(rng, 3);
    RngStream mc(1);
    const IidGaussStep step(state, x, FeatureSchedule::defaults(3), mc, 100, 1.0);
    CHECK(step.p_value_right() >= 1.0 / 10.0 - 1e-12);
    bounded += step.region(0.12).bounded();
  }
  CHECK(bounded > 0);
}

TEST_CASE("iid-gauss regions") {
  RngStream rng(35);
  const auto obs = linear_stream(rng, 25, 2);
  const auto state = fold<IidGaussState>(2, obs);
  const Vector x = sample_gaussian(rng, 2);
  const auto sched = FeatureSchedule::defaults(2);
  CHECK_THROWS_AS(iidgauss_region(state, x, 0.1, sched, rng, 0), UsageError);

  RngStream mc(3);
  const IidGaussStep step(state, x, sched, mc, 1000, 1.0);
  CHECK(step.draws() >= 1000);
  PredictionRegion prev;
  for (double eps : {0.5, 0.3, 0.2, 0.1, 0.05}) {
    const auto r = step.region(eps);
    CHECK(prev.is_subset_of(r));
    prev = r;
  }
  // The region holds every grid point whose estimated p-value exceeds eps.
  const auto r = step.region(0.1);
  for (double y = -20.0; y <= 20.0; y += 0.01) {
    if (step.p_value(y) > 0.1) CHECK(r.contains(y));
  }
}

TEST_CASE("iid-gauss coverage") {
  RngStream rng(36);
  const auto sched = FeatureSchedule::defaults(1);
  int covered = 0;
  const int streams = 200;
  for (int rep = 0; rep < streams; ++rep) {
    const auto obs = linear_stream(rng, 30, 1);
    const std::vector<Observation> history(obs.begin(), obs.end() - 1);
    const auto state = fold<IidGaussState>(1, history);
    const double tau = rng.uniform01();
    const auto r = iidgauss_region(state, obs.back().x, 0.1, sched, rng, 2000, tau);
    covered += r.convex_hull().contains(obs.back().y);
  }
  const double rate = static_cast<double>(covered) / streams;
  CHECK(rate >= 0.84);
  CHECK(rate <= 0.96);
}

TEST_CASE("wilks") {
  std::vector<double> hist;
  for (int i = 1; i <= 20; ++i) hist.push_back(i);
  const auto w = wilks_region(hist, 1);
  CHECK(w.region == PredictionRegion::from_pieces({Interval::open(1, 20)}));
  CHECK(w.significance == doctest::Approx(2.0 / 21.0));
  CHECK(wilks_region(std::vector<double>{2.0, 5.0}, 1).region ==
        PredictionRegion::from_pieces({Interval::open(2, 5)}));
  CHECK_THROWS_AS(wilks_region(std::vector<double>{2.0, 5.0, 7.0}, 2), UsageError);
  CHECK_THROWS_AS(wilks_region(std::vector<double>{2.0}, 0), UsageError);

  CHECK(wilks_order(21, 2.0 / 21.0) == 1);
  CHECK(wilks_order(50, 0.08) == 2);
  CHECK(wilks_order(10, 0.05) == 0);

  WilksState s;
  for (double v : {3.0, 1.0, 2.0}) s.update(v);
  CHECK(s.sorted() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(wilks_region_at(s, 0.05).is_real_line());
  // Deterministic p-value is consistent with the region.
  WilksState big;
  RngStream rng(37);
  for (int i = 0; i < 99; ++i) big.update(rng.uniform01());
  for (double eps : {0.05, 0.1, 0.3}) {
    const auto r = wilks_region_at(big, eps);
    for (double y = 0.0; y <= 1.0; y += 0.001) {
      if (std::binary_search(big.sorted().begin(), big.sorted().end(), y)) continue;
      CHECK((wilks_pvalue(big, y, 1.0) > eps) == r.contains(y));
    }
  }
}

TEST_CASE("every predictor produces nested regions") {
  RngStream rng(38);
  const auto obs = linear_stream(rng, 40, 2);
  const std::vector<double> eps{0.3, 0.2, 0.1, 0.05, 0.01};
  for (auto kind : {PredictorKind::iid, PredictorKind::gauss, PredictorKind::mva,
                    PredictorKind::iid_gauss, PredictorKind::wilks}) {
    PredictorOptions opt;
    opt.mc_samples = 300;
    auto p = make_predictor(kind, 2, opt);
    for (const auto& o : obs) {
      const auto f = p->forecast(o.x, rng.uniform01());
      NestedRegionFamily family;
      family.epsilons = eps;
      for (double e : eps) family.regions.push_back(f->region(e));
      CHECK(family.is_nested());
      const double pv = f->p_value(o.y);
      CHECK(pv >= 0.0);
      CHECK(pv <= 1.0);
      p->update(o);
    }
  }
}

TEST_CASE("predictor names") {
  for (auto kind : {PredictorKind::iid, PredictorKind::gauss, PredictorKind::mva,
                    PredictorKind::iid_gauss, PredictorKind::wilks}) {
    CHECK(parse_predictor_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_predictor_kind("bogus"), UsageError);
}
