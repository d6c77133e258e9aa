#include "onlinecp/predictor.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "onlinecp/error.hpp"
#include "onlinecp/gauss.hpp"
#include "onlinecp/iid.hpp"
#include "onlinecp/iid_gauss.hpp"
#include "onlinecp/mva.hpp"
#include "onlinecp/random.hpp"
#include "onlinecp/student_t.hpp"
#include "onlinecp/wilks.hpp"

namespace onlinecp {

PredictorKind parse_predictor_kind(std::string_view name) {
  if (name == "iid") return PredictorKind::iid;
  if (name == "gauss") return PredictorKind::gauss;
  if (name == "mva") return PredictorKind::mva;
  if (name == "iid-gauss") return PredictorKind::iid_gauss;
  if (name == "wilks") return PredictorKind::wilks;
  throw UsageError("unknown predictor '" + std::string(name) +
                   "' (expected iid, gauss, mva, iid-gauss or wilks)");
}

std::string_view to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::iid: return "iid";
    case PredictorKind::gauss: return "gauss";
    case PredictorKind::mva: return "mva";
    case PredictorKind::iid_gauss: return "iid-gauss";
    case PredictorKind::wilks: return "wilks";
  }
  return "?";
}

namespace {

void check_dimension(const Vector& x, std::size_t features) {
  if (static_cast<std::size_t>(x.size()) != features) {
    throw DataError("observation has dimension " + std::to_string(x.size()) + ", expected " +
                    std::to_string(features));
  }
}

class IidForecast : public StepForecast {
 public:
  IidForecast(AffineResiduals residuals, double tau)
      : residuals_(std::move(residuals)),
        profile_(PValueProfile::from_residuals(residuals_)),
        tau_(tau) {}

  PredictionRegion region(double epsilon) const override {
    SignificanceLevel{epsilon};
    return profile_.region(epsilon, tau_);
  }

  double p_value(double y) const override {
    const Vector scores = residuals_.at(y).cwiseAbs();
    return iid_pvalue({scores.data(), static_cast<std::size_t>(scores.size())}, tau_);
  }

 private:
  AffineResiduals residuals_;
  PValueProfile profile_;
  double tau_;
};

class IidPredictor : public OnlinePredictor {
 public:
  IidPredictor(std::size_t features, FeatureSchedule schedule)
      : state_(features), schedule_(schedule) {}

  PredictorKind kind() const override { return PredictorKind::iid; }
  std::size_t features() const override { return state_.features(); }
  std::size_t count() const override { return state_.count(); }
  std::unique_ptr<StepForecast> forecast(const Vector& x, double tau) override {
    return std::make_unique<IidForecast>(iid_residuals(state_, x, schedule_), tau);
  }
  void update(const Observation& obs) override {
    check_dimension(obs.x, features());
    state_.update(obs);
  }
  std::size_t validity_start(double) const override { return 1; }

 private:
  IidState state_;
  FeatureSchedule schedule_;
};

class GaussForecast : public StepForecast {
 public:
  GaussForecast(std::optional<GaussFit> fit, double tau) : fit_(fit), tau_(tau) {}

  PredictionRegion region(double epsilon) const override {
    SignificanceLevel{epsilon};
    if (!fit_) return PredictionRegion::real_line();
    return gauss_region(*fit_, epsilon);
  }

  double p_value(double y) const override {
    if (!fit_) return tau_;
    const double scale = fit_->scale();
    const double dev = y - fit_->prediction;
    if (scale == 0.0) return dev == 0.0 ? tau_ : 0.0;
    return 2.0 * t_sf(std::fabs(dev / scale), fit_->df);
  }

 private:
  std::optional<GaussFit> fit_;
  double tau_;
};

class GaussPredictor : public OnlinePredictor {
 public:
  explicit GaussPredictor(std::size_t features) : state_(features) {}

  PredictorKind kind() const override { return PredictorKind::gauss; }
  std::size_t features() const override { return state_.features(); }
  std::size_t count() const override { return state_.count(); }
  std::unique_ptr<StepForecast> forecast(const Vector& x, double tau) override {
    return std::make_unique<GaussForecast>(gauss_fit(state_, x), tau);
  }
  void update(const Observation& obs) override {
    check_dimension(obs.x, features());
    state_.update(obs);
  }
  std::size_t validity_start(double) const override { return features() + 3; }

 private:
  GaussState state_;
};

class MvaForecast : public StepForecast {
 public:
  MvaForecast(MvaStatistic statistic, double tau) : statistic_(statistic), tau_(tau) {}
  PredictionRegion region(double epsilon) const override { return statistic_.region(epsilon); }
  double p_value(double y) const override { return statistic_.p_value(y, tau_); }

 private:
  MvaStatistic statistic_;
  double tau_;
};

class MvaPredictor : public OnlinePredictor {
 public:
  MvaPredictor(std::size_t features, FeatureSchedule schedule)
      : state_(features), schedule_(schedule) {}

  PredictorKind kind() const override { return PredictorKind::mva; }
  std::size_t features() const override { return state_.features(); }
  std::size_t count() const override { return state_.count(); }
  std::unique_ptr<StepForecast> forecast(const Vector& x, double tau) override {
    return std::make_unique<MvaForecast>(mva_statistic(state_, x, schedule_), tau);
  }
  void update(const Observation& obs) override {
    check_dimension(obs.x, features());
    state_.update(obs);
  }
  std::size_t validity_start(double) const override { return 3; }

 private:
  MvaState state_;
  FeatureSchedule schedule_;
};

class IidGaussForecast : public StepForecast {
 public:
  explicit IidGaussForecast(IidGaussStep step) : step_(std::move(step)) {}
  PredictionRegion region(double epsilon) const override { return step_.region(epsilon); }
  double p_value(double y) const override { return step_.p_value(y); }

 private:
  IidGaussStep step_;
};

class IidGaussPredictor : public OnlinePredictor {
 public:
  IidGaussPredictor(std::size_t features, FeatureSchedule schedule, std::size_t mc_samples,
                    std::uint64_t seed)
      : state_(features), schedule_(schedule), mc_samples_(mc_samples), rng_(seed) {
    if (mc_samples == 0) throw UsageError("iid-gauss: mc_samples must be positive");
  }

  PredictorKind kind() const override { return PredictorKind::iid_gauss; }
  std::size_t features() const override { return state_.features(); }
  std::size_t count() const override { return state_.count(); }
  std::unique_ptr<StepForecast> forecast(const Vector& x, double tau) override {
    return std::make_unique<IidGaussForecast>(
        IidGaussStep(state_, x, schedule_, rng_, mc_samples_, tau));
  }
  void update(const Observation& obs) override {
    check_dimension(obs.x, features());
    state_.update(obs);
  }
  std::size_t validity_start(double) const override { return 1; }

 private:
  IidGaussState state_;
  FeatureSchedule schedule_;
  std::size_t mc_samples_;
  RngStream rng_;
};

class WilksForecast : public StepForecast {
 public:
  WilksForecast(const WilksState& state, double tau) : state_(state), tau_(tau) {}
  PredictionRegion region(double epsilon) const override {
    return wilks_region_at(state_, epsilon);
  }
  double p_value(double y) const override { return wilks_pvalue(state_, y, tau_); }

 private:
  const WilksState& state_;
  double tau_;
};

class WilksPredictor : public OnlinePredictor {
 public:
  explicit WilksPredictor(std::size_t features) : features_(features) {}

  PredictorKind kind() const override { return PredictorKind::wilks; }
  std::size_t features() const override { return features_; }
  std::size_t count() const override { return state_.count(); }
  std::unique_ptr<StepForecast> forecast(const Vector& x, double tau) override {
    check_dimension(x, features_);
    return std::make_unique<WilksForecast>(state_, tau);
  }
  void update(const Observation& obs) override {
    check_dimension(obs.x, features_);
    state_.update(obs.y);
  }
  std::size_t validity_start(double epsilon) const override {
    std::size_t n = 1;
    while (wilks_order(n, epsilon) == 0) ++n;
    return n;
  }

 private:
  std::size_t features_;
  WilksState state_;
};

}  // namespace

std::unique_ptr<OnlinePredictor> make_predictor(PredictorKind kind, std::size_t features,
                                                PredictorOptions options) {
  FeatureSchedule schedule = options.schedule.features == 0 && features > 0
                                 ? FeatureSchedule::defaults(features)
                                 : options.schedule;
  if (kind != PredictorKind::gauss && kind != PredictorKind::wilks) {
    schedule.validate();
    if (schedule.features != features) {
      throw UsageError("schedule covers " + std::to_string(schedule.features) +
                       " features, data has " + std::to_string(features));
    }
  }
  switch (kind) {
    case PredictorKind::iid: return std::make_unique<IidPredictor>(features, schedule);
    case PredictorKind::gauss: return std::make_unique<GaussPredictor>(features);
    case PredictorKind::mva: return std::make_unique<MvaPredictor>(features, schedule);
    case PredictorKind::iid_gauss:
      return std::make_unique<IidGaussPredictor>(features, schedule, options.mc_samples,
                                                 options.mc_seed);
    case PredictorKind::wilks: return std::make_unique<WilksPredictor>(features);
  }
  throw UsageError("make_predictor: bad kind");
}

}  // namespace onlinecp
