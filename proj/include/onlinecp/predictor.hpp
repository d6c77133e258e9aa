#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "onlinecp/region.hpp"
#include "onlinecp/schedule.hpp"

namespace onlinecp {

enum class PredictorKind { iid, gauss, mva, iid_gauss, wilks };

// "iid", "gauss", "mva", "iid-gauss", "wilks"; UsageError otherwise.
PredictorKind parse_predictor_kind(std::string_view name);
std::string_view to_string(PredictorKind kind);

struct PredictorOptions {
  // Defaults to FeatureSchedule::defaults(features) when features is 0.
  FeatureSchedule schedule;
  std::size_t mc_samples = 1000;
  std::uint64_t mc_seed = 0;
};

// What a predictor knows at step n before seeing y_n.
class StepForecast {
 public:
  virtual ~StepForecast() = default;
  // Raw region {y : p(y) > epsilon} (the classical interval for Gauss).
  virtual PredictionRegion region(double epsilon) const = 0;
  virtual double p_value(double y) const = 0;
};

// The on-line interface. forecast() never sees the response it predicts;
// update() delivers it afterwards.
class OnlinePredictor {
 public:
  virtual ~OnlinePredictor() = default;

  virtual PredictorKind kind() const = 0;
  virtual std::size_t features() const = 0;
  virtual std::size_t count() const = 0;

  virtual std::unique_ptr<StepForecast> forecast(const Vector& x, double tau) = 0;
  virtual void update(const Observation& obs) = 0;

  // First step at which an error at level epsilon is possible for the
  // smoothed predictor (Gauss K + 3, MVA 3, Wilks once 2r/n > 0, else 1).
  virtual std::size_t validity_start(double epsilon) const = 0;
};

std::unique_ptr<OnlinePredictor> make_predictor(PredictorKind kind, std::size_t features,
                                                PredictorOptions options = {});

}  // namespace onlinecp
