#include "onlinecp/protocol.hpp"

#include <cmath>
#include <string>

#include "onlinecp/error.hpp"
#include "onlinecp/random.hpp"

namespace onlinecp {

void RunConfig::validate() const {
  if (epsilons.empty()) throw UsageError("at least one significance level is required");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    SignificanceLevel{epsilons[i]};
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw UsageError("significance levels must be strictly decreasing");
    }
  }
  if (predictor == PredictorKind::iid_gauss && mc_samples == 0) {
    throw UsageError("mc_samples must be positive");
  }
  if (schedule) schedule->validate();
}

std::uint64_t smoothing_seed(std::uint64_t seed) { return derive_seed(seed, 0); }
std::uint64_t monte_carlo_seed(std::uint64_t seed) { return derive_seed(seed, 1); }

namespace {

[[noreturn]] void rethrow_at(std::size_t step) {
  const std::string where = "step " + std::to_string(step) + ": ";
  try {
    throw;
  } catch (const UsageError& e) {
    throw UsageError(where + e.what());
  } catch (const DataError& e) {
    throw DataError(where + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(where + e.what());
  } catch (const Error& e) {
    throw Error(where + e.what());
  }
}

}  // namespace

RunResult run_online(const RunConfig& config, std::span<const Observation> stream,
                     const ProgressCallback& progress) {
  config.validate();
  RunResult result;
  result.ledger = OnlineLedger(config.epsilons, config.median);
  if (stream.empty()) return result;

  const std::size_t features = stream_dimension(stream);
  result.features = features;
  PredictorOptions options;
  options.schedule = config.schedule.value_or(FeatureSchedule::defaults(features));
  options.mc_samples = config.mc_samples;
  options.mc_seed = monte_carlo_seed(config.seed);
  auto predictor = make_predictor(config.predictor, features, options);

  RngStream tau_stream(smoothing_seed(config.seed));
  const std::size_t k = config.epsilons.size();
  std::vector<PredictionRegion> raw(k);
  std::vector<PredictionRegion> reported(k);
  result.trace.p_values.reserve(stream.size());
  result.trace.taus.reserve(stream.size());

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const std::size_t step = i + 1;
    const Observation& obs = stream[i];
    try {
      const double tau = config.smoothed ? tau_stream.uniform01() : 1.0;
      const auto forecast = predictor->forecast(obs.x, tau);
      for (std::size_t j = 0; j < k; ++j) {
        raw[j] = forecast->region(config.epsilons[j]);
        reported[j] = config.report_hull ? raw[j].convex_hull() : raw[j];
      }
      result.ledger.record(reported, raw, obs.y);
      result.trace.p_values.push_back(forecast->p_value(obs.y));
      result.trace.taus.push_back(tau);
      predictor->update(obs);
    } catch (const Error&) {
      rethrow_at(step);
    }
    if (progress) progress(step, stream.size());
  }
  return result;
}

}  // namespace onlinecp
