#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "onlinecp/ledger.hpp"
#include "onlinecp/predictor.hpp"
#include "onlinecp/region.hpp"
#include "onlinecp/schedule.hpp"

namespace onlinecp {

struct RunConfig {
  PredictorKind predictor = PredictorKind::iid;
  std::vector<double> epsilons{0.05, 0.01, 0.005};
  bool smoothed = false;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 1000;
  // FeatureSchedule::defaults(K) when unset.
  std::optional<FeatureSchedule> schedule;
  bool report_hull = true;
  MedianConvention median = MedianConvention::conventional;

  // Throws UsageError unless the epsilons are nonempty, in (0, 1) and strictly
  // decreasing, and mc_samples > 0 for iid-gauss.
  void validate() const;
};

struct PValueTrace {
  std::vector<double> p_values;  // p_n at the true y_n
  std::vector<double> taus;      // tau_n (1 for deterministic runs)
};

struct RunResult {
  OnlineLedger ledger;
  PValueTrace trace;
  std::size_t features = 0;
};

using ProgressCallback = std::function<void(std::size_t step, std::size_t total)>;

/// The on-line protocol: at each step the regions for every epsilon are
/// computed from x_n before y_n is revealed, then scored and the predictor
/// updated. Errors from the predictor are rethrown with the step number
/// prepended, keeping their type. Deterministic given (config, stream).
RunResult run_online(const RunConfig& config, std::span<const Observation> stream,
                     const ProgressCallback& progress = {});

/// Seeds of the smoothing and Monte Carlo streams derived from RunConfig::seed.
std::uint64_t smoothing_seed(std::uint64_t seed);
std::uint64_t monte_carlo_seed(std::uint64_t seed);

}  // namespace onlinecp
