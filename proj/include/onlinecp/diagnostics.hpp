#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "onlinecp/ledger.hpp"
#include "onlinecp/protocol.hpp"

namespace onlinecp {

enum class TestOutcome { pass, fail, inapplicable, degenerate };

std::string_view to_string(TestOutcome outcome);

struct KsResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 1.0;    // Kolmogorov limit law with Stephens' correction
};

/// One-sample Kolmogorov-Smirnov test against a continuous cdf.
KsResult ks_test(std::span<const double> values, const std::function<double(double)>& cdf);
KsResult ks_uniform(std::span<const double> values);

/// Upper delta point of the standard normal.
double normal_upper_point(double delta);

struct UniformityReport {
  TestOutcome outcome = TestOutcome::inapplicable;
  KsResult ks;
  double level = 0.01;
};

/// KS test of the p-values against U[0, 1]. Inapplicable for deterministic
/// runs (every tau equal to 1) and for fewer than 100 steps.
UniformityReport uniformity_test(const PValueTrace& trace, double level = 0.01);

struct IndependenceReport {
  TestOutcome outcome = TestOutcome::inapplicable;
  double autocorrelation = 0.0;  // lag-1 sample autocorrelation
  double autocorrelation_z = 0.0;
  double runs_z = 0.0;  // Wald-Wolfowitz runs test
  double critical = 0.0;
  double level = 0.01;
};

/// Lag-1 autocorrelation and runs tests, both two-sided at `level`. Values
/// other than 0/1 are dichotomized at the median. Inapplicable below
/// min_length values; degenerate for a constant sequence.
IndependenceReport independence_test(std::span<const double> values, double level = 0.01,
                                     std::size_t min_length = 200);

struct FrequencyReport {
  bool passed = false;
  std::size_t errors = 0;
  std::size_t trials = 0;      // steps from_step..n
  double frequency = 0.0;      // errors / trials
  std::size_t lower = 0;       // central binomial band, in counts
  std::size_t upper = 0;
  double level = 0.01;
};

/// Exact central (1 - level) band of Binomial(trials, epsilon).
std::pair<std::size_t, std::size_t> binomial_band(std::size_t trials, double p, double level);

/// Err over steps from_step..n against the central 99% binomial band.
FrequencyReport error_frequency_check(const OnlineLedger& ledger, double epsilon, std::size_t n,
                                      std::size_t from_step = 1, double level = 0.01);

std::size_t epsilon_index(const OnlineLedger& ledger, double epsilon);

/// Smallest n with L_n < inf (resp. M_n < inf).
std::optional<std::size_t> first_bounded_step(const OnlineLedger& ledger, double epsilon);
std::optional<std::size_t> first_finite_median_step(const OnlineLedger& ledger, double epsilon);

/// Error indicators at one epsilon from step from_step on, as doubles.
std::vector<double> error_sequence(const OnlineLedger& ledger, double epsilon,
                                   std::size_t from_step = 1);

}  // namespace onlinecp
