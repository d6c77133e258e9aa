#include "onlinecp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "onlinecp/error.hpp"

namespace onlinecp {

std::string_view to_string(TestOutcome outcome) {
  switch (outcome) {
    case TestOutcome::pass: return "pass";
    case TestOutcome::fail: return "fail";
    case TestOutcome::inapplicable: return "inapplicable";
    case TestOutcome::degenerate: return "degenerate";
  }
  return "?";
}

namespace {

double kolmogorov_sf(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_test(std::span<const double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw UsageError("ks_test: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double root = std::sqrt(n);
  return {d, kolmogorov_sf((root + 0.12 + 0.11 / root) * d)};
}

KsResult ks_uniform(std::span<const double> values) {
  return ks_test(values, [](double u) { return std::clamp(u, 0.0, 1.0); });
}

double normal_upper_point(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("normal_upper_point: delta in (0, 1)");
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(mid / std::sqrt(2.0)) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

UniformityReport uniformity_test(const PValueTrace& trace, double level) {
  UniformityReport report;
  report.level = level;
  const bool deterministic =
      std::all_of(trace.taus.begin(), trace.taus.end(), [](double t) { return t == 1.0; });
  if (deterministic || trace.p_values.size() < 100) return report;
  report.ks = ks_uniform(trace.p_values);
  report.outcome = report.ks.p_value > level ? TestOutcome::pass : TestOutcome::fail;
  return report;
}

IndependenceReport independence_test(std::span<const double> values, double level,
                                     std::size_t min_length) {
  IndependenceReport report;
  report.level = level;
  report.critical = normal_upper_point(0.5 * level);
  const std::size_t n = values.size();
  if (n < std::max<std::size_t>(min_length, 3)) return report;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    report.outcome = TestOutcome::degenerate;
    return report;
  }
  const double nn = static_cast<double>(n);

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= nn;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (values[i] - mean) * (values[i] - mean);
    if (i + 1 < n) num += (values[i] - mean) * (values[i + 1] - mean);
  }
  report.autocorrelation = num / den;
  report.autocorrelation_z = (report.autocorrelation + 1.0 / nn) * std::sqrt(nn);

  const bool binary =
      std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0 || v == 1.0; });
  std::vector<int> bits(n);
  if (binary) {
    for (std::size_t i = 0; i < n; ++i) bits[i] = values[i] == 1.0;
  } else {
    std::vector<double> sorted(values.begin(), values.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2),
                     sorted.end());
    const double median = sorted[n / 2];
    for (std::size_t i = 0; i < n; ++i) bits[i] = values[i] >= median;
  }
  double ones = 0.0;
  double runs = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    ones += bits[i];
    if (i > 0 && bits[i] != bits[i - 1]) runs += 1.0;
  }
  const double zeros = nn - ones;
  if (ones == 0.0 || zeros == 0.0) {
    report.outcome = TestOutcome::degenerate;
    return report;
  }
  const double prod = 2.0 * ones * zeros;
  const double mu = prod / nn + 1.0;
  const double var = prod * (prod - nn) / (nn * nn * (nn - 1.0));
  report.runs_z = var > 0.0 ? (runs - mu) / std::sqrt(var) : 0.0;

  const bool ok = std::fabs(report.autocorrelation_z) < report.critical &&
                  std::fabs(report.runs_z) < report.critical;
  report.outcome = ok ? TestOutcome::pass : TestOutcome::fail;
  return report;
}

std::pair<std::size_t, std::size_t> binomial_band(std::size_t trials, double p, double level) {
  if (!(p > 0.0 && p < 1.0)) throw UsageError("binomial_band: p in (0, 1)");
  const double tail = 0.5 * level;
  const double m = static_cast<double>(trials);
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double cdf = 0.0;
  std::size_t lower = trials;
  std::size_t upper = trials;
  bool have_lower = false;
  for (std::size_t k = 0; k <= trials; ++k) {
    const double kk = static_cast<double>(k);
    cdf += std::exp(std::lgamma(m + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(m - kk + 1.0) +
                    kk * lp + (m - kk) * lq);
    if (!have_lower && cdf > tail) {
      lower = k;
      have_lower = true;
    }
    if (cdf >= 1.0 - tail) {
      upper = k;
      break;
    }
  }
  return {lower, upper};
}

std::size_t epsilon_index(const OnlineLedger& ledger, double epsilon) {
  const auto& eps = ledger.epsilons();
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (std::fabs(eps[j] - epsilon) <= 1e-12) return j;
  }
  throw UsageError("significance level " + std::to_string(epsilon) + " is not in the ledger");
}

FrequencyReport error_frequency_check(const OnlineLedger& ledger, double epsilon, std::size_t n,
                                      std::size_t from_step, double level) {
  const std::size_t j = epsilon_index(ledger, epsilon);
  if (n < 1 || n > ledger.steps()) throw UsageError("error_frequency_check: n out of range");
  if (from_step < 1) from_step = 1;
  FrequencyReport report;
  report.level = level;
  if (from_step > n) {
    report.passed = true;
    return report;
  }
  const std::size_t before = from_step > 1 ? ledger.at(from_step - 1, j).cumulative : 0;
  report.errors = ledger.at(n, j).cumulative - before;
  report.trials = n - from_step + 1;
  report.frequency = static_cast<double>(report.errors) / static_cast<double>(report.trials);
  std::tie(report.lower, report.upper) = binomial_band(report.trials, epsilon, level);
  report.passed = report.errors >= report.lower && report.errors <= report.upper;
  return report;
}

std::optional<std::size_t> first_bounded_step(const OnlineLedger& ledger, double epsilon) {
  const std::size_t j = epsilon_index(ledger, epsilon);
  for (std::size_t n = 1; n <= ledger.steps(); ++n) {
    if (std::isfinite(ledger.at(n, j).length)) return n;
  }
  return std::nullopt;
}

std::optional<std::size_t> first_finite_median_step(const OnlineLedger& ledger, double epsilon) {
  const std::size_t j = epsilon_index(ledger, epsilon);
  for (std::size_t n = 1; n <= ledger.steps(); ++n) {
    if (std::isfinite(ledger.at(n, j).median)) return n;
  }
  return std::nullopt;
}

std::vector<double> error_sequence(const OnlineLedger& ledger, double epsilon,
                                   std::size_t from_step) {
  const std::size_t j = epsilon_index(ledger, epsilon);
  std::vector<double> out;
  for (std::size_t n = std::max<std::size_t>(from_step, 1); n <= ledger.steps(); ++n) {
    out.push_back(ledger.at(n, j).err);
  }
  return out;
}

}  // namespace onlinecp
