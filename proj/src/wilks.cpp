#include "onlinecp/wilks.hpp"

#include <algorithm>
#include <cmath>

#include "onlinecp/error.hpp"

namespace onlinecp {

void WilksState::update(double y) {
  if (!std::isfinite(y)) throw DataError("WilksState: non-finite response");
  sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), y), y);
}

WilksInterval wilks_region(std::span<const double> sorted_history, std::size_t r) {
  const std::size_t n = sorted_history.size() + 1;
  if (r == 0) throw UsageError("wilks_region: r must be positive");
  if (n < 2 * r + 1) throw UsageError("wilks_region: needs n >= 2r + 1");
  WilksInterval out;
  out.region = PredictionRegion::from_pieces(
      {Interval::open(sorted_history[r - 1], sorted_history[n - r - 1])});
  out.significance = 2.0 * static_cast<double>(r) / static_cast<double>(n);
  return out;
}

std::size_t wilks_order(std::size_t n, double epsilon) {
  SignificanceLevel{epsilon};
  // Guard against 2r/n landing a rounding error above epsilon.
  auto r = static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(n) / 2.0));
  while (r > 0 && 2.0 * static_cast<double>(r) / static_cast<double>(n) > epsilon) --r;
  return r;
}

PredictionRegion wilks_region_at(const WilksState& state, double epsilon) {
  const std::size_t r = wilks_order(state.count() + 1, epsilon);
  if (r == 0) return PredictionRegion::real_line();
  return wilks_region(state.sorted(), r).region;
}

double wilks_pvalue(const WilksState& state, double y, double tau) {
  const std::size_t n = state.count() + 1;
  const auto below = static_cast<std::size_t>(
      std::lower_bound(state.sorted().begin(), state.sorted().end(), y) -
      state.sorted().begin());
  const std::size_t rank = below + 1;
  const std::size_t d = std::min(rank, n + 1 - rank);
  const std::size_t ties = (n % 2 == 1 && 2 * d == n + 1) ? 1 : 2;
  return (2.0 * static_cast<double>(d - 1) + tau * static_cast<double>(ties)) /
         static_cast<double>(n);
}

}  // namespace onlinecp
