#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "onlinecp/region.hpp"

namespace onlinecp {

// Responses seen so far, kept sorted. The explanatory vectors are ignored.
class WilksState {
 public:
  void update(double y);
  std::size_t count() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

struct WilksInterval {
  PredictionRegion region;
  double significance = 0.0;  // 2r/n
};

/// The open interval (y_(r), y_(n-r)) between order statistics of the first
/// n - 1 responses, n = sorted_history.size() + 1. Throws UsageError unless
/// r >= 1 and n >= 2r + 1.
WilksInterval wilks_region(std::span<const double> sorted_history, std::size_t r);

/// Largest r with 2r/n <= epsilon; 0 means the whole line.
std::size_t wilks_order(std::size_t n, double epsilon);

/// wilks_region for r = wilks_order(n, epsilon), or the whole line when r = 0.
PredictionRegion wilks_region_at(const WilksState& state, double epsilon);

/// Smoothed p-value of y from its rank R among the n responses, which is
/// uniform on 1..n: with d = min(R, n + 1 - R) and m_d the number of ranks
/// sharing that d, p = (2(d - 1) + tau m_d) / n.
double wilks_pvalue(const WilksState& state, double y, double tau);

}  // namespace onlinecp
