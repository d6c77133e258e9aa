#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "onlinecp/region.hpp"

namespace onlinecp {

// One (step, epsilon) record.
struct LedgerCell {
  int err = 0;                 // 1 iff the response fell outside the reported region
  std::size_t cumulative = 0;  // Err_n
  double length = 0.0;         // L_n, +inf when unbounded
  double median = 0.0;         // M_n over L_1..L_n
  int raw_err = 0;             // error against the unhulled region (diagnostic)

  friend bool operator==(const LedgerCell&, const LedgerCell&) = default;
};

// Per-step, per-epsilon bookkeeping of the on-line protocol. Single writer.
class OnlineLedger {
 public:
  OnlineLedger() = default;
  explicit OnlineLedger(std::vector<double> epsilons,
                        MedianConvention convention = MedianConvention::conventional);

  const std::vector<double>& epsilons() const { return epsilons_; }
  MedianConvention convention() const { return convention_; }
  std::size_t steps() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  // Scores one step. reported[i] and raw[i] belong to epsilons()[i].
  void record(std::span<const PredictionRegion> reported,
              std::span<const PredictionRegion> raw, double y);

  // Appends a step from its err flags and lengths; cumulative counts and
  // medians are recomputed. Used when re-reading serialized ledgers.
  void append(std::span<const int> errs, std::span<const double> lengths);

  // step is 1-based.
  const LedgerCell& at(std::size_t step, std::size_t eps_index) const;
  const std::vector<LedgerCell>& row(std::size_t step) const;

  friend bool operator==(const OnlineLedger&, const OnlineLedger&);

 private:
  void push(std::vector<LedgerCell> row);

  std::vector<double> epsilons_;
  MedianConvention convention_ = MedianConvention::conventional;
  std::vector<std::vector<LedgerCell>> rows_;
  std::vector<std::vector<double>> sorted_lengths_;  // per epsilon
};

}  // namespace onlinecp
