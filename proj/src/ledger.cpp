#include "onlinecp/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "onlinecp/error.hpp"

namespace onlinecp {

namespace {

double median_of_sorted(const std::vector<double>& s, MedianConvention convention) {
  const std::size_t n = s.size();
  if (convention == MedianConvention::lower) return s[(n + 1) / 2 - 1];
  if (n % 2 == 1) return s[n / 2];
  if (std::isinf(s[n / 2])) return kInf;
  return 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

}  // namespace

OnlineLedger::OnlineLedger(std::vector<double> epsilons, MedianConvention convention)
    : epsilons_(std::move(epsilons)),
      convention_(convention),
      sorted_lengths_(epsilons_.size()) {
  for (double e : epsilons_) SignificanceLevel{e};
}

void OnlineLedger::record(std::span<const PredictionRegion> reported,
                          std::span<const PredictionRegion> raw, double y) {
  if (reported.size() != epsilons_.size() || raw.size() != epsilons_.size()) {
    throw UsageError("OnlineLedger::record: one region per significance level required");
  }
  std::vector<LedgerCell> row(epsilons_.size());
  for (std::size_t i = 0; i < epsilons_.size(); ++i) {
    row[i].err = reported[i].contains(y) ? 0 : 1;
    row[i].raw_err = raw[i].contains(y) ? 0 : 1;
    row[i].length = reported[i].length();
  }
  push(std::move(row));
}

void OnlineLedger::append(std::span<const int> errs, std::span<const double> lengths) {
  if (errs.size() != epsilons_.size() || lengths.size() != epsilons_.size()) {
    throw UsageError("OnlineLedger::append: one value per significance level required");
  }
  std::vector<LedgerCell> row(epsilons_.size());
  for (std::size_t i = 0; i < epsilons_.size(); ++i) {
    if (errs[i] != 0 && errs[i] != 1) throw DataError("err must be 0 or 1");
    if (!(lengths[i] >= 0.0)) throw DataError("length must be >= 0 or inf");
    row[i].err = errs[i];
    row[i].raw_err = errs[i];
    row[i].length = lengths[i];
  }
  push(std::move(row));
}

void OnlineLedger::push(std::vector<LedgerCell> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i].cumulative = static_cast<std::size_t>(row[i].err) +
                        (rows_.empty() ? 0 : rows_.back()[i].cumulative);
    auto& sorted = sorted_lengths_[i];
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), row[i].length),
                  row[i].length);
    row[i].median = median_of_sorted(sorted, convention_);
  }
  rows_.push_back(std::move(row));
}

const LedgerCell& OnlineLedger::at(std::size_t step, std::size_t eps_index) const {
  return row(step).at(eps_index);
}

const std::vector<LedgerCell>& OnlineLedger::row(std::size_t step) const {
  if (step == 0 || step > rows_.size()) {
    throw UsageError("OnlineLedger: step " + std::to_string(step) + " out of range");
  }
  return rows_[step - 1];
}

bool operator==(const OnlineLedger& a, const OnlineLedger& b) {
  if (a.epsilons_ != b.epsilons_ || a.rows_.size() != b.rows_.size()) return false;
  for (std::size_t s = 0; s < a.rows_.size(); ++s) {
    for (std::size_t i = 0; i < a.epsilons_.size(); ++i) {
      const auto& x = a.rows_[s][i];
      const auto& y = b.rows_[s][i];
      if (x.err != y.err || x.cumulative != y.cumulative || x.length != y.length ||
          x.median != y.median) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace onlinecp
