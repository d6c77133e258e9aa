#include "onlinecp/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "onlinecp/error.hpp"

namespace onlinecp {

std::size_t stream_dimension(std::span<const Observation> stream) {
  if (stream.empty()) return 0;
  const auto k = static_cast<std::size_t>(stream.front().x.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto& obs = stream[i];
    if (static_cast<std::size_t>(obs.x.size()) != k) {
      throw DataError("observation " + std::to_string(i + 1) + " has dimension " +
                      std::to_string(obs.x.size()) + ", expected " + std::to_string(k));
    }
    if (!obs.x.allFinite() || !std::isfinite(obs.y)) {
      throw DataError("observation " + std::to_string(i + 1) + " is not finite");
    }
  }
  return k;
}

SignificanceLevel::SignificanceLevel(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw UsageError("significance level must lie in (0, 1)");
  }
}

bool Interval::empty() const {
  if (lo > hi) return true;
  if (lo == hi) return !(lo_closed && hi_closed) || std::isinf(lo);
  return false;
}

bool Interval::contains(double y) const {
  const bool above = lo_closed ? y >= lo : y > lo;
  const bool below = hi_closed ? y <= hi : y < hi;
  return above && below;
}

bool operator==(const Interval& a, const Interval& b) {
  return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed &&
         a.hi_closed == b.hi_closed;
}

bool operator==(const PredictionRegion& a, const PredictionRegion& b) {
  return a.pieces_ == b.pieces_;
}

PredictionRegion PredictionRegion::real_line() {
  PredictionRegion r;
  r.pieces_.push_back(Interval::open(-kInf, kInf));
  return r;
}

PredictionRegion PredictionRegion::point(double y) {
  PredictionRegion r;
  r.pieces_.push_back(Interval::closed(y, y));
  return r;
}

PredictionRegion PredictionRegion::from_pieces(std::vector<Interval> pieces) {
  for (auto& p : pieces) {
    if (std::isnan(p.lo) || std::isnan(p.hi)) {
      throw NumericalError("region endpoint is NaN");
    }
    if (std::isinf(p.lo)) p.lo_closed = false;
    if (std::isinf(p.hi)) p.hi_closed = false;
  }
  std::erase_if(pieces, [](const Interval& p) { return p.empty(); });
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });

  PredictionRegion r;
  for (const auto& p : pieces) {
    if (r.pieces_.empty()) {
      r.pieces_.push_back(p);
      continue;
    }
    auto& cur = r.pieces_.back();
    const bool joins = p.lo < cur.hi || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed));
    if (!joins) {
      r.pieces_.push_back(p);
      continue;
    }
    if (p.hi > cur.hi) {
      cur.hi = p.hi;
      cur.hi_closed = p.hi_closed;
    } else if (p.hi == cur.hi) {
      cur.hi_closed = cur.hi_closed || p.hi_closed;
    }
  }
  return r;
}

bool PredictionRegion::is_real_line() const {
  return pieces_.size() == 1 && std::isinf(pieces_[0].lo) && std::isinf(pieces_[0].hi);
}

bool PredictionRegion::bounded() const {
  return empty() || (std::isfinite(lower()) && std::isfinite(upper()));
}

double PredictionRegion::lower() const {
  return pieces_.empty() ? kInf : pieces_.front().lo;
}

double PredictionRegion::upper() const {
  return pieces_.empty() ? -kInf : pieces_.back().hi;
}

bool PredictionRegion::contains(double y) const {
  return std::any_of(pieces_.begin(), pieces_.end(),
                     [y](const Interval& p) { return p.contains(y); });
}

PredictionRegion PredictionRegion::convex_hull() const {
  if (pieces_.empty()) return {};
  PredictionRegion r;
  r.pieces_.push_back({pieces_.front().lo, pieces_.back().hi, pieces_.front().lo_closed,
                       pieces_.back().hi_closed});
  return r;
}

double PredictionRegion::length() const {
  if (pieces_.empty()) return 0.0;
  const double lo = lower();
  const double hi = upper();
  if (std::isinf(lo) || std::isinf(hi)) return kInf;
  return hi - lo;
}

bool PredictionRegion::is_subset_of(const PredictionRegion& other) const {
  for (const auto& p : pieces_) {
    const bool inside = std::any_of(
        other.pieces_.begin(), other.pieces_.end(), [&p](const Interval& q) {
          const bool lo_ok = q.lo < p.lo || (q.lo == p.lo && (q.lo_closed || !p.lo_closed));
          const bool hi_ok = q.hi > p.hi || (q.hi == p.hi && (q.hi_closed || !p.hi_closed));
          return lo_ok && hi_ok;
        });
    if (!inside) return false;
  }
  return true;
}

std::string PredictionRegion::to_string() const {
  if (pieces_.empty()) return "{}";
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (i > 0) os << " U ";
    if (p.lo == p.hi) {
      os << '{' << p.lo << '}';
      continue;
    }
    os << (p.lo_closed ? '[' : '(') << p.lo << ", " << p.hi << (p.hi_closed ? ']' : ')');
  }
  return os.str();
}

bool NestedRegionFamily::is_nested() const {
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    for (std::size_t j = 0; j < epsilons.size(); ++j) {
      if (epsilons[i] > epsilons[j] && !regions[i].is_subset_of(regions[j])) {
        return false;
      }
    }
  }
  return true;
}

double running_median(std::span<const double> values, MedianConvention convention) {
  if (values.empty()) throw UsageError("running_median: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (convention == MedianConvention::lower) return sorted[(n + 1) / 2 - 1];
  if (n % 2 == 1) return sorted[n / 2];
  const double a = sorted[n / 2 - 1];
  const double b = sorted[n / 2];
  if (std::isinf(b)) return kInf;
  return 0.5 * (a + b);
}

}  // namespace onlinecp
