#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "onlinecp/linalg.hpp"

namespace onlinecp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Observation {
  Vector x;
  double y = 0.0;
};

// Explanatory dimension shared by every observation; throws DataError on a
// ragged or non-finite stream.
std::size_t stream_dimension(std::span<const Observation> stream);

class SignificanceLevel {
 public:
  // Throws UsageError unless 0 < epsilon < 1.
  explicit SignificanceLevel(double epsilon);
  double value() const { return epsilon_; }

 private:
  double epsilon_;
};

// One piece of a region. Infinite endpoints are always open.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }

  bool empty() const;
  bool contains(double y) const;
};

// A finite union of disjoint, non-touching intervals with increasing lower
// endpoints. Built through from_pieces(), which normalizes arbitrary input.
class PredictionRegion {
 public:
  PredictionRegion() = default;

  static PredictionRegion real_line();
  static PredictionRegion point(double y);
  static PredictionRegion from_pieces(std::vector<Interval> pieces);

  const std::vector<Interval>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  bool is_real_line() const;
  bool bounded() const;
  double lower() const;  // +inf when empty
  double upper() const;  // -inf when empty

  bool contains(double y) const;
  PredictionRegion convex_hull() const;
  // sup - inf, +inf when unbounded, 0 when empty.
  double length() const;
  bool is_subset_of(const PredictionRegion& other) const;

  std::string to_string() const;

  friend bool operator==(const PredictionRegion&, const PredictionRegion&);

 private:
  std::vector<Interval> pieces_;
};

bool operator==(const Interval& a, const Interval& b);

// Regions for several significance levels at one step.
struct NestedRegionFamily {
  std::vector<double> epsilons;
  std::vector<PredictionRegion> regions;

  // region(eps1) is a subset of region(eps2) whenever eps1 > eps2.
  bool is_nested() const;
};

enum class MedianConvention {
  conventional,  // middle element; mean of the two middle ones for even n
  lower,         // element of rank ceil(n/2)
};

// Median of extended nonnegative reals (+inf sorts last). Throws UsageError on
// empty input.
double running_median(std::span<const double> values,
                      MedianConvention convention = MedianConvention::conventional);

}  // namespace onlinecp
