#pragma once

#include <span>

#include "onlinecp/linalg.hpp"
#include "onlinecp/moments.hpp"
#include "onlinecp/region.hpp"
#include "onlinecp/schedule.hpp"

namespace onlinecp {

// e_i(y) = slope_i * y + intercept_i, where y is the candidate's response.
struct AffineResiduals {
  Vector slope;
  Vector intercept;

  Eigen::Index size() const { return slope.size(); }
  Vector at(double y) const { return slope * y + intercept; }
};

// Rows (1, x_1[0..k)), ..., (1, x_new[0..k)): the dummy column plus the first
// k explanatory variables.
Matrix design_matrix(std::span<const Observation> history, const Vector& x_new,
                     std::size_t k);

/// Ridge residuals e = C y with C = I - U (U'U + aI)^{-1} U', as affine
/// functions of the last (candidate) response. U has one row per observation,
/// the candidate's last; y_prev holds the other n - 1 responses.
AffineResiduals ridge_residuals_affine(const Matrix& U, const Vector& y_prev, double a);

/// Same, with U'U (over all n rows, candidate included) and U'y (over the
/// first n - 1 rows) supplied from running sums, so the cost is O(p^3 + n p).
AffineResiduals ridge_residuals_affine(const Matrix& U, const Vector& y_prev, double a,
                                       const Matrix& gram, const Vector& uy_prev);

/// Residuals of history plus (x_new, y) with the columns chosen by the
/// schedule at step history.size() + 1. `moments` must summarize `history`.
AffineResiduals scheduled_residuals(std::span<const Observation> history,
                                    const CrossMoments& moments, const Vector& x_new,
                                    const FeatureSchedule& schedule);

}  // namespace onlinecp
