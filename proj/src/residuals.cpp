#include "onlinecp/residuals.hpp"

#include <string>

#include "onlinecp/error.hpp"

namespace onlinecp {

Matrix design_matrix(std::span<const Observation> history, const Vector& x_new,
                     std::size_t k) {
  const auto rows = static_cast<Eigen::Index>(history.size() + 1);
  const auto cols = static_cast<Eigen::Index>(k + 1);
  if (static_cast<std::size_t>(x_new.size()) < k) {
    throw UsageError("design_matrix: requested more columns than features");
  }
  Matrix U(rows, cols);
  U.col(0).setOnes();
  for (std::size_t i = 0; i < history.size(); ++i) {
    U.row(static_cast<Eigen::Index>(i)).tail(cols - 1) =
        history[i].x.head(cols - 1).transpose();
  }
  U.row(rows - 1).tail(cols - 1) = x_new.head(cols - 1).transpose();
  return U;
}

AffineResiduals ridge_residuals_affine(const Matrix& U, const Vector& y_prev, double a) {
  const Matrix gram = U.transpose() * U;
  const Vector uy_prev = U.topRows(y_prev.size()).transpose() * y_prev;
  return ridge_residuals_affine(U, y_prev, a, gram, uy_prev);
}

AffineResiduals ridge_residuals_affine(const Matrix& U, const Vector& y_prev, double a,
                                       const Matrix& gram, const Vector& uy_prev) {
  const Eigen::Index n = U.rows();
  const Eigen::Index p = U.cols();
  if (n < 1 || y_prev.size() != n - 1) {
    throw UsageError("ridge_residuals_affine: need n rows and n - 1 responses");
  }
  if (gram.rows() != p || gram.cols() != p || uy_prev.size() != p) {
    throw UsageError("ridge_residuals_affine: sufficient statistics have wrong shape");
  }
  if (!(a > 0.0)) throw UsageError("ridge_residuals_affine: ridge must be positive");

  Matrix M = gram;
  M.diagonal().array() += a;
  const Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("ridge_residuals_affine: Cholesky failed");
  }

  AffineResiduals r;
  // Column n of C: unit vector minus U M^{-1} u_n.
  const Vector d = llt.solve(U.row(n - 1).transpose());
  r.slope = -(U * d);
  r.slope[n - 1] += 1.0;
  // C applied to (y_prev, 0).
  const Vector c0 = llt.solve(uy_prev);
  r.intercept = -(U * c0);
  r.intercept.head(n - 1) += y_prev;
  return r;
}

AffineResiduals scheduled_residuals(std::span<const Observation> history,
                                    const CrossMoments& moments, const Vector& x_new,
                                    const FeatureSchedule& schedule) {
  if (static_cast<std::size_t>(x_new.size()) != moments.features()) {
    throw DataError("x_new has dimension " + std::to_string(x_new.size()) + ", expected " +
                    std::to_string(moments.features()));
  }
  const std::size_t n = history.size() + 1;
  const std::size_t k = schedule.features_at(n);
  const auto p = static_cast<Eigen::Index>(k + 1);

  const Matrix U = design_matrix(history, x_new, k);
  Vector y_prev(static_cast<Eigen::Index>(history.size()));
  for (std::size_t i = 0; i < history.size(); ++i) {
    y_prev[static_cast<Eigen::Index>(i)] = history[i].y;
  }
  const Vector u_new = U.row(U.rows() - 1).transpose();
  Matrix gram = moments.zz().topLeftCorner(p, p);
  gram.noalias() += u_new * u_new.transpose();
  return ridge_residuals_affine(U, y_prev, schedule.ridge, gram, moments.zy().head(p));
}

}  // namespace onlinecp
